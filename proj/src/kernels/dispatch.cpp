#include <cstdlib>
#include <string_view>

#include "kernels/variants.hpp"

namespace hampath::kernels {

bool available(Isa isa) noexcept { return table_for(isa) != nullptr; }

const KernelTable* table_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return &scalar_table();
    case Isa::avx2:
#ifdef HAMPATH_HAVE_AVX2
      if (__builtin_cpu_supports("avx2")) return &avx2_table();
#endif
      return nullptr;
  }
  return nullptr;
}

const KernelTable& active() noexcept {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* forced = std::getenv("HAMPATH_KERNELS");
    if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_table();
    if (const auto* t = table_for(Isa::avx2)) return *t;
    return scalar_table();
  }();
  return chosen;
}

}  // namespace hampath::kernels
