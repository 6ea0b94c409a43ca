#include "hampath/cli.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hampath/delay.hpp"
#include "hampath/error.hpp"
#include "hampath/graph.hpp"
#include "hampath/network.hpp"
#include "hampath/photon.hpp"
#include "hampath/procedures.hpp"

namespace hampath::cli {
namespace {

using nlohmann::json;

constexpr int kReportVersion = 1;

struct RunConfig {
  std::string command;
  std::string graph_path;
  std::string topology = "feedforward";
  std::string mode = "incoherent";
  double channel_delay = 0.0;
  std::optional<double> feedback_delay;
  double phase_omega = 0.0;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> shots;
  std::optional<std::uint64_t> seed;
  std::optional<int> end_vertex;
  std::string policy = "deterministic";
  int cap = kDefaultEnumerationCap;
  std::string format = "human";
  std::string out_path;
};

class BadCombination : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Report {
  json result;
  std::string human;
  std::string csv;  // propagate only
  // Effective values resolved during the run (e.g. the default window width).
  json resolved = json::object();
};

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json();
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string join(const std::vector<int>& xs, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(xs[i]);
  }
  return s;
}

json config_json(const RunConfig& c) {
  return {
      {"command", c.command},          {"graph", c.graph_path},
      {"topology", c.topology},        {"mode", c.mode},
      {"channel_delay", c.channel_delay}, {"feedback_delay", opt(c.feedback_delay)},
      {"phase_omega", c.phase_omega},  {"epsilon", opt(c.epsilon)},
      {"shots", opt(c.shots)},         {"seed", opt(c.seed)},
      {"end_vertex", opt(c.end_vertex)}, {"policy", c.policy},
      {"cap", c.cap},
  };
}

Network build_network(const Graph& g, const DelayTable& table, const RunConfig& c) {
  if (c.topology == "recurrent") {
    if (!c.feedback_delay) throw BadCombination("--topology recurrent needs --feedback-delay");
    return compile_recurrent(g, table, *c.feedback_delay);
  }
  if (c.feedback_delay) throw BadCombination("--feedback-delay applies only to --topology recurrent");
  return compile_feedforward(g, table);
}

void require_feedforward(const RunConfig& c) {
  if (c.topology != "feedforward") {
    throw BadCombination("'" + c.command + "' runs on the feedforward network only");
  }
}

Report analyze(const Graph& g, const RunConfig& c) {
  const int n = g.size();
  if (n > c.cap) throw CapExceeded(n, c.cap);
  const DelayTable table = build_delay_table(n, c.channel_delay);
  const auto exact = delta_min_exact(g, table, c.cap);
  const double eps = default_epsilon(g, table, c.cap);

  Report r;
  json walks = json::array();
  for (int len = 0; len < n; ++len) {
    walks.push_back({{"length", len}, {"count", count_walks(g, len).str()}});
  }
  json census = json::array();
  for (const auto& row : realizable_keys(g, n)) {
    census.push_back({{"row", row.row},
                      {"cells", row.cell_count()},
                      {"distinct_keys", row.distinct_keys().size()}});
  }
  r.result = {
      {"n", n},
      {"directed", g.directed()},
      {"primes", table.primes},
      {"delays", table.delays},
      {"channel_delay", table.channel_delay},
      {"lambda", hamiltonian_instant(table)},
      {"delta_min_exact", opt(exact)},
      {"delta_min_approx", n >= 2 ? json(delta_min_approx(n)) : json()},
      {"last_delay_gap", n >= 2 ? json(last_delay_gap(table)) : json()},
      {"min_adjacent_delay_gap", n >= 2 ? json(min_adjacent_delay_gap(table)) : json()},
      {"default_epsilon", eps},
      {"exponent_bound", exponent_bound(n)},
      {"walks", walks},
      {"realizable_keys", census},
  };

  std::ostringstream h;
  h << "vertices        " << n << (g.directed() ? " (directed)" : "") << '\n';
  h << "primes          " << join(std::vector<int>(table.primes.begin(), table.primes.end())) << '\n';
  h << "lambda          " << num(hamiltonian_instant(table)) << '\n';
  h << "delta_min exact " << (exact ? num(*exact) : std::string("none")) << '\n';
  if (n >= 2) {
    h << "delta_min approx " << num(delta_min_approx(n)) << '\n';
    h << "last delay gap  " << num(last_delay_gap(table)) << '\n';
  }
  h << "epsilon         " << num(eps) << '\n';
  h << "walks (length " << n - 1 << ") " << count_walks(g, n - 1).str() << '\n';
  for (const auto& row : census) {
    h << "row " << row["row"].get<int>() << ": " << row["cells"].get<std::size_t>() << " cells, "
      << row["distinct_keys"].get<std::size_t>() << " distinct keys\n";
  }
  r.human = h.str();
  return r;
}

Report compile(const Graph& g, const RunConfig& c) {
  if (g.size() > c.cap) throw CapExceeded(g.size(), c.cap);
  const DelayTable table = build_delay_table(g.size(), c.channel_delay);
  const Network net = build_network(g, table, c);
  const auto report = validate_network(net, g);
  Report r;
  r.result = {{"network", to_json(net)}, {"violations", report.violations}};
  std::ostringstream h;
  h << to_string(net.topology()) << " network: " << net.units().size() << " units, "
    << net.channels().size() << " channels\n";
  for (const auto& u : net.units()) {
    h << "  unit (" << u.row << "," << u.column << ") delay " << num(u.delay) << " slits "
      << u.slit_count << '\n';
  }
  h << (report.valid() ? "valid\n" : "INVALID\n");
  for (const auto& v : report.violations) h << "  " << v << '\n';
  r.human = h.str();
  return r;
}

Report detect(const Graph& g, const RunConfig& c) {
  require_feedforward(c);
  DetectionOptions opts;
  opts.cap = c.cap;
  opts.channel_delay = c.channel_delay;
  opts.phase_omega = c.phase_omega;
  opts.epsilon = c.epsilon;
  opts.propagation = mode_from_string(c.mode);
  if (c.shots) {
    if (!c.seed) throw BadCombination("--shots requires --seed");
    if (opts.propagation != Mode::incoherent) throw BadCombination("sampled detection is incoherent only");
    opts.mode = DetectionMode::sampled;
    opts.shots = *c.shots;
    opts.seed = c.seed;
  } else if (opts.propagation == Mode::classical) {
    throw BadCombination("detection needs --mode incoherent or coherent");
  }
  const auto out = detect_hamiltonian(g, opts);
  Report r;
  r.resolved["epsilon"] = out.epsilon;
  r.result = {
      {"hamiltonian_detected", out.hamiltonian_detected},
      {"end_vertices", out.end_vertices},
      {"per_vertex", out.per_vertex},
      {"total", out.total},
      {"detection", out.mode == DetectionMode::exact ? "exact" : "sampled"},
      {"shots", out.shots},
      {"hits", out.hits},
      {"epsilon", out.epsilon},
      {"window_start", out.window_start},
      {"inconclusive", out.inconclusive},
      {"warning", opt(out.warning)},
  };
  std::ostringstream h;
  h << "hamiltonian path " << (out.hamiltonian_detected ? "detected" : "not detected") << '\n';
  h << "window [" << num(out.window_start) << ", " << num(out.window_start + out.epsilon) << "]\n";
  for (std::size_t v = 0; v < out.per_vertex.size(); ++v) {
    h << "  vertex " << v + 1 << ": " << num(out.per_vertex[v]) << '\n';
  }
  h << "total " << num(out.total) << '\n';
  if (out.inconclusive) h << "note: no detection does not rule out a Hamiltonian path\n";
  if (out.warning) h << "warning: " << *out.warning << '\n';
  r.human = h.str();
  return r;
}

Report construct(const Graph& g, const RunConfig& c) {
  require_feedforward(c);
  const bool sampled = c.policy == "sampled";
  if (sampled && !c.seed) throw BadCombination("--policy sampled requires --seed");
  Vertex end = 0;
  if (c.end_vertex) {
    end = *c.end_vertex;
  } else {
    DetectionOptions opts;
    opts.cap = c.cap;
    const auto det = detect_hamiltonian(g, opts);
    if (!det.hamiltonian_detected) {
      Report r;
      r.result = {{"constructed", false}, {"reason", "graph has no Hamiltonian path"}};
      r.human = "no Hamiltonian path to construct\n";
      return r;
    }
    end = det.end_vertices.front();
  }
  const auto built = construct_path(g, end, sampled ? ChoicePolicy::sampled : ChoicePolicy::deterministic,
                                    c.seed.value_or(0), c.cap);
  Report r;
  r.resolved["end_vertex"] = end;
  json passes = json::array();
  std::ostringstream h;
  for (const auto& p : built.passes) {
    passes.push_back({{"pass", p.index},
                      {"rows", p.rows},
                      {"head", p.head},
                      {"target_key", p.target_key.exponents()},
                      {"window_start", p.window_start},
                      {"candidates", p.candidates},
                      {"candidate_weights", p.candidate_weights},
                      {"chosen", p.chosen}});
    h << "pass " << p.index << " (rows 1.." << p.rows << "): candidates {" << join(p.candidates, ",")
      << "} -> " << p.chosen << '\n';
  }
  r.result = {{"constructed", true}, {"end_vertex", end}, {"path", built.path}, {"passes", passes}};
  h << "h = [" << join(built.path, ",") << "]\n";
  r.human = h.str();
  return r;
}

Report sample(const Graph& g, const RunConfig& c) {
  if (g.size() > c.cap) throw CapExceeded(g.size(), c.cap);
  if (!c.shots) throw BadCombination("sample needs --shots");
  if (!c.seed) throw BadCombination("--shots requires --seed");
  const DelayTable table = build_delay_table(g.size(), c.channel_delay);
  const Network net = build_network(g, table, c);
  const auto s = sample_photons(net, *c.shots, *c.seed);
  std::uint64_t ham_hits = 0;
  json cells = json::array();
  for (std::size_t i = 0; i < s.cells.size(); ++i) {
    if (is_hamiltonian_key(s.cells[i].key)) ham_hits += s.counts[i];
    cells.push_back({{"vertex", s.cells[i].column},
                     {"exponents", s.cells[i].key.exponents()},
                     {"count", s.counts[i]}});
  }
  const double freq = static_cast<double>(ham_hits) / static_cast<double>(s.shots);
  Report r;
  r.result = {{"shots", s.shots}, {"lost", s.lost}, {"hamiltonian_hits", ham_hits},
              {"hamiltonian_frequency", freq}, {"cells", cells}};
  std::ostringstream h;
  h << s.shots << " shots, " << s.lost << " lost, " << ham_hits << " at the Hamiltonian instant ("
    << num(freq) << ")\n";
  for (std::size_t i = 0; i < s.cells.size(); ++i) {
    h << "  vertex " << s.cells[i].column << " key " << s.cells[i].key.to_string() << ": "
      << s.counts[i] << '\n';
  }
  r.human = h.str();
  return r;
}

Report oracle(const Graph& g, const RunConfig& c) {
  const auto paths = brute_force_hamiltonian_paths(g, c.cap);
  const auto walks = count_walks(g, g.size() - 1);
  Report r;
  r.result = {{"paths", paths}, {"count", paths.size()}, {"walks", walks.str()}};
  std::ostringstream h;
  h << paths.size() << " Hamiltonian paths, " << walks.str() << " walks of length " << g.size() - 1 << '\n';
  for (const auto& p : paths) h << "  " << join(p) << '\n';
  r.human = h.str();
  return r;
}

Report propagate_cmd(const Graph& g, const RunConfig& c) {
  if (g.size() > c.cap) throw CapExceeded(g.size(), c.cap);
  const DelayTable table = build_delay_table(g.size(), c.channel_delay);
  const Network net = build_network(g, table, c);
  const Mode mode = mode_from_string(c.mode);
  PropagationOptions prop;
  prop.phase_omega = c.phase_omega;
  const auto dist = propagate(net, mode, prop);
  const auto bal = probability_balance(dist);

  Report r;
  r.csv = distribution_csv(dist, table);
  json cells = json::array();
  for (std::size_t i = 0; i < dist.cells.size(); ++i) {
    json cell = {{"vertex", dist.cells[i].column}, {"exponents", dist.cells[i].key.exponents()}};
    switch (mode) {
      case Mode::incoherent: cell["mass"] = dist.mass[i]; break;
      case Mode::coherent: cell["amplitude"] = {dist.amplitude[i].real(), dist.amplitude[i].imag()}; break;
      case Mode::classical: cell["pulses"] = dist.pulses[i].str(); break;
    }
    cells.push_back(std::move(cell));
  }
  r.result = {
      {"time_offset", dist.time_offset},
      {"cells", cells},
      {"balance",
       {{"total_mass", bal.total_mass},
        {"lost_mass", bal.lost_mass},
        {"normalization", bal.normalization},
        {"deviation", opt(bal.deviation)},
        {"total_pulses", bal.total_pulses.str()},
        {"lost_pulses", bal.lost_pulses.str()}}},
  };
  std::ostringstream h;
  h << to_string(mode) << " propagation over " << to_string(net.topology()) << " network, "
    << dist.cells.size() << " terminal cells\n";
  if (mode == Mode::classical) {
    h << "pulses " << bal.total_pulses.str() << ", lost " << bal.lost_pulses.str() << '\n';
  } else {
    h << "total " << num(bal.total_mass) << ", lost " << num(bal.lost_mass) << ", normalization "
      << num(bal.normalization) << '\n';
    const double eps = c.epsilon ? *c.epsilon : default_epsilon(g, table, c.cap);
    r.resolved["epsilon"] = eps;
    const auto w = detection_probability(dist, table, eps);
    r.result["hamiltonian_window"] = {{"start", w.window_start}, {"end", w.window_end},
                                      {"per_vertex", w.per_column}, {"total", w.total}};
    h << "hamiltonian window total " << num(w.total) << '\n';
  }
  r.human = h.str();
  return r;
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--graph", c.graph_path, "graph file (edge list)")->required();
  sub->add_option("--channel-delay", c.channel_delay, "propagation time of every channel")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--cap", c.cap, "largest vertex count accepted")->check(CLI::Range(1, kMaxVertices));
  sub->add_option("--format", c.format, "human, machine (JSON) or csv (propagate only)")
      ->check(CLI::IsMember({"human", "machine", "csv"}));
  sub->add_option("--out", c.out_path, "write the report here instead of stdout");
}

void add_topology(CLI::App* sub, RunConfig& c) {
  sub->add_option("--topology", c.topology)->check(CLI::IsMember({"feedforward", "recurrent"}));
  sub->add_option("--feedback-delay", c.feedback_delay, "extra delay on recurrent feedback channels");
}

void add_mode(CLI::App* sub, RunConfig& c) {
  sub->add_option("--mode", c.mode)->check(CLI::IsMember({"incoherent", "coherent", "classical"}));
  sub->add_option("--phase-omega", c.phase_omega, "coherent phase per unit delay");
  sub->add_option("--epsilon", c.epsilon, "detection window width")->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Single-photon delay network simulator for the Hamiltonian path problem", "hampath"};
  app.require_subcommand(1);

  auto* analyze_cmd = app.add_subcommand("analyze", "delay table, gaps, walk counts, key census");
  add_common(analyze_cmd, c);

  auto* compile_cmd = app.add_subcommand("compile", "emit the compiled network");
  add_common(compile_cmd, c);
  add_topology(compile_cmd, c);

  auto* detect_cmd = app.add_subcommand("detect", "detect a Hamiltonian path (exact or sampled)");
  add_common(detect_cmd, c);
  add_topology(detect_cmd, c);
  add_mode(detect_cmd, c);
  detect_cmd->add_option("--shots", c.shots, "sample this many photons instead of exact propagation")
      ->check(CLI::PositiveNumber);
  detect_cmd->add_option("--seed", c.seed);

  auto* construct_cmd = app.add_subcommand("construct", "build a Hamiltonian path by repeated passes");
  add_common(construct_cmd, c);
  add_topology(construct_cmd, c);
  construct_cmd->add_option("--end-vertex", c.end_vertex);
  construct_cmd->add_option("--policy", c.policy)->check(CLI::IsMember({"deterministic", "sampled"}));
  construct_cmd->add_option("--seed", c.seed);

  auto* sample_cmd = app.add_subcommand("sample", "fire single photons through the network");
  add_common(sample_cmd, c);
  add_topology(sample_cmd, c);
  sample_cmd->add_option("--shots", c.shots)->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", c.seed);

  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force Hamiltonian paths");
  add_common(oracle_cmd, c);

  auto* propagate_cmd_app = app.add_subcommand("propagate", "terminal distribution of one propagation");
  add_common(propagate_cmd_app, c);
  add_topology(propagate_cmd_app, c);
  add_mode(propagate_cmd_app, c);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (c.format == "csv" && c.command != "propagate") {
    err << "error: --format csv is only available for propagate\n";
    return kBadCombination;
  }

  std::optional<Graph> g;
  try {
    g = read_graph_file(c.graph_path);
  } catch (const Error& e) {
    err << "error: " << c.graph_path << ": " << e.what() << '\n';
    return kInputError;
  }

  Report report;
  try {
    if (c.command == "analyze") report = analyze(*g, c);
    else if (c.command == "compile") report = compile(*g, c);
    else if (c.command == "detect") report = detect(*g, c);
    else if (c.command == "construct") report = construct(*g, c);
    else if (c.command == "sample") report = sample(*g, c);
    else if (c.command == "oracle") report = oracle(*g, c);
    else report = propagate_cmd(*g, c);
  } catch (const BadCombination& e) {
    err << "error: " << e.what() << '\n';
    return kBadCombination;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kOversize;
  } catch (const ConstraintViolation& e) {
    err << "error: " << e.what() << '\n';
    return kRefused;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kRefused;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }

  std::string text;
  if (c.format == "csv") {
    text = report.csv;
  } else if (c.format == "machine") {
    json doc = {{"format", "hampath-report"},
                {"version", kReportVersion},
                {"command", c.command},
                {"config", config_json(c)},
                {"resolved", report.resolved},
                {"result", report.result}};
    text = doc.dump(2) + "\n";
  } else {
    text = report.human;
  }

  if (c.out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(c.out_path, std::ios::binary);
    if (!(file << text)) {
      err << "error: cannot write " << c.out_path << '\n';
      return kFailure;
    }
  }
  return kOk;
}

}  // namespace hampath::cli
