// graphctl — batch front end for the metric-graph control toolkit.
//
// One subcommand per experiment scenario; every run writes its artifacts as
// CSV (17 significant digits, LF endings) plus a JSON sidecar holding the
// fully resolved configuration, so a run can be reproduced from its output
// directory alone. Module errors surface as machine-readable JSON on stderr
// with exit code 2 (bad input) or 3 (numerical failure).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "CLI11.hpp"
#include "json.hpp"

#include "graphctl/acceptance.hpp"
#include "graphctl/control_op.hpp"
#include "graphctl/csvio.hpp"
#include "graphctl/errors.hpp"
#include "graphctl/filtering.hpp"
#include "graphctl/metric_graph.hpp"
#include "graphctl/moment.hpp"
#include "graphctl/simulate.hpp"
#include "graphctl/spectral.hpp"
#include "graphctl/steer.hpp"

namespace gc = graphctl;
using nlohmann::json;

namespace {

struct GlobalOpts {
  std::string out = ".";
  unsigned seed = 0;
  std::string precision = "auto";
};

gc::Precision parse_precision(const std::string& s) {
  if (s == "standard") return gc::Precision::Standard;
  if (s == "extended") return gc::Precision::Extended;
  if (s == "auto") return gc::Precision::Auto;
  gc::fail(gc::ErrorCode::BadInput,
           "precision must be standard, extended, or auto (got '" + s + "')");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) gc::fail(gc::ErrorCode::BadInput, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

gc::MetricGraph load_graph(const std::string& path) { return gc::build_graph(read_file(path)); }

// Operator spec: {"profiles": [{"kind": "cosine", "scale": 1.0},
//                              {"kind": "monomial", "power": 2},
//                              {"kind": "none"}, ...]} — one entry per edge.
gc::ControlOperator load_operator(const std::string& path, int num_edges) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& err) {
    gc::fail(gc::ErrorCode::BadInput, path + ": " + err.what());
  }
  std::vector<gc::EdgeProfile> profiles;
  try {
    for (const json& p : doc.at("profiles")) {
      const std::string kind = p.at("kind").get<std::string>();
      const double scale = p.value("scale", 1.0);
      if (kind == "none") {
        profiles.push_back(gc::EdgeProfile::none());
      } else if (kind == "cosine") {
        profiles.push_back(gc::EdgeProfile::cosine(scale));
      } else if (kind == "monomial") {
        profiles.push_back(gc::EdgeProfile::monomial(p.value("power", 1), scale));
      } else {
        gc::fail(gc::ErrorCode::BadInput, path + ": unknown profile kind '" + kind + "'");
      }
    }
  } catch (const json::exception& err) {
    gc::fail(gc::ErrorCode::BadInput, path + ": " + err.what());
  }
  if (static_cast<int>(profiles.size()) != num_edges) {
    gc::fail(gc::ErrorCode::BadInput,
             path + ": " + std::to_string(profiles.size()) + " profiles for " +
                 std::to_string(num_edges) + " edges");
  }
  return gc::ControlOperator(profiles);
}

// One number per line (a leading header line is skipped); used for initial
// coefficient vectors and explicit moment targets.
std::vector<double> load_column(const std::string& path, int expected) {
  std::istringstream in(read_file(path));
  std::vector<double> values;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      values.push_back(std::stod(line));
    } catch (const std::exception&) {
      if (first) {
        first = false;
        continue;  // header
      }
      gc::fail(gc::ErrorCode::BadInput, path + ": cannot parse '" + line + "'");
    }
    first = false;
  }
  if (static_cast<int>(values.size()) != expected) {
    gc::fail(gc::ErrorCode::BadInput, path + ": expected " + std::to_string(expected) +
                                          " values, found " + std::to_string(values.size()));
  }
  return values;
}

Eigen::VectorXd random_unit(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = gauss(gen);
  return z / z.norm();
}

void write_sidecar(const GlobalOpts& g, const std::string& name, json config) {
  config["seed"] = g.seed;
  config["precision"] = g.precision;
  config["out"] = g.out;
  gc::write_text_file(g.out + "/" + name, config.dump(2) + "\n");
}

std::string art(const GlobalOpts& g, const std::string& name) { return g.out + "/" + name; }

// ---------------------------------------------------------------------------
// spectrum

int run_spectrum(const GlobalOpts& g, const std::string& graph_path, int modes,
                 double oracle_h) {
  const gc::MetricGraph graph = load_graph(graph_path);
  const gc::Spectrum spec = gc::compute_spectrum(graph, modes);
  std::vector<double> oracle;
  if (oracle_h > 0) oracle = gc::discretize_oracle(graph, oracle_h, modes).lambdas();

  gc::CsvWriter csv(art(g, "spectrum.csv"));
  std::vector<std::string> names{"k", "lambda", "omega", "symmetry", "multiplicity"};
  if (!oracle.empty()) {
    names.push_back("oracle_lambda");
    names.push_back("rel_diff");
  }
  csv.header(names);
  for (int k = 1; k <= spec.size(); ++k) {
    const gc::EigenMode& mode = spec.mode(k);
    std::vector<std::string> cells{std::to_string(k), gc::format_sig17(mode.lambda),
                                   gc::format_sig17(mode.omega),
                                   gc::symmetry_name(mode.symmetry),
                                   std::to_string(mode.multiplicity)};
    if (!oracle.empty()) {
      const double diff =
          std::abs(oracle[k - 1] - mode.lambda) / std::max(1.0, mode.lambda);
      cells.push_back(gc::format_sig17(oracle[k - 1]));
      cells.push_back(gc::format_sig17(diff));
    }
    csv.row(cells);
  }
  csv.close();

  write_sidecar(g, "spectrum.json",
                json{{"command", "spectrum"},
                     {"graph", graph_path},
                     {"modes", modes},
                     {"oracle_h", oracle_h},
                     {"artifacts", json::array({"spectrum.csv"})}});
  return 0;
}

// ---------------------------------------------------------------------------
// gaps

int run_gaps(const GlobalOpts& g, const std::string& graph_path, int modes, int block) {
  const gc::MetricGraph graph = load_graph(graph_path);
  const gc::Spectrum spec = gc::compute_spectrum(graph, modes);
  const gc::GapReport rep = gc::gap_report(spec, block);

  gc::CsvWriter csv(art(g, "gaps.csv"));
  csv.header({"k", "sqrt_lambda", "gap_to_next", "envelope_a"});
  for (int k = 1; k < spec.size(); ++k) {
    const double sk = std::sqrt(std::max(0.0, spec.lambda(k)));
    const double sk1 = std::sqrt(std::max(0.0, spec.lambda(k + 1)));
    csv.row({std::to_string(k), gc::format_sig17(sk), gc::format_sig17(sk1 - sk),
             gc::format_sig17(rep.envelope_a[k - 1])});
  }
  csv.close();

  gc::CsvWriter counting(art(g, "counting.csv"));
  counting.header({"k", "rho", "count"});
  for (const gc::CountingSample& s : rep.counting_samples) {
    counting.row({std::to_string(s.k), gc::format_sig17(s.rho), std::to_string(s.count)});
  }
  counting.close();

  write_sidecar(g, "gaps.json",
                json{{"command", "gaps"},
                     {"graph", graph_path},
                     {"modes", modes},
                     {"block", block},
                     {"gamma", rep.gamma},
                     {"min_consecutive_gap", rep.min_consecutive_gap},
                     {"weak_c", rep.weak_c},
                     {"weak_p", rep.weak_p},
                     {"weak_residual", rep.weak_residual},
                     {"weak_gap_degenerate", rep.weak_gap_degenerate},
                     {"weyl_min", rep.weyl_min},
                     {"weyl_max", rep.weyl_max},
                     {"artifacts", json::array({"gaps.csv", "counting.csv"})}});
  return 0;
}

// ---------------------------------------------------------------------------
// spreading

int run_spreading(const GlobalOpts& g, const std::string& graph_path,
                  const std::string& op_path, int j, int modes) {
  const gc::MetricGraph graph = load_graph(graph_path);
  const gc::Spectrum spec = gc::compute_spectrum(graph, modes);
  const gc::ControlOperator op = load_operator(op_path, graph.num_edges());
  const gc::SpreadingReport rep = gc::verify_spreading(op, spec, j, modes);

  gc::CsvWriter csv(art(g, "spreading.csv"));
  csv.header({"k", "lambda", "coupling"});
  for (int k = 1; k <= rep.modes; ++k) {
    csv.row({std::to_string(k), gc::format_sig17(spec.lambda(k)),
             gc::format_sig17(rep.couplings[k - 1])});
  }
  csv.close();

  write_sidecar(g, "spreading.json",
                json{{"command", "spreading"},
                     {"graph", graph_path},
                     {"operator", op_path},
                     {"j", j},
                     {"modes", modes},
                     {"q", rep.q},
                     {"b", rep.b},
                     {"worst_k", rep.worst_k},
                     {"first_coupling", rep.first_coupling},
                     {"floor_failures", rep.floor_failures},
                     {"pass", rep.pass},
                     {"artifacts", json::array({"spreading.csv"})}});
  return 0;
}

// ---------------------------------------------------------------------------
// synthesize — minimum-norm control for the linearized system around mode j.

struct SynthesisInputs {
  gc::MetricGraph graph;
  gc::Spectrum spec;
  std::vector<double> lambdas;
  std::vector<double> couplings;
  Eigen::VectorXd z0;
  gc::MomentProblem problem;
};

SynthesisInputs prepare_synthesis(const GlobalOpts& g, const std::string& graph_path,
                                  const std::string& op_path, int j, int modes,
                                  double horizon, const std::string& state_path,
                                  const std::string& targets_path) {
  gc::MetricGraph graph = load_graph(graph_path);
  gc::Spectrum spec = gc::compute_spectrum(graph, modes);
  const gc::ControlOperator op = load_operator(op_path, graph.num_edges());
  std::vector<double> couplings(modes);
  for (int k = 1; k <= modes; ++k) couplings[k - 1] = gc::coupling(op, spec, j, k);

  SynthesisInputs in{std::move(graph), std::move(spec), {}, std::move(couplings), {}, {}};
  in.lambdas = in.spec.lambdas(modes);
  in.problem.lambdas = in.lambdas;
  in.problem.T = horizon;
  if (!targets_path.empty()) {
    in.problem.targets = load_column(targets_path, modes);
    in.problem.provenance = gc::TargetProvenance::Raw;
  } else {
    if (!state_path.empty()) {
      const std::vector<double> z = load_column(state_path, modes);
      in.z0 = Eigen::Map<const Eigen::VectorXd>(z.data(), modes);
    } else {
      in.z0 = random_unit(modes, g.seed);
    }
    const std::vector<double> zv(in.z0.data(), in.z0.data() + in.z0.size());
    in.problem.targets = gc::null_control_targets(zv, in.couplings);
    in.problem.provenance = gc::TargetProvenance::FromState;
  }
  return in;
}

int run_synthesize(const GlobalOpts& g, const std::string& graph_path,
                   const std::string& op_path, int j, int modes, double horizon,
                   const std::string& state_path, const std::string& targets_path,
                   int samples) {
  SynthesisInputs in = prepare_synthesis(g, graph_path, op_path, j, modes, horizon,
                                         state_path, targets_path);
  const gc::ControlSignal u = gc::solve_moment(in.problem, parse_precision(g.precision));

  gc::CsvWriter control(art(g, "control.csv"));
  control.header({"s", "u"});
  const std::vector<double> grid = u.sample_grid(samples);
  for (int i = 0; i <= samples; ++i) {
    control.row({gc::format_sig17(horizon * i / samples), gc::format_sig17(grid[i])});
  }
  control.close();

  // closed-form artifact: coefficients kept at full working precision so that
  // `simulate --control` replays the signal without losing the cancellations
  json ctl{{"horizon", horizon}, {"lambdas", in.lambdas}, {"coefficients", json::array()}};
  for (const gc::xreal& c : u.coefficients()) {
    ctl["coefficients"].push_back(c.str(0, std::ios_base::scientific));
  }
  gc::write_text_file(art(g, "control.json"), ctl.dump(2) + "\n");

  json sidecar{{"command", "synthesize"},
               {"graph", graph_path},
               {"operator", op_path},
               {"j", j},
               {"modes", modes},
               {"horizon", horizon},
               {"samples", samples},
               {"control_l2_norm", u.l2_norm},
               {"residual_raw", u.residual_raw},
               {"residual_shifted", u.residual_shifted},
               {"precision_used", gc::precision_name(u.used)},
               {"artifacts", json::array({"control.csv", "control.json", "modes.csv"})}};

  gc::CsvWriter table(art(g, "modes.csv"));
  if (in.problem.provenance == gc::TargetProvenance::FromState) {
    const Eigen::VectorXd zt = gc::evolve_linearized(in.lambdas, in.couplings, in.z0, u);
    table.header({"k", "lambda", "coupling", "z0", "target", "z_final"});
    for (int k = 1; k <= modes; ++k) {
      table.row({std::to_string(k), gc::format_sig17(in.lambdas[k - 1]),
                 gc::format_sig17(in.couplings[k - 1]), gc::format_sig17(in.z0(k - 1)),
                 gc::format_sig17(in.problem.targets[k - 1]),
                 gc::format_sig17(zt(k - 1))});
    }
    sidecar["final_norm"] = zt.norm();
    sidecar["state"] = state_path.empty() ? json("random") : json(state_path);
  } else {
    table.header({"k", "lambda", "coupling", "target"});
    for (int k = 1; k <= modes; ++k) {
      table.row({std::to_string(k), gc::format_sig17(in.lambdas[k - 1]),
                 gc::format_sig17(in.couplings[k - 1]),
                 gc::format_sig17(in.problem.targets[k - 1])});
    }
    sidecar["targets"] = targets_path;
  }
  table.close();

  write_sidecar(g, "synthesize.json", sidecar);
  return 0;
}

// ---------------------------------------------------------------------------
// simulate — drive the truncated bilinear system under a control from file
// (as written by synthesize) or under no control at all.

gc::ControlSignal load_control(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& err) {
    gc::fail(gc::ErrorCode::BadInput, path + ": " + err.what());
  }
  try {
    const double horizon = doc.at("horizon").get<double>();
    const std::vector<double> lambdas = doc.at("lambdas").get<std::vector<double>>();
    gc::xvec coefficients;
    for (const json& c : doc.at("coefficients")) {
      coefficients.emplace_back(c.get<std::string>());
    }
    return gc::ControlSignal(lambdas, horizon, std::move(coefficients));
  } catch (const std::exception& err) {
    gc::fail(gc::ErrorCode::BadInput, path + ": " + err.what());
  }
}

int run_simulate(const GlobalOpts& g, const std::string& graph_path,
                 const std::string& op_path, const std::string& control_path, bool free_run,
                 int modes, double horizon, bool horizon_set, double dt, int stride,
                 const std::string& state_path) {
  if (!free_run && control_path.empty()) {
    gc::fail(gc::ErrorCode::BadInput, "simulate needs --control FILE or --free");
  }
  const gc::MetricGraph graph = load_graph(graph_path);
  const gc::Spectrum spec = gc::compute_spectrum(graph, modes);
  const std::vector<double> lambdas = spec.lambdas(modes);
  const gc::ControlOperator op = load_operator(op_path, graph.num_edges());
  const Eigen::MatrixXd m = gc::coupling_matrix(op, spec, modes);

  Eigen::VectorXd z0;
  if (!state_path.empty()) {
    const std::vector<double> z = load_column(state_path, modes);
    z0 = Eigen::Map<const Eigen::VectorXd>(z.data(), modes);
  } else {
    z0 = random_unit(modes, g.seed);
  }

  gc::ControlSignal u;
  if (free_run) {
    u = gc::ControlSignal({0.0}, horizon, gc::xvec{gc::xreal(0)});
  } else {
    u = load_control(control_path);
    if (horizon_set && std::abs(horizon - u.horizon()) > 1e-12 * std::max(1.0, u.horizon())) {
      gc::fail(gc::ErrorCode::BadInput, "--horizon conflicts with the control file (T = " +
                                            gc::format_sig17(u.horizon()) + ")");
    }
  }

  const gc::Trajectory traj = gc::evolve_bilinear(lambdas, m, u, z0, dt);

  gc::CsvWriter csv(art(g, "trajectory.csv"));
  std::vector<std::string> names{"t"};
  for (int k = 1; k <= modes; ++k) names.push_back("c" + std::to_string(k));
  names.push_back("norm");
  csv.header(names);
  for (size_t i = 0; i < traj.times.size(); ++i) {
    if (i % static_cast<size_t>(stride) != 0 && i + 1 != traj.times.size()) continue;
    std::vector<std::string> cells{gc::format_sig17(traj.times[i])};
    for (int k = 0; k < modes; ++k) cells.push_back(gc::format_sig17(traj.states[i](k)));
    cells.push_back(gc::format_sig17(traj.states[i].norm()));
    csv.row(cells);
  }
  csv.close();

  const Eigen::VectorXd& zt = traj.final_state;
  write_sidecar(g, "simulate.json",
                json{{"command", "simulate"},
                     {"graph", graph_path},
                     {"operator", op_path},
                     {"control", free_run ? std::string("free") : control_path},
                     {"modes", modes},
                     {"horizon", u.horizon()},
                     {"dt", traj.dt},
                     {"steps", traj.steps},
                     {"stride", stride},
                     {"state", state_path.empty() ? "random" : state_path},
                     {"final_norm", traj.final_norm},
                     {"final_state", std::vector<double>(zt.data(), zt.data() + zt.size())},
                     {"artifacts", json::array({"trajectory.csv"})}});
  return 0;
}

// ---------------------------------------------------------------------------
// steer — iterated window scheme toward the j-th eigensolution.

int run_steer(const GlobalOpts& g, const std::string& graph_path, const std::string& op_path,
              int j, int modes, double horizon, const std::string& mode, double deviation,
              double r1, double radius, int max_iter, double tol,
              const std::string& state_path) {
  const gc::MetricGraph graph = load_graph(graph_path);
  const gc::Spectrum spec = gc::compute_spectrum(graph, modes);
  const gc::ControlOperator op = load_operator(op_path, graph.num_edges());
  gc::SteerSetup setup;
  setup.lambdas = spec.lambdas(modes);
  setup.coupling = gc::coupling_matrix(op, spec, modes);
  setup.precision = parse_precision(g.precision);

  Eigen::VectorXd psi0;
  if (!state_path.empty()) {
    const std::vector<double> z = load_column(state_path, modes);
    psi0 = Eigen::Map<const Eigen::VectorXd>(z.data(), modes);
  } else {
    if (j >= modes) {
      gc::fail(gc::ErrorCode::BadInput,
               "default initial state perturbs mode j+1; pass --state or lower --j");
    }
    psi0 = Eigen::VectorXd::Zero(modes);
    psi0(j - 1) = 1.0;
    psi0(j) = deviation;
  }

  gc::SteeringRun run;
  if (mode == "local") {
    run = gc::steer_to_eigensolution(setup, psi0, j, horizon, max_iter, tol);
  } else if (mode == "strip") {
    run = gc::semiglobal_steer(setup, psi0, gc::SemiglobalMode::Strip, r1, radius, horizon,
                               max_iter, tol);
  } else if (mode == "cone") {
    run = gc::semiglobal_steer(setup, psi0, gc::SemiglobalMode::Cone, r1, radius, horizon,
                               max_iter, tol);
  } else {
    gc::fail(gc::ErrorCode::BadInput, "steer mode must be local, strip, or cone");
  }

  gc::CsvWriter windows(art(g, "windows.csv"));
  windows.header({"window", "residual_before", "residual_after", "control_norm"});
  for (const gc::SteerIteration& it : run.log) {
    windows.row({std::to_string(it.index), gc::format_sig17(it.residual_before),
                 gc::format_sig17(it.residual_after), gc::format_sig17(it.control_norm)});
  }
  windows.close();

  gc::CsvWriter final_state(art(g, "final_state.csv"));
  final_state.header({"k", "value"});
  for (int k = 0; k < run.final_state.size(); ++k) {
    final_state.row({std::to_string(k + 1), gc::format_sig17(run.final_state(k))});
  }
  final_state.close();

  write_sidecar(g, "steer.json",
                json{{"command", "steer"},
                     {"graph", graph_path},
                     {"operator", op_path},
                     {"j", j},
                     {"modes", modes},
                     {"horizon", horizon},
                     {"mode", mode},
                     {"deviation", deviation},
                     {"r1", r1},
                     {"radius", radius},
                     {"max_iter", max_iter},
                     {"tol", tol},
                     {"state", state_path.empty() ? "generated" : state_path},
                     {"converged", run.converged},
                     {"iterations", run.iterations},
                     {"window_modes", run.window_modes},
                     {"sim_modes", run.sim_modes},
                     {"wait_time", run.wait_time},
                     {"final_residual", run.final_residual},
                     {"total_control_norm", run.total_control_norm},
                     {"artifacts", json::array({"windows.csv", "final_state.csv"})}});
  return 0;
}

// ---------------------------------------------------------------------------
// filter — invariant-subspace check and reduction to the interval problem.

json profile_to_json(const gc::EdgeProfile& p) {
  switch (p.kind) {
    case gc::EdgeProfile::Kind::None: return json{{"kind", "none"}};
    case gc::EdgeProfile::Kind::Cosine: return json{{"kind", "cosine"}, {"scale", p.scale}};
    case gc::EdgeProfile::Kind::Monomial:
      return json{{"kind", "monomial"}, {"power", p.power}, {"scale", p.scale}};
    case gc::EdgeProfile::Kind::Sampled:
      return json{{"kind", "sampled"}, {"scale", p.scale}, {"values", p.values}};
  }
  return json{{"kind", "none"}};
}

int run_filter(const GlobalOpts& g, const std::string& graph_path, const std::string& op_path,
               int modes, int trials) {
  const gc::MetricGraph graph = load_graph(graph_path);
  const gc::ControlOperator op = load_operator(op_path, graph.num_edges());
  const gc::InvariantSubspace sub = gc::build_invariant_subspace(graph, modes);
  const gc::InvarianceReport inv = gc::check_B_invariance(op, sub, trials);
  const gc::ReducedProblem red = gc::reduce_to_interval(op, sub, modes);

  json reduced{{"interval", json::parse(gc::graph_to_json(red.interval))},
               {"lambdas", red.spectrum.lambdas()},
               {"multiplier", profile_to_json(red.multiplier.profile(0))}};
  gc::write_text_file(art(g, "reduced.json"), reduced.dump(2) + "\n");

  write_sidecar(g, "filter.json",
                json{{"command", "filter"},
                     {"graph", graph_path},
                     {"operator", op_path},
                     {"modes", modes},
                     {"trials", inv.trials},
                     {"worst_residual", inv.worst_residual},
                     {"invariant", inv.pass},
                     {"tail_length", sub.tail_length()},
                     {"artifacts", json::array({"reduced.json"})}});
  return 0;
}

// ---------------------------------------------------------------------------
// acceptance

int run_acceptance_cmd(const GlobalOpts& g) {
  const std::vector<gc::CriterionResult> results = gc::run_acceptance();
  std::cout << gc::format_acceptance(results);

  gc::CsvWriter csv(art(g, "acceptance.csv"));
  csv.header({"id", "pass", "detail"});
  for (const gc::CriterionResult& r : results) {
    csv.row({r.id, r.pass ? "1" : "0", r.detail});
  }
  csv.close();

  write_sidecar(g, "acceptance.json",
                json{{"command", "acceptance"},
                     {"passed", gc::all_passed(results)},
                     {"artifacts", json::array({"acceptance.csv"})}});
  return gc::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectra, gap diagnostics, control synthesis, and eigensolution steering on "
               "compact metric graphs"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--out", g.out, "output directory for artifacts")->capture_default_str();
  app.add_option("--seed", g.seed, "seed for generated initial states")
      ->capture_default_str();
  app.add_option("--precision", g.precision, "moment solves: standard|extended|auto")
      ->capture_default_str();

  std::string graph_path, op_path, state_path, targets_path, control_path;
  int modes = 10, block = 1, j = 1, samples = 2000, stride = 10, max_iter = 12, trials = 20;
  double oracle_h = 0, horizon = 1.0, dt = 0, deviation = 0.01, r1 = 0.5, radius = 2.0,
         tol = 1e-4;
  bool free_run = false;
  std::string steer_mode = "local";

  CLI::App* spectrum = app.add_subcommand("spectrum", "closed-form eigenvalues of a graph");
  spectrum->add_option("--graph", graph_path, "graph spec (JSON)")->required();
  spectrum->add_option("--modes", modes, "number of eigenvalues")->capture_default_str();
  spectrum->add_option("--oracle-h", oracle_h,
                       "also run the finite-difference oracle at this mesh width");

  CLI::App* gaps = app.add_subcommand("gaps", "gap and Weyl diagnostics");
  gaps->add_option("--graph", graph_path, "graph spec (JSON)")->required();
  gaps->add_option("--modes", modes, "number of eigenvalues")->capture_default_str();
  gaps->add_option("--block", block, "block size M for the uniform gap")
      ->capture_default_str();

  CLI::App* spreading = app.add_subcommand("spreading", "coupling lower-bound check");
  spreading->add_option("--graph", graph_path, "graph spec (JSON)")->required();
  spreading->add_option("--operator", op_path, "control operator spec (JSON)")->required();
  spreading->add_option("--j", j, "control mode index")->capture_default_str();
  spreading->add_option("--modes", modes, "number of modes")->capture_default_str();

  CLI::App* synthesize =
      app.add_subcommand("synthesize", "minimum-norm null control via the moment method");
  synthesize->add_option("--graph", graph_path, "graph spec (JSON)")->required();
  synthesize->add_option("--operator", op_path, "control operator spec (JSON)")->required();
  synthesize->add_option("--j", j, "mode the control is synthesized around")
      ->capture_default_str();
  synthesize->add_option("--modes", modes, "truncation order")->capture_default_str();
  synthesize->add_option("--horizon", horizon, "control horizon T")->capture_default_str();
  synthesize->add_option("--state", state_path, "initial coefficients (one per line)");
  synthesize->add_option("--targets", targets_path, "explicit moment targets (one per line)");
  synthesize->add_option("--samples", samples, "control samples written")
      ->capture_default_str();

  CLI::App* simulate =
      app.add_subcommand("simulate", "bilinear evolution under a control file, or free decay");
  simulate->add_option("--graph", graph_path, "graph spec (JSON)")->required();
  simulate->add_option("--operator", op_path, "control operator spec (JSON)")->required();
  simulate->add_option("--modes", modes, "truncation order")->capture_default_str();
  CLI::Option* sim_control =
      simulate->add_option("--control", control_path, "control artifact from synthesize");
  CLI::Option* sim_free =
      simulate->add_flag("--free", free_run, "no control: plain modal heat decay");
  sim_control->excludes(sim_free);
  sim_free->excludes(sim_control);
  CLI::Option* sim_horizon =
      simulate->add_option("--horizon", horizon, "horizon T (free runs)")->capture_default_str();
  simulate->add_option("--dt", dt, "time step (0: automatic)")->capture_default_str();
  simulate->add_option("--stride", stride, "write every n-th step")->capture_default_str();
  simulate->add_option("--state", state_path, "initial coefficients (one per line)");

  CLI::App* steer = app.add_subcommand("steer", "steer to the j-th eigensolution");
  steer->add_option("--graph", graph_path, "graph spec (JSON)")->required();
  steer->add_option("--operator", op_path, "control operator spec (JSON)")->required();
  steer->add_option("--j", j, "target mode")->capture_default_str();
  steer->add_option("--modes", modes, "truncation order")->capture_default_str();
  steer->add_option("--horizon", horizon, "window length T")->capture_default_str();
  steer->add_option("--mode", steer_mode, "local|strip|cone")->capture_default_str();
  steer->add_option("--deviation", deviation, "transverse deviation of the generated state")
      ->capture_default_str();
  steer->add_option("--r1", r1, "strip: allowed |y_1 - 1|")->capture_default_str();
  steer->add_option("--radius", radius, "strip: allowed transverse norm")
      ->capture_default_str();
  steer->add_option("--max-iter", max_iter, "window budget")->capture_default_str();
  steer->add_option("--tol", tol, "target deviation")->capture_default_str();
  steer->add_option("--state", state_path, "initial coefficients (one per line)");

  CLI::App* filter =
      app.add_subcommand("filter", "invariant-subspace check and interval reduction");
  filter->add_option("--graph", graph_path, "graph spec (JSON)")->required();
  filter->add_option("--operator", op_path, "control operator spec (JSON)")->required();
  filter->add_option("--modes", modes, "generators kept")->capture_default_str();
  filter->add_option("--trials", trials, "random invariance trials")->capture_default_str();

  CLI::App* acceptance =
      app.add_subcommand("acceptance", "run the full demonstration suite");
  (void)acceptance;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    json err{{"error", "BadInput"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  }

  try {
    std::filesystem::create_directories(g.out);
    if (spectrum->parsed()) return run_spectrum(g, graph_path, modes, oracle_h);
    if (gaps->parsed()) return run_gaps(g, graph_path, modes, block);
    if (spreading->parsed()) return run_spreading(g, graph_path, op_path, j, modes);
    if (synthesize->parsed()) {
      return run_synthesize(g, graph_path, op_path, j, modes, horizon, state_path,
                            targets_path, samples);
    }
    if (simulate->parsed()) {
      return run_simulate(g, graph_path, op_path, control_path, free_run, modes, horizon,
                          sim_horizon->count() > 0, dt, stride, state_path);
    }
    if (steer->parsed()) {
      return run_steer(g, graph_path, op_path, j, modes, horizon, steer_mode, deviation, r1,
                       radius, max_iter, tol, state_path);
    }
    if (filter->parsed()) return run_filter(g, graph_path, op_path, modes, trials);
    if (acceptance->parsed()) return run_acceptance_cmd(g);
  } catch (const gc::Error& e) {
    json err{{"error", gc::error_name(e.code())}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return gc::is_validation_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    json err{{"error", "Internal"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 3;
  }
  return 0;
}
