#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sysid/csv.hpp"
#include "sysid/errors.hpp"
#include "sysid/experiments.hpp"
#include "sysid/hammerstein.hpp"
#include "sysid/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "sparse-sysid 1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw config_error(where + ": expected a JSON object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key()))
      throw config_error(where + ": unknown key '" + item.key() + "'");
  }
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw config_error(path + ": " + e.what());
  }
  return doc;
}

Eigen::VectorXd to_vector(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw config_error(where + ": expected an array");
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw config_error(where + ": expected numbers");
    v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  }
  return v;
}

json from_vector(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

sysid::ThresholdSchedule parse_schedule(const json& obj) {
  require_keys(obj, "schedule", {"kind", "m_const", "epsilon", "fixed_values"});
  const std::string kind = obj.value("kind", "");
  try {
    if (kind == "ratio_power") {
      return sysid::ThresholdSchedule::ratio_power(obj.value("m_const", 1.0),
                                                   obj.value("epsilon", 0.25));
    }
    if (kind == "log_over_n") {
      return sysid::ThresholdSchedule::log_over_n(obj.value("epsilon", 0.25));
    }
    if (kind == "fixed_sequence") {
      if (!obj.contains("fixed_values"))
        throw config_error("schedule: fixed_sequence needs fixed_values");
      return sysid::ThresholdSchedule::fixed_sequence(
          obj["fixed_values"].get<std::vector<double>>());
    }
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("schedule: ") + e.what());
  }
  throw config_error("schedule: kind must be ratio_power, log_over_n or fixed_sequence");
}

json schedule_to_json(const sysid::ThresholdSchedule& s) {
  json obj;
  switch (s.kind()) {
    case sysid::ScheduleKind::ratio_power:
      obj["kind"] = "ratio_power";
      obj["m_const"] = s.m_const();
      obj["epsilon"] = s.epsilon();
      break;
    case sysid::ScheduleKind::log_over_n:
      obj["kind"] = "log_over_n";
      obj["epsilon"] = s.epsilon();
      break;
    case sysid::ScheduleKind::fixed_sequence:
      obj["kind"] = "fixed_sequence";
      break;
  }
  return obj;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write " + path.string());
  out << content;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const json& config_echo, std::uint64_t seed,
                    const std::vector<std::string>& outputs) {
  json manifest;
  manifest["tool"] = kToolVersion;
  manifest["command"] = command;
  manifest["seed"] = seed;
  manifest["config"] = config_echo;
  manifest["outputs"] = outputs;
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

void write_trajectory_csv(const fs::path& path, const sysid::Trajectory& traj) {
  std::ostringstream out;
  const int r = static_cast<int>(traj.steps.front().theta.size());
  out << "n";
  for (int i = 1; i <= r; ++i) out << ",theta_" << i;
  for (int i = 1; i <= r; ++i) out << ",beta_" << i;
  out << ",alpha,lambda_min,r_n\n";
  for (std::size_t n = 0; n < traj.steps.size(); ++n) {
    const auto& rec = traj.steps[n];
    out << (n + 1);
    for (int i = 0; i < r; ++i) out << "," << sysid::format_double(rec.theta(i));
    for (int i = 0; i < r; ++i)
      out << "," << sysid::format_double(rec.sparse.beta(i));
    out << "," << sysid::format_double(rec.alpha) << ","
        << sysid::format_double(rec.stats.lambda_min) << ","
        << sysid::format_double(rec.stats.r_n) << "\n";
  }
  write_text(path, out.str());
}

void write_support_history_csv(const fs::path& path, const sysid::Trajectory& traj) {
  std::ostringstream out;
  out << "n,alpha,support_zero\n";
  for (std::size_t n = 0; n < traj.steps.size(); ++n) {
    const auto& rec = traj.steps[n];
    out << (n + 1) << "," << sysid::format_double(rec.alpha) << ","
        << sysid::join_support(rec.sparse.support_zero) << "\n";
  }
  write_text(path, out.str());
}

// ---------------------------------------------------------------- example1

sysid::Example1Config parse_example1_config(const json& doc) {
  require_keys(doc, "example1 config",
               {"r", "n", "theta_true", "a_diag", "x0", "replicates", "schedule",
                "seed", "noise_variance", "p0_scale", "theta0", "lasso_exponent",
                "checkpoints"});
  sysid::Example1Config config = sysid::make_example1_config();
  if (doc.contains("r")) config.r = doc["r"].get<int>();
  if (doc.contains("n")) config.n = doc["n"].get<int>();
  if (doc.contains("a_diag")) config.a_diag = doc["a_diag"].get<double>();
  if (doc.contains("replicates")) config.replicates = doc["replicates"].get<int>();
  if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("noise_variance"))
    config.noise_variance = doc["noise_variance"].get<double>();
  if (doc.contains("p0_scale")) config.p0_scale = doc["p0_scale"].get<double>();
  if (doc.contains("lasso_exponent"))
    config.lasso_exponent = doc["lasso_exponent"].get<double>();
  if (doc.contains("checkpoints"))
    config.checkpoints = doc["checkpoints"].get<std::vector<int>>();
  if (doc.contains("schedule")) config.schedule = parse_schedule(doc["schedule"]);

  config.theta_true = doc.contains("theta_true")
                          ? to_vector(doc["theta_true"], "theta_true")
                          : sysid::example1_default_theta();
  config.x0 = doc.contains("x0") ? to_vector(doc["x0"], "x0")
                                 : Eigen::VectorXd::Ones(config.r).eval();
  config.theta0 = doc.contains("theta0") ? to_vector(doc["theta0"], "theta0")
                                         : Eigen::VectorXd::Zero(config.r).eval();
  if (config.r < 1 || config.n < 1 || config.replicates < 1)
    throw config_error("example1 config: r, n, replicates must be positive");
  if (config.theta_true.size() != config.r || config.x0.size() != config.r ||
      config.theta0.size() != config.r)
    throw config_error("example1 config: vector lengths must equal r");
  return config;
}

json example1_config_echo(const sysid::Example1Config& c) {
  json doc;
  doc["r"] = c.r;
  doc["n"] = c.n;
  doc["theta_true"] = from_vector(c.theta_true);
  doc["a_diag"] = c.a_diag;
  doc["x0"] = from_vector(c.x0);
  doc["replicates"] = c.replicates;
  doc["schedule"] = schedule_to_json(c.schedule);
  doc["seed"] = c.seed;
  doc["noise_variance"] = c.noise_variance;
  doc["p0_scale"] = c.p0_scale;
  doc["theta0"] = from_vector(c.theta0);
  doc["lasso_exponent"] = c.lasso_exponent;
  doc["checkpoints"] = c.checkpoints;
  return doc;
}

int cmd_example1(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed, std::optional<int> replicates,
                 std::optional<int> n, const std::string& format) {
  sysid::Example1Config config = config_path.empty()
                                     ? sysid::make_example1_config()
                                     : parse_example1_config(load_json(config_path));
  if (seed) config.seed = *seed;
  if (replicates) config.replicates = *replicates;
  if (n) config.n = *n;

  const auto result = sysid::run_campaign(config);

  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  const json echo = example1_config_echo(config);
  write_text(out / "config.json", echo.dump(2) + "\n");

  std::vector<std::string> outputs = {"config.json", "summary.csv", "support.csv"};
  for (int j = 1; j <= config.replicates; ++j) {
    const fs::path rep_dir = out / ("replicate_" + std::to_string(j));
    fs::create_directories(rep_dir);
    write_trajectory_csv(rep_dir / "trajectory.csv",
                         result.trajectories[static_cast<std::size_t>(j) - 1]);
    outputs.push_back("replicate_" + std::to_string(j) + "/trajectory.csv");
  }

  std::ostringstream summary;
  summary << "method,coordinate,checkpoint,estimate\n";
  const std::vector<std::pair<std::string, const Eigen::VectorXd sysid::CheckpointEstimates::*>>
      methods = {{"algorithm1", &sysid::CheckpointEstimates::algorithm1},
                 {"least_squares", &sysid::CheckpointEstimates::least_squares},
                 {"lasso", &sysid::CheckpointEstimates::lasso}};
  for (const auto& [name, field] : methods) {
    for (int coord = 1; coord <= config.r; ++coord) {
      for (const auto& cp : result.averaged) {
        summary << name << "," << coord << "," << cp.n << ","
                << sysid::format_double((cp.*field)(coord - 1)) << "\n";
      }
    }
  }
  write_text(out / "summary.csv", summary.str());

  std::set<int> truth;
  for (int l = 1; l <= config.r; ++l)
    if (config.theta_true(l - 1) == 0.0) truth.insert(l);
  std::ostringstream support;
  support << "replicate,settled_index,final_support,matches_truth,precision,recall,exact_match\n";
  for (int j = 1; j <= config.replicates; ++j) {
    const auto& rep = result.support_reports[static_cast<std::size_t>(j) - 1];
    const auto metrics = sysid::support_metrics(rep.final_support, truth);
    support << j << ","
            << (rep.settled_index ? std::to_string(*rep.settled_index) : "") << ","
            << sysid::join_support(rep.final_support) << ","
            << (rep.matches_truth && *rep.matches_truth ? "true" : "false") << ","
            << sysid::format_double(metrics.precision) << ","
            << sysid::format_double(metrics.recall) << ","
            << (metrics.exact_match ? "true" : "false") << "\n";
  }
  write_text(out / "support.csv", support.str());

  if (format == "json") {
    json doc;
    for (const auto& cp : result.averaged) {
      json entry;
      entry["checkpoint"] = cp.n;
      entry["algorithm1"] = from_vector(cp.algorithm1);
      entry["least_squares"] = from_vector(cp.least_squares);
      entry["lasso"] = from_vector(cp.lasso);
      doc["checkpoints"].push_back(entry);
    }
    write_text(out / "summary.json", doc.dump(2) + "\n");
    outputs.push_back("summary.json");
  }

  write_manifest(out, "example1", echo, config.seed, outputs);
  return kExitOk;
}

// ---------------------------------------------------------------- identify

int cmd_identify(const std::string& data_csv, const std::string& config_path,
                 const std::string& out_dir, const std::string& format) {
  json doc = config_path.empty() ? json::object() : load_json(config_path);
  require_keys(doc, "identify config", {"schedule", "p0_scale", "theta0"});
  const sysid::ThresholdSchedule schedule =
      doc.contains("schedule") ? parse_schedule(doc["schedule"])
                               : sysid::ThresholdSchedule::log_over_n(0.45);
  const double p0_scale = doc.value("p0_scale", 100.0);

  std::ifstream in(data_csv);
  if (!in) throw config_error("cannot open " + data_csv);
  const auto samples = sysid::read_samples_csv(in);
  const int r = static_cast<int>(samples.front().phi.size());
  const Eigen::VectorXd theta0 = doc.contains("theta0")
                                     ? to_vector(doc["theta0"], "theta0")
                                     : Eigen::VectorXd::Zero(r).eval();
  if (theta0.size() != r)
    throw config_error("identify config: theta0 length must match the data");

  const auto traj = sysid::run_identification(samples, schedule, theta0, p0_scale);
  const auto validity = sysid::schedule_validity_trace(schedule, traj.stats_history());

  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  write_trajectory_csv(out / "trajectory.csv", traj);
  write_support_history_csv(out / "support_history.csv", traj);

  std::ostringstream stats;
  stats << "n,r_n,lambda_min,ratio_weakest,ratio_zhao,validity\n";
  for (std::size_t n = 0; n < traj.steps.size(); ++n) {
    const auto& s = traj.steps[n].stats;
    stats << (n + 1) << "," << sysid::format_double(s.r_n) << ","
          << sysid::format_double(s.lambda_min) << ","
          << sysid::format_double(s.ratio_weakest) << ","
          << sysid::format_double(s.ratio_zhao) << ","
          << sysid::format_double(validity[n]) << "\n";
  }
  write_text(out / "excitation.csv", stats.str());

  const auto& last = traj.steps.back();
  json final_doc;
  final_doc["beta"] = from_vector(last.sparse.beta);
  final_doc["support_zero"] = last.sparse.support_zero;
  final_doc["alpha"] = last.alpha;
  final_doc["theta"] = from_vector(last.theta);
  write_text(out / "final.json", final_doc.dump(2) + "\n");

  json echo;
  echo["data"] = data_csv;
  echo["schedule"] = schedule_to_json(schedule);
  echo["p0_scale"] = p0_scale;
  echo["format"] = format;
  write_manifest(out, "identify", echo, 0,
                 {"trajectory.csv", "support_history.csv", "excitation.csv",
                  "final.json"});
  return kExitOk;
}

// -------------------------------------------------------------- hammerstein

sysid::HammersteinModel parse_model(const json& doc) {
  require_keys(doc, "model", {"p", "q", "m", "a", "b", "c", "basis"});
  const int p = doc.value("p", 0);
  const int q = doc.value("q", 1);
  const int m = doc.value("m", 1);
  Eigen::VectorXd a =
      doc.contains("a") ? to_vector(doc["a"], "a") : Eigen::VectorXd::Zero(p).eval();
  if (!doc.contains("b") || !doc.contains("c") || !doc.contains("basis"))
    throw config_error("model: b, c and basis are required");
  Eigen::VectorXd b = to_vector(doc["b"], "b");
  Eigen::VectorXd c = to_vector(doc["c"], "c");
  if (a.size() != p || b.size() != q || c.size() != m)
    throw config_error("model: a, b, c lengths must match p, q, m");

  std::vector<sysid::BasisFunction> basis;
  if (!doc["basis"].is_array() || doc["basis"].size() != static_cast<std::size_t>(m))
    throw config_error("model: basis must be an array of m entries");
  for (const auto& g : doc["basis"]) {
    require_keys(g, "basis entry", {"kind", "params", "domain"});
    const std::string kind = g.value("kind", "");
    double lo = -1.0, hi = 1.0;
    if (g.contains("domain")) {
      const auto dom = g["domain"].get<std::vector<double>>();
      if (dom.size() != 2) throw config_error("basis entry: domain must be [lo, hi]");
      lo = dom[0];
      hi = dom[1];
    }
    int degree = 1;
    if (g.contains("params")) {
      require_keys(g["params"], "basis params", {"degree"});
      degree = g["params"].value("degree", 1);
    }
    try {
      if (kind == "monomial")
        basis.push_back(sysid::BasisFunction::monomial(degree, lo, hi));
      else if (kind == "legendre")
        basis.push_back(sysid::BasisFunction::legendre(degree, lo, hi));
      else
        throw config_error("basis entry: kind must be monomial or legendre");
    } catch (const std::invalid_argument& e) {
      throw config_error(std::string("basis entry: ") + e.what());
    }
  }
  try {
    return sysid::HammersteinModel(std::move(a), std::move(b), std::move(c),
                                   std::move(basis));
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
}

int cmd_hammerstein(const std::string& model_path, const std::string& sim_path,
                    const std::string& out_dir, std::optional<std::uint64_t> seed_flag,
                    std::optional<int> n_flag) {
  const json model_doc = load_json(model_path);
  const auto model = parse_model(model_doc);

  json sim = sim_path.empty() ? json::object() : load_json(sim_path);
  require_keys(sim, "sim config",
               {"n", "noise_variance", "seed", "input_law", "schedule", "p0_scale",
                "recover_tol"});
  int n = sim.value("n", 3000);
  double noise_variance = sim.value("noise_variance", 0.1);
  std::uint64_t seed = sim.value("seed", static_cast<std::uint64_t>(1));
  const std::string input_law = sim.value("input_law", "uniform");
  const double p0_scale = sim.value("p0_scale", 100.0);
  const double recover_tol = sim.value("recover_tol", 1e-12);
  const sysid::ThresholdSchedule schedule =
      sim.contains("schedule") ? parse_schedule(sim["schedule"])
                               : sysid::ThresholdSchedule::log_over_n(0.2);
  if (seed_flag) seed = *seed_flag;
  if (n_flag) n = *n_flag;
  if (n < 2) throw config_error("sim config: n must be >= 2");
  if (input_law != "uniform")
    throw config_error("sim config: only the uniform input law is supported");

  if (model.basis_gram_relative_rank() < 1e-8)
    std::cerr << "warning: basis Gram matrix is numerically rank deficient\n";

  // Inputs uniform on the basis domain, then the full pipeline.
  sysid::GaussianRng rng(seed);
  const double lo = model.basis().front().lo();
  const double hi = model.basis().front().hi();
  std::vector<double> inputs(static_cast<std::size_t>(n));
  std::vector<double> noise(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    inputs[static_cast<std::size_t>(k)] = lo + (hi - lo) * rng.uniform01();
  const double w_std = std::sqrt(noise_variance);
  for (int k = 0; k < n; ++k)
    noise[static_cast<std::size_t>(k)] = w_std * rng.normal();

  const auto io = sysid::simulate(model, inputs, noise,
                                  Eigen::VectorXd::Zero(model.p()));
  const auto samples = sysid::build_regressors(io, model.p(), model.q(), model.basis());
  const int dim = model.p() + model.q() * model.m();
  const auto traj = sysid::run_identification(samples, schedule,
                                              Eigen::VectorXd::Zero(dim), p0_scale);

  const auto& final_sparse = traj.steps.back().sparse;
  const auto noneffective =
      sysid::effective_basis_zeros(final_sparse, model.p(), model.q(), model.m());
  const Eigen::MatrixXd m_hat =
      sysid::unpack_M(final_sparse.beta, model.p(), model.q(), model.m());

  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  {
    std::ostringstream buf;
    sysid::write_io_csv(buf, io);
    write_text(out / "io.csv", buf.str());
  }
  {
    std::ostringstream buf;
    for (int i = 0; i < m_hat.rows(); ++i) {
      for (int j = 0; j < m_hat.cols(); ++j)
        buf << (j ? "," : "") << sysid::format_double(m_hat(i, j));
      buf << "\n";
    }
    write_text(out / "M_matrix.csv", buf.str());
  }
  {
    std::ostringstream buf;
    if (m_hat.cwiseAbs().maxCoeff() == 0.0) {
      buf << "all-zero M matrix; factors undefined\n";
    } else {
      const auto factors = sysid::recover_factors(m_hat, recover_tol);
      buf << "b_hat";
      for (int i = 0; i < factors.b_hat.size(); ++i)
        buf << "," << sysid::format_double(factors.b_hat(i));
      buf << "\nc_hat";
      for (int i = 0; i < factors.c_hat.size(); ++i)
        buf << "," << sysid::format_double(factors.c_hat(i));
      buf << "\n";
    }
    write_text(out / "factors.csv", buf.str());
  }
  {
    json doc;
    doc["noneffective"] = noneffective;
    std::vector<int> effective;
    for (int l = 1; l <= model.m(); ++l)
      if (!noneffective.count(l)) effective.push_back(l);
    doc["effective"] = effective;
    write_text(out / "effective_basis.json", doc.dump(2) + "\n");
  }
  {
    std::ostringstream buf;
    buf << "n,r_n_over_n,lambda_min_over_n\n";
    for (std::size_t i = 0; i < traj.steps.size(); ++i) {
      const double step_n = static_cast<double>(i + 1);
      buf << (i + 1) << ","
          << sysid::format_double(traj.steps[i].stats.r_n / step_n) << ","
          << sysid::format_double(traj.steps[i].stats.lambda_min / step_n) << "\n";
    }
    write_text(out / "growth_check.csv", buf.str());
  }

  json echo;
  echo["model"] = model_doc;
  echo["n"] = n;
  echo["noise_variance"] = noise_variance;
  echo["seed"] = seed;
  echo["input_law"] = input_law;
  echo["schedule"] = schedule_to_json(schedule);
  echo["p0_scale"] = p0_scale;
  write_manifest(out, "hammerstein", echo, seed,
                 {"io.csv", "M_matrix.csv", "factors.csv", "effective_basis.json",
                  "growth_check.csv"});
  return kExitOk;
}

// -------------------------------------------------------------------- bound

int cmd_bound(const std::string& inputs_path) {
  const json doc = load_json(inputs_path);
  require_keys(doc, "bound inputs", {"c0", "c2", "c3", "c5", "m_const", "epsilon"});
  sysid::BoundInputs in;
  in.c0 = doc.value("c0", 1.0);
  in.c2 = doc.value("c2", 1.0);
  in.c3 = doc.value("c3", 1.0);
  in.c5 = doc.value("c5", 1.0);
  in.m_const = doc.value("m_const", 1.0);
  in.epsilon = doc.value("epsilon", 0.25);

  sysid::BoundResult res;
  double m_star = 0.0, n0_star = 0.0;
  try {
    res = sysid::n0_bound(in);
    m_star = sysid::optimal_m(in.c0, in.c5, in.epsilon);
    n0_star = sysid::n0_optimal(in.c0, in.c2, in.c3, in.c5, in.epsilon);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }

  json out;
  out["k1"] = res.k1;
  out["k2"] = res.k2;
  out["n0"] = res.n0;
  out["m_optimal"] = m_star;
  out["n0_optimal"] = n0_star;
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

// ----------------------------------------------------------------- diagnose

int cmd_diagnose(const std::string& data_csv, const std::string& out_dir) {
  std::ifstream in(data_csv);
  if (!in) throw config_error("cannot open " + data_csv);
  const auto samples = sysid::read_samples_csv(in);
  const int r = static_cast<int>(samples.front().phi.size());

  sysid::RlsState state(r, Eigen::VectorXd::Zero(r), 100.0);
  std::ostringstream buf;
  buf << "n,r_n,lambda_min,ratio_weakest,ratio_zhao\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    state.step(samples[i]);
    const auto s = state.excitation_stats();
    buf << (i + 1) << "," << sysid::format_double(s.r_n) << ","
        << sysid::format_double(s.lambda_min) << ","
        << sysid::format_double(s.ratio_weakest) << ","
        << sysid::format_double(s.ratio_zhao) << "\n";
  }
  fs::create_directories(out_dir);
  write_text(fs::path(out_dir) / "excitation.csv", buf.str());
  write_manifest(fs::path(out_dir), "diagnose", json{{"data", data_csv}}, 0,
                 {"excitation.csv"});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming sparse system identification toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", data_csv, model_path, sim_path,
              inputs_path, format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<int> replicates, n;

  auto* example1 = app.add_subcommand("example1", "Run the benchmark campaign");
  example1->add_option("--config", config_path, "Campaign config JSON");
  example1->add_option("--out", out_dir, "Output directory");
  example1->add_option("--seed", seed, "Master seed override");
  example1->add_option("--replicates", replicates, "Replicate count override");
  example1->add_option("--n", n, "Stream length override");
  example1->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* identify = app.add_subcommand("identify", "Identify from a sample CSV");
  identify->add_option("--data", data_csv, "Input CSV (phi_1..phi_r,y)")->required();
  identify->add_option("--config", config_path, "Schedule config JSON");
  identify->add_option("--out", out_dir, "Output directory");
  identify->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* hammerstein = app.add_subcommand("hammerstein", "Full Hammerstein pipeline");
  hammerstein->add_option("--model", model_path, "Model JSON")->required();
  hammerstein->add_option("--sim", sim_path, "Simulation config JSON");
  hammerstein->add_option("--out", out_dir, "Output directory");
  hammerstein->add_option("--seed", seed, "Seed override");
  hammerstein->add_option("--n", n, "Sample count override");

  auto* bound = app.add_subcommand("bound", "Finite-observation bound calculator");
  bound->add_option("--config", inputs_path, "Bound inputs JSON")->required();

  auto* diagnose = app.add_subcommand("diagnose", "Excitation statistics trace");
  diagnose->add_option("--data", data_csv, "Input CSV (phi_1..phi_r,y)")->required();
  diagnose->add_option("--out", out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (example1->parsed())
      return cmd_example1(config_path, out_dir, seed, replicates, n, format);
    if (identify->parsed())
      return cmd_identify(data_csv, config_path, out_dir, format);
    if (hammerstein->parsed())
      return cmd_hammerstein(model_path, sim_path, out_dir, seed, n);
    if (bound->parsed()) return cmd_bound(inputs_path);
    if (diagnose->parsed()) return cmd_diagnose(data_csv, out_dir);
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const sysid::numeric_failure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitConfig;
}
