#include "fpreg/cli/experiments.hpp"

#include "fpreg/error.hpp"
#include "fpreg/gates.hpp"
#include "fpreg/ising.hpp"
#include "fpreg/set_optimizer.hpp"
#include "fpreg/table_io.hpp"
#include "fpreg/tomography.hpp"
#include "fpreg/version.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <ostream>

namespace fpreg::cli {

namespace tomo = fpreg::tomography;
using json = nlohmann::ordered_json;

namespace {

ModelKind model_of(const Config& c) { return c.text("model") == "secular" ? ModelKind::kSecular : ModelKind::kFull; }

int positive_int(const Config& c, const std::string& key, std::int64_t min = 1) {
  const auto v = c.integer(key);
  if (v < min || v > 1'000'000'000) {
    throw Error(ErrorKind::kConfig, "'" + key + "' must be at least " + std::to_string(min));
  }
  return static_cast<int>(v);
}

std::uint64_t seed_of(const Config& c) {
  const auto s = c.integer("seed");
  if (s < 0) throw Error(ErrorKind::kConfig, "'seed' must be non-negative");
  return static_cast<std::uint64_t>(s);
}

tomo::RotationSet load_set(const std::string& path, bool left) {
  if (path == "bundled") return left ? tomo::bundled_left_set() : tomo::bundled_right_set();
  return tomo::read_rotation_set(path);
}

tomo::Choi channel_of(const Config& c) {
  const std::string& name = c.text("channel");
  if (name == "identity") return tomo::choi_of_unitary(tomo::Mat3::Identity());
  return tomo::choi_of_unitary(tomo::cz_on_triplet());
}

json array4(const std::array<double, 4>& a) { return json::array({a[0], a[1], a[2], a[3]}); }

// ---------------------------------------------------------------------------

Result run_swap_kind(const Config& c, const RunContext&) {
  const GateResult g = run_swap(c.number("J"), positive_int(c, "m", 0), model_of(c));
  Result r;
  r.columns = {"J", "m", "duration", "transfer", "leakage", "fidelity"};
  const double leak = *std::max_element(g.leakage.begin(), g.leakage.end());
  r.rows.push_back({c.number("J"), c.integer("m"), g.duration, std::norm(g.raw(2, 1)), leak, g.fidelity});
  return r;
}

CPhaseSpec cphase_spec(const Config& c) {
  CPhaseSpec s;
  s.target_phase = c.number("target_phase");
  s.u0_over_j0 = c.number("U0_over_J0");
  s.er_over_u0 = c.number("E_R_over_U0");
  s.eta = c.number("eta");
  s.adiabatic = c.flag("adiabatic");
  s.model = model_of(c);
  s.steps = positive_int(c, "steps", 0);
  return s;
}

Result run_cphase_kind(const Config& c, const RunContext&) {
  const CPhaseSpec s = cphase_spec(c);
  const GateResult g = run_cphase(s);
  Result r;
  r.summary["phase_exact"] = g.induced_phase;
  r.summary["phase_theory"] = s.target_phase;
  r.summary["leakage"] = array4(g.leakage);
  r.summary["population_change"] = array4(g.population_change);
  r.summary["bare_population_change"] = array4(g.bare_population_change);
  r.summary["fidelity"] = g.fidelity;
  r.summary["duration"] = g.duration;
  r.summary["steps"] = g.steps;
  r.columns = {"U0_over_J0", "E_R_over_U0", "adiabatic", "phase_exact", "phase_theory", "leakage", "fidelity"};
  r.rows.push_back({s.u0_over_j0, s.er_over_u0, s.adiabatic ? 1 : 0, g.induced_phase, s.target_phase,
                    *std::max_element(g.leakage.begin(), g.leakage.end()), g.fidelity});
  return r;
}

Result run_scan_kind(const Config& c, const RunContext& ctx) {
  const auto& ratios = c.list("ratios");
  if (ratios.empty()) throw Error(ErrorKind::kConfig, "'ratios' is empty");
  const auto points = infidelity_scan(ratios, c.number("E_R_over_U0"), c.flag("adiabatic"), model_of(c), ctx.threads,
                                      positive_int(c, "steps", 0));
  Result r;
  r.columns = {"U0_over_J0", "E_R_over_U0", "adiabatic", "phase_exact", "phase_theory", "leakage", "infidelity"};
  std::vector<double> x, y;
  for (const auto& p : points) {
    r.rows.push_back({p.u0_over_j0, p.er_over_u0, p.adiabatic ? 1 : 0, p.phase_exact, p.phase_theory, p.leakage,
                      p.infidelity});
    x.push_back(1.0 / p.u0_over_j0);
    y.push_back(p.infidelity);
  }
  const SlopeFit fit = loglog_slope(x, y);
  r.summary["loglog_slope"] = fit.slope;
  r.summary["slope_points"] = fit.points;
  return r;
}

IsingConfig ising_config(const Config& c) {
  IsingConfig ic;
  ic.E_R = c.number("E_R");
  ic.U0 = c.number("U0");
  ic.U1 = c.number("U1");
  ic.J0 = c.number("J0");
  ic.delta = c.number("Delta");
  ic.T = c.number("T");
  ic.eta = c.number("eta");
  ic.step = c.number("step");
  ic.checkpoint = c.number("checkpoint");
  ic.model = model_of(c);
  return ic;
}

IsingFitOptions fit_options(const Config& c) {
  IsingFitOptions o;
  o.restarts = positive_int(c, "restarts");
  o.seed = seed_of(c);
  return o;
}

json fit_json(const IsingFitParams& p) {
  return json{{"alpha", p.alpha},     {"beta", p.beta},         {"gamma_x", p.gamma_x},
              {"gamma_x2", p.gamma_x2}, {"gamma_y", p.gamma_y}, {"kappa", p.kappa}};
}

Result run_ising_kind(const Config& c, const RunContext&) {
  const IsingConfig ic = ising_config(c);
  const auto fit = fit_effective_ising(simulate_ising_pair(ic), ic, fit_options(c));
  Result r;
  r.summary["params"] = fit_json(fit.params);
  r.summary["g_prefactor"] = fit.params.g_prefactor();
  r.summary["fidelity"] = fit.fidelity;
  r.summary["final_fidelity"] = fit.final_fidelity;
  r.summary["converged"] = fit.converged;
  r.columns = {"alpha", "beta", "gamma_x", "gamma_x2", "gamma_y", "kappa", "g_prefactor", "fidelity",
               "final_fidelity"};
  const auto& p = fit.params;
  r.rows.push_back({p.alpha, p.beta, p.gamma_x, p.gamma_x2, p.gamma_y, p.kappa, p.g_prefactor(), fit.fidelity,
                    fit.final_fidelity});
  return r;
}

Result run_detuning_kind(const Config& c, const RunContext& ctx) {
  const auto& deltas = c.list("deltas");
  if (deltas.empty()) throw Error(ErrorKind::kConfig, "'deltas' is empty");
  const auto points = detuning_scan(ising_config(c), deltas, fit_options(c), ctx.threads);
  Result r;
  r.columns = {"Delta", "c_x", "c_y", "c_z", "g", "fidelity"};
  for (const auto& p : points) r.rows.push_back({p.delta, p.c_x, p.c_y, p.c_z, p.g, p.fidelity});
  return r;
}

std::optional<tomo::NoiseSpec> noise_of(const Config& c) {
  if (c.number("noise_sigma") <= 0.0) return std::nullopt;
  tomo::NoiseSpec n;
  n.sigma = c.number("noise_sigma");
  n.mode = c.text("noise_mode") == "biased" ? tomo::NoiseMode::kBiased : tomo::NoiseMode::kUnbiased;
  n.seed = seed_of(c);
  return n;
}

Result run_tomography_kind(const Config& c, const RunContext&) {
  const tomo::ShadowEstimator est(load_set(c.text("left_set"), true), load_set(c.text("right_set"), false));
  const tomo::Choi lambda = channel_of(c);
  const auto& grid = c.list("shots");
  if (grid.empty()) throw Error(ErrorKind::kConfig, "'shots' is empty");
  const int repeats = positive_int(c, "repeats");
  const auto noise = noise_of(c);
  const std::uint64_t seed = seed_of(c);

  Result r;
  const double cval = tomo::sample_complexity(est, lambda);
  r.summary["A"] = tomo::upper_bound_A(est);
  r.summary["B"] = tomo::bound_B(est, lambda);
  r.summary["C"] = cval;
  r.summary["sqrt_C"] = std::sqrt(cval);
  r.columns = {"N", "repeats", "delta_mean", "delta_rms", "delta_rms_sqrt_N"};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] >= 1.0)) throw Error(ErrorKind::kConfig, "'shots' entries must be at least 1");
    const auto per_pair = static_cast<std::uint64_t>(std::ceil(grid[k] / static_cast<double>(est.pairs())));
    double sum = 0.0, sum_sq = 0.0;
    std::uint64_t n = 0;
    for (int rep = 0; rep < repeats; ++rep) {
      const auto run = tomo::run_tomography(est, lambda, per_pair, seed + 1000003ULL * k + rep, noise);
      sum += run.delta;
      sum_sq += run.delta * run.delta;
      n = run.shots;
    }
    const double rms = std::sqrt(sum_sq / repeats);
    r.rows.push_back({n, repeats, sum / repeats, rms, rms * std::sqrt(static_cast<double>(n))});
  }
  return r;
}

Result run_optimize_kind(const Config& c, const RunContext&) {
  tomo::OptimizeOptions o;
  o.restarts = positive_int(c, "restarts");
  o.iterations = positive_int(c, "iterations");
  o.seed = seed_of(c);
  if (c.text("loss") == "C") o.channel = channel_of(c);
  const auto best = tomo::optimize_sets(positive_int(c, "left_size"), positive_int(c, "right_size"), o);
  Result r;
  r.summary["loss"] = best.loss;
  r.summary["restarts_converged"] = best.restarts_converged;
  r.summary["restart_losses"] = best.restart_losses;
  r.columns = {"set", "index", "phi", "alpha"};
  for (const auto& [name, set] : {std::pair{"left", &best.left}, std::pair{"right", &best.right}}) {
    for (std::size_t i = 0; i < set->size(); ++i) r.rows.push_back({name, i + 1, (*set)[i].phi, (*set)[i].alpha});
  }
  return r;
}

Result run_complexity_kind(const Config& c, const RunContext&) {
  const tomo::ShadowEstimator est(load_set(c.text("left_set"), true), load_set(c.text("right_set"), false));
  const tomo::Choi lambda = channel_of(c);
  Result r;
  r.columns = {"left_size", "right_size", "A", "B", "C", "left_condition", "right_condition"};
  r.rows.push_back({est.left().size(), est.right().size(), tomo::upper_bound_A(est), tomo::bound_B(est, lambda),
                    tomo::sample_complexity(est, lambda), est.channels().left_condition,
                    est.channels().right_condition});
  return r;
}

// ---------------------------------------------------------------------------

const Field kModelFull{"model", FieldType::kString, "full", "two-site model", {"full", "secular"}};
const Field kModelSecular{"model", FieldType::kString, "secular", "two-site model", {"full", "secular"}};
const Field kSeed{"seed", FieldType::kInteger, "", "random seed (required)", {}};
const Field kSteps{"steps", FieldType::kInteger, "0", "propagation steps; 0 picks the default resolution", {}};

std::vector<Field> cphase_fields(const char* ratio_default) {
  return {
      {"target_phase", FieldType::kNumber, "pi", "target controlled phase (rad)", {}},
      {"U0_over_J0", FieldType::kNumber, ratio_default, "interaction to tunnelling ratio", {}},
      {"E_R_over_U0", FieldType::kNumber, "20", "recoil energy to interaction ratio", {}},
      {"eta", FieldType::kNumber, "0.3", "ramp fraction of the pulse", {}},
      {"adiabatic", FieldType::kBool, "true", "adiabatic ramp (false: square pulse)", {}},
      kSteps,
  };
}

std::vector<Field> ising_fields() {
  return {
      {"E_R", FieldType::kRate, "140.76 Hz", "recoil energy", {}},
      {"U0", FieldType::kRate, "30 1/s", "static interaction", {}},
      {"U1", FieldType::kRate, "2 1/s", "interaction modulation amplitude", {}},
      {"J0", FieldType::kRate, "0.9 1/s", "tunnelling amplitude", {}},
      {"Delta", FieldType::kRate, "0 1/s", "modulation detuning", {}},
      {"T", FieldType::kTime, "24 s", "protocol duration", {}},
      {"eta", FieldType::kNumber, "0.25", "ramp fraction before modulation starts", {}},
      {"step", FieldType::kTime, "0.2 ms", "propagation step", {}},
      {"checkpoint", FieldType::kTime, "0.25 s", "fit sampling interval", {}},
      {"restarts", FieldType::kInteger, "5", "fit restarts", {}},
      kSeed,
      kModelFull,
  };
}

const Field kChannel{"channel", FieldType::kString, "cz", "channel under test", {"cz", "identity"}};
const Field kLeftSet{"left_set", FieldType::kString, "bundled", "left rotation set CSV or 'bundled'", {}};
const Field kRightSet{"right_set", FieldType::kString, "bundled", "right rotation set CSV or 'bundled'", {}};

std::vector<Experiment> build_catalog() {
  std::vector<Experiment> out;
  out.push_back({"swap", "J-only two-site evolution for t = (2m+1) pi / (2J)", false,
                 {{"J", FieldType::kRate, "1 1/s", "tunnelling amplitude", {}},
                  {"m", FieldType::kInteger, "0", "SWAP order", {}},
                  kModelSecular},
                 run_swap_kind});
  {
    auto f = cphase_fields("30");
    f.push_back(kModelFull);
    out.push_back({"cphase", "controlled-phase gate with dressed-frame phase tracking", false, f, run_cphase_kind});
  }
  {
    auto f = cphase_fields("30");
    f.erase(f.begin() + 1);
    f.insert(f.begin(), {"ratios", FieldType::kNumberList, "35, 40, 50, 60, 70, 85, 100", "U0/J0 values", {}});
    f.push_back(kModelSecular);
    out.push_back({"infidelity-scan", "gate infidelity versus U0/J0 for the adiabatic flag", false, f,
                   run_scan_kind});
  }
  out.push_back({"ising", "two-site modulated evolution fitted to the effective Ising model", true, ising_fields(),
                 run_ising_kind});
  {
    auto f = ising_fields();
    f.erase(f.begin() + 4);
    f.insert(f.begin(), {"deltas", FieldType::kRateList, "-0.2, 0, 0.2, 0.4 1/s", "detunings to scan", {}});
    out.push_back({"ising-detuning-scan", "effective Ising coefficients versus detuning", true, f,
                   run_detuning_kind});
  }
  out.push_back({"tomography", "sampled shadow tomography, delta versus total shots", true,
                 {kLeftSet,
                  kRightSet,
                  kChannel,
                  {"shots", FieldType::kNumberList, "1e4, 1e5, 1e6", "total shot counts", {}},
                  {"repeats", FieldType::kInteger, "10", "independent runs per shot count", {}},
                  {"noise_sigma", FieldType::kNumber, "0", "rotation angle noise (rad); 0 disables", {}},
                  {"noise_mode", FieldType::kString, "unbiased", "noise model", {"unbiased", "biased"}},
                  kSeed},
                 run_tomography_kind});
  out.push_back({"tomography-optimize", "random-restart search for low-complexity rotation sets", true,
                 {{"left_size", FieldType::kInteger, "12", "left set size", {}},
                  {"right_size", FieldType::kInteger, "9", "right set size (at least 5)", {}},
                  {"loss", FieldType::kString, "A", "objective", {"A", "C"}},
                  kChannel,
                  {"restarts", FieldType::kInteger, "10", "random restarts", {}},
                  {"iterations", FieldType::kInteger, "200", "gradient iterations per restart", {}},
                  kSeed},
                 run_optimize_kind});
  out.push_back({"complexity-eval", "bounds A, B and C for given rotation sets", false,
                 {kLeftSet, kRightSet, kChannel}, run_complexity_kind});
  return out;
}

void write_csv_cell(std::ostream& out, const json& v) {
  if (v.is_string()) {
    out << v.get<std::string>();
  } else if (v.is_number_float()) {
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v.get<double>());
    out.write(buf, p - buf);
  } else {
    out << v.dump();
  }
}

}  // namespace

const std::vector<Experiment>& catalog() {
  static const std::vector<Experiment> c = build_catalog();
  return c;
}

const Experiment& find_experiment(const std::string& kind) {
  std::vector<std::string> names;
  for (const auto& e : catalog()) {
    if (e.kind == kind) return e;
    names.push_back(e.kind);
  }
  std::string msg = "unknown experiment kind '" + kind + "'";
  if (const auto s = nearest(kind, names); !s.empty()) msg += "; did you mean '" + s + "'?";
  throw Error(ErrorKind::kConfig, msg);
}

Config validate(const RawConfig& raw) {
  const auto it = raw.entries.find("kind");
  if (it == raw.entries.end()) throw Error(ErrorKind::kConfig, "missing required key 'kind'");
  const Experiment& e = find_experiment(it->second.first);
  return validate(raw, e.kind, e.fields, e.stochastic);
}

void print_catalog(std::ostream& out) {
  out << "experiment kinds:\n";
  for (const auto& e : catalog()) {
    out << "  " << e.kind << std::string(22 - std::min<std::size_t>(21, e.kind.size()), ' ') << e.summary
        << (e.stochastic ? " (seed required)" : "") << '\n';
  }
}

void print_experiment_help(std::ostream& out, const Experiment& e) {
  out << e.kind << ": " << e.summary << "\n\nkeys:\n";
  std::vector<Field> all = common_fields();
  all.insert(all.end(), e.fields.begin(), e.fields.end());
  for (const auto& f : all) {
    out << "  " << f.name << " (" << to_string(f.type) << ")";
    if (f.default_value.empty()) {
      out << " required";
    } else {
      out << " default " << f.default_value;
    }
    out << "\n      " << f.doc;
    if (!f.choices.empty()) {
      out << "; one of";
      for (const auto& ch : f.choices) out << ' ' << ch;
    }
    out << '\n';
  }
}

Format output_format(const Config& config) { return config.text("format") == "json" ? Format::kJson : Format::kCsv; }

std::string output_path(const Config& config, const std::string& out_dir) {
  std::string name = config.text("output");
  if (name == "-") {
    name = config.kind() + "-" + config.hash().substr(0, 8) + (output_format(config) == Format::kJson ? ".json" : ".csv");
  }
  const std::filesystem::path p(name);
  return (p.is_absolute() ? p : std::filesystem::path(out_dir) / p).string();
}

void write_result(std::ostream& out, const Config& config, const Result& result, Format format) {
  if (format == Format::kJson) {
    json doc;
    doc["kind"] = config.kind();
    doc["version"] = kVersion;
    doc["config_hash"] = config.hash();
    json cfg = json::object();
    for (const auto& [key, value] : config.values()) {
      std::visit([&](const auto& v) { cfg[key] = v; }, value);
    }
    doc["config"] = cfg;
    for (const auto& [key, value] : result.summary.items()) doc[key] = value;
    json rows = json::array();
    for (const auto& row : result.rows) {
      json o = json::object();
      for (std::size_t i = 0; i < result.columns.size(); ++i) o[result.columns[i]] = row[i];
      rows.push_back(o);
    }
    doc["rows"] = rows;
    out << doc.dump(2) << '\n';
    return;
  }
  for (const auto& col : result.columns) out << col << ',';
  out << "config_hash,version\n";
  for (const auto& row : result.rows) {
    for (const auto& cell : row) {
      write_csv_cell(out, cell);
      out << ',';
    }
    out << config.hash() << ',' << kVersion << '\n';
  }
}

json error_record(const std::exception& e) {
  json rec;
  const auto* err = dynamic_cast<const Error*>(&e);
  rec["error"] = {{"kind", err ? std::string(to_string(err->kind())) : std::string("internal")},
                  {"message", e.what()}};
  return rec;
}

}  // namespace fpreg::cli
