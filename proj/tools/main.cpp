// rwre: batch front end. One subcommand per experiment, JSON config in,
// CSV and JSON reports out.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rwre/csv.hpp"
#include "rwre/domain.hpp"
#include "rwre/expansion.hpp"
#include "rwre/fixtures.hpp"
#include "rwre/jtable.hpp"
#include "rwre/kalikow.hpp"
#include "rwre/lemma4.hpp"
#include "rwre/model_json.hpp"
#include "rwre/montecarlo.hpp"
#include "rwre/one_point.hpp"
#include "rwre/parallel.hpp"
#include "rwre/series.hpp"

using nlohmann::json;
using namespace rwre;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

/// Seed used when a run is driven by --fixture alone.
constexpr std::uint64_t kFixtureSeed = 20061016;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Typed access to the config object. Every key read is copied, with its
/// default filled in, into `resolved`; keys never read are rejected.
class Params {
 public:
  explicit Params(json raw) : raw_(std::move(raw)) {
    if (!raw_.is_object()) throw UsageError("config must be a JSON object");
  }

  bool has(const std::string& k) const { return raw_.contains(k); }

  double number(const std::string& k, std::optional<double> def = std::nullopt) {
    const json v = fetch(k, def ? json(*def) : json());
    if (!v.is_number()) throw UsageError("'" + k + "' must be a number");
    return store(k, v.get<double>());
  }

  long integer(const std::string& k, std::optional<long> def = std::nullopt) {
    const json v = fetch(k, def ? json(*def) : json());
    if (!v.is_number_integer()) throw UsageError("'" + k + "' must be an integer");
    return store(k, v.get<long>());
  }

  std::uint64_t seed(const std::string& k, std::optional<std::uint64_t> def) {
    const json v = fetch(k, def ? json(*def) : json());
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw UsageError("'" + k + "' must be a non-negative integer");
    }
    return store(k, v.get<std::uint64_t>());
  }

  std::string text(const std::string& k, std::optional<std::string> def = std::nullopt) {
    const json v = fetch(k, def ? json(*def) : json());
    if (!v.is_string()) throw UsageError("'" + k + "' must be a string");
    return store(k, v.get<std::string>());
  }

  bool flag(const std::string& k, bool def) {
    const json v = fetch(k, json(def));
    if (!v.is_boolean()) throw UsageError("'" + k + "' must be true or false");
    return store(k, v.get<bool>());
  }

  std::vector<double> numbers(const std::string& k, std::vector<double> def) {
    const json v = fetch(k, json(def));
    if (!v.is_array() || v.empty()) throw UsageError("'" + k + "' must be a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw UsageError("'" + k + "' must be a non-empty array of numbers");
      out.push_back(x.get<double>());
    }
    return store(k, out);
  }

  std::vector<long> integers(const std::string& k, std::vector<long> def) {
    const json v = fetch(k, json(def));
    if (!v.is_array() || v.empty()) throw UsageError("'" + k + "' must be a non-empty array of integers");
    std::vector<long> out;
    for (const auto& x : v) {
      if (!x.is_number_integer()) throw UsageError("'" + k + "' must be a non-empty array of integers");
      out.push_back(x.get<long>());
    }
    return store(k, out);
  }

  json raw_value(const std::string& k, json def) { return store(k, fetch(k, def)); }

  void set_resolved(const std::string& k, json v) {
    used_.insert(k);
    resolved_[k] = std::move(v);
  }
  void mark_used(const std::string& k) { used_.insert(k); }
  void erase_resolved(const std::string& k) { resolved_.erase(k); }

  void reject_unknown() const {
    for (const auto& [k, v] : raw_.items()) {
      if (!used_.count(k)) throw UsageError("unknown config key '" + k + "'");
    }
  }

  const json& resolved() const { return resolved_; }

 private:
  json fetch(const std::string& k, const json& def) {
    used_.insert(k);
    if (raw_.contains(k)) return raw_[k];
    if (def.is_null()) throw UsageError("missing required config key '" + k + "'");
    return def;
  }

  template <typename T>
  T store(const std::string& k, T v) {
    resolved_[k] = v;
    return v;
  }

  json raw_;
  json resolved_ = json::object();
  std::set<std::string> used_;
};

struct Run {
  std::string command;
  std::string out_prefix;
  Params params;
  ModelSpec model;
  bool from_config = false;
  std::string fixture_name;

  std::string path(const std::string& name) const { return out_prefix + name; }
  std::string header() const { return params.resolved().dump(); }
};

json load_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot open '" + file + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("'" + file + "' is not valid JSON: " + e.what());
  }
}

// Resolves the model source: exactly one of --fixture, "fixture", "model"
// or "model_file". The resolved config always carries the model inline.
void resolve_model(Run& run, const std::string& cli_fixture, const std::string& default_fixture) {
  Params& p = run.params;
  int sources = (cli_fixture.empty() ? 0 : 1) + p.has("fixture") + p.has("model") + p.has("model_file");
  if (sources > 1) throw UsageError("give exactly one of --fixture, fixture, model, model_file");
  json model_json;
  try {
    if (!cli_fixture.empty() || p.has("fixture")) {
      run.fixture_name = cli_fixture.empty() ? p.text("fixture") : cli_fixture;
      run.model = fixture(run.fixture_name);
    } else if (p.has("model")) {
      run.model = model_from_json(p.raw_value("model", json()));
    } else if (p.has("model_file")) {
      run.model = model_from_json(load_json_file(p.text("model_file")));
    } else {
      run.fixture_name = default_fixture;
      run.model = fixture(default_fixture);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("model: ") + e.what());
  }
  p.mark_used("fixture");
  p.mark_used("model_file");
  p.erase_resolved("fixture");
  p.erase_resolved("model_file");
  p.set_resolved("model", model_to_json(run.model));
}

std::uint64_t resolve_seed(Run& run) {
  if (run.from_config && !run.params.has("master_seed")) {
    throw UsageError("master_seed is required for stochastic commands");
  }
  return run.params.seed("master_seed", kFixtureSeed);
}

std::ofstream open_out(const std::string& file) {
  const std::filesystem::path p(file);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + file + "'");
  return out;
}

void write_json(const Run& run, const std::string& name, json body) {
  body["config"] = run.params.resolved();
  std::ofstream out = open_out(run.path(name));
  out << body.dump(2) << "\n";
}

std::vector<std::string> component_names(const std::string& stem, int d) {
  std::vector<std::string> out;
  for (int i = 1; i <= d; ++i) out.push_back(stem + "_" + std::to_string(i));
  return out;
}

void append(std::vector<std::string>& row, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(CsvWriter::num(v(i)));
}

void extend(std::vector<std::string>& a, const std::vector<std::string>& b) { a.insert(a.end(), b.begin(), b.end()); }

std::vector<double> gamma_list(Params& p, std::vector<double> def) {
  if (p.has("gamma") && p.has("gammas")) throw UsageError("give gamma or gammas, not both");
  if (p.has("gamma")) return {p.number("gamma")};
  return p.numbers("gammas", std::move(def));
}

JOptions jtable_options(Params& p) {
  JOptions o;
  o.n_per_axis = static_cast<int>(p.integer("grid_n", 0));
  if (o.n_per_axis < 0 || o.n_per_axis % 2 != 0) throw UsageError("grid_n must be 0 or a positive even integer");
  return o;
}

// ---------------------------------------------------------------- expand

int cmd_expand(Run& run) {
  Params& p = run.params;
  const auto gammas = gamma_list(p, {0.1});
  const int d = run.model.dim();
  const long max_order = p.integer("order", run.model.d0_zero() ? 2 : 3);
  if (max_order < 0 || max_order > 3) throw UsageError("order must be 0..3");
  const JOptions jopt = jtable_options(p);
  p.reject_unknown();

  std::vector<ExpansionReport> reports;
  for (double g : gammas) reports.push_back(speed_expansion(run.model, g, static_cast<int>(max_order), jopt));

  std::ofstream csv_out = open_out(run.path("expansion.csv"));
  CsvWriter csv(csv_out, run.header());
  std::vector<std::string> head = {"gamma", "order"};
  extend(head, component_names("v", d));
  extend(head, component_names("d2_gamma", d));
  extend(head, {"j_source", "solomon_speed", "solomon_abs_error"});
  csv.header(head);
  json body = {{"reports", json::array()}};
  for (const auto& r : reports) {
    std::optional<double> solomon;
    if (d == 1) solomon = solomon_speed(run.model, r.gamma);
    for (int k = 0; k <= r.order; ++k) {
      const Eigen::VectorXd& v = *r.v_order[static_cast<std::size_t>(k)];
      std::vector<std::string> row = {CsvWriter::num(r.gamma), CsvWriter::num(k)};
      append(row, v);
      append(row, r.d2_gamma);
      row.push_back(to_string(r.j_gamma.method));
      row.push_back(solomon ? CsvWriter::num(*solomon) : "");
      row.push_back(solomon ? CsvWriter::num(std::abs(*solomon - v(0))) : "");
      csv.row(row);
    }
    json jr = r.to_json();
    if (solomon) jr["solomon_speed"] = *solomon;
    if (r.d2) jr["d2_along_d0_positive"] = !run.model.d0_zero() && r.d2->dot(r.d0) > 0.0;
    body["reports"].push_back(jr);
  }
  write_json(run, "expansion.json", body);
  return kExitOk;
}

// -------------------------------------------------------------- simulate

int cmd_simulate(Run& run) {
  Params& p = run.params;
  const double gamma = p.number("gamma", 0.1);
  SimParams sim;
  sim.n_steps = p.integer("n_steps", 100000);
  sim.n_replicates = static_cast<std::size_t>(p.integer("n_replicates", 400));
  sim.master_seed = resolve_seed(run);
  p.reject_unknown();
  const int d = run.model.dim();

  const SimEstimate est = annealed_speed(run.model, gamma, sim);
  std::ofstream out = open_out(run.path("simulate.csv"));
  CsvWriter csv(out, run.header());
  std::vector<std::string> head = {"gamma", "n_steps", "n_replicates", "master_seed"};
  extend(head, component_names("v_hat", d));
  extend(head, component_names("stderr", d));
  extend(head, {"solomon_speed", "within_3_stderr"});
  csv.header(head);
  std::vector<std::string> row = {CsvWriter::num(gamma), CsvWriter::num(static_cast<long long>(sim.n_steps)),
                                  CsvWriter::num(static_cast<long long>(sim.n_replicates)),
                                  std::to_string(sim.master_seed)};
  append(row, est.v_hat);
  append(row, est.stderr_v);
  if (d == 1) {
    const double v = solomon_speed(run.model, gamma);
    row.push_back(CsvWriter::num(v));
    row.push_back(CsvWriter::flag(std::abs(est.v_hat(0) - v) <= 3.0 * est.stderr_v(0)));
  } else {
    row.push_back("");
    row.push_back("");
  }
  csv.row(row);
  return kExitOk;
}

// --------------------------------------------------------------- scaling

int cmd_scaling(Run& run) {
  Params& p = run.params;
  const auto gammas = p.numbers("gammas", {0.08, 0.04, 0.02});
  const long order = p.integer("order", 2);
  if (order < 0 || order > 3) throw UsageError("order must be 0..3");
  const std::string ref_name = p.text("reference", run.model.dim() == 1 ? "exact-1d" : "monte-carlo");
  ScalingReference ref;
  if (ref_name == "exact-1d") {
    ref = ScalingReference::exact_1d;
  } else if (ref_name == "monte-carlo") {
    ref = ScalingReference::monte_carlo;
  } else {
    throw UsageError("reference must be exact-1d or monte-carlo");
  }
  SimParams sim;
  if (ref == ScalingReference::monte_carlo) {
    sim.n_steps = p.integer("n_steps", 100000);
    sim.n_replicates = static_cast<std::size_t>(p.integer("n_replicates", 400));
    sim.master_seed = resolve_seed(run);
  }
  p.reject_unknown();

  const ScalingReport rep = order_scaling(run.model, gammas, static_cast<int>(order), sim, ref);
  std::ofstream out = open_out(run.path("scaling.csv"));
  CsvWriter csv(out, run.header());
  csv.header({"gamma", "order", "reference", "v_reference", "v_expansion", "error", "stderr", "above_floor"});
  for (const auto& pt : rep.points) {
    csv.row({CsvWriter::num(pt.gamma), CsvWriter::num(static_cast<int>(order)), to_string(ref),
             CsvWriter::num(pt.v_reference), CsvWriter::num(pt.v_expansion), CsvWriter::num(pt.error),
             CsvWriter::num(pt.stderr_v), CsvWriter::flag(pt.above_floor)});
  }
  json body = {{"order", order}, {"reference", to_string(ref)}, {"noise_floor", rep.noise_floor}};
  body["slope"] = rep.noise_floor ? json(nullptr) : json(rep.slope);
  write_json(run, "scaling.json", body);
  return kExitOk;
}

// --------------------------------------------------------------- kalikow

std::shared_ptr<const Domain> read_box(Params& p, const std::string& key, int d, int default_radius) {
  json def = {{"radius", default_radius}};
  const json spec = p.raw_value(key, def);
  if (!spec.is_object()) throw UsageError("'" + key + "' must be {\"radius\": r} or {\"lo\": [..], \"hi\": [..]}");
  try {
    if (spec.contains("radius") && spec.size() == 1 && spec["radius"].is_number_integer()) {
      const int r = spec["radius"].get<int>();
      if (r < 0) throw UsageError("'" + key + "' radius must be non-negative");
      return std::make_shared<const Domain>(Domain::cube(d, r));
    }
    if (spec.contains("lo") && spec.contains("hi") && spec.size() == 2) {
      const auto lo_v = spec["lo"].get<std::vector<int>>(), hi_v = spec["hi"].get<std::vector<int>>();
      if (static_cast<int>(lo_v.size()) != d || static_cast<int>(hi_v.size()) != d) {
        throw UsageError("'" + key + "' corners need d coordinates");
      }
      Site lo = origin(), hi = origin();
      for (int i = 0; i < d; ++i) {
        lo[i] = lo_v[static_cast<std::size_t>(i)];
        hi[i] = hi_v[static_cast<std::size_t>(i)];
      }
      return std::make_shared<const Domain>(Domain::box(d, lo, hi));
    }
  } catch (const json::exception& e) {
    throw UsageError("'" + key + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError("'" + key + "': " + e.what());
  }
  throw UsageError("'" + key + "' must be {\"radius\": r} or {\"lo\": [..], \"hi\": [..]}");
}

int cmd_kalikow(Run& run) {
  Params& p = run.params;
  const int d = run.model.dim();
  const double gamma = p.number("gamma", 0.1);
  const auto prop1_box = read_box(p, "prop1_box", d, 1);
  const auto deltas = p.numbers("deltas", {0.9, 0.95, 1.0});
  const auto lemma2_box = read_box(p, "lemma2_box", d, d == 1 ? 2 : 1);
  const double lemma2_delta = p.number("lemma2_delta", 1.0);
  const auto lemma2_gammas = p.numbers("lemma2_gammas", {0.1, 0.05, 0.025});
  DriftFieldOptions dopt;
  dopt.window_radius = static_cast<int>(p.integer("window_radius", 1));
  const auto drift_deltas = p.numbers("drift_deltas", {0.9});
  dopt.mc_samples = static_cast<std::size_t>(p.integer("mc_samples", 32));
  dopt.seed = resolve_seed(run);
  p.reject_unknown();

  // Averaged versus auxiliary Green function for every requested delta.
  std::ofstream prop_out = open_out(run.path("kalikow_prop1.csv"));
  CsvWriter prop(prop_out, run.header());
  std::vector<std::string> head = {"delta", "region"};
  extend(head, component_names("z", d));
  extend(head, {"mean_green", "green_hat", "residual"});
  prop.header(head);
  json summary = {{"prop1", json::array()}};
  for (double delta : deltas) {
    const AuxiliaryKernel aux = auxiliary_kernel(run.model, gamma, prop1_box, delta, origin());
    const GreenTable hat = green_finite(prop1_box, delta, aux.kernels, origin());
    double worst = 0.0;
    for (std::size_t i = 0; i < prop1_box->size(); ++i) {
      const Site& z = prop1_box->site(i);
      const double a = aux.mean_green(static_cast<Eigen::Index>(i)), b = hat.values(static_cast<Eigen::Index>(i));
      std::vector<std::string> row = {CsvWriter::num(delta), i < prop1_box->interior_size() ? "interior" : "boundary"};
      for (int k = 0; k < d; ++k) row.push_back(CsvWriter::num(z[k]));
      extend(row, {CsvWriter::num(a), CsvWriter::num(b), CsvWriter::num(std::abs(a - b))});
      prop.row(row);
      worst = std::max(worst, std::abs(a - b));
    }
    summary["prop1"].push_back({{"delta", delta}, {"max_residual", worst}, {"environments", aux.environments}});
  }

  // Auxiliary kernel expansion sweep.
  const Lemma2Report l2 = lemma2_scaling(run.model, lemma2_box, lemma2_delta, origin(), lemma2_gammas);
  std::ofstream l2_out = open_out(run.path("kalikow_lemma2.csv"));
  CsvWriter l2csv(l2_out, run.header());
  l2csv.header({"gamma", "residual", "bound", "bound_ok"});
  for (const auto& pt : l2.points) {
    l2csv.row({CsvWriter::num(pt.gamma), CsvWriter::num(pt.residual), CsvWriter::num(pt.bound),
               CsvWriter::flag(pt.residual <= pt.bound)});
  }
  summary["lemma2"] = {{"exponent", l2.noise_floor ? json(nullptr) : json(l2.exponent)},
                       {"noise_floor", l2.noise_floor},
                       {"bound_ok", l2.bound_ok},
                       {"lemma1_checked", l2.lemma1.checked},
                       {"lemma1_violations_first", l2.lemma1.violations_first},
                       {"lemma1_violations_second", l2.lemma1.violations_second}};

  // Drift field of the auxiliary walk on Z^d.
  std::ofstream df_out = open_out(run.path("kalikow_drift.csv"));
  CsvWriter df(df_out, run.header());
  head = {"delta"};
  extend(head, component_names("z", d));
  extend(head, component_names("drift", d));
  extend(head, {"method"});
  extend(head, component_names("stderr", d));
  df.header(head);
  summary["drift"] = json::array();
  const Eigen::VectorXd mean_drift = run.model.d0() + gamma * run.model.d1();
  for (double delta : drift_deltas) {
    dopt.delta = delta;
    const DriftField field = drift_field(run.model, gamma, dopt);
    bool aligned = true;
    for (std::size_t i = 0; i < field.sites.size(); ++i) {
      std::vector<std::string> row = {CsvWriter::num(delta)};
      for (int k = 0; k < d; ++k) row.push_back(CsvWriter::num(field.sites[i][k]));
      append(row, field.drift[i]);
      row.push_back(to_string(field.method));
      append(row, field.drift_stderr[i]);
      df.row(row);
      aligned = aligned && field.drift[i].dot(mean_drift) > 0.0;
    }
    json hull = json::array();
    for (const auto& v : field.hull) hull.push_back({v.x(), v.y()});
    summary["drift"].push_back({{"delta", delta},
                                {"slack", field.slack},
                                {"pad_forward", field.pad_forward},
                                {"pad_back", field.pad_back},
                                {"aligned_with_mean_drift", aligned},
                                {"hull", hull}});
  }
  write_json(run, "kalikow.json", summary);
  return kExitOk;
}

// --------------------------------------------------------------- speedup

int cmd_speedup(Run& run) {
  Params& p = run.params;
  if (run.model.dim() != 2) throw UsageError("speedup needs a d = 2 model");
  const double a = p.number("a", 0.5);
  const long grid = p.integer("integral_grid", 2048);
  const double gamma = p.number("gamma", 0.1);
  SimParams sim;
  sim.n_steps = p.integer("n_steps", 100000);
  sim.n_replicates = static_cast<std::size_t>(p.integer("n_replicates", 2000));
  sim.master_seed = resolve_seed(run);
  p.reject_unknown();

  const SpeedupIntegral integral = speedup_integral(a, static_cast<int>(grid));
  const ExpansionReport ex = speed_expansion(run.model, gamma, 2);
  const SimEstimate est = annealed_speed(run.model, gamma, sim);
  const double d0 = ex.d0(1), d2 = ex.d2 ? (*ex.d2)(1) : std::nan("");
  const double margin = (est.v_hat(1) - d0) / est.stderr_v(1);

  std::ofstream out = open_out(run.path("speedup.csv"));
  CsvWriter csv(out, run.header());
  csv.header({"a", "integral", "integral_doubling_diff", "gamma", "d0_e2", "d2_e2", "d2_gamma_e2", "v_order2_e2",
              "v_hat_e2", "stderr_e2", "margin_sigma", "speedup"});
  csv.row({CsvWriter::num(a), CsvWriter::num(integral.value), CsvWriter::num(integral.doubling_diff),
           CsvWriter::num(gamma), CsvWriter::num(d0), CsvWriter::num(d2), CsvWriter::num(ex.d2_gamma(1)),
           CsvWriter::num((*ex.v_order[2])(1)), CsvWriter::num(est.v_hat(1)), CsvWriter::num(est.stderr_v(1)),
           CsvWriter::num(margin), CsvWriter::flag(margin >= 3.0)});
  return kExitOk;
}

// ---------------------------------------------------------------- lemma4

int cmd_lemma4(Run& run) {
  Params& p = run.params;
  const long d = p.integer("d", 2);
  if (d < 1 || d > kMaxDim) throw UsageError("d must be 1, 2 or 3");
  TransitionKernel s = TransitionKernel::simple(static_cast<int>(d));
  if (p.has("kernel")) {
    const json k = p.raw_value("kernel", json());
    try {
      json wrapper = {{"d", d}, {"p0", k}, {"atoms", {{{"weight", 1.0}, {"U", json::object()}}}},
                      {"kappa0", 1e-9}, {"gamma_max", 0.0}};
      for (const auto& e : directions(static_cast<int>(d))) wrapper["atoms"][0]["U"][e.key()] = 0.0;
      s = model_from_json(wrapper).p0();
    } catch (const std::exception& e) {
      throw UsageError(std::string("kernel: ") + e.what());
    }
  } else {
    json k = json::object();
    for (const auto& e : directions(static_cast<int>(d))) k[e.key()] = s(e);
    p.set_resolved("kernel", k);
  }
  std::vector<long> def_n;
  for (long n = 16; n <= 4096; n *= 2) def_n.push_back(n);
  const auto n_list = p.integers("n_list", def_n);
  std::vector<std::string> def_dirs;
  for (int i = 1; i <= d; ++i) def_dirs.push_back("+" + std::to_string(i));
  const json dir_json = p.raw_value("directions", def_dirs);
  std::vector<int> dirs;
  try {
    for (const auto& x : dir_json) {
      const Direction e = Direction::from_key(x.get<std::string>());
      if (e.axis > d) throw std::invalid_argument("direction exceeds d");
      dirs.push_back(e.index());
    }
  } catch (const std::exception& e) {
    throw UsageError(std::string("directions: ") + e.what());
  }
  Lemma4Options opt;
  opt.parity_only = p.flag("parity_only", false);
  p.reject_unknown();

  const DecayTable t = lemma4_decay(s, n_list, dirs, opt);
  std::ofstream out = open_out(run.path("lemma4.csv"));
  CsvWriter csv(out, run.header());
  std::vector<std::string> head = {"n"};
  for (int e : dirs) head.push_back("l1_" + Direction::from_index(e).key());
  csv.header(head);
  bool in_range = true;
  for (std::size_t i = 0; i < t.n.size(); ++i) {
    std::vector<std::string> row = {CsvWriter::num(static_cast<long long>(t.n[i]))};
    for (Eigen::Index j = 0; j < t.l1.cols(); ++j) {
      const double v = t.l1(static_cast<Eigen::Index>(i), j);
      in_range = in_range && v >= 0.0 && v <= 2.0;
      row.push_back(CsvWriter::num(v));
    }
    csv.row(row);
  }
  write_json(run, "lemma4.json",
             {{"fitted_exponent", t.fitted_exponent},
              {"exponent_ok", t.fitted_exponent <= -0.45},
              {"l1_in_range", in_range},
              {"max_mass_defect", t.max_mass_defect},
              {"radius", t.radius}});
  return kExitOk;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(Run& run) {
  Params& p = run.params;
  const int d = run.model.dim();
  const double gamma = p.number("gamma", 0.1);
  const JOptions jopt = jtable_options(p);
  const double tol = p.number("series_tol", 1e-12);
  const long box = p.integer("weight_box_radius", d == 1 ? 400 : (d == 2 ? 30 : 7));
  const double k = p.number("weight_k", 0.999);
  p.reject_unknown();

  const TransitionKernel pg = run.model.p_gamma(gamma);
  const JTable J = d == 1 ? j_closed_form_1d(pg, gamma) : j_exact(pg, jopt, gamma);
  std::vector<std::pair<Site, Site>> pairs = {{origin(), origin()}};
  for (int e = 0; e < 2 * d; ++e) pairs.push_back({step(origin(), e), origin()});
  SeriesOptions sopt;
  sopt.tol = tol;
  const SeriesResult series = series_oracle(pg, pairs, sopt);

  std::ofstream out = open_out(run.path("oracle.csv"));
  CsvWriter csv(out, run.header());
  csv.header({"direction", "value", "method", "grid_n", "est_error", "series_value", "series_steps",
              "series_tail", "abs_diff"});
  double worst = 0.0;
  for (const auto& e : directions(d)) {
    const double js = series.values[static_cast<std::size_t>(e.index() + 1)] - series.values[0];
    const double diff = std::abs(J(e) - js);
    worst = std::max(worst, diff);
    csv.row({e.key(), CsvWriter::num(J(e)), to_string(J.method), CsvWriter::num(J.grid_n),
             CsvWriter::num(J.est_error), CsvWriter::num(js), CsvWriter::num(static_cast<long long>(series.steps)),
             CsvWriter::num(series.tail_bound), CsvWriter::num(diff)});
  }

  const Eigen::VectorXd cj = gamma * gamma * directional_sum(p2(covariance(run.model.nu()), J), d);
  const Eigen::VectorXd by_weights = second_order_by_weights(run.model, gamma, static_cast<int>(box), k);
  const double rel = (by_weights - cj).norm() / std::max(cj.norm(), 1e-300);
  std::ofstream outw = open_out(run.path("oracle_weights.csv"));
  CsvWriter csvw(outw, run.header());
  csvw.header({"component", "sum_cj", "weights", "abs_diff"});
  for (int i = 0; i < d; ++i) {
    csvw.row({CsvWriter::num(i + 1), CsvWriter::num(cj(i)), CsvWriter::num(by_weights(i)),
              CsvWriter::num(std::abs(cj(i) - by_weights(i)))});
  }
  write_json(run, "oracle.json",
             {{"max_abs_diff", worst}, {"series_agrees", worst <= 1e-6}, {"weights_relative_diff", rel},
              {"weights_agree", rel <= 0.02}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-disorder speed expansion laboratory for random walks in random environment"};
  app.require_subcommand(1);
  std::string config_path, out_prefix = "./", fixture_flag;
  int threads = 1;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"expand", "speed expansion to order 0..3"},
      {"simulate", "annealed Monte Carlo speed"},
      {"scaling", "error scaling of an expansion order"},
      {"kalikow", "auxiliary walk: exactness, expansion, drift field"},
      {"speedup", "d = 2 speedup experiment"},
      {"lemma4", "L1 decay of the symmetric walk kernel"},
      {"oracle", "Green-function cross-checks"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_prefix, "output path prefix");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--fixture", fixture_flag, "named model");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  set_num_threads(threads);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    json raw = json::object();
    const bool from_config = !config_path.empty();
    if (from_config) raw = load_json_file(config_path);
    Run run{command, out_prefix, Params(raw), {}, from_config, {}};
    if (run.params.has("command")) {
      if (run.params.text("command") != command) throw UsageError("config was written for another command");
    }
    run.params.set_resolved("command", command);
    if (command != "lemma4") {
      const std::string def = command == "speedup" ? "speedup-s2" : (command == "expand" || command == "simulate" ||
                                                                      command == "scaling" || command == "kalikow")
                                                                         ? "d1-twopoint"
                                                                         : "drifted-2d";
      if (from_config && fixture_flag.empty() && !run.params.has("fixture") && !run.params.has("model") &&
          !run.params.has("model_file")) {
        throw UsageError("config must name a model (fixture, model or model_file)");
      }
      resolve_model(run, fixture_flag, def);
    } else if (!fixture_flag.empty()) {
      throw UsageError("lemma4 takes a kernel, not a model fixture");
    }
    if (command == "expand") return cmd_expand(run);
    if (command == "simulate") return cmd_simulate(run);
    if (command == "scaling") return cmd_scaling(run);
    if (command == "kalikow") return cmd_kalikow(run);
    if (command == "speedup") return cmd_speedup(run);
    if (command == "lemma4") return cmd_lemma4(run);
    return cmd_oracle(run);
  } catch (const UsageError& e) {
    std::cerr << "rwre " << command << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "rwre " << command << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "rwre " << command << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "rwre " << command << ": numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
