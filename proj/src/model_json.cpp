#include "rwre/model_json.hpp"

#include <set>
#include <stdexcept>

namespace rwre {

namespace {

nlohmann::json direction_map(const Eigen::VectorXd& v, int d) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& e : directions(d)) out[e.key()] = v(e.index());
  return out;
}

Eigen::VectorXd read_direction_map(const nlohmann::json& j, int d, const char* what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + " must be an object keyed by direction");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * d);
  std::set<int> seen;
  for (const auto& [key, value] : j.items()) {
    const Direction e = Direction::from_key(key);
    if (e.axis > d) throw std::invalid_argument(std::string(what) + ": direction " + key + " exceeds d");
    if (!value.is_number()) throw std::invalid_argument(std::string(what) + ": non-numeric entry " + key);
    v(e.index()) = value.get<double>();
    seen.insert(e.index());
  }
  if (static_cast<int>(seen.size()) != 2 * d) throw std::invalid_argument(std::string(what) + " must list all 2d directions");
  return v;
}

void only_keys(const nlohmann::json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw std::invalid_argument(std::string(what) + ": unknown key '" + key + "'");
  }
  for (const char* k : keys) {
    if (!j.contains(k)) throw std::invalid_argument(std::string(what) + ": missing key '" + k + "'");
  }
}

}  // namespace

nlohmann::json model_to_json(const ModelSpec& model) {
  const int d = model.dim();
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : model.nu().atoms()) {
    atoms.push_back({{"weight", a.weight}, {"U", direction_map(a.U, d)}});
  }
  return {{"d", d},
          {"p0", direction_map(model.p0().probs(), d)},
          {"atoms", atoms},
          {"kappa0", model.kappa0()},
          {"gamma_max", model.gamma_max()}};
}

ModelSpec model_from_json(const nlohmann::json& j) {
  only_keys(j, {"d", "p0", "atoms", "kappa0", "gamma_max"}, "model");
  if (!j["d"].is_number_integer()) throw std::invalid_argument("model: d must be an integer");
  const int d = j["d"].get<int>();
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("model: d must be 1, 2 or 3");
  const Eigen::VectorXd p0 = read_direction_map(j["p0"], d, "p0");
  if (!j["atoms"].is_array() || j["atoms"].empty()) throw std::invalid_argument("model: atoms must be a non-empty array");
  std::vector<PerturbationAtom> atoms;
  for (const auto& a : j["atoms"]) {
    only_keys(a, {"weight", "U"}, "atom");
    if (!a["weight"].is_number()) throw std::invalid_argument("atom: weight must be a number");
    atoms.push_back({a["weight"].get<double>(), read_direction_map(a["U"], d, "U")});
  }
  if (!j["kappa0"].is_number() || !j["gamma_max"].is_number()) {
    throw std::invalid_argument("model: kappa0 and gamma_max must be numbers");
  }
  return ModelSpec(TransitionKernel(d, p0), PerturbationLaw(d, std::move(atoms)), j["kappa0"].get<double>(),
                   j["gamma_max"].get<double>());
}

}  // namespace rwre
