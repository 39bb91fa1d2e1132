#include "levykit/model_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "levykit/common.hpp"

namespace levykit {

using nlohmann::json;

namespace {

json spectral_to_json(const SpectralMeasure& mu) {
  json j;
  if (mu.is_atomic()) {
    j["type"] = "atomic";
    json dirs = json::array(), ws = json::array();
    for (const auto& d : mu.directions()) dirs.push_back(d);
    for (double w : mu.weights()) ws.push_back(w);
    j["directions"] = dirs;
    j["weights"] = ws;
  } else {
    if (mu.density_tag() != "uniform")
      throw std::invalid_argument(
          "model file: only 'uniform' density spectral measures are serializable");
    j["type"] = "density";
    j["kind"] = "uniform";
    j["total_mass"] = mu.total_mass();
    j["resolution"] = mu.resolution();
  }
  return j;
}

SpectralMeasure spectral_from_json(int dim, const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "atomic") {
    std::vector<Vec> dirs;
    std::vector<double> ws;
    for (const auto& d : j.at("directions")) dirs.push_back(d.get<Vec>());
    for (const auto& w : j.at("weights")) ws.push_back(w.get<double>());
    return SpectralMeasure::atomic(dim, std::move(dirs), std::move(ws));
  }
  if (type == "density") {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind != "uniform")
      throw std::invalid_argument("model file: unknown spectral density kind '" + kind + "'");
    const double mass = j.at("total_mass").get<double>();
    const int res = j.value("resolution", 256);
    return SpectralMeasure::uniform(dim, mass, res);
  }
  throw std::invalid_argument("model file: unknown spectral type '" + type + "'");
}

json component_to_json(const ProfileComponent& c) {
  json j;
  j["family"] = c.family;
  j["params"] = json::object();
  for (const auto& [k, v] : c.params) j["params"][k] = v;
  return j;
}

ProfileComponent component_from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  std::map<std::string, double> params;
  if (j.contains("params"))
    for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it)
      params[it.key()] = it.value().get<double>();
  return make_profile_component(family, params);
}

json model_to_json(const LevyModel& m) {
  json j;
  j["schema"] = "levykit-model-1";
  j["dimension"] = m.dim();
  j["alpha"] = m.alpha();
  j["beta"] = m.beta();
  j["gamma"] = m.gamma();
  j["drift"] = m.drift();
  j["spectral"] = spectral_to_json(m.mu());
  j["profile"]["q"] = component_to_json(m.profile().q);
  j["profile"]["phi"] = component_to_json(m.profile().phi);
  return j;
}

}  // namespace

std::string model_to_json_string(const LevyModel& m, int indent) {
  return model_to_json(m).dump(indent);
}

LevyModel model_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("model file: JSON parse error: ") + e.what());
  }
  try {
    const int dim = j.at("dimension").get<int>();
    const double alpha = j.at("alpha").get<double>();
    const double beta = j.value("beta", alpha);
    const double gamma = j.value("gamma", 1.0);
    Vec drift = j.contains("drift") ? j.at("drift").get<Vec>() : zero_vec(dim);
    SpectralMeasure mu = spectral_from_json(dim, j.at("spectral"));
    RadialProfile prof{component_from_json(j.at("profile").at("q")),
                       component_from_json(j.at("profile").at("phi"))};
    return LevyModel(dim, alpha, beta, gamma, std::move(drift), std::move(mu),
                     std::move(prof));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("model file: missing/ill-typed field: ") + e.what());
  }
}

void save_model(const LevyModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << model_to_json_string(m) << "\n";
}

LevyModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json_string(ss.str());
}

std::string model_hash(const LevyModel& m) {
  const std::string canon = model_to_json(m).dump();
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(canon);
  return os.str();
}

}  // namespace levykit
