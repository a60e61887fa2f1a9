#include "mdl/family_io.hpp"

#include <fstream>

namespace mdl {

namespace {

FinitePmf pmf_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw config_error("family json: pmf must be a nonempty array");
  Vec p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) p[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return FinitePmf(p);
}

}  // namespace

std::shared_ptr<const Family> family_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type")) {
    throw config_error("family json: expected an object with a \"type\" field");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "mixture") {
    double tau = j.at("tau").get<double>();
    std::vector<FinitePmf> comps;
    for (const auto& c : j.at("components")) comps.push_back(pmf_from_json(c));
    return std::make_shared<MixtureFamily>(std::move(comps), tau);
  }
  if (type == "canonical_bernoulli") {
    double lo = j.value("eta_lo", -1.5);
    double hi = j.value("eta_hi", 1.5);
    return std::make_shared<CanonicalBernoulliFamily>(lo, hi);
  }
  if (type == "bernoulli_mean") {
    return std::make_shared<BernoulliMeanFamily>();
  }
  throw config_error("family json: unknown type \"" + type + "\"");
}

nlohmann::json family_to_json(const Family& fam) {
  nlohmann::json j;
  if (const auto* mix = dynamic_cast<const MixtureFamily*>(&fam)) {
    j["type"] = "mixture";
    j["tau"] = mix->tau();
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : mix->components()) {
      nlohmann::json arr = nlohmann::json::array();
      for (Eigen::Index i = 0; i < c.probs().size(); ++i) arr.push_back(c.probs()[i]);
      comps.push_back(arr);
    }
    j["components"] = comps;
    return j;
  }
  if (const auto* cb = dynamic_cast<const CanonicalBernoulliFamily*>(&fam)) {
    j["type"] = "canonical_bernoulli";
    j["eta_lo"] = cb->space().lo()[0];
    j["eta_hi"] = cb->space().hi()[0];
    return j;
  }
  if (dynamic_cast<const BernoulliMeanFamily*>(&fam) != nullptr) {
    j["type"] = "bernoulli_mean";
    return j;
  }
  throw unsupported_error("family_to_json: no serialization for " + fam.name());
}

std::shared_ptr<const Family> load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open family file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw config_error("family file " + path + ": " + e.what());
  }
  return family_from_json(j);
}

}  // namespace mdl
