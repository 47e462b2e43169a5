#include "stable_passage/config.hpp"

#include <fstream>
#include <stdexcept>

namespace stable_passage {

IncrementModel model_from_json(const nlohmann::json& j) {
  if (!j.contains("family")) throw std::invalid_argument("model config: missing \"family\"");
  const std::string family = j.at("family").get<std::string>();
  if (family == "lattice") {
    return IncrementModel::lattice(j.at("offsets").get<std::vector<long long>>(),
                                   j.at("probs").get<std::vector<double>>());
  }
  if (family == "sym_pareto") {
    return IncrementModel::symmetric_pareto(j.at("alpha").get<double>());
  }
  if (family == "skew_pareto") {
    return IncrementModel::skewed_pareto(j.at("alpha").get<double>(), j.at("p_right").get<double>());
  }
  if (family == "exact_stable") {
    return IncrementModel::exact_stable(make_stable_params(j.at("alpha").get<double>(),
                                                           j.at("beta").get<double>(),
                                                           j.value("scale_c", 1.0)));
  }
  throw std::invalid_argument("model config: unknown family \"" + family + "\"");
}

BoundarySpec boundary_from_json(const nlohmann::json& j) {
  if (!j.contains("variant")) throw std::invalid_argument("boundary config: missing \"variant\"");
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "constant") return BoundarySpec::constant(j.at("level").get<double>());
  if (variant == "power") {
    return BoundarySpec::power(j.at("coef").get<double>(), j.at("gamma").get<double>(),
                               j.value("offset", 0.0));
  }
  if (variant == "scaled_log") {
    return BoundarySpec::scaled_log(j.at("a").get<double>(), j.at("sign").get<int>(),
                                    j.value("offset", 0.0));
  }
  if (variant == "table") return BoundarySpec::table(j.at("values").get<std::vector<double>>());
  throw std::invalid_argument("boundary config: unknown variant \"" + variant + "\"");
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace stable_passage
