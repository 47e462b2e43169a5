#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "stable_passage/boundary.hpp"
#include "stable_passage/models.hpp"

namespace stable_passage {

// {"family": "lattice"|"sym_pareto"|"skew_pareto"|"exact_stable", ...}
//   lattice:      {"offsets": [..], "probs": [..]}
//   sym_pareto:   {"alpha": a}
//   skew_pareto:  {"alpha": a, "p_right": p}
//   exact_stable: {"alpha": a, "beta": b, "scale_c": c}
IncrementModel model_from_json(const nlohmann::json& j);

// {"variant": "constant"|"power"|"scaled_log"|"table", ...}
//   constant:   {"level": x}
//   power:      {"coef": a, "gamma": g, "offset": o?}
//   scaled_log: {"a": a, "sign": +1|-1, "offset": o?}
//   table:      {"values": [..]}
BoundarySpec boundary_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);

}  // namespace stable_passage
