#pragma once

#include "capcover/bodies.hpp"

#include <json.hpp>

#include <string>

namespace capcover {

using json = nlohmann::json;

// Body specification: {"type": ball|box|ellipsoid|lp|polytope|transformed, "dim": d, ...}.
BodyPtr body_from_json(const json& spec);
json body_to_json(const Body& K);
BodyPtr load_body(const std::string& path);
json load_json(const std::string& path);
// Short identifier used in records, e.g. "ball", "box", "polytope30".
std::string body_label(const json& spec);

json vec_to_json(const Vec& v);
Vec vec_from_json(const json& j);

}  // namespace capcover
