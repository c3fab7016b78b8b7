#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "pdp/plane_graph.hpp"

namespace pdp {

// Line format:
//   V <id>
//   E <id> <u> <v>
//   R <v>: <e1> <e2> ...      clockwise
//   OUTER <edge> <side>       side 0: dart u->v, side 1: dart v->u
//   PAIR <s> <t>
// '#' starts a comment line. Ids must be dense and start at 0.
Instance parse_instance_text(std::string_view text);
std::string format_instance_text(const Instance& inst);

nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

// Accepts either format; JSON is recognised by a leading '{'.
Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

}  // namespace pdp
