/** @file io.hpp
 *  JSON formats for points, self-maps and automorphisms.
 *
 *  Graph: {"rank": n, "vertices": [...], "edges": [{"id","from","to","length"}],
 *          "marking": {"x": ["e1","~e2"], ...}, "basepoint": v}
 *  Lengths are numbers or strings such as "1/3". "~" reverses an edge.
 *  Self-map: {"graph": <graph>, "edge_images": {"e1": ["e1","e2"], ...},
 *             "vertex_images": {"v": "v"}}
 *  Automorphism: {"x": "xy", "y": "x"}, optionally with "rank".
 */
#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "osk/graph.hpp"
#include "osk/train_track.hpp"

namespace osk {

/// Malformed input: bad JSON, missing fields, unknown names.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file that cannot be opened or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "0.25", "1/3" or a JSON number.
double parse_length(const nlohmann::json &j);

/// Builds the point without checking volume or valence; the marking must
/// still be a homotopy equivalence (DomainError otherwise).
Point point_from_json(const nlohmann::json &j);
nlohmann::json point_to_json(const Point &p);

GraphSelfMap self_map_from_json(const nlohmann::json &j);
nlohmann::json self_map_to_json(const GraphSelfMap &f);

Automorphism automorphism_from_json(const nlohmann::json &j);
nlohmann::json automorphism_to_json(const Automorphism &a);

nlohmann::json read_json(const std::string &path);
void write_text(const std::string &path, const std::string &text);

Point read_point(const std::string &path);
GraphSelfMap read_self_map(const std::string &path);
Automorphism read_automorphism(const std::string &path);

}  // namespace osk
