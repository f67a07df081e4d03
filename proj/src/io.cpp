#include "osk/io.hpp"

#include <fstream>
#include <sstream>

namespace osk {

using nlohmann::json;

namespace {

const json &field(const json &j, const char *key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::string as_string(const json &j, const char *what) {
  if (!j.is_string()) throw ParseError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

int vertex_ref(const MetricGraph &g, const json &j) {
  if (j.is_number_integer()) {
    int v = j.get<int>();
    if (v < 0 || v >= g.n_vertices()) throw ParseError("vertex index " + std::to_string(v) + " out of range");
    return v;
  }
  std::string name = as_string(j, "vertex");
  for (int v = 0; v < g.n_vertices(); ++v)
    if (g.vertices[static_cast<std::size_t>(v)] == name) return v;
  throw ParseError("unknown vertex \"" + name + "\"");
}

HalfEdge half_edge_ref(const MetricGraph &g, const json &j) {
  std::string s = as_string(j, "edge reference");
  bool rev = !s.empty() && s[0] == '~';
  int e = g.edge_index(rev ? s.substr(1) : s);
  if (e < 0) throw ParseError("unknown edge \"" + s + "\"");
  return rev ? -forward(e) : forward(e);
}

Path path_ref(const MetricGraph &g, const json &j) {
  if (!j.is_array()) throw ParseError("an edge path must be an array");
  Path p;
  for (auto &h : j) p.push_back(half_edge_ref(g, h));
  return p;
}

json path_json(const MetricGraph &g, const Path &p) {
  json a = json::array();
  for (HalfEdge h : p) a.push_back(g.half_edge_name(h));
  return a;
}

std::string generator_name(int i, int rank) { return std::string(1, letter_char(i, rank)); }

MetricGraph graph_from_json(const json &j) {
  MetricGraph g;
  const json &vs = field(j, "vertices");
  if (!vs.is_array() || vs.empty()) throw ParseError("\"vertices\" must be a nonempty array");
  for (auto &v : vs) g.vertices.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  const json &es = field(j, "edges");
  if (!es.is_array()) throw ParseError("\"edges\" must be an array");
  for (auto &e : es) {
    Edge edge;
    edge.id = as_string(field(e, "id"), "edge id");
    if (g.edge_index(edge.id) >= 0) throw ParseError("duplicate edge id \"" + edge.id + "\"");
    edge.from = vertex_ref(g, field(e, "from"));
    edge.to = vertex_ref(g, field(e, "to"));
    edge.length = parse_length(field(e, "length"));
    g.edges.push_back(edge);
  }
  return g;
}

}  // namespace

double parse_length(const json &j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw ParseError("a length must be a number or a string");
  const std::string s = j.get<std::string>();
  auto number = [&](const std::string &t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception &) {
      throw ParseError("bad length \"" + s + "\"");
    }
    if (used != t.size()) throw ParseError("bad length \"" + s + "\"");
    return v;
  };
  auto slash = s.find('/');
  if (slash == std::string::npos) return number(s);
  double den = number(s.substr(slash + 1));
  if (den == 0.0) throw ParseError("zero denominator in \"" + s + "\"");
  return number(s.substr(0, slash)) / den;
}

Point point_from_json(const json &j) {
  MetricGraph g = graph_from_json(j);
  const json &rj = field(j, "rank");
  if (!rj.is_number_integer() || rj.get<int>() < 1) throw ParseError("\"rank\" must be a positive integer");
  const int rank = rj.get<int>();
  if (rank > 26) throw ParseError("rank above 26 has no text alphabet");
  int base = j.contains("basepoint") ? vertex_ref(g, j.at("basepoint")) : 0;
  if (!j.contains("marking")) return standard_marking(std::move(g), rank, base);
  const json &mk = j.at("marking");
  if (!mk.is_object()) throw ParseError("\"marking\" must be an object");
  std::vector<Path> loops;
  for (int i = 1; i <= rank; ++i) {
    auto name = generator_name(i, rank);
    if (!mk.contains(name)) throw ParseError("marking lacks generator " + name);
    loops.push_back(path_ref(g, mk.at(name)));
  }
  if (static_cast<int>(mk.size()) != rank) throw ParseError("marking names a generator outside the rank");
  return make_point(std::move(g), rank, base, std::move(loops));
}

json point_to_json(const Point &p) {
  json j;
  j["rank"] = p.rank;
  j["vertices"] = p.graph.vertices;
  json es = json::array();
  for (auto &e : p.graph.edges)
    es.push_back({{"id", e.id},
                  {"from", p.graph.vertices[static_cast<std::size_t>(e.from)]},
                  {"to", p.graph.vertices[static_cast<std::size_t>(e.to)]},
                  {"length", e.length}});
  j["edges"] = es;
  json mk = json::object();
  for (int i = 1; i <= p.rank; ++i)
    mk[generator_name(i, p.rank)] = path_json(p.graph, p.loops[static_cast<std::size_t>(i - 1)]);
  j["marking"] = mk;
  j["basepoint"] = p.graph.vertices[static_cast<std::size_t>(p.base)];
  return j;
}

GraphSelfMap self_map_from_json(const json &j) {
  GraphSelfMap f;
  f.point = point_from_json(field(j, "graph"));
  const auto &g = f.point.graph;
  const json &ei = field(j, "edge_images");
  if (!ei.is_object()) throw ParseError("\"edge_images\" must be an object");
  f.edge_image.assign(static_cast<std::size_t>(g.n_edges()), Path{});
  for (auto &e : g.edges)
    if (!ei.contains(e.id)) throw ParseError("no image for edge \"" + e.id + "\"");
  for (auto &[id, img] : ei.items()) {
    int e = g.edge_index(id);
    if (e < 0) throw ParseError("image given for unknown edge \"" + id + "\"");
    f.edge_image[static_cast<std::size_t>(e)] = path_ref(g, img);
  }
  f.vertex_image.assign(static_cast<std::size_t>(g.n_vertices()), -1);
  if (j.contains("vertex_images")) {
    const json &vi = j.at("vertex_images");
    if (!vi.is_object()) throw ParseError("\"vertex_images\" must be an object");
    for (auto &[name, img] : vi.items()) f.vertex_image[static_cast<std::size_t>(vertex_ref(g, json(name)))] = vertex_ref(g, img);
  }
  // Vertices not listed follow the image of an incident edge.
  for (int v = 0; v < g.n_vertices(); ++v) {
    if (f.vertex_image[static_cast<std::size_t>(v)] >= 0) continue;
    for (HalfEdge h : g.star(v)) {
      const Path &img = f.edge_image[static_cast<std::size_t>(edge_of(h))];
      if (img.empty()) continue;
      f.vertex_image[static_cast<std::size_t>(v)] = h > 0 ? g.tail(img.front()) : g.head(img.back());
      break;
    }
    if (f.vertex_image[static_cast<std::size_t>(v)] < 0)
      throw ParseError("cannot infer the image of vertex \"" + g.vertices[static_cast<std::size_t>(v)] + "\"");
  }
  check_self_map(f);
  return f;
}

json self_map_to_json(const GraphSelfMap &f) {
  const auto &g = f.point.graph;
  json j;
  j["graph"] = point_to_json(f.point);
  json ei = json::object();
  for (int e = 0; e < g.n_edges(); ++e)
    ei[g.edges[static_cast<std::size_t>(e)].id] = path_json(g, f.edge_image[static_cast<std::size_t>(e)]);
  j["edge_images"] = ei;
  json vi = json::object();
  for (int v = 0; v < g.n_vertices(); ++v)
    vi[g.vertices[static_cast<std::size_t>(v)]] = g.vertices[static_cast<std::size_t>(f.vertex_image[static_cast<std::size_t>(v)])];
  j["vertex_images"] = vi;
  return j;
}

Automorphism automorphism_from_json(const json &j) {
  if (!j.is_object()) throw ParseError("an automorphism must be an object");
  int rank = static_cast<int>(j.size());
  if (j.contains("rank")) {
    if (!j.at("rank").is_number_integer()) throw ParseError("\"rank\" must be an integer");
    rank = j.at("rank").get<int>();
    if (static_cast<int>(j.size()) != rank + 1) throw ParseError("need exactly one image per generator");
  }
  if (rank < 1 || rank > 26) throw ParseError("rank must lie in [1,26]");
  std::vector<std::string> images;
  for (int i = 1; i <= rank; ++i) {
    auto name = generator_name(i, rank);
    if (!j.contains(name)) throw ParseError("no image for generator " + name);
    images.push_back(as_string(j.at(name), "image"));
  }
  try {
    return Automorphism::from_strings(rank, images);
  } catch (const DomainError &e) {
    throw ParseError(e.what());
  }
}

json automorphism_to_json(const Automorphism &a) {
  json j;
  for (int i = 1; i <= a.rank; ++i) j[generator_name(i, a.rank)] = format_word(a.image(i), a.rank);
  return j;
}

json read_json(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error &e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("cannot write " + path);
}

namespace {

template <class F>
auto with_path(const std::string &path, F f) {
  json j = read_json(path);
  try {
    return f(j);
  } catch (const json::exception &e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace

Point read_point(const std::string &path) { return with_path(path, point_from_json); }
GraphSelfMap read_self_map(const std::string &path) { return with_path(path, self_map_from_json); }
Automorphism read_automorphism(const std::string &path) { return with_path(path, automorphism_from_json); }

}  // namespace osk
