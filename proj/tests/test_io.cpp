#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "osk/io.hpp"
#include "osk/lipschitz.hpp"

using namespace osk;
using nlohmann::json;

namespace {

std::string data(const std::string &name) {
  const char *dir = std::getenv("OSK_DATA");
  return std::string(dir ? dir : "data") + "/" + name;
}

}  // namespace

TEST_CASE("parse_length") {
  CHECK(parse_length(json(0.25)) == 0.25);
  CHECK(parse_length(json("1/3")) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(parse_length(json("0.5")) == 0.5);
  CHECK_THROWS_AS(parse_length(json("1/0")), ParseError);
  CHECK_THROWS_AS(parse_length(json("half")), ParseError);
  CHECK_THROWS_AS(parse_length(json("1/3x")), ParseError);
  CHECK_THROWS_AS(parse_length(json::array()), ParseError);
}

TEST_CASE("bundled points load and validate") {
  for (auto name : {"rose2.json", "rose2_third.json", "theta.json", "rose3.json"}) {
    CAPTURE(name);
    Point p = read_point(data(name));
    CHECK(validate_point(p).ok);
  }
  Point r = read_point(data("rose2_third.json"));
  CHECK(r.graph.edges[0].length == doctest::Approx(1.0 / 3));
  Point th = read_point(data("theta.json"));
  CHECK(th.graph.n_vertices() == 2);
  CHECK(th.graph.n_edges() == 3);
}

TEST_CASE("point JSON round trip") {
  Point th = read_point(data("theta.json"));
  Point back = point_from_json(point_to_json(th));
  CHECK(back.rank == th.rank);
  CHECK(back.base == th.base);
  CHECK(back.loops == th.loops);
  CHECK(std::abs(distance(th, back).value) <= 1e-12);
  CHECK(std::abs(distance(back, th).value) <= 1e-12);
}

TEST_CASE("an absent marking gives the standard one") {
  json j = {{"rank", 2},
            {"vertices", {"v"}},
            {"edges", {{{"id", "a"}, {"from", "v"}, {"to", "v"}, {"length", 0.5}},
                       {{"id", "b"}, {"from", 0}, {"to", 0}, {"length", "1/2"}}}}};
  Point p = point_from_json(j);
  CHECK(p.loops == std::vector<Path>{{1}, {2}});
}

TEST_CASE("malformed points are parse errors") {
  json good = read_json(data("rose2.json"));
  auto broken = [&](auto edit) {
    json j = good;
    edit(j);
    return j;
  };
  CHECK_THROWS_AS(point_from_json(broken([](json &j) { j.erase("edges"); })), ParseError);
  CHECK_THROWS_AS(point_from_json(broken([](json &j) { j["rank"] = 0; })), ParseError);
  CHECK_THROWS_AS(point_from_json(broken([](json &j) { j["edges"][0]["from"] = "nowhere"; })), ParseError);
  CHECK_THROWS_AS(point_from_json(broken([](json &j) { j["edges"][1]["id"] = j["edges"][0]["id"]; })), ParseError);
  CHECK_THROWS_AS(point_from_json(broken([](json &j) { j["marking"]["z"] = json::array(); })), ParseError);
  CHECK_THROWS_AS(point_from_json(broken([](json &j) { j["marking"]["x"] = {"~q"}; })), ParseError);
}

TEST_CASE("a marking that is not a homotopy equivalence is a domain error") {
  json j = read_json(data("rose2.json"));
  j["marking"]["y"] = j["marking"]["x"];
  CHECK_THROWS_AS(point_from_json(j), DomainError);
}

TEST_CASE("self-maps load, infer vertex images and round trip") {
  auto f = read_self_map(data("golden.json"));
  CHECK(f.vertex_image == std::vector<int>{0});
  CHECK(f.edge_image == std::vector<Path>{{1, 2}, {1}});
  auto back = self_map_from_json(self_map_to_json(f));
  CHECK(back.edge_image == f.edge_image);
  CHECK(back.vertex_image == f.vertex_image);
  CHECK_FALSE(verify_train_track(read_self_map(data("not_tt.json"))).is_tt);

  json j = read_json(data("golden.json"));
  j["edge_images"].erase("e2");
  CHECK_THROWS_AS(self_map_from_json(j), ParseError);
  j = read_json(data("golden.json"));
  j["edge_images"]["e9"] = json::array();
  CHECK_THROWS_AS(self_map_from_json(j), ParseError);
}

TEST_CASE("automorphisms load and round trip") {
  auto a = read_automorphism(data("golden_inverse.aut.json"));
  CHECK(a.rank == 2);
  CHECK(a.image(1) == Word{2});
  CHECK(a.image(2) == Word{-2, 1});
  CHECK(automorphism_from_json(automorphism_to_json(a)) == a);
  CHECK(automorphism_from_json(json{{"rank", 2}, {"x", "y"}, {"y", "x"}}).rank == 2);
  CHECK_THROWS_AS(automorphism_from_json(json{{"x", "q"}, {"y", "x"}}), ParseError);
  CHECK_THROWS_AS(automorphism_from_json(json{{"x", "y"}}), ParseError);
  CHECK_THROWS_AS(automorphism_from_json(json{{"rank", 3}, {"x", "y"}, {"y", "x"}}), ParseError);
}

TEST_CASE("file errors") {
  try {
    read_point("/nonexistent/point.json");
    FAIL("expected an I/O error");
  } catch (const IoError &e) {
    CHECK(std::string(e.what()).find("cannot read") != std::string::npos);
  }
  auto tmp = std::filesystem::temp_directory_path() / "osk_io_bad.json";
  write_text(tmp.string(), "{ not json");
  CHECK_THROWS_AS(read_point(tmp.string()), ParseError);
  write_text(tmp.string(), "[1, 2]");
  CHECK_THROWS_AS(read_point(tmp.string()), ParseError);
  std::filesystem::remove(tmp);
  CHECK_THROWS_AS(write_text("/nonexistent/dir/out.txt", "x"), IoError);
}
