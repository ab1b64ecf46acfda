#include <doctest.h>

#include <complex>

#include "hqmaps/catalog.hpp"
#include "hqmaps/errors.hpp"
#include "hqmaps/io.hpp"

using namespace hq;

TEST_SUITE_BEGIN("io");

TEST_CASE("rational maps round-trip through JSON losslessly") {
  for (Signature eps : {+1, -1}) {
    const RationalMapGerm H = normal_form_map({3, 0.7, eps});
    const std::string text = map_to_json(H);
    const RationalMapGerm back = map_from_json(text);
    REQUIRE(back.comp.size() == H.comp.size());
    for (std::size_t i = 0; i < H.comp.size(); ++i) {
      CHECK(back.comp[i].num == H.comp[i].num);  // exact coefficient equality
      CHECK(back.comp[i].den == H.comp[i].den);
    }
    // Deterministic: serializing twice gives identical bytes.
    CHECK(map_to_json(back) == text);
  }
}

TEST_CASE("JSON map parsing rejects malformed input") {
  CHECK_THROWS_AS(map_from_json("not json"), Error);
  CHECK_THROWS_AS(map_from_json("[1,2]"), Error);
  CHECK_THROWS_AS(map_from_json(R"({"components": []})"), Error);
  CHECK_THROWS_AS(
      map_from_json(R"({"components": [{"num": [[0,0,1,0]]}]})"), Error);
  // Denominator vanishing at the origin.
  CHECK_THROWS_AS(map_from_json(
                      R"({"components": [{"num": [[0,0,1,0]],
                                          "den": [[1,0,1,0]]}]})"),
                  Error);
  // Negative exponent.
  CHECK_THROWS_AS(map_from_json(
                      R"({"components": [{"num": [[-1,0,1,0]],
                                          "den": [[0,0,1,0]]}]})"),
                  Error);
}

TEST_CASE("isotropy parameters round-trip through JSON") {
  GammaParams g;
  g.lambda = 1.25;
  g.r = -0.3;
  g.u = std::polar(1.0, 0.7);
  g.c = C(0.1, -0.2);
  const GammaParams g2 = gamma_from_json(gamma_to_json(g));
  CHECK(g2.lambda == g.lambda);
  CHECK(g2.r == g.r);
  CHECK(g2.u == g.u);
  CHECK(g2.c == g.c);

  GammaPrimeParams gp;
  gp.lambda = 0.8;
  gp.r = 0.45;
  gp.u = std::polar(1.0, -1.1);
  gp.a2 = C(0.3, 0.1);
  gp.a1 = std::polar(std::sqrt(1.0 + std::norm(gp.a2)), 0.2);  // eps = -1
  gp.c1 = C(-0.05, 0.02);
  gp.c2 = C(0.0, 0.4);
  const GammaPrimeParams gp2 = gamma_prime_from_json(gamma_prime_to_json(gp));
  CHECK(gp2.lambda == gp.lambda);
  CHECK(gp2.u == gp.u);
  CHECK(gp2.a1 == gp.a1);
  CHECK(gp2.a2 == gp.a2);
  CHECK(gp2.c1 == gp.c1);
  CHECK(gp2.c2 == gp.c2);
  CHECK(gp2.sigma_sign == 1);

  // Parsing validates: lambda <= 0 is rejected.
  CHECK_THROWS_AS(gamma_from_json(
                      R"({"lambda": -1, "r": 0, "u": [1,0], "c": [0,0]})"),
                  Error);
}

TEST_CASE("jet coordinates serialize with order and 17 values") {
  const std::string text =
      jets_to_json(jet_coordinates(normal_form_map({2, 0.5, -1})));
  CHECK(text.find("\"order\":3") != std::string::npos);
  CHECK(text.find("\"values\":[[") != std::string::npos);
}

TEST_CASE("CSV writer quotes only when needed") {
  const std::string csv =
      to_csv({"a", "b"}, {{"1", "plain"}, {"2", "with,comma"},
                          {"3", "with\"quote"}});
  CHECK(csv ==
        "a,b\n1,plain\n2,\"with,comma\"\n3,\"with\"\"quote\"\n");
  CHECK_THROWS_AS(to_csv({"a", "b"}, {{"only-one"}}), Error);
}

TEST_CASE("flat TOML subset parses keys, strings, and comments") {
  const auto kv = parse_flat_toml(
      "# leading comment\n"
      "eps = -1\n"
      "seed = 7   # trailing comment\n"
      "format = \"csv\"\n"
      "out = \"results # not a comment.csv\"\n"
      "\n");
  CHECK(kv.at("eps") == "-1");
  CHECK(kv.at("seed") == "7");
  CHECK(kv.at("format") == "csv");
  CHECK(kv.at("out") == "results # not a comment.csv");

  CHECK_THROWS_AS(parse_flat_toml("just a line\n"), Error);
  CHECK_THROWS_AS(parse_flat_toml("key =\n"), Error);
  CHECK_THROWS_AS(parse_flat_toml("key = \"unterminated\n"), Error);
}

TEST_CASE("run config applies TOML overlays and validates") {
  RunConfig cfg;
  cfg.apply_toml("eps = -1\nseed = 9\njet_order = 5\nmembership_tol = 1e-9\n");
  CHECK(cfg.eps == -1);
  CHECK(cfg.seed == 9);
  CHECK(cfg.jet_order == 5);
  CHECK(cfg.membership_tol == 1e-9);
  // Untouched keys keep their defaults.
  CHECK(cfg.samples == 1000);
  CHECK(cfg.format == "json");

  CHECK_THROWS_AS(cfg.apply_toml("frobnicate = 1\n"), Error);
  CHECK_THROWS_AS(cfg.apply_toml("jet_order = 2\n"), Error);
  CHECK_THROWS_AS(cfg.apply_toml("eps = 0\n"), Error);
  CHECK_THROWS_AS(cfg.apply_toml("seed = notanumber\n"), Error);
  CHECK_THROWS_AS(cfg.apply_toml("format = \"xml\"\n"), Error);
}

TEST_CASE("double formatting is lossless") {
  for (double x : {0.1, 1.0 / 3.0, 1e-17, -2.5e300, 0.0}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_SUITE_END();
