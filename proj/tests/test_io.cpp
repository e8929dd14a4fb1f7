#include <gtest/gtest.h>

#include "qfunctor/corpus.hpp"
#include "qfunctor/errors.hpp"
#include "qfunctor/io.hpp"

using namespace qf;

namespace {

std::string data(const std::string& name) { return std::string(QF_DATA_DIR) + "/" + name; }

void expect_same(const Bibundle& a, const Bibundle& b) {
  EXPECT_EQ(a.left, b.left);
  EXPECT_EQ(a.right, b.right);
  EXPECT_EQ(a.carrier, b.carrier);
  EXPECT_EQ(a.lanchor, b.lanchor);
  EXPECT_EQ(a.ranchor, b.ranchor);
  EXPECT_EQ(a.lact, b.lact);
  EXPECT_EQ(a.ract, b.ract);
}

std::string parse_error(const std::string& text) {
  try {
    bibundle_from_json(parse_json(text, "t.json"), "t.json");
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Json, GroupoidRoundTrip) {
  for (const auto& g : {pair_groupoid(3), cyclic_group(4), product(pair_groupoid(2), cyclic_group(2)),
                        disjoint_union(trivial_groupoid(), group_groupoid(small_groups()[5]))})
    EXPECT_EQ(groupoid_from_json(to_json(g)), g);
}

TEST(Json, BibundleRoundTrip) {
  const auto cases = functoriality_corpus(3, 4, 20);
  for (const auto& c : cases) {
    expect_same(bibundle_from_json(to_json(c.m)), c.m);
    expect_same(bibundle_from_json(parse_json(to_json(c.n).dump())), c.n);
  }
}

TEST(Json, Presets) {
  EXPECT_EQ(groupoid_from_json(parse_json(R"({"preset": "pair", "n": 4})")), pair_groupoid(4));
  EXPECT_EQ(groupoid_from_json(parse_json(R"({"preset": "cyclic", "n": 3})")), cyclic_group(3));
  EXPECT_EQ(groupoid_from_json(parse_json(R"({"preset": "trivial"})")), trivial_groupoid());
  EXPECT_EQ(groupoid_from_json(parse_json(
                R"({"kind": "groupoid", "preset": "product", "of": [{"preset": "pair", "n": 2}, {"preset": "cyclic", "n": 2}]})")),
            product(pair_groupoid(2), cyclic_group(2)));
}

TEST(Json, ErrorsCarryLocation) {
  const std::string syntax = parse_error("{\n  \"kind\": \"bibundle\",\n  \"carrier\": 2,,\n}");
  EXPECT_NE(syntax.find("t.json:3:"), std::string::npos) << syntax;

  const std::string missing = parse_error(R"({"left": {"preset": "trivial"}, "right": {"preset": "trivial"}})");
  EXPECT_NE(missing.find("t.json: /: missing field \"carrier\""), std::string::npos) << missing;

  const std::string bad_preset = parse_error(R"({"left": {"preset": "torus"}})");
  EXPECT_NE(bad_preset.find("/left/preset: unknown preset"), std::string::npos) << bad_preset;

  const std::string range = parse_error(R"({"left": {"preset": "trivial"}, "right": {"preset": "trivial"},
    "carrier": 1, "lanchor": [0], "ranchor": [0], "lact": [[0, 3, 0]], "ract": []})");
  EXPECT_NE(range.find("/lact/0/1: carrier point out of range"), std::string::npos) << range;

  const std::string kind = parse_error(R"({"kind": "groupoid"})");
  EXPECT_NE(kind.find("/kind: expected kind \"bibundle\""), std::string::npos) << kind;

  EXPECT_THROW(groupoid_from_json(parse_json(R"({"n_obj": 1, "src": [0], "tgt": [0], "unit": [0], "inv": [0],
    "comp": [[1]]})")),
               ParseError);
  EXPECT_THROW(load_groupoid(data("missing.json")), ParseError);
}

TEST(Json, DataFiles) {
  const Bibundle a = load_bibundle(data("pair2_to_point.json"));
  const Bibundle b = load_bibundle(data("point_to_pair2.json"));
  EXPECT_TRUE(is_biprincipal(a));
  EXPECT_TRUE(is_biprincipal(b));
  EXPECT_EQ(load_groupoid(data("pair3.json")), pair_groupoid(3));
  EXPECT_EQ(load_groupoid(data("z4.json")), cyclic_group(4));
  EXPECT_TRUE(is_principal(load_bibundle(data("pair2xz2_to_z2.json"))));
  EXPECT_TRUE(check_functoriality(a, b).ok);
  EXPECT_TRUE(check_functoriality(b, a).ok);
}

TEST(Json, Dumps) {
  const auto e = quantize_arrow(load_bibundle(data("pair2_to_point.json")));
  const Json j = dump_bimodule(e);
  EXPECT_TRUE(j.is_object());
  const Json k = dump_kk(kk_class(e));
  EXPECT_TRUE(k.is_object());
  EXPECT_EQ(rational_json(make_rational(-3, 6)), Json::array({-1, 2}));
  EXPECT_EQ(dump_algebra(*quantize_object(pair_groupoid(2)))["dimension_vector"], Json::array({2}));
}
