#include <gtest/gtest.h>

#include <isowill/isowill.hpp>

using namespace isowill;

namespace {

const Check* find(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

SpecFile pole_spec() {
  return parse_spec(
      "format = isowill-potential/1\n"
      "name = pole\n"
      "h31.num = 1\nh31.den = 4, -4, 1\n"
      "h41.num = i\nh41.den = 4, -4, 1\n"
      "grid = rect\ngrid.x = 0, 2, 3\ngrid.y = 0, 0, 1\n");
}

}  // namespace

TEST(Chordal, SignAndScaleInvariant) {
  const std::array<double, 3> a{1, 2, 3}, b{-2, -4, -6}, c{1, 2, 3.1};
  EXPECT_NEAR(chordal_distance(a, b), 0, 1e-15);
  EXPECT_GT(chordal_distance(a, c), 1e-3);
}

TEST(Grid, DefaultGridAvoidsTheBlowUpCircle) {
  const GridSpec g = default_grid();
  EXPECT_EQ(g.points().size(), 20u);
  EXPECT_GT(blowup_band_distance(g), 0.1);
  EXPECT_NEAR(golden::sphere::P(golden::sphere::blowup_radius()), 0, 1e-12);
}

TEST(GoldenCases, UnknownNameIsRejected) {
  EXPECT_THROW(golden_case("nope"), Error);
  EXPECT_EQ(golden_cases().size(), 2u);
}

TEST(GoldenCases, BothReportsPass) {
  for (const auto& gc : golden_cases()) {
    const Report r = golden_report(gc);
    for (const auto& c : r.checks) EXPECT_TRUE(c.pass()) << gc.name << " " << c.name << " = " << c.value;
    EXPECT_TRUE(r.notes.empty());
    ASSERT_NE(find(r, "golden.chordal"), nullptr);
  }
}

TEST(Verify, UnreachableToleranceFails) {
  VerifyOptions opt;
  opt.tol_override = 1e-15;
  const Report r = golden_report(golden_case("sphere"), opt);
  EXPECT_FALSE(r.pass());
  EXPECT_FALSE(find(r, "flatness")->pass());
  EXPECT_TRUE(find(r, "structural.v_block")->pass());
}

TEST(Verify, PoleInsideGridIsFlagged) {
  const SpecFile s = pole_spec();
  RunConfig cfg;
  cfg.mode = Mode::Numeric;
  const Report strict = verify_spec(s, cfg);
  const Check* f = find(strict, "flagged_fraction");
  ASSERT_NE(f, nullptr);
  EXPECT_NEAR(f->value, 1.0 / 3.0, 1e-12);
  EXPECT_FALSE(strict.pass());
  ASSERT_EQ(strict.notes.size(), 1u);
  EXPECT_NE(strict.notes[0].find("z=2+0i"), std::string::npos);

  VerifyOptions lenient;
  lenient.max_flagged = 0.5;
  EXPECT_TRUE(find(verify_spec(s, cfg, lenient), "flagged_fraction")->pass());
}

TEST(Verify, ReportMentionsEverySuite) {
  const Report r = golden_report(golden_case("minimal"));
  for (const char* n : {"iwasawa.a", "iwasawa.e", "factor", "frame.reality", "frame.twist", "frame.positive",
                        "surface.lightcone", "mc.b1_pattern", "mc.k2_pattern", "isotropy", "isotropy.halving_ratio",
                        "flatness", "flatness.halving_ratio", "golden.s4_coordinates"})
    EXPECT_NE(find(r, n), nullptr) << n;
}

TEST(Report, JsonSchemaAndOrder) {
  Report r;
  r.case_name = "t";
  r.add("a", 1e-3, 1e-2);
  r.add_min("b", 2, 3);
  const auto j = report_json(r);
  EXPECT_EQ(j["schema"], "isowill-report/1");
  EXPECT_EQ(j["pass"], false);
  EXPECT_EQ(j["checks"][0]["name"], "a");
  EXPECT_TRUE(j["checks"][0].contains("tol"));
  EXPECT_TRUE(j["checks"][1].contains("min"));
  EXPECT_EQ(j.begin().key(), "schema");
}
