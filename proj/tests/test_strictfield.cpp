#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qfunctor/errors.hpp"
#include "qfunctor/kernels.hpp"
#include "qfunctor/strictfield.hpp"

using namespace qf;

namespace {

TrigPoly T(const std::string& s) { return TrigPoly::parse(s); }

std::vector<int> range(int lo, int hi) {
  std::vector<int> out;
  for (int q = lo; q <= hi; ++q) out.push_back(q);
  return out;
}

}  // namespace

TEST(FuzzyRep, CommutationRelation) {
  for (int q : {2, 3, 7, 64}) {
    const FuzzyRep r = fuzzy_rep(q);
    const auto omega = std::polar(1.0, 2 * std::numbers::pi / q);
    EXPECT_LT((r.U * r.V - omega * r.V * r.U).norm(), 1e-12);
    const CMatrix I = CMatrix::Identity(q, q);
    EXPECT_LT((r.U * r.U.adjoint() - I).norm(), 1e-12);
    EXPECT_LT((r.V * r.V.adjoint() - I).norm(), 1e-12);
    CMatrix Uq = I, Vq = I;
    for (int k = 0; k < q; ++k) {
      Uq = Uq * r.U;
      Vq = Vq * r.V;
    }
    EXPECT_LT((Uq - I).norm(), 1e-9);
    EXPECT_LT((Vq - I).norm(), 1e-9);
    EXPECT_LT((r.quantize(T("e(0,0)")) - I).norm(), 1e-12);
  }
  const FuzzyRep two = fuzzy_rep(2);
  EXPECT_LT((two.U * two.V + two.V * two.U).norm(), 1e-12);
  EXPECT_THROW(fuzzy_rep(1), HypothesisError);
  EXPECT_THROW(fuzzy_rep(513), HypothesisError);
}

TEST(FuzzyRep, QuantizationMatchesClockShiftWords) {
  const FuzzyRep r = fuzzy_rep(5);
  const CMatrix W = r.quantize(T("e(2,1)"));
  const CMatrix expect = std::polar(1.0, -std::numbers::pi * 2 / 5) * r.U * r.U * r.V;
  EXPECT_LT((W - expect).norm(), 1e-12);
}

TEST(FuzzyRep, StarPreserving) {
  std::mt19937_64 rng(4);
  for (int q : {2, 5, 16, 31}) {
    const FuzzyRep r = fuzzy_rep(q);
    for (int t = 0; t < 5; ++t) {
      const TrigPoly f = random_trig_poly(rng, 3, 3, false);
      EXPECT_LT((r.quantize(f.conj()) - r.quantize(f).adjoint()).norm(), 1e-12);
    }
  }
}

TEST(Bracket, TorusNormalization) {
  const TrigPoly b = torus_bracket(T("e(1,0)"), T("e(0,1)"));
  ASSERT_EQ(b.terms().size(), 1u);
  EXPECT_NEAR(std::abs(b.terms().at({1, 1}) + 2 * std::numbers::pi), 0, 1e-15);
  EXPECT_TRUE(torus_bracket(T("e(2,1)"), T("e(4,2)")).terms().empty());
}

TEST(Dirac, ClosedForm) {
  const TrigPoly f = T("e(1,0)"), g = T("e(0,1)");
  for (int q : {2, 3, 4, 11, 50, 199, 512})
    EXPECT_NEAR(dirac_defect(f, g, q), dirac_defect_closed_form(q), 1e-9) << q;
  EXPECT_NEAR(dirac_defect(f, f, 17), 0, 1e-12);
}

TEST(Dirac, DefectDecaysWithSlope) {
  std::mt19937_64 rng(5);
  const auto qs = range(11, 60);
  for (int t = 0; t < 3; ++t) {
    const auto rows = defect_sweep(random_trig_poly(rng), random_trig_poly(rng), qs);
    EXPECT_GE(loglog_slope(rows), 0.9);
    EXPECT_LT(rows.back().defect, rows.front().defect);
  }
}

TEST(Norms, UnitaryAndCosine) {
  const auto u = norm_section(T("e(1,0)"), {3, 10, 40});
  for (const auto& s : u) EXPECT_NEAR(s.norm, 1.0, 1e-9);
  EXPECT_EQ(u.back().hbar, 0.0);
  const auto c = norm_section(T("e(1,0) + e(-1,0)"), {4, 12, 40});
  for (const auto& s : c) EXPECT_NEAR(s.norm, 2.0, 1e-9);
  const auto odd = norm_section(T("e(1,0) + e(-1,0)"), {5});
  EXPECT_NEAR(odd[0].norm, 2.0, 1e-9);
}

TEST(Norms, SupNorm) {
  EXPECT_NEAR(sup_norm(T("e(1,0) + e(-1,0) + e(0,1) + e(0,-1)")), 4.0, 1e-9);
  EXPECT_NEAR(sup_norm(T("0.5*e(1,2) + 0.5*e(-1,-2) - 0.25")), 1.25, 1e-9);
  EXPECT_NEAR(sup_norm(T("3")), 3.0, 1e-12);
}

TEST(Norms, ContinuityAtZero) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 3; ++t) {
    const TrigPoly f = random_trig_poly(rng, 3, 1);
    const auto s = norm_section(f, {25, 199});
    const double sup = s.back().norm;
    EXPECT_LE(std::abs(s[1].norm - sup), 0.05);
  }
}

TEST(Usc, Examples) {
  const auto constant = norm_section(T("2"), {3, 5, 7, 9});
  EXPECT_TRUE(usc_check(constant, 1.0).ok);
  auto field = norm_section(T("e(1,0) + e(-1,0)"), {11, 13, 17, 19, 23, 29});
  const auto ok = usc_check(field, 1.0);
  EXPECT_TRUE(ok.ok);
  EXPECT_EQ(ok.level_set.front(), 0.0);
  field[2].norm = 0;
  const auto bad = usc_check(field, 1.0);
  EXPECT_FALSE(bad.ok);
  EXPECT_NE(bad.witness.find("drop"), std::string::npos);
}

TEST(Usc, TailAboveZeroFiberIsFlagged) {
  std::vector<NormSample> s{{0.1, 1.0}, {0.05, 1.5}, {0.02, 1.5}, {0.01, 1.5}, {0.0, 1.0}};
  const auto r = usc_check(s, 1.2);
  EXPECT_FALSE(r.ok);
  EXPECT_THROW(usc_check({{0.1, 1.0}}, 0.5), HypothesisError);
}

TEST(TrigPoly, ParseAndPrint) {
  const TrigPoly f = T("(0.5-1.5i)*e(2,-1) + 2*e(0,1) - 1.5i*e(1,1) + e(-1,0) + 3");
  EXPECT_EQ(f.terms().size(), 5u);
  const TrigPoly g = T(f.str());
  EXPECT_EQ(g.terms(), f.terms());
  EXPECT_TRUE(T("e(1,0) + e(-1,0)").is_real());
  EXPECT_FALSE(T("e(1,0)").is_real());
  EXPECT_THROW(T("e(1)"), ParseError);
  EXPECT_THROW(T("2*x"), ParseError);
}

TEST(Kernels, SweepParallelMatchesSerial) {
  std::mt19937_64 rng(9);
  const TrigPoly f = random_trig_poly(rng), g = random_trig_poly(rng);
  const auto qs = range(11, 30);
  const auto a = defect_sweep(f, g, qs), b = defect_sweep_serial(f, g, qs);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].q, b[i].q);
    EXPECT_EQ(a[i].defect, b[i].defect);
    EXPECT_EQ(a[i].norm, b[i].norm);
  }
  const auto n1 = norm_section(f, qs), n2 = norm_section_serial(f, qs);
  for (std::size_t i = 0; i < n1.size(); ++i) EXPECT_EQ(n1[i].norm, n2[i].norm);
}
