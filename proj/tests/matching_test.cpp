#include <gtest/gtest.h>

#include <array>

#include "support.hpp"
#include "wpt/matching.hpp"
#include "wpt/tuner.hpp"

using namespace wpt;
using wpt::testing::Gen;
using wpt::testing::rel_err;

namespace {

const double kW = 2 * kPi * 38e6;

VaractorStack stack_of(int pairs) { return {smv1494(), pairs}; }

}  // namespace

TEST(Varactor, ZeroBias) {
  VaractorDiode d = smv1494();
  d.c_pkg = 0.4e-12;
  EXPECT_DOUBLE_EQ(varactor_capacitance(d, 0.0), d.c_j0 + d.c_pkg);
  EXPECT_DOUBLE_EQ(varactor_capacitance(smv1494(), 0.0), 58e-12);
}

TEST(Varactor, TenVoltsWithCalibratedJunction) {
  EXPECT_NEAR(varactor_capacitance(smv1494(0.567), 10.0) * 1e12, 14.67, 0.01);
}

TEST(Varactor, BiasOutOfRange) {
  EXPECT_THROW(varactor_capacitance(smv1494(), -0.5), BiasRangeError);
  EXPECT_THROW(varactor_capacitance(smv1494(), 15.5), BiasRangeError);
}

TEST(Varactor, StrictlyDecreasing) {
  const VaractorDiode d = smv1494();
  double prev = varactor_capacitance(d, 0.0);
  for (int i = 1; i <= 150; ++i) {
    const double c = varactor_capacitance(d, 0.1 * i);
    EXPECT_LT(c, prev);
    prev = c;
  }
}

TEST(Varactor, InvalidDiodeRejected) {
  VaractorDiode d = smv1494();
  d.grading = 1.2;
  EXPECT_THROW(validate(d), InvalidArgument);
  d = smv1494();
  d.b_v = d.v_r_max;
  EXPECT_THROW(validate(d), InvalidArgument);
}

TEST(Stack, Endpoints) {
  EXPECT_LT(rel_err(stack_capacitance(stack_of(3), 0.0), 86.7e-12), 0.005);
  EXPECT_NEAR(stack_capacitance(stack_of(8), 0.0), 232e-12, 1e-18);
  EXPECT_NEAR(stack_capacitance(stack_of(8), 10.0) * 1e12, 58.7, 0.05);
}

TEST(Stack, BiasInversion) {
  const auto s = stack_of(3);
  EXPECT_EQ(bias_for_capacitance(s, stack_capacitance(s, 0.0)), 0.0);
  for (double v : {0.3, 2.0, 7.5, 10.0, 14.9}) {
    EXPECT_NEAR(bias_for_capacitance(s, stack_capacitance(s, v)), v, 1e-6);
  }
  EXPECT_NEAR(bias_for_capacitance(s, 22e-12), 10.0, 0.2);
  EXPECT_THROW(bias_for_capacitance(s, 100e-12), UntunableError);
  EXPECT_THROW(bias_for_capacitance(s, 5e-12), UntunableError);
}

TEST(Stack, JunctionCalibrationFitsAllEndpoints) {
  const std::array<StackEndpoint, 4> pts{{{3, 0.0, 86.7e-12}, {3, 10.0, 22e-12},
                                          {8, 0.0, 232e-12}, {8, 10.0, 58.8e-12}}};
  const double vj = calibrate_junction_voltage(smv1494(), pts);
  EXPECT_NEAR(vj, 0.57, 0.01);
}

TEST(PowerLimit, Cases) {
  const VaractorStack s{smv1494(), 3};
  EXPECT_TRUE(power_limit_check(s, 5.0, 0.0).pass);
  const VaractorStack hp{mtv4045_10(100e-12), 44};
  const auto r = power_limit_check(hp, 40.0, 10.0);
  EXPECT_FALSE(r.pass);
  EXPECT_DOUBLE_EQ(r.margin, -5.0);
  EXPECT_EQ(mtv4060_16(1e-10).b_v, 60.0);
  EXPECT_EQ(mtv4045_10(1e-10).grading, 0.46);
}

TEST(PowerLimit, HighPowerStacksCoverRequiredBand) {
  // Capacitances the static designs need between 15 and 50 cm.
  const SystemConfig cfg = default_system();
  double cs_lo = 1, cs_hi = 0, cp_lo = 1, cp_hi = 0;
  for (int i = 0; i <= 35; ++i) {
    const double d = 0.15 + 0.01 * i;
    const auto dsn = design_static_network(cfg, d, kW);
    for (const LSection& ls : {dsn.source, dsn.load}) {
      cs_lo = std::min(cs_lo, ls.c_series);
      cs_hi = std::max(cs_hi, ls.c_series);
      cp_lo = std::min(cp_lo, ls.c_shunt);
      cp_hi = std::max(cp_hi, ls.c_shunt);
    }
  }
  // 44 pairs for the series position, 40 for the shunt position; C_jo placed
  // 5% above the largest requirement.
  const VaractorStack series{mtv4045_10(calibrate_zero_bias_capacitance(mtv4045_10(1), 44, 1.05 * cs_hi)), 44};
  const VaractorStack shunt{mtv4060_16(calibrate_zero_bias_capacitance(mtv4060_16(1), 40, 1.05 * cp_hi)), 40};
  const auto bs = stack_band(series), bp = stack_band(shunt);
  EXPECT_LT(bs.c_min, cs_lo);
  EXPECT_LT(bp.c_min, cp_lo);
  EXPECT_GT(bs.c_max, cs_hi);
  EXPECT_GT(bp.c_max, cp_hi);
}

TEST(LSection, DegenerateTargetRejected) {
  for (auto o : {LOrientation::SeriesAtReference, LOrientation::ShuntAtReference}) {
    EXPECT_THROW(synthesize_lsection(cplx(50, 0), 50.0, kW, o), UnmatchableError);
    EXPECT_THROW(synthesize_lsection(cplx(-1, -30), 50.0, kW, o), UnmatchableError);
  }
}

TEST(LSection, RoundTripBothOrientations) {
  Gen g(41);
  int tried = 0;
  for (int i = 0; i < 400; ++i) {
    const cplx z(g.uniform(0.2, 40.0), g.uniform(-80.0, 10.0));
    for (auto o : {LOrientation::SeriesAtReference, LOrientation::ShuntAtReference}) {
      try {
        const LSection ls = synthesize_lsection(z, 50.0, kW, o);
        ++tried;
        EXPECT_GT(ls.c_series, 0);
        EXPECT_GT(ls.c_shunt, 0);
        EXPECT_LT(rel_err(presented_impedance(ls, 50.0, kW), z), 1e-9);
      } catch (const UnmatchableError&) {
      }
    }
  }
  EXPECT_GT(tried, 200);
}

TEST(LSection, AbcdIsReciprocalAndOracle) {
  const LSection ls{58e-12, 96e-12, LOrientation::SeriesAtReference};
  const Abcd m = lsection_abcd(ls, kW);
  EXPECT_LT(std::abs(m.determinant() - 1.0), 1e-12);
  const cplx zs = 1.0 / cplx(0, kW * ls.c_series), yp(0, kW * ls.c_shunt);
  EXPECT_LT(std::abs(m.a() - (1.0 + zs * yp)), 1e-12);
  EXPECT_LT(std::abs(m.b() - zs), 1e-12 * std::abs(zs));
  EXPECT_LT(std::abs(m.c() - yp), 1e-12 * std::abs(yp));
  EXPECT_EQ(m.d(), cplx(1, 0));
}

TEST(LSection, ExtremeCapacitancesApproachIdentity) {
  const LSection ls{1.0, 1e-30, LOrientation::ShuntAtReference};
  const Abcd m = lsection_abcd(ls, kW);
  EXPECT_LT((m.m - Abcd::identity().m).norm(), 1e-8);
}

TEST(LSection, StaticDesignCapacitanceTrends) {
  // Series C shrinks and shunt C grows as the design distance increases.
  const SystemConfig cfg = default_system();
  const auto a = design_static_network(cfg, 0.20, kW);
  const auto b = design_static_network(cfg, 0.35, kW);
  const auto c = design_static_network(cfg, 0.50, kW);
  EXPECT_GT(a.source.c_series, b.source.c_series);
  EXPECT_GT(b.source.c_series, c.source.c_series);
  EXPECT_LT(a.source.c_shunt, b.source.c_shunt);
  EXPECT_LT(b.source.c_shunt, c.source.c_shunt);
  EXPECT_LT(rel_err(presented_impedance(b.load, 50.0, kW), b.z_load_port), 1e-9);
}

TEST(LSection, MatchableRegionContainsReferenceTargets) {
  // Every static design from 16 cm to 43 cm fits the SMV1494 3/8-pair stacks.
  const SystemConfig cfg = default_system();
  for (int i = 0; i <= 27; ++i) {
    const double d = 0.16 + 0.01 * i;
    const auto dsn = design_static_network(cfg, d, kW);
    EXPECT_NO_THROW(bias_for(*cfg.source_tunable, dsn.source)) << "d = " << d;
    EXPECT_NO_THROW(bias_for(*cfg.load_tunable, dsn.load)) << "d = " << d;
  }
}
