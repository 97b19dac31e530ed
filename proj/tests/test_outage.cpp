#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fdnoma/errors.hpp"
#include "fdnoma/outage.hpp"

using namespace fdnoma;
using namespace fdnoma::outage;

namespace {

void expect_rel(double actual, double expected, double tol) {
  EXPECT_LE(std::abs(actual - expected), tol * std::abs(expected))
      << "actual=" << actual << " expected=" << expected;
}

SystemConfig at_power(double pt_db) {
  auto cfg = reference_config();
  cfg.p_t_db = pt_db;
  return cfg;
}

}  // namespace

TEST(Names, RoundTrip) {
  for (auto s : kAllSchemes) EXPECT_EQ(parse_scheme(to_string(s)), s);
  for (auto n : kAllNodes) EXPECT_EQ(parse_node(to_string(n)), n);
  EXPECT_EQ(parse_scheme("fd"), Scheme::FdNoma);
  EXPECT_EQ(parse_scheme("oma"), Scheme::HdOma);
  EXPECT_EQ(parse_node("uav3"), Node::Uav3);
  EXPECT_FALSE(parse_scheme("xx").has_value());
  EXPECT_FALSE(parse_node("").has_value());
}

TEST(Rates, FairnessRule) {
  EXPECT_DOUBLE_EQ(rate_for(Scheme::FdNoma, 0.2), 0.2 / 3.0);
  EXPECT_DOUBLE_EQ(rate_for(Scheme::HdNoma, 0.2), 0.1);
  EXPECT_DOUBLE_EQ(rate_for(Scheme::HdOma, 0.2), 0.2);
}

TEST(Thresholds, Examples) {
  expect_rel(sinr_threshold(0.2), 0.1486983549970351, 1e-14);
  expect_rel(sinr_threshold(0.1), 0.07177346253629313, 1e-14);
  EXPECT_EQ(sinr_threshold(0.0), 0.0);
  expect_rel(sinr_threshold(rate_for(Scheme::FdNoma, 0.2)), 0.04729412282062673, 1e-13);
}

TEST(Thresholds, NomaEffectiveExamples) {
  const auto cfg = reference_config();
  const auto u3 = node_threshold(cfg, Scheme::FdNoma, Node::Uav3);
  const auto u2 = node_threshold(cfg, Scheme::FdNoma, Node::Uav2);
  ASSERT_FALSE(u3.is_infinite());
  ASSERT_FALSE(u2.is_infinite());
  expect_rel(u3.value(), 0.09928378517123874, 1e-13);
  expect_rel(u2.value(), 0.09503771819293433, 1e-13);
  expect_rel(node_threshold(cfg, Scheme::FdNoma, Node::Gs).value(), 0.04729412282062673, 1e-13);
}

TEST(Thresholds, InfiniteWhenDenominatorNotPositive) {
  EXPECT_TRUE(noma_effective_threshold(1.0, 0.5, 1.0).is_infinite());
  EXPECT_TRUE(noma_effective_threshold(2.0, 0.5, 1.0).is_infinite());
  EXPECT_FALSE(noma_effective_threshold(0.99, 0.5, 1.0).is_infinite());
  EXPECT_THROW(Threshold::infinite().value(), std::logic_error);
}

TEST(Thresholds, EffectiveAboveRawAndOrdered) {
  for (double a : {0.2, 0.5, 0.8}) {
    for (double g : {0.01, 0.1, 0.3}) {
      const auto t = noma_effective_threshold(g, a, 0.1);
      if (t.is_infinite()) continue;
      EXPECT_GE(t.value(), g / a - 1e-15);
      // more residual interference never lowers the threshold
      const auto worse = noma_effective_threshold(g, a, 1.0);
      if (!worse.is_infinite()) EXPECT_GE(worse.value(), t.value());
    }
  }
}

TEST(Lemma2, ZeroThresholdGivesZero) {
  const std::vector<MomentSource> y{MomentSource::rician_shadowed({1.0, 10.0, 3.0})};
  const auto r = lemma2_outage({1.0, 10.0, 10.0}, y, Threshold::finite(0.0), 25);
  EXPECT_EQ(r.probability, 0.0);
}

TEST(Lemma2, InfiniteThresholdGivesOne) {
  const auto r = lemma2_outage({1.0, 10.0, 10.0}, {}, Threshold::infinite(), 25);
  EXPECT_EQ(r.probability, 1.0);
  EXPECT_TRUE(r.converged);
}

TEST(Lemma2, NoInterfererReducesToCdf) {
  for (double g : {0.05, 0.1, 0.2}) {
    for (double m : {3.0, 10.0}) {
      const channel::RicianShadowedParams x{1.0, 10.0, m};
      const auto a = lemma2_outage(x, {}, Threshold::finite(g), 40);
      const auto b = channel::cdf_truncated(x, g, 40);
      EXPECT_NEAR(a.probability, b.probability, 1e-12);
    }
  }
}

TEST(Lemma2, ExponentialInterfererAgainstQuadrature) {
  // nested quadrature of P(X <= gamma (1 + Y)) at 30 digits
  const std::vector<MomentSource> y{MomentSource::exponential({0.5})};
  const auto r = lemma2_outage({1.0, 10.0, 3.0}, y, Threshold::finite(0.1), 40);
  EXPECT_TRUE(r.converged);
  expect_rel(r.probability, 0.042771329872335789, 1e-9);
}

TEST(MomentSource, Examples) {
  const auto e = MomentSource::exponential({2.0});
  EXPECT_DOUBLE_EQ(e.moment(3), 48.0);
  const auto rs = MomentSource::rician_shadowed({1.0, 10.0, 10.0});
  expect_rel(rs.moment(2), 1.25619834710743802, 1e-12);
}

TEST(LinkBudget, ReferenceScaling) {
  auto cfg = at_power(20.0);
  const auto lb = make_link_budget(cfg);
  expect_rel(lb.pt_linear, 100.0, 1e-14);
  expect_rel(lb.x_1g.mean_power, 100.0 / 9.0, 1e-14);
  expect_rel(lb.x_g2.mean_power, 100.0 / 4.0, 1e-14);
  expect_rel(lb.y_12.mean_power, 100.0 / 4.0, 1e-14);
  expect_rel(lb.y_13.mean_power, 100.0 / 9.0, 1e-14);
  expect_rel(lb.y_si1.mean_power, 100.0 * std::pow(10.0, -0.9), 1e-13);
  ASSERT_TRUE(lb.y_si2.has_value());
  expect_rel(lb.y_si2->mean_power, 10.0, 1e-14);

  cfg.epsilon = 0.0;
  EXPECT_FALSE(make_link_budget(cfg).y_si2.has_value());
}

TEST(Outage, FdReferencePoints) {
  // 30-digit evaluations of the truncated series at order 40
  struct Case {
    double pt;
    Node node;
    double value;
  };
  const Case cases[] = {
      {10, Node::Gs, 0.010412740537179688},  {10, Node::Uav2, 0.037474298425873663},
      {10, Node::Uav3, 0.018895259112563684}, {20, Node::Gs, 0.005968310157834308},
      {20, Node::Uav2, 0.025861556103607362}, {20, Node::Uav3, 0.0066878614409188409},
  };
  for (const auto& c : cases) {
    const auto r = evaluate(at_power(c.pt), Scheme::FdNoma, c.node);
    EXPECT_TRUE(r.converged);
    expect_rel(r.probability, c.value, 1e-8);
  }
}

TEST(Outage, HdReferencePoints) {
  expect_rel(evaluate(at_power(0), Scheme::HdNoma, Node::Uav3).probability, 0.798073121748962, 1e-8);
  expect_rel(evaluate(at_power(0), Scheme::HdNoma, Node::Uav2).probability, 0.30255446099, 1e-8);
  expect_rel(evaluate(at_power(10), Scheme::HdNoma, Node::Uav2).probability, 0.0110223817697, 1e-8);
  expect_rel(evaluate(at_power(10), Scheme::HdNoma, Node::Uav3).probability, 0.00879141621556, 1e-8);
  expect_rel(evaluate(at_power(0), Scheme::HdOma, Node::Gs).probability, 0.772288184773386, 1e-8);
  expect_rel(evaluate(at_power(0), Scheme::HdOma, Node::Uav3).probability, 0.772288184773386, 1e-8);
}

TEST(Outage, ZeroRateNeverOutage) {
  auto cfg = at_power(10.0);
  cfg.r_oma = 0.0;
  for (auto s : kAllSchemes) {
    for (auto n : kAllNodes) EXPECT_EQ(evaluate(cfg, s, n).probability, 0.0);
  }
}

TEST(Outage, FdFloorAtHighPower) {
  for (auto n : kAllNodes) {
    const double p60 = evaluate(at_power(60), Scheme::FdNoma, n).probability;
    const double p70 = evaluate(at_power(70), Scheme::FdNoma, n).probability;
    EXPECT_GT(p60, 1e-3);
    EXPECT_LE(std::abs(p60 - p70), 0.1 * p60) << to_string(n);
  }
}

TEST(Outage, DegenerateUav2ReducesToPowerSplitCdf) {
  auto cfg = at_power(20.0);
  cfg.beta = 0.0;
  cfg.a_gs2 = 0.999999;
  cfg.geometry.d_12 = 1e9;
  const auto r = evaluate(cfg, Scheme::FdNoma, Node::Uav2);
  const auto lb = make_link_budget(cfg);
  const double g = sinr_threshold(rate_for(Scheme::FdNoma, cfg.r_oma)) / cfg.a_gs2;
  EXPECT_NEAR(r.probability, channel::cdf_truncated(lb.x_g2, g, cfg.k_tr).probability, 1e-9);
}

TEST(Outage, HdNomaNotWorseThanOmaAtGroundStation) {
  for (double pt = 0; pt <= 60; pt += 5) {
    EXPECT_LE(evaluate(at_power(pt), Scheme::HdNoma, Node::Gs).probability,
              evaluate(at_power(pt), Scheme::HdOma, Node::Gs).probability)
        << pt;
  }
}

TEST(Outage, GuardGivesCertainOutage) {
  auto cfg = at_power(20.0);
  cfg.r_oma = 4.0;  // HD rate 2 -> gamma = 3, UAV-3 needs a_gs3 > a_gs2 * 3
  const auto r = evaluate(cfg, Scheme::HdNoma, Node::Uav3);
  EXPECT_TRUE(r.threshold_used.is_infinite());
  EXPECT_EQ(r.probability, 1.0);
}

TEST(Outage, OmaUav2WorseThanUav3AtHighPower) {
  for (double pt = 40; pt <= 60; pt += 10) {
    EXPECT_GT(evaluate(at_power(pt), Scheme::HdOma, Node::Uav2).probability,
              evaluate(at_power(pt), Scheme::HdOma, Node::Uav3).probability);
  }
}

TEST(Outage, HalfDuplexMonotoneInPower) {
  for (auto s : {Scheme::HdNoma, Scheme::HdOma}) {
    for (auto n : kAllNodes) {
      double previous = 1.0;
      for (double pt = 0; pt <= 60; pt += 5) {
        const double p = evaluate(at_power(pt), s, n).probability;
        EXPECT_LE(p, previous + 1e-12) << to_string(s) << " " << to_string(n) << " " << pt;
        previous = p;
      }
    }
  }
}

TEST(Outage, FuzzedConfigsStayInUnitInterval) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    auto cfg = reference_config();
    cfg.p_t_db = 60.0 * u(rng);
    cfg.r_oma = 0.05 + 0.5 * u(rng);
    cfg.a_gs2 = 0.1 + 0.8 * u(rng);
    cfg.beta = 0.3 * u(rng);
    cfg.epsilon = 0.3 * u(rng);
    cfg.geometry.d_12 = 1.0 + 4.0 * u(rng);
    cfg.geometry.d_13 = 1.0 + 4.0 * u(rng);
    for (auto s : kAllSchemes) {
      for (auto n : kAllNodes) {
        const auto r = evaluate(cfg, s, n);
        EXPECT_GE(r.probability, 0.0);
        EXPECT_LE(r.probability, 1.0);
        EXPECT_FALSE(std::isnan(r.probability));
      }
    }
  }
}

TEST(Outage, UavEvaluatorsRejectGroundStation) {
  const auto cfg = reference_config();
  EXPECT_THROW(outage_fd_uav(cfg, Node::Gs), DomainError);
  EXPECT_THROW(outage_hd_uav(cfg, Node::Gs), DomainError);
  EXPECT_THROW(outage_oma_uav(cfg, Node::Gs), DomainError);
}

TEST(Validation, RejectsBadConfigs) {
  auto bad = reference_config();
  bad.a_gs2 = 1.5;
  EXPECT_THROW(bad.validate(), DomainError);

  bad = reference_config();
  bad.r_oma = -0.1;
  EXPECT_THROW(bad.validate(), DomainError);

  bad = reference_config();
  bad.geometry.d_12 = std::nan("");
  EXPECT_THROW(bad.validate(), DomainError);

  bad = reference_config();
  bad.fading.link_g2.m = 0.0;
  EXPECT_THROW(bad.validate(), DomainError);

  bad = reference_config();
  bad.epsilon = -1.0;
  EXPECT_THROW(evaluate(bad, Scheme::FdNoma, Node::Gs), DomainError);

  SystemConfig missing;  // inter-UAV distances unset
  EXPECT_THROW(missing.validate(), DomainError);
}
