#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "kernels/sweep.hpp"
#include "relgeo/energy.hpp"
#include "relgeo/errors.hpp"
#include "relgeo/shooting.hpp"
#include "support.hpp"

namespace relgeo {
namespace {

constexpr double kPi = std::numbers::pi;
using testing::random_normalized_curve;

std::vector<double> random_angles(std::mt19937_64& rng, std::size_t n, double spread = 0.8) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> t(n + 1);
  t[0] = 3.0 * u(rng);
  for (std::size_t k = 1; k <= n; ++k) t[k] = t[k - 1] + spread * u(rng);
  return t;
}

// Independent evaluation through group elements and the inverse Cayley map.
double energy_via_group(const std::vector<double>& theta, const DiscreteCurve& c0, const DiscreteCurve& c1,
                        const Metric& metric) {
  const std::size_t n = c0.intervals();
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const GroupElement a{theta[k], c1[k] - rotation(theta[k]) * c0[k]};
    const GroupElement b{theta[k + 1], c1[k + 1] - rotation(theta[k + 1]) * c0[k + 1]};
    sum += norm_sq(metric, cayley_inv(compose(inverse(a), b)));
  }
  return 0.5 * static_cast<double>(n) * sum;
}

TEST(Energy, MatchesGroupDefinition) {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 20; ++i) {
    const DiscreteCurve c0 = random_normalized_curve(rng, 12);
    const DiscreteCurve c1 = random_normalized_curve(rng, 12);
    const auto t = random_angles(rng, 12);
    const double e = energy(t, c0, c1, Metric(1.4));
    EXPECT_NEAR(e, energy_via_group(t, c0, c1, Metric(1.4)), 1e-11 * std::max(1.0, e));
  }
}

TEST(Energy, TrivialCases) {
  std::mt19937_64 rng(52);
  const DiscreteCurve c = random_normalized_curve(rng, 20);
  const std::vector<double> zero(21, 0.0);
  EXPECT_NEAR(energy(zero, c, c, Metric()), 0.0, 1e-28);
  for (double g : gradient(zero, c, c, Metric())) EXPECT_NEAR(g, 0.0, 1e-13);

  const DiscreteCurve origin = sample(CurveSpec::point(), 20);
  const double base = energy(zero, origin, c, Metric());
  for (double t : {0.5, 2.0, -3.0}) {
    EXPECT_NEAR(energy(std::vector<double>(21, t), origin, c, Metric()), base, 1e-12);
  }
}

TEST(Energy, AgreesWithIntegratedPath) {
  std::mt19937_64 rng(53);
  const DiscreteCurve c0 = random_normalized_curve(rng, 40);
  const DiscreteCurve c1 = random_normalized_curve(rng, 40);
  const GeodesicPath p = integrate(c0, c1, Metric(), 0.8);
  EXPECT_NEAR(energy(p.theta, c0, c1, Metric()), p.energy, 1e-12 * std::max(1.0, p.energy));
}

TEST(Energy, AngleGap) {
  const DiscreteCurve c = sample(CurveSpec::segment({1, 0}), 3);
  try {
    energy({0.0, 0.1, 0.1 + kPi, 0.2}, c, c, Metric());
    FAIL();
  } catch (const IndexedError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kAngleGap);
    EXPECT_EQ(e.index(), 1u);
  }
  EXPECT_THROW(energy({0.0, 0.1}, c, c, Metric()), Error);
}

TEST(Gradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(54);
  const double h = 1e-7;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + trial % 17;
    const DiscreteCurve c0 = random_normalized_curve(rng, n, 0.5);
    const DiscreteCurve c1 = random_normalized_curve(rng, n, 0.5);
    const Metric metric(0.5 + 0.05 * trial);
    std::vector<double> t = random_angles(rng, n, 0.6);
    const std::vector<double> g = gradient(t, c0, c1, metric);
    double scale = 0.0;
    for (double x : g) scale = std::max(scale, std::abs(x));
    for (std::size_t k = 0; k <= n; ++k) {
      const double keep = t[k];
      t[k] = keep + h;
      const double ep = energy(t, c0, c1, metric);
      t[k] = keep - h;
      const double em = energy(t, c0, c1, metric);
      t[k] = keep;
      const double fd = (ep - em) / (2 * h);
      worst = std::max(worst, std::abs(fd - g[k]) / std::max(1.0, scale));
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Gradient, CircleEightTenIntervals) {
  const DiscreteCurve c0 = normalize(sample(CurveSpec::circle(), 10)).first;
  const DiscreteCurve c1 = normalize(sample(CurveSpec::figure_eight(), 10)).first;
  std::mt19937_64 rng(55);
  auto t = random_angles(rng, 10, 0.5);
  const auto g = gradient(t, c0, c1, Metric());
  const double h = 1e-7;
  for (std::size_t k = 0; k <= 10; ++k) {
    const double keep = t[k];
    t[k] = keep + h;
    const double ep = energy(t, c0, c1, Metric());
    t[k] = keep - h;
    const double em = energy(t, c0, c1, Metric());
    t[k] = keep;
    EXPECT_NEAR(g[k], (ep - em) / (2 * h), 1e-6 * std::max(1.0, std::abs(g[k])));
  }
}

TEST(Gradient, ConsistentWithFirstVariation) {
  // dE/dtheta_0 along the one-parameter family of integrated paths is grad . (dtheta_k).
  std::mt19937_64 rng(56);
  const Metric metric;
  const DiscreteCurve c0 = random_normalized_curve(rng, 30);
  const DiscreteCurve c1 = random_normalized_curve(rng, 30);
  const double t0 = 1.2;
  const GeodesicPath p = integrate(c0, c1, metric, t0);
  const auto vars = variations(p, c0, c1, metric);
  const auto g = gradient(p.theta, c0, c1, metric);
  double dir = 0.0;
  for (std::size_t k = 0; k < vars.size(); ++k) dir += g[k] * vars[k].dtheta;
  const double w = p.omega.back();
  dir += g.back() * (vars.back().dtheta + vars.back().domega / (1.0 + 0.25 * w * w));
  const double h = 1e-6;
  const double fd = (integrate(c0, c1, metric, t0 + h).energy - integrate(c0, c1, metric, t0 - h).energy) / (2 * h);
  EXPECT_NEAR(dir, fd, 1e-6 * std::max(1.0, std::abs(fd)));
}

TEST(Backends, Avx2MatchesScalar) {
  if (!avx2_available()) GTEST_SKIP() << "AVX2 not available";
  std::mt19937_64 rng(57);
  for (std::size_t n : {1, 2, 3, 4, 5, 7, 8, 9, 31, 100, 1001}) {
    const DiscreteCurve c0 = random_normalized_curve(rng, n);
    const DiscreteCurve c1 = random_normalized_curve(rng, n);
    const auto t = random_angles(rng, n, 0.5);
    std::vector<double> gs, gv;
    const double es = energy_and_gradient(t, c0, c1, Metric(), gs, Backend::kScalar);
    const double ev = energy_and_gradient(t, c0, c1, Metric(), gv, Backend::kAvx2);
    EXPECT_NEAR(es, ev, 1e-13 * std::max(1.0, es)) << n;
    double scale = 1.0;
    for (double x : gs) scale = std::max(scale, std::abs(x));
    for (std::size_t k = 0; k <= n; ++k) EXPECT_NEAR(gs[k], gv[k], 1e-12 * scale) << n << ' ' << k;
  }
}

TEST(Backends, SweepKernelsAgreeOnRawInput) {
  if (!avx2_available()) GTEST_SKIP() << "AVX2 not available";
  std::mt19937_64 rng(58);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const std::size_t n = 37;
  std::vector<double> w(n), ct(n), st(n), cx(n + 1), cy(n + 1), dx(n), dy(n);
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = u(rng);
    const double t = u(rng);
    ct[k] = std::cos(t);
    st[k] = std::sin(t);
    dx[k] = u(rng);
    dy[k] = u(rng);
  }
  for (std::size_t k = 0; k <= n; ++k) {
    cx[k] = u(rng);
    cy[k] = u(rng);
  }
  const kernels::SweepInput in{w.data(), ct.data(), st.data(), cx.data(), cy.data(), dx.data(), dy.data(), n, 2.0};
  std::vector<double> qs(n), fs(n), qv(n), fv(n);
  const double es = kernels::sweep_scalar(in, {qs.data(), fs.data()});
  const double ev = kernels::sweep_avx2(in, {qv.data(), fv.data()});
  EXPECT_NEAR(es, ev, 1e-12 * es);
  for (std::size_t k = 0; k < n; ++k) {
    EXPECT_NEAR(qs[k], qv[k], 1e-12 * std::max(1.0, std::abs(qs[k])));
    EXPECT_NEAR(fs[k], fv[k], 1e-12 * std::max(1.0, std::abs(fs[k])));
  }
  EXPECT_DOUBLE_EQ(kernels::sweep_avx2(in, {nullptr, nullptr}), ev);
}

TEST(Backends, ResolveAuto) {
  const Backend b = resolve_backend(Backend::kAuto);
  EXPECT_EQ(b, avx2_available() ? Backend::kAvx2 : Backend::kScalar);
  EXPECT_EQ(resolve_backend(Backend::kScalar), Backend::kScalar);
}

TEST(Minimize, StartsAtSolution) {
  std::mt19937_64 rng(59);
  const DiscreteCurve c = random_normalized_curve(rng, 20);
  const MinimizeResult r = minimize(std::vector<double>(21, 0.0), c, c, Metric());
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 0);

  const DiscreteCurve c0 = normalize(sample(CurveSpec::circle(), 100)).first;
  const DiscreteCurve c1 = normalize(sample(CurveSpec::figure_eight(), 100)).first;
  NewtonOptions tight;
  tight.tol = 1e-13;
  const NewtonResult nr = newton_solve(c0, c1, Metric(), 0.7, tight);
  const MinimizeResult s = minimize(nr.path.theta, c0, c1, Metric());
  EXPECT_EQ(s.iterations, 0);
  EXPECT_EQ(s.theta, nr.path.theta);
}

TEST(Minimize, CircleEightFromConstant) {
  const DiscreteCurve c0 = normalize(sample(CurveSpec::circle(), 100)).first;
  const DiscreteCurve c1 = normalize(sample(CurveSpec::figure_eight(), 100)).first;
  const MinimizeResult r = minimize(std::vector<double>(101, 0.76), c0, c1, Metric());
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.energy, 35.1236, 1e-3 * 35.1236);
  const double shoot = discrepancy(c0, c1, Metric()).discrepancy;
  EXPECT_LT(std::abs(r.energy - shoot) / shoot, 1e-3);
  ASSERT_FALSE(r.energy_history.empty());
  EXPECT_LE(r.energy, r.energy_history.front());
  // Monotone up to rounding: near the minimum steps are accepted on the directional derivative.
  for (std::size_t i = 1; i < r.energy_history.size(); ++i) {
    EXPECT_LE(r.energy_history[i], r.energy_history[i - 1] * (1.0 + 1e-13));
  }
}

TEST(Minimize, PointToSemicircle) {
  const DiscreteCurve c0 = sample(CurveSpec::point(), 1000);
  const DiscreteCurve c1 = normalize(sample(CurveSpec::semicircle(), 1000), NormalizeMode::kTranslateOnly).first;
  const MinimizeResult r = minimize(std::vector<double>(1001, 1.0), c0, c1, Metric());
  EXPECT_NEAR(r.energy, kPi * kPi / 2.0, 0.005 * kPi * kPi / 2.0);
}

TEST(Minimize, IterationCapFlagsBestIterate) {
  const DiscreteCurve c0 = normalize(sample(CurveSpec::circle(), 50)).first;
  const DiscreteCurve c1 = normalize(sample(CurveSpec::figure_eight(), 50)).first;
  MinimizeOptions opt;
  opt.max_iter = 3;
  const std::vector<double> init(51, 0.5);
  const MinimizeResult r = minimize(init, c0, c1, Metric(), opt);
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.iterations, 3);
  EXPECT_LE(r.energy, energy(init, c0, c1, Metric()));
}

TEST(Minimize, AgreesWithShootingOnRandomPairs) {
  std::mt19937_64 rng(60);
  for (int i = 0; i < 3; ++i) {
    const DiscreteCurve c0 = random_normalized_curve(rng, 30);
    const DiscreteCurve c1 = random_normalized_curve(rng, 30);
    const DiscrepancyResult d = discrepancy(c0, c1, Metric(), {64});
    const MinimizeResult r = minimize(std::vector<double>(31, d.theta0_min), c0, c1, Metric());
    EXPECT_LT(std::abs(r.energy - d.discrepancy) / std::max(1e-12, d.discrepancy), 1e-3);
  }
}

}  // namespace
}  // namespace relgeo
