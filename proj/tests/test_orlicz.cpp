#include <catch_amalgamated.hpp>

#include <bol/bergman.hpp>
#include <bol/orlicz.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace bol;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
constexpr double pi = std::numbers::pi;

namespace {
Field g_abs(double eps, double m) {
  return [eps, m](double x, double y) { return std::abs(g_eps_m(cplx(x, y), eps, m)); };
}
}  // namespace

TEST_CASE("modular on simple measures", "[orlicz][modular]") {
  auto one = [](double, double) { return 1.0; };
  auto sq = GrowthFunction::power(2.0);
  auto mu = MeasureSpec::valpha(0.0, Region::carleson({0.0, 1.0}));
  CHECK_THAT(modular(one, mu, sq), WithinRel(1.0, 1e-12));
  CHECK_THAT(luxembourg(one, mu, sq).value, WithinRel(1.0, 1e-12));

  auto q2 = MeasureSpec::valpha(1.0, Region::carleson({0.0, 2.0}));
  CHECK_THAT(luxembourg(one, q2, sq).value, WithinRel(2.0, 1e-12));

  auto dirac = MeasureSpec::atomic({{HPoint(0, 1), 1.0}});
  auto two = [](double, double) { return 2.0; };
  CHECK_THAT(modular(two, dirac, GrowthFunction::power(3.0)), WithinRel(8.0, 1e-15));
  CHECK(modular(two, MeasureSpec::zero(), sq) == 0.0);
}

TEST_CASE("modular of G_{eps,m} over the half-plane", "[orlicz][modular]") {
  auto sq = GrowthFunction::power(2.0);
  auto h = AnalyticFn::g(1.0, 3.0).hints();
  CHECK_THAT(modular(g_abs(1.0, 3.0), MeasureSpec::valpha(0.0), sq, 1e-10, h), WithinRel(3.0 * pi / 32.0, 1e-8));
  for (auto [eps, m, p, a] : {std::tuple{0.5, 2.0, 2.0, 0.0}, {2.0, 3.0, 1.5, 1.0}, {1.0, 4.0, 1.0, -0.5}}) {
    auto hh = AnalyticFn::g(eps, m).hints();
    double got = modular(g_abs(eps, m), MeasureSpec::valpha(a), GrowthFunction::power(p), 1e-10, hh);
    CHECK_THAT(got, WithinRel(g_modular_exact(eps, m, p, a), 1e-7));
  }
}

TEST_CASE("Luxembourg norm scaling", "[orlicz][lux]") {
  auto mu = MeasureSpec::valpha(0.5, Region::box(-1, 2, 0.1, 3));
  auto f = [](double x, double y) { return 1.0 + x * x + std::sin(y); };
  auto phi = GrowthFunction::power_log(2.0, 1.0, std::exp(1.0));
  double n1 = luxembourg(f, mu, phi).value;
  for (double c : {0.01, 3.0, 250.0}) {
    auto fc = [&](double x, double y) { return c * f(x, y); };
    CHECK_THAT(luxembourg(fc, mu, phi).value, WithinRel(c * n1, 1e-9));
  }
  // the norm is where the modular crosses one
  auto r = luxembourg(f, mu, phi);
  CHECK_THAT(modular([&](double x, double y) { return f(x, y) / r.value; }, mu, phi), WithinRel(1.0, 1e-8));
  auto zero = [](double, double) { return 0.0; };
  CHECK(luxembourg(zero, mu, phi).value == 0.0);
}

TEST_CASE("modular versus norm", "[orlicz][lux][property]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 4.0);
  auto mu = MeasureSpec::valpha(0.0, Region::box(0, 1, 0.5, 1.5));
  auto phi = GrowthFunction::power(3.0);
  for (int i = 0; i < 10; ++i) {
    double c = u(rng), k = u(rng);
    auto f = [&](double x, double y) { return c * std::exp(-k * x * y); };
    double n = luxembourg(f, mu, phi).value, m = modular(f, mu, phi);
    if (n <= 1.0)
      CHECK(m <= n * (1 + 1e-9));
    else
      CHECK(m >= n * (1 - 1e-9));
  }
}

TEST_CASE("Orlicz Holder inequality", "[orlicz][property]") {
  auto mu = MeasureSpec::valpha(1.0, Region::box(-2, 2, 0.2, 2));
  auto phi = GrowthFunction::power(3.0);
  auto psi = complementary(phi);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int i = 0; i < 5; ++i) {
    double a = u(rng), b = u(rng);
    auto f = [&](double x, double y) { return std::exp(-a * x * x) * y; };
    auto g = [&](double x, double y) { return 1.0 / (b + x * x + y); };
    double lhs = integrate_measure([&](double x, double y) { return f(x, y) * g(x, y); }, mu);
    double rhs = 2.0 * luxembourg(f, mu, phi).value * luxembourg(g, mu, psi).value;
    CHECK(lhs <= rhs);
  }
}

TEST_CASE("Mobius pullback measure", "[orlicz][mobius]") {
  // int g dmu_phi = int g(phi(z)) dV_beta(z)
  auto g = [](double x, double y) { return std::abs(g_eps_m(cplx(x, y), 1.0, 4.0)); };
  IntegrateOptions o;
  o.tol = 1e-9;
  {
    auto mu = MeasureSpec::mobius(2, 0, 0, 1, 0.5);
    double lhs = integrate_measure(g, mu, o, AnalyticFn::g(1.0, 4.0).hints());
    double rhs = integrate([&](double x, double y) { return g(2 * x, 2 * y); }, 0.5, Region::whole(), o,
                           AnalyticFn::g(2.0, 4.0).hints()).value;
    CHECK_THAT(lhs, WithinRel(rhs, 1e-7));
  }
  {
    auto mu = MeasureSpec::mobius(1, 0, 0, 1, 1.0, 1.0);  // z + i
    double lhs = integrate_measure(g, mu, o, AnalyticFn::g(1.0, 4.0).hints());
    double rhs = integrate([&](double x, double y) { return g(x, y + 1); }, 1.0, Region::whole(), o).value;
    CHECK_THAT(lhs, WithinRel(rhs, 1e-7));
  }
  {
    // (z - 1)/(z + 1) sends infinity to 1, so weight the test function to vanish there
    auto h = [&](double x, double y) {
      cplx w(x, y);
      return g(x, y) * std::pow(std::abs((w - 1.0) / (w + cplx(0, 1))), 3.0);
    };
    auto mu = MeasureSpec::mobius(1, -1, 1, 1, 0.0);
    double lhs = integrate_measure(h, mu, o);
    MobiusMeasure m{1, -1, 1, 1, 0.0, 0.0};
    double rhs = integrate([&](double x, double y) {
      cplx w = m.phi(cplx(x, y));
      return h(w.real(), w.imag());
    }, 0.0, Region::whole(), o).value;
    CHECK_THAT(lhs, WithinRel(rhs, 1e-6));
  }
  CHECK_THROWS_AS(MeasureSpec::mobius(1, 1, 1, 1, 0.0), Error);
}

TEST_CASE("lattice sequence norms", "[orlicz][sequence]") {
  auto lat = DeltaLattice::build(0.5, 4, 4);
  auto sq = GrowthFunction::power(2.0);
  LatticeSequence s(lat);
  s.set(0, 0, 1.0);
  CHECK_THAT(seq_luxembourg(s, sq, 0.0).value, WithinRel(1.0, 1e-14));
  s.set(1, 0, cplx(0.0, 1.0));
  CHECK_THAT(seq_luxembourg(s, sq, 0.7).value, WithinRel(std::sqrt(2.0), 1e-14));
  LatticeSequence t(lat);
  t.set(2, 1, 1.0);
  CHECK_THAT(seq_luxembourg(t, sq, 0.0).value, WithinRel(std::exp2(lat.gamma()), 1e-14));
  CHECK_THAT(seq_luxembourg(t * 3.0, sq, 0.0).value, WithinRel(3.0 * std::exp2(lat.gamma()), 1e-14));
  CHECK(seq_luxembourg(LatticeSequence(lat), sq, 0.0).value == 0.0);
  try {
    s.set(5, 0, 1.0);
    FAIL("expected range error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::range);
  }
  s.set(0, 0, 0.0);
  CHECK(s.size() == 1);
}

TEST_CASE("Hardy-Orlicz lines", "[orlicz][hardy]") {
  auto sq = GrowthFunction::power(2.0);
  auto scale = [](double y) { return 1.0 + y; };
  auto h = hardy_norm(g_abs(1.0, 2.0), sq, default_hardy_grid(), scale);
  REQUIRE(h.per_line.size() == 16);
  for (std::size_t i = 0; i < h.per_line.size(); ++i) {
    double exact = std::sqrt(0.5 * pi * std::pow(1.0 + h.y_grid[i], -3.0));
    CHECK_THAT(h.per_line[i], WithinRel(exact, 1e-8));
    if (i) CHECK(h.per_line[i] <= h.per_line[i - 1]);
  }
  CHECK_THAT(h.sup, WithinRel(h.per_line.front(), 1e-15));

  try {
    (void)hardy_norm(g_abs(1.0, 1.0), GrowthFunction::power(1.0), {1.0}, scale);
    FAIL("expected not_in_space");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_in_space);
    CHECK(e.detail().find("y=1") != std::string::npos);
  }
}
