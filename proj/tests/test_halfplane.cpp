#include <catch_amalgamated.hpp>

#include <bol/halfplane.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace bol;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
constexpr double pi = std::numbers::pi;

TEST_CASE("points and disks", "[halfplane]") {
  CHECK_THROWS_AS(HPoint(0.0, 0.0), Error);
  CHECK_THROWS_AS(HPoint(0.0, -1.0), Error);
  HPoint z(1.0, 2.0);
  auto d = hyperbolic_disk(z, 0.5);
  CHECK(d.radius == 1.0);
  CHECK(d.contains(HPoint(1.2, 2.3)));
  CHECK_FALSE(d.contains(HPoint(3.0, 2.0)));
  CHECK_THROWS_AS(Region::disk(hyperbolic_disk(z, 1.0)), Error);
}

TEST_CASE("beta function", "[halfplane][beta]") {
  CHECK_THAT(beta(1, 1), WithinRel(1.0, 1e-15));
  CHECK_THAT(beta(0.5, 0.5), WithinRel(pi, 1e-14));
  CHECK_THAT(beta(2, 3), WithinRel(1.0 / 12.0, 1e-14));
  CHECK_THAT(beta_by_quadrature(0.5, 0.5), WithinRel(pi, 1e-10));
  CHECK_THAT(beta_by_quadrature(2, 3), WithinRel(1.0 / 12.0, 1e-10));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.05, 6.0);
  for (int i = 0; i < 30; ++i) {
    double m = u(rng), n = u(rng);
    CHECK_THAT(beta_by_quadrature(m, n), WithinRel(beta(m, n), 1e-10));
  }
  CHECK_THROWS_AS(beta(0.0, 1.0), Error);
}

TEST_CASE("J and I closed forms", "[halfplane][beta]") {
  CHECK_THAT(j_closed_form(1.0, 2.0), WithinRel(pi, 1e-14));
  CHECK_THAT(j_closed_form(2.0, 4.0), WithinRel(pi / 16.0, 1e-14));
  CHECK_THAT(j_by_quadrature(2.0, 4.0), WithinRel(pi / 16.0, 1e-10));
  try {
    (void)j_closed_form(1.0, 1.0);
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::divergence);
  }
  CHECK_THAT(i_closed_form(2.0, 0.0, 2.0), WithinRel(0.5, 1e-14));
  CHECK_THAT(i_by_quadrature(2.0, 0.0, 2.0), WithinRel(0.5, 1e-10));
  CHECK_THAT(i_closed_form(1.0, 1.0, 4.0), WithinRel(1.0 / 6.0, 1e-14));
  CHECK_THROWS_AS(i_closed_form(1.0, -1.0, 4.0), Error);
  CHECK_THROWS_AS(i_closed_form(1.0, 0.0, 1.0), Error);
  CHECK_THAT(i_by_quadrature(0.3, -0.6, 1.1), WithinRel(i_closed_form(0.3, -0.6, 1.1), 1e-9));
}

TEST_CASE("integrate over boxes and Carleson squares", "[halfplane][integrate]") {
  auto one = [](double, double) { return 1.0; };
  CHECK_THAT(integrate(one, 0.0, Region::carleson({0.0, 1.0})).value, WithinRel(1.0, 1e-12));
  CHECK_THAT(integrate(one, 1.0, Region::carleson({3.0, 2.0})).value, WithinRel(4.0, 1e-12));
  CHECK_THAT(integrate(one, -0.5, Region::box(0, 1, 0, 1)).value, WithinRel(2.0, 1e-10));
  auto xy = [](double x, double y) { return x * x * std::cos(y); };
  CHECK_THAT(integrate(xy, 0.0, Region::box(-1, 2, 0.5, 1.5)).value,
             WithinRel(3.0 * (std::sin(1.5) - std::sin(0.5)), 1e-10));
}

TEST_CASE("integrate over the whole half-plane", "[halfplane][integrate]") {
  auto f = [](double x, double y) { return std::pow(x * x + (1 + y) * (1 + y), -2.0); };
  auto r = integrate(f, 0.0, Region::whole());
  CHECK_THAT(r.value, WithinRel(pi / 4.0, 1e-9));

  // Iterated closed forms: int int y^a |x + i(t+y)|^-c = J_c(t+y) chain into I.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(-0.7, 2.0), uc(0.0, 3.0), ut(0.2, 3.0);
  for (int i = 0; i < 20; ++i) {
    double a = ua(rng), t = ut(rng);
    double c = a + 3.0 + uc(rng);  // need c - 1 - a > 1
    auto g = [&](double x, double y) { return std::pow(x * x + (t + y) * (t + y), -0.5 * c); };
    double exact = beta(0.5, 0.5 * (c - 1.0)) * i_closed_form(t, a, c - 1.0);
    IntegrateOptions o;
    o.tol = 1e-9;
    MeshHints h;
    h.x_scale = t;
    CHECK_THAT(integrate(g, a, Region::whole(), o, h).value, WithinRel(exact, 1e-7));
  }
}

TEST_CASE("disk measure", "[halfplane][disk]") {
  auto d = hyperbolic_disk(HPoint(0, 1), 0.5);
  CHECK_THAT(disk_measure(d, 0.0), WithinRel(pi / 4.0, 1e-12));
  CHECK_THAT(disk_measure(d, 1.0), WithinRel(pi / 4.0, 1e-12));
  for (double alpha : {-0.5, 0.0, 1.5}) {
    double r1 = disk_measure(hyperbolic_disk(HPoint(0, 1), 0.3), alpha);
    double r2 = disk_measure(hyperbolic_disk(HPoint(2, 4), 0.3), alpha) / std::pow(4.0, 2.0 + alpha);
    CHECK_THAT(r2, WithinRel(r1, 1e-10));
  }
}

TEST_CASE("hyperbolic disk relations", "[halfplane][property]") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double k = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 1000; ++i) {
    double s = 0.95 * u(rng) + 0.01;
    HPoint z(4 * u(rng) - 2, std::exp(6 * u(rng) - 3));
    double r = s * z.y * std::sqrt(u(rng)), th = 2 * pi * u(rng);
    HPoint w(z.x + r * std::cos(th), z.y + r * std::sin(th));
    CHECK(k * (1 - s) * z.y < w.y);
    CHECK(w.y < z.y / (k * (1 - s)));
  }
  for (int i = 0; i < 1000; ++i) {
    double s = u(rng) / (1 + std::sqrt(2.0)) * 0.999;
    double s2 = s / (k * (1 - s));
    HPoint z(4 * u(rng) - 2, std::exp(6 * u(rng) - 3));
    double r = s * z.y * std::sqrt(u(rng)), th = 2 * pi * u(rng);
    HPoint w(z.x + r * std::cos(th), z.y + r * std::sin(th));
    CHECK(hyperbolic_disk(w, s2).contains(z));
  }
  for (int i = 0; i < 200; ++i) {
    double s = u(rng) / (1 + std::sqrt(2.0)) * 0.999;
    double s2 = s / (k * (1 - s));
    HPoint z(4 * u(rng) - 2, std::exp(6 * u(rng) - 3));
    double r = 0.5 * s * z.y * std::sqrt(u(rng)), th = 2 * pi * u(rng);
    HPoint w(z.x + r * std::cos(th), z.y + r * std::sin(th));
    auto big = hyperbolic_disk(w, s2);
    for (int b = 0; b < 64; ++b) {
      double phi = 2 * pi * b / 64;
      double bx = z.x + 0.5 * s * z.y * std::cos(phi), by = z.y + 0.5 * s * z.y * std::sin(phi);
      CHECK(big.contains(bx, by));
    }
  }
}

TEST_CASE("slowly decaying tails", "[halfplane][beta]") {
  // x^-1.2 tails defeat the tan map; the algebraic tail removes the power exactly
  for (double y : {0.1, 3.0}) CHECK_THAT(j_by_quadrature(y, 1.2, 1e-10), WithinRel(j_closed_form(y, 1.2), 1e-9));
  CHECK_THAT(i_by_quadrature(1.0, 0.0, 1.2, 1e-10), WithinRel(i_closed_form(1.0, 0.0, 1.2), 1e-9));
  CHECK_THAT(i_by_quadrature(0.1, -0.8, 0.4, 1e-10), WithinRel(i_closed_form(0.1, -0.8, 0.4), 1e-9));
  auto s = quad::tail_segment(2.0, 1.5);
  CHECK(s.kind == quad::MapKind::algebraic);
  CHECK(quad::tail_segment(2.0, 3.0).kind == quad::MapKind::tan);
}
