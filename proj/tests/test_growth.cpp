#include <catch_amalgamated.hpp>

#include <bol/growth.hpp>

#include <cmath>
#include <numbers>

using namespace bol;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Plain bisection, independent of the library's bracket logic.
template <class F>
double oracle_root(F f, double y, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    double m = 0.5 * (lo + hi);
    (f(m) < y ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

double grid_sup_conjugate(const GrowthFunction& phi, double s) {
  double best = 0.0;
  for (int i = 0; i <= 200000; ++i) {
    double t = 1e-4 * std::pow(1e8, i / 200000.0);
    best = std::max(best, s * t - phi(t));
  }
  return best;
}

}  // namespace

TEST_CASE("indices of power functions", "[growth][indices]") {
  auto [a2, b2, f2] = indices(GrowthFunction::power(2.0));
  CHECK_THAT(a2, WithinAbs(2.0, 1e-12));
  CHECK_THAT(b2, WithinAbs(2.0, 1e-12));
  CHECK_FALSE(f2);
  auto r = indices(GrowthFunction::power(0.5));
  CHECK_THAT(r.a, WithinAbs(0.5, 1e-12));
  CHECK_THAT(r.b, WithinAbs(0.5, 1e-12));
}

TEST_CASE("indices of t^2 log(e+t)", "[growth][indices]") {
  auto phi = GrowthFunction::power_log(2.0, 1.0, std::numbers::e);
  auto r = indices(phi);
  // dense-grid maximum of t/((e+t)log(e+t)) over [1e-8, 1e8]
  double dense = 0.0;
  for (int i = 0; i <= 400000; ++i) {
    double t = std::pow(10.0, -8.0 + 16.0 * i / 400000.0);
    dense = std::max(dense, t / ((std::numbers::e + t) * std::log(std::numbers::e + t)));
  }
  CHECK_THAT(r.a, WithinAbs(2.0, 1e-7));
  CHECK_THAT(r.b, WithinAbs(2.0 + dense, 1e-4));
  CHECK(r.a <= r.b);
}

TEST_CASE("indices reject non-finite evaluations", "[growth][indices]") {
  auto lin_conj = complementary(GrowthFunction::power(1.0));
  CHECK_THROWS_AS(indices(lin_conj), Error);
}

TEST_CASE("inverse", "[growth][inverse]") {
  CHECK(inverse(GrowthFunction::power(2.0), 4.0) == 2.0);
  CHECK_THAT(inverse(GrowthFunction::power(3.0), 8.0), WithinRel(2.0, 1e-14));
  CHECK(inverse(GrowthFunction::power(3.0), 0.0) == 0.0);

  auto phi = GrowthFunction::power_log(1.0, 1.0, std::numbers::e);
  double t = inverse(phi, std::numbers::e);
  double want = oracle_root([](double u) { return u * std::log(std::numbers::e + u); }, std::numbers::e, 0.0, 10.0);
  CHECK_THAT(t, WithinRel(want, 1e-10));
  CHECK_THAT(phi(t), WithinRel(std::numbers::e, 1e-10));

  // Generic bisection path through a custom function.
  auto cube = GrowthFunction::custom([](double u) { return u * u * u; }, [](double u) { return 3 * u * u; }, "t^3");
  for (double y : {1e-12, 1e-3, 0.5, 8.0, 1e9}) CHECK_THAT(cube(cube.inverse(y)), WithinRel(y, 1e-10));
}

TEST_CASE("inverse overflows for bounded functions", "[growth][inverse]") {
  auto bounded = GrowthFunction::custom([](double u) { return u / (1.0 + u); },
                                        [](double u) { return 1.0 / ((1.0 + u) * (1.0 + u)); }, "t/(1+t)");
  try {
    (void)bounded.inverse(2.0);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::overflow);
  }
}

TEST_CASE("complementary functions", "[growth][conjugate]") {
  SECTION("t^2/2 is self-conjugate") {
    auto psi = complementary(GrowthFunction::power(2.0, 0.5));
    for (double s : {0.01, 0.5, 1.0, 3.0, 100.0}) CHECK_THAT(psi(s), WithinRel(0.5 * s * s, 1e-14));
  }
  SECTION("t^3/3 against grid supremum") {
    auto phi = GrowthFunction::power(3.0, 1.0 / 3.0);
    auto psi = complementary(phi);
    auto numeric = GrowthFunction::conjugate_of(phi);
    for (double s : {0.1, 0.7, 2.0, 9.0}) {
      double exact = std::pow(s, 1.5) / 1.5;
      CHECK_THAT(psi(s), WithinRel(exact, 1e-13));
      CHECK_THAT(numeric(s), WithinRel(exact, 1e-10));
      CHECK_THAT(grid_sup_conjugate(phi, s), WithinRel(exact, 1e-6));
    }
  }
  SECTION("linear growth gives an extended-value conjugate") {
    auto psi = complementary(GrowthFunction::power(1.0));
    CHECK(psi.finite_threshold() == 1.0);
    CHECK(psi(0.3) == 0.0);
    CHECK(psi(1.0) == 0.0);
    CHECK(std::isinf(psi(1.0001)));
  }
}

TEST_CASE("double conjugation of power functions", "[growth][conjugate][property]") {
  for (double p : {1.5, 2.0, 3.0, 4.5}) {
    auto phi = GrowthFunction::power(p, 1.0 / p);
    auto twice_analytic = complementary(complementary(phi));
    auto twice_numeric = GrowthFunction::conjugate_of(GrowthFunction::conjugate_of(phi));
    for (std::size_t i = 0; i < standard_grid().size(); i += 7) {
      double t = standard_grid()[i];
      CHECK_THAT(twice_analytic(t), WithinRel(phi(t), 1e-6));
      if (t > 1e-4 && t < 1e4) CHECK_THAT(twice_numeric(t), WithinRel(phi(t), 1e-6));
    }
  }
}

TEST_CASE("Young inequality with equality at t = Phi'(s)", "[growth][conjugate][property]") {
  std::vector<GrowthFunction> fams{GrowthFunction::power(2.0), GrowthFunction::power(3.5, 0.2),
                                   GrowthFunction::power_log(2.0, 1.0, std::numbers::e)};
  auto grid = log_grid(1e-3, 1e3, 40);
  for (const auto& phi : fams) {
    auto psi = complementary(phi);
    for (double s : grid) {
      for (double t : grid) CHECK(s * t <= (phi(s) + psi(t)) * (1.0 + 1e-10));
      double t = phi.derivative(s);
      CHECK_THAT(phi(s) + psi(t), WithinRel(s * t, 1e-6));
    }
  }
}

TEST_CASE("derivative consistency", "[growth][property]") {
  std::vector<GrowthFunction> fams{GrowthFunction::power(2.5), GrowthFunction::power_log(1.5, 2.0, 3.0),
                                   GrowthFunction::power_transformed(GrowthFunction::power_log(2.0, 1.0, 2.0), 0.7),
                                   GrowthFunction::composed_inverse(GrowthFunction::power(3.0),
                                                                    GrowthFunction::power_log(1.0, 1.0, 2.0))};
  for (const auto& phi : fams) {
    for (std::size_t i = 0; i < standard_grid().size(); i += 5) {
      double t = standard_grid()[i];
      double h = 1e-6 * t;
      double fd = (phi(t + h) - phi(t - h)) / (2 * h);
      CHECK(std::abs(phi.derivative(t) - fd) / phi.derivative(t) <= 1e-6);
    }
  }
}

TEST_CASE("regularity report", "[growth][regularity]") {
  SECTION("power functions") {
    for (double p : {1.5, 2.0, 3.0}) {
      auto r = regularity_report(GrowthFunction::power(p));
      CHECK(r.delta2.first);
      CHECK_THAT(r.delta2.second, WithinRel(std::pow(2.0, p), 1e-12));
      CHECK(r.nabla2.first);
      CHECK_THAT(r.nabla2.second, WithinRel(1.0 / (p - 1.0), 1e-8));
      CHECK_THAT(r.indices.a, WithinAbs(p, 1e-9));
      CHECK_THAT(r.indices.b, WithinAbs(p, 1e-9));
      CHECK(r.in_U);
    }
  }
  SECTION("linear function fails nabla2") {
    auto r = regularity_report(GrowthFunction::power(1.0));
    CHECK_FALSE(r.nabla2.first);
    CHECK(std::isinf(r.nabla2.second));
  }
  SECTION("types bracket the indices") {
    auto phi = GrowthFunction::power_log(2.0, 1.0, std::numbers::e);
    auto r = regularity_report(phi);
    CHECK(r.lower_type.p <= r.indices.a + 1e-3);
    CHECK(r.upper_type.p >= r.indices.b - 1e-3);
    CHECK(r.lower_type.exists);
    CHECK(r.upper_type.exists);
    CHECK(r.lower_type.C <= 1.0 + 1e-6);
    CHECK(r.upper_type.C <= 1.0 + 1e-6);
    CHECK(r.indices.a <= r.indices.b);
  }
}

TEST_CASE("integral growth condition for power pairs", "[growth][condition18]") {
  auto c = condition18_check(GrowthFunction::power(2.0), GrowthFunction::power(1.0));
  CHECK(c.holds);
  CHECK_THAT(c.C, WithinRel(1.0, 1e-8));
  CHECK(c.ratio_monotone);

  auto c2 = condition18_check(GrowthFunction::power(3.0), GrowthFunction::power(2.0));
  CHECK(c2.holds);
  CHECK_THAT(c2.C, WithinRel(2.0 / (3.0 - 2.0), 1e-8));

  auto c3 = condition18_check(GrowthFunction::power(1.0), GrowthFunction::power(1.0));
  CHECK_FALSE(c3.holds);
  CHECK(c3.divergence_exponent < 1e-3);

  auto c4 = condition18_check(GrowthFunction::power(1.5), GrowthFunction::power(2.0));
  CHECK_FALSE(c4.holds);
  CHECK_FALSE(c4.ratio_monotone);
}

TEST_CASE("power transform", "[growth][power_transform]") {
  auto t2 = GrowthFunction::power(2.0);
  auto one = power_transform(t2, 1.0);
  auto two = power_transform(t2, 2.0);
  auto from_cube = power_transform(GrowthFunction::power(3.0), 2.0);
  for (double t : {0.01, 0.5, 2.0, 77.0}) {
    CHECK_THAT(one(t), WithinRel(t, 1e-14));
    CHECK_THAT(two(t), WithinRel(t * t, 1e-14));
    CHECK_THAT(from_cube(t), WithinRel(t * t, 1e-14));
  }
  auto generic = power_transform(GrowthFunction::power_log(1.0, 1.0, 2.0), 2.0);
  auto r = regularity_report(generic);
  CHECK(r.nabla2.first);
  CHECK(r.in_U);
  CHECK_THROWS_AS(power_transform(t2, 0.0), Error);
}

TEST_CASE("equivalence check", "[growth][equivalence]") {
  auto t2 = GrowthFunction::power(2.0);
  CHECK(equivalence_check(t2, t2, 1.0));
  CHECK(equivalence_check(t2, GrowthFunction::power(2.0, 2.0), 2.0));
  CHECK_FALSE(equivalence_check(GrowthFunction::power(1.0), t2, 10.0));
  CHECK_FALSE(equivalence_check(GrowthFunction::power(1.0), t2, 1000.0));
}

TEST_CASE("custom functions are validated", "[growth][custom]") {
  CHECK_THROWS_AS(GrowthFunction::custom([](double) { return 1.0; }, [](double) { return 0.0; }), Error);
  CHECK_THROWS_AS(GrowthFunction::custom([](double t) { return t; }, nullptr), Error);
  CHECK_THROWS_AS(GrowthFunction::power(-1.0), Error);
  CHECK_THROWS_AS(GrowthFunction::conjugate_of(GrowthFunction::power(0.5)), Error);
}
