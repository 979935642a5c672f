#include <catch_amalgamated.hpp>

#include <bol/lattice.hpp>

#include <cmath>

using namespace bol;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("gamma interval and build", "[lattice]") {
  auto gi = gamma_interval(0.5);
  // independent arithmetic
  double lo = std::log(1.0125 / 0.9875) / (4 * std::log(2.0));
  double hi = std::log(1.0625 / 0.9375) / (4 * std::log(2.0));
  CHECK_THAT(gi.lo, WithinRel(lo, 1e-14));
  CHECK_THAT(gi.hi, WithinRel(hi, 1e-14));
  auto lat = DeltaLattice::build(0.5, 3, 2);
  CHECK_THAT(lat.gamma(), WithinRel(0.5 * (lo + hi), 1e-14));
  CHECK_THAT(lat.s_delta(), WithinRel(std::pow(1.0125, 0.25) - 1, 1e-14));
  CHECK(lat.point(0, 0).x == 0.0);
  CHECK(lat.point(0, 0).y == 1.0);
  CHECK_THAT(lat.point(1, 0).x, WithinRel(0.03125, 1e-15));
  CHECK_THAT(lat.point(-2, 1).y, WithinRel(std::exp2(lat.gamma()), 1e-15));
  CHECK(lat.size() == 35);
}

TEST_CASE("gamma outside the window is rejected", "[lattice]") {
  auto gi = gamma_interval(0.3);
  try {
    (void)DeltaLattice::build(0.3, 2, 2, gi.hi * 1.01);
    FAIL("expected parameter error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parameter);
    CHECK(e.detail().find("admissible interval") != std::string::npos);
  }
  CHECK_THROWS_AS(DeltaLattice::build(0.3, 2, 2, gi.lo), Error);
  CHECK_NOTHROW(DeltaLattice::build(0.3, 2, 2, 0.5 * (gi.lo + gi.hi)));
  CHECK_THROWS_AS(DeltaLattice::build(1.0, 2, 2), Error);
  CHECK_THROWS_AS(DeltaLattice::build(0.5, -1, 2), Error);
}

TEST_CASE("cells", "[lattice][cells]") {
  auto lat = DeltaLattice::build(0.5, 5, 5);
  auto c = lat.cells(3, 0);
  CHECK_THAT(c.I.length(), WithinRel(0.125, 1e-14));
  CHECK_THAT(c.J.length(), WithinRel(0.125, 1e-14));
  CHECK_THAT(c.I_prime.length(), WithinRel(0.025, 1e-14));
  CHECK(c.I.contains(lat.point(3, 0).x));
  CHECK(c.J.contains(lat.point(3, 0).y));
  CHECK_THROWS_AS(lat.cells(6, 0), Error);
  for (int j = -5; j <= 5; ++j) {
    auto cj = lat.cells(0, j);
    CHECK(cj.J_prime.subset_of(cj.J));
    CHECK_THAT(cj.I.length(), WithinRel(0.125 * lat.height(j), 1e-14));
    if (j < 5) CHECK(cj.J_prime.disjoint(lat.cells(0, j + 1).J_prime));
    CHECK(lat.horizontal_count(0.0, j) <= 4);
    for (int l = -4; l < 5; ++l) {
      CHECK(lat.cells(l, j).I_prime.subset_of(lat.cells(l, j).I));
      CHECK(lat.cells(l, j).I_prime.disjoint(lat.cells(l + 1, j).I_prime));
    }
  }
}

TEST_CASE("horizontal and vertical counts", "[lattice][cells]") {
  for (double d : {0.1, 0.3, 0.5, 0.9}) {
    auto lat = DeltaLattice::build(d, 10, 10);
    int nmax = 0;
    for (int k = 0; k < 4000; ++k) {
      double y = std::pow(10.0, -3.0 + 6.0 * (k + 0.5) / 4000.0);
      int n = static_cast<int>(lat.rows_containing(y).size());
      CHECK(n >= 1);
      nmax = std::max(nmax, n);
      CHECK(lat.horizontal_count(0.37 * y, 1) <= 4);
    }
    // the same bound in every decade
    for (int dec = -3; dec < 3; ++dec) {
      int m = 0;
      for (int k = 0; k < 1000; ++k) m = std::max(m, (int)lat.rows_containing(std::pow(10.0, dec + k / 1000.0)).size());
      CHECK(m == nmax);
    }
  }
}

TEST_CASE("covering report", "[lattice][covering]") {
  auto lat = DeltaLattice::build(0.3, 50, 10);
  auto rep = covering_report(lat, Region::box(-1, 1, 0.1, 10), 10000, 42);
  CHECK(rep.disjoint_ok);
  CHECK(rep.cover_fraction == 1.0);
  CHECK(rep.samples == 10000);
  CHECK(rep.violations.empty());
  CHECK(rep.seed == 42);

  auto single = DeltaLattice::build(0.3, 0, 0);
  auto r1 = covering_report(single, Region::whole(), 2000, 1);
  CHECK(r1.max_overlap <= 1);
  CHECK(r1.cover_fraction == 1.0);

  CHECK_THROWS_AS(covering_report(lat, Region::box(50, 60, 0.1, 10), 10, 1), Error);
}

TEST_CASE("overlap bound does not depend on the region size", "[lattice][covering]") {
  for (double d : {0.1, 0.5}) {
    auto lat = DeltaLattice::build(d, 50, 10);
    auto z = lat.covered_bbox();
    double cx = 0.0, cy = 0.5 * (z.y0 + z.y1), hx = 0.25 * (z.x1 - z.x0), hy = 0.25 * (z.y1 - z.y0);
    auto small = covering_report(lat, Region::box(cx - hx / 2, cx + hx / 2, cy - hy / 2, cy + hy / 2), 10000, 9);
    auto big = covering_report(lat, Region::box(cx - hx, cx + hx, cy - hy, cy + hy), 10000, 9);
    INFO("delta " << d << " small " << small.max_overlap << " big " << big.max_overlap);
    CHECK(big.max_overlap <= small.max_overlap);
    CHECK(small.cover_fraction == 1.0);
    CHECK(big.cover_fraction == 1.0);
  }
}
