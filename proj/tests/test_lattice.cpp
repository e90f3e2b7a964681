#include <doctest.h>

#include "gaplab/lattice.hpp"

using namespace gaplab;

namespace {

// independent ball enumeration used as the oracle for the dimension constant
double dimension_constant_oracle(const Lattice& lat, int d) {
  double c = 0.0;
  for (int x = 0; x < lat.num_sites(); ++x) {
    for (int r = 1; r <= lat.diameter(); ++r) {
      int ball = 0;
      for (int y = 0; y < lat.num_sites(); ++y)
        if (lat.dist(x, y) <= r) ++ball;
      c = std::max(c, (ball - 1.0) / std::pow(static_cast<double>(r), d));
    }
  }
  return c;
}

}  // namespace

TEST_CASE("chain construction and path metric") {
  Lattice single = build_chain(1);
  CHECK(single.num_sites() == 1);
  CHECK(single.dist(0, 0) == 0);

  Lattice c4 = build_chain(4);
  CHECK(c4.dist(0, 3) == 3);
  CHECK(c4.diameter() == 3);

  Lattice c8 = build_chain(8);
  CHECK(c8.total_dim() == 256);

  CHECK_THROWS(build_chain(0));
}

TEST_CASE("distance table is a metric") {
  for (const Lattice& lat : {build_chain(6), build_grid(3, 3), build_ring(7)}) {
    for (int i = 0; i < lat.num_sites(); ++i) {
      CHECK(lat.dist(i, i) == 0);
      for (int j = 0; j < lat.num_sites(); ++j) {
        CHECK(lat.dist(i, j) == lat.dist(j, i));
        if (i != j) CHECK(lat.dist(i, j) > 0);
        for (int k = 0; k < lat.num_sites(); ++k)
          CHECK(lat.dist(i, k) <= lat.dist(i, j) + lat.dist(j, k));
      }
    }
  }
}

TEST_CASE("set distance and diameter") {
  Lattice lat = build_chain(8);
  CHECK(lat.set_distance(SiteSet{2}, SiteSet{5}) == 3);
  CHECK(lat.set_distance(SiteSet{2, 3}, SiteSet{}) == kDistInf);
  CHECK(lat.set_distance(SiteSet{}, SiteSet{}) == kDistInf);
  CHECK(lat.set_distance(SiteSet{1, 4}, SiteSet{4, 6}) == 0);

  CHECK(lat.set_diameter(SiteSet{3}) == 0);
  CHECK(lat.set_diameter(SiteSet{0, 4}) == 4);
  CHECK(lat.set_diameter(SiteSet{}) == 0);
}

TEST_CASE("fattening") {
  Lattice lat = build_chain(9);
  CHECK(lat.fatten(SiteSet{4}, 1) == SiteSet{3, 4, 5});
  CHECK(lat.fatten(SiteSet{4}, 100) == lat.all_sites());
  CHECK(lat.fatten(SiteSet{}, 3).empty());
  CHECK(lat.fatten(SiteSet{2, 6}, 0) == SiteSet{2, 6});

  // additivity on the path metric
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      CHECK(lat.fatten(lat.fatten(SiteSet{1, 5}, m), n) == lat.fatten(SiteSet{1, 5}, m + n));
}

TEST_CASE("zero set distance iff shared site for nonempty sets on a chain") {
  Lattice lat = build_chain(6);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      SiteSet x{a, (a + 2) % 6};
      SiteSet y{b};
      bool zero = lat.set_distance(x, y) == 0;
      bool shares = !x.intersect(y).empty();
      CHECK(zero == shares);
    }
}

TEST_CASE("dimension constant") {
  Lattice c9 = build_chain(9);
  CHECK(c9.dimension_constant(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(c9.dimension_constant(1) == doctest::Approx(dimension_constant_oracle(c9, 1)));

  Lattice single = build_chain(1);
  CHECK(single.dimension_constant(1) == 0.0);

  Lattice g33 = build_grid(3, 3);
  double oracle = dimension_constant_oracle(g33, 2);
  CHECK(g33.dimension_constant(2) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(oracle == doctest::Approx(4.0));  // center ball of radius 1 has 5 sites
}

TEST_CASE("explicit lattice validates edges and flags disconnection") {
  Lattice two(2, {}, 2);
  CHECK_FALSE(two.connected());
  CHECK(two.dist(0, 1) == kDistInf);
  CHECK_THROWS(Lattice(2, {{0, 0}}, 2));
  CHECK_THROWS(Lattice(2, {{0, 5}}, 2));
}
