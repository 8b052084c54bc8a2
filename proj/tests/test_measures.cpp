#include "doctest.h"

#include <cmath>

#include "support/fixtures.hpp"
#include "support/reference.hpp"
#include "glotsal/measures.hpp"

using namespace glotsal;

namespace {

constexpr double kTol = 1e-6;

VelocityField uniform_field(int w, int h, Eigen::Vector2d v) {
  VelocityField f = VelocityField::zeros(w, h);
  f.vx.setConstant(v.x());
  f.vy.setConstant(v.y());
  f.valid.setConstant(true);
  return f;
}

// Straight rightward chain of n elements along row 1 starting at x = 0.
std::vector<std::pair<Pixel, int>> row(int n, std::vector<int> skip = {}) {
  std::vector<std::pair<Pixel, int>> on;
  for (int k = 0; k < n; ++k) {
    if (std::find(skip.begin(), skip.end(), k) == skip.end()) on.push_back({{k, 1}, 0});
  }
  return on;
}

}  // namespace

TEST_CASE("su_measure") {
  NetworkParams p;
  SUBCASE("single active element") {
    const ElementLattice lat = fixture::with_active(4, 3, row(1), p);
    CHECK(su_measure(fixture::chain(lat, {0, 1}, {0}), lat, p) == doctest::Approx(1.0).epsilon(kTol));
  }
  SUBCASE("five straight active elements") {
    const ElementLattice lat = fixture::with_active(7, 3, row(5), p);
    CHECK(su_measure(fixture::chain(lat, {0, 1}, {0, 0, 0, 0, 0}), lat, p) == doctest::Approx(5.0).epsilon(kTol));
  }
  SUBCASE("active, virtual, active") {
    const ElementLattice lat = fixture::with_active(5, 3, row(3, {1}), p);
    CHECK(std::fabs(su_measure(fixture::chain(lat, {0, 1}, {0, 0, 0}), lat, p) - 1.7) < kTol);
  }
  SUBCASE("a turn costs its curvature factor") {
    const ElementLattice lat = fixture::with_active(5, 5, {{{0, 1}, 0}, {{1, 1}, 1}}, p);
    const double expected = 1.0 + std::exp(-std::pow(3.141592653589793 / 4, 2));
    CHECK(su_measure(fixture::chain(lat, {0, 1}, {0, 1}), lat, p) == doctest::Approx(expected));
  }
  SUBCASE("invalid curves are rejected") {
    const ElementLattice lat = fixture::with_active(5, 3, {}, p);
    CHECK_THROWS_AS(su_measure(Curve{}, lat, p), TopologyError);
    CHECK_THROWS_AS(su_measure(fixture::chain(lat, {1, 1}, {0, 4}), lat, p), TopologyError);
  }
}

TEST_CASE("angular_distance") {
  CHECK(angular_distance({0.3, 0.4}, {0.3, 0.4}) == doctest::Approx(1.0).epsilon(kTol));
  CHECK(angular_distance({1, 0}, {-1, 0}) == doctest::Approx(-1.0).epsilon(kTol));
  CHECK(std::fabs(angular_distance({1, 0}, {0, 1})) < kTol);
  CHECK(angular_distance({0, 0}, {1, 0}) == 0.0);
  CHECK(angular_degenerate({0, 0}, {1, 0}));
  CHECK_FALSE(angular_degenerate({0.1, 0}, {1, 0}));
}

TEST_CASE("spatial_distance") {
  CHECK(spatial_distance({0.2, -0.7}, {0.2, -0.7}, 0.5) == 1.0);
  CHECK(std::fabs(spatial_distance({1, 0}, {0, 0}, 0.5) - 0.886819) < kTol);
  CHECK(spatial_distance({1, 0}, {-1, 0}, 0.5) == 1.0);
  CHECK_THROWS_AS(spatial_distance({std::nan(""), 0}, {0, 0}, 0.5), DataError);
}

TEST_CASE("magnitude") {
  CHECK(magnitude({0, 0}) == 0.0);
  CHECK(magnitude({0.3, 0.4}) == doctest::Approx(0.5).epsilon(kTol));
  CHECK(magnitude({0.999999, -0.999999}) < std::sqrt(2.0));
}

TEST_CASE("ms_measure") {
  NetworkParams p;
  SUBCASE("uniform field gives (N + 1) M") {
    const ElementLattice lat = fixture::with_active(8, 3, row(6), p);
    const VelocityField f = uniform_field(8, 3, {0.3, -0.4});
    for (int n = 1; n <= 6; ++n) {
      const Curve c = fixture::chain(lat, {0, 1}, std::vector<int>(n, 0));
      CHECK(ms_measure(c, lat, f, p) == doctest::Approx(n * 0.5).epsilon(kTol));
    }
  }
  SUBCASE("zero field") {
    const ElementLattice lat = fixture::with_active(8, 3, row(6), p);
    CHECK(ms_measure(fixture::chain(lat, {0, 1}, {0, 0, 0}), lat, VelocityField::zeros(8, 3), p) == 0.0);
  }
  SUBCASE("orthogonal neighbours, adjacent form") {
    const ElementLattice lat = fixture::with_active(4, 3, row(2), p);
    VelocityField f = VelocityField::zeros(4, 3);
    f.vx(1, 0) = 0.5;
    f.vy(1, 1) = 0.5;
    const Curve c = fixture::chain(lat, {0, 1}, {0, 0});
    CHECK(std::fabs(ms_measure(c, lat, f, p) - 0.5) < kTol);
    CHECK(ms_measure(c, lat, f, p) == doctest::Approx(ref::ms(c.elements, lat, f, p)));
  }
  SUBCASE("head anchored form compares every element to the head") {
    NetworkParams q = p;
    q.ms_form = MsForm::head_anchored;
    const ElementLattice lat = fixture::with_active(5, 3, row(3), q);
    VelocityField f = VelocityField::zeros(5, 3);
    f.vx(1, 0) = 0.6;
    f.vx(1, 1) = 0.2;
    f.vx(1, 2) = 0.6;
    const Curve c = fixture::chain(lat, {0, 1}, {0, 0, 0});
    const double sech = 2.0 / (std::exp(-0.5 * 0.4) + std::exp(0.5 * 0.4));
    CHECK(ms_measure(c, lat, f, q) == doctest::Approx(0.6 + 0.6 * sech + 0.6).epsilon(1e-12));
    // The adjacent form weights each step by the newer element's magnitude instead.
    CHECK(ms_measure(c, lat, f, p) == doctest::Approx(0.6 + 0.2 * sech + 0.6 * sech).epsilon(1e-12));
  }
  SUBCASE("antiparallel steps are floored only when clamped") {
    const ElementLattice lat = fixture::with_active(4, 3, row(2), p);
    VelocityField f = VelocityField::zeros(4, 3);
    f.vx(1, 0) = 0.5;
    f.vx(1, 1) = -0.5;
    const Curve c = fixture::chain(lat, {0, 1}, {0, 0});
    CHECK(ms_measure(c, lat, f, p) == doctest::Approx(0.5));
    NetworkParams raw = p;
    raw.clamp_ms = false;
    CHECK(ms_measure(c, lat, f, raw) == doctest::Approx(0.0));
  }
  SUBCASE("virtual elements carry no velocity") {
    const ElementLattice lat = fixture::with_active(5, 3, row(3, {1}), p);
    const VelocityField f = uniform_field(5, 3, {0.3, 0.4});
    const Curve c = fixture::chain(lat, {0, 1}, {0, 0, 0});
    // The virtual middle element zeroes its own term and the cosine into the third.
    CHECK(ms_measure(c, lat, f, p) == doctest::Approx(0.5));
    NetworkParams everywhere = p;
    everywhere.motion_on_active_only = false;
    CHECK(ms_measure(c, lat, f, everywhere) == doctest::Approx(1.5));
    CHECK(element_velocity(f, lat, c.elements[1], p).isZero());
    CHECK(element_velocity(f, lat, c.elements[1], everywhere) == Eigen::Vector2d(0.3, 0.4));
  }
  SUBCASE("curve outside the field") {
    const ElementLattice lat = fixture::with_active(6, 3, row(2), p);
    CHECK_THROWS_AS(ms_measure(fixture::chain(lat, {0, 1}, {0}), lat, VelocityField::zeros(4, 3), p), ShapeError);
  }
}

TEST_CASE("combined_measure") {
  NetworkParams p;
  p.normalize_maps = false;
  const ElementLattice lat = fixture::with_active(4, 3, row(2), p);
  VelocityField f = VelocityField::zeros(4, 3);
  f.vx(1, 0) = 0.5;
  f.vy(1, 1) = 0.5;
  const Curve c = fixture::chain(lat, {0, 1}, {0, 0});
  REQUIRE(su_measure(c, lat, p) == doctest::Approx(2.0));
  REQUIRE(ms_measure(c, lat, f, p) == doctest::Approx(0.5));
  CHECK(std::fabs(combined_measure(c, lat, f, p) - 0.95) < kTol);

  NetworkParams su_only = p;
  su_only.beta = 0.0;
  CHECK(combined_measure(c, lat, f, su_only) == 0.3 * su_measure(c, lat, p));
  NetworkParams ms_only = p;
  ms_only.alpha = 0.0;
  CHECK(combined_measure(c, lat, f, ms_only) == 0.7 * ms_measure(c, lat, f, p));
  CHECK(combined_measure(c, lat, f, p, MeasureScale{2.0, 0.5}) == doctest::Approx(0.3 * 1.0 + 0.7 * 1.0));
}
