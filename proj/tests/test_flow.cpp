#include "doctest.h"

#include <cmath>

#include "support/fixtures.hpp"
#include "glotsal/flow.hpp"

using namespace glotsal;

namespace {

// Mean velocity over valid pixels at least `margin` from the border.
Eigen::Vector2d interior_mean(const VelocityField& f, int margin, int* count = nullptr) {
  Eigen::Vector2d sum(0, 0);
  int n = 0;
  for (int y = margin; y < f.height() - margin; ++y) {
    for (int x = margin; x < f.width() - margin; ++x) {
      if (!f.valid(y, x)) continue;
      sum += f.at(x, y);
      ++n;
    }
  }
  if (count) *count = n;
  return n ? Eigen::Vector2d(sum / n) : sum;
}

}  // namespace

TEST_CASE("flow parameters are validated") {
  FlowParams p;
  CHECK_NOTHROW(validate(p));
  p.window_radius = 0;
  CHECK_THROWS_AS(validate(p), ParameterError);
  p = {};
  p.min_eigenvalue = 0.0;
  CHECK_THROWS_AS(validate(p), ParameterError);
  p = {};
  p.lambda1 = -1.0;
  CHECK_THROWS_AS(validate(p), ParameterError);
}

TEST_CASE("lk_velocity on identical frames is zero") {
  const Frame a = fixture::Texture(5).frame(32, 32, 0, 0);
  const VelocityField f = lk_velocity(a, a);
  CHECK(f.width() == 32);
  CHECK(f.height() == 32);
  CHECK((f.vx == 0.0).all());
  CHECK((f.vy == 0.0).all());
}

TEST_CASE("lk_velocity recovers a one pixel translation") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const fixture::Texture tex(seed);
    const Frame a = tex.frame(32, 32, 0, 0);
    const Frame b = tex.frame(32, 32, 1, 0);
    int n = 0;
    const Eigen::Vector2d mean = interior_mean(lk_velocity(a, b), 3, &n);
    CAPTURE(seed);
    CHECK(n > 100);
    CHECK((mean - Eigen::Vector2d(1, 0)).norm() <= 0.2);
  }
}

TEST_CASE("lk_velocity marks textureless frames invalid") {
  const Frame flat = fixture::frame_from(16, 16, [](int, int) { return 0.4; });
  const VelocityField f = lk_velocity(flat, flat);
  CHECK_FALSE(f.valid.any());
  CHECK((f.vx == 0.0).all());
  CHECK((f.vy == 0.0).all());
}

TEST_CASE("lk_velocity rejects mismatched frames") {
  const Frame a = fixture::frame_from(8, 8, [](int, int) { return 0.0; });
  const Frame b = fixture::frame_from(8, 9, [](int, int) { return 0.0; });
  CHECK_THROWS_AS(lk_velocity(a, b), ShapeError);
}

TEST_CASE("a two level pyramid also recovers the translation") {
  const fixture::Texture tex(9);
  FlowParams p;
  p.pyramid_levels = 2;
  const Eigen::Vector2d mean = interior_mean(lk_velocity(tex.frame(32, 32, 0, 0), tex.frame(32, 32, 1, 0), p), 4);
  CHECK((mean - Eigen::Vector2d(1, 0)).norm() <= 0.2);
}

TEST_CASE("normalize_velocity") {
  CHECK(normalize_component(0.0, 0.5) == 0.0);
  CHECK(normalize_component(0.0, 3.0) == 0.0);
  CHECK(normalize_component(2.0, 0.5) == doctest::Approx(0.761594).epsilon(1e-6));
  CHECK(std::fabs(normalize_component(2.0, 0.5) - 0.761594) < 1e-6);
  CHECK(std::fabs(normalize_component(1e6, 0.5)) < 1.0);
  CHECK(std::fabs(normalize_component(-1e6, 0.5)) < 1.0);

  VelocityField v = VelocityField::zeros(4, 3);
  v.vx(1, 2) = 2.0;
  v.vy(1, 2) = -2.0;
  v.valid(1, 2) = true;
  const VelocityField n = normalize_velocity(v, 0.5);
  CHECK(n.vx(1, 2) == doctest::Approx(0.761594).epsilon(1e-6));
  CHECK(n.vy(1, 2) == doctest::Approx(-0.761594).epsilon(1e-6));
  CHECK((n.valid == v.valid).all());

  v.vx(2, 3) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_WITH_AS(normalize_velocity(v, 0.5), doctest::Contains("(3,2)"), DataError);
  CHECK_THROWS_AS(normalize_velocity(VelocityField::zeros(3, 3), 0.0), ParameterError);
}
