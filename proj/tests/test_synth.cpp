#include "doctest.h"

#include <cmath>
#include <numbers>

#include "glotsal/synth.hpp"

using namespace glotsal;

TEST_CASE("synth spec validation") {
  SynthSpec s;
  CHECK_NOTHROW(validate(s));
  auto bad = [](auto edit) {
    SynthSpec q;
    edit(q);
    return q;
  };
  CHECK_THROWS_AS(validate(bad([](SynthSpec& q) { q.a_max = 30.0; })), ParameterError);
  CHECK_THROWS_AS(validate(bad([](SynthSpec& q) { q.a_max = 0.5; })), ParameterError);
  CHECK_THROWS_AS(validate(bad([](SynthSpec& q) { q.b = 31.0; })), ParameterError);
  CHECK_THROWS_AS(validate(bad([](SynthSpec& q) { q.noise_sigma = -0.1; })), ParameterError);
  CHECK_THROWS_AS(validate(bad([](SynthSpec& q) { q.period_frames = 1; })), ParameterError);
  CHECK_THROWS_AS(validate(bad([](SynthSpec& q) { q.frames = 0; })), ParameterError);
  CHECK_THROWS_AS(generate(bad([](SynthSpec& q) { q.width = 4; })), ParameterError);
}

TEST_CASE("semi-axis follows |sin| clamped at one pixel") {
  SynthSpec s;
  CHECK(synth_semi_axis(s, 0) == 1.0);
  CHECK(synth_semi_axis(s, 20) == 1.0);
  CHECK(synth_semi_axis(s, 10) == doctest::Approx(14.0));
  CHECK(synth_semi_axis(s, 5) == doctest::Approx(14.0 * std::sin(std::numbers::pi / 4)));
  CHECK(synth_semi_axis(s, 25) == synth_semi_axis(s, 5));
}

TEST_CASE("noiseless frames are an exact ellipse raster") {
  SynthSpec s;
  s.noise_sigma = 0.0;
  s.texture_amp = 0.0;
  s.frames = 11;
  const SynthSequence seq = generate(s);
  const Frame& f = seq.frames[10];
  const SynthFrameTruth& t = seq.truth[10];
  CHECK(t.a == doctest::Approx(s.a_max));
  CHECK(t.b == s.b);
  CHECK(t.cx == 31.5);
  CHECK(t.cy == 31.5);
  const Mask inside = t.interior(s.width, s.height);
  int transitions = 0;
  for (int y = 0; y < s.height; ++y) {
    for (int x = 0; x < s.width; ++x) {
      CHECK(f.data(y, x) == (inside(y, x) ? kSynthInside : kSynthBackground));
      if (x > 0 && inside(y, x) != inside(y, x - 1)) {
        ++transitions;
        CHECK(std::fabs(f.data(y, x) - f.data(y, x - 1)) == doctest::Approx(0.7));
      }
    }
  }
  CHECK(transitions == 2 * 10);  // rows 27..36 cross the ellipse twice
}

TEST_CASE("sequences are deterministic per seed") {
  SynthSpec s;
  s.frames = 5;
  const SynthSequence a = generate(s), b = generate(s);
  for (int t = 0; t < 5; ++t) CHECK((a.frames[t].data == b.frames[t].data).all());
  s.seed = 2;
  const SynthSequence c = generate(s);
  CHECK_FALSE((a.frames[0].data == c.frames[0].data).all());
  CHECK(a.frames[3].index == 3);
}

TEST_CASE("rasterized area tracks pi a(t) b over a period") {
  SynthSpec s;
  s.noise_sigma = 0.0;
  s.texture_amp = 0.0;
  s.frames = 21;
  const SynthSequence seq = generate(s);
  for (int t = 0; t <= 20; ++t) {
    const SynthFrameTruth& g = seq.truth[t];
    const double pixels = static_cast<double>(g.interior(s.width, s.height).count());
    CAPTURE(t);
    CAPTURE(pixels);
    CHECK(g.area() == doctest::Approx(std::numbers::pi * synth_semi_axis(s, t) * s.b));
    CHECK(std::fabs(pixels - g.area()) <= 0.08 * g.area());
  }
}

TEST_CASE("ground-truth boundary is sampled at about one pixel") {
  const auto ring = ellipse_boundary(10, 10, 6, 3);
  REQUIRE(ring.size() > 10);
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const auto& p = ring[k];
    const auto& q = ring[(k + 1) % ring.size()];
    CHECK((p - q).norm() == doctest::Approx(1.0).epsilon(0.05));
    const double u = (p.x() - 10) / 6, v = (p.y() - 10) / 3;
    CHECK(u * u + v * v == doctest::Approx(1.0));
  }
}
