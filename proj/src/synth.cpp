#include "glotsal/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace glotsal {

void validate(const SynthSpec& spec) {
  if (spec.width < 8 || spec.height < 8) throw ParameterError("synth: frame must be at least 8x8");
  if (spec.period_frames < 2) throw ParameterError("synth: period_frames must be >= 2");
  if (!(spec.a_max >= 1.0) || !(spec.a_max < spec.width / 2.0 - 2.0)) {
    throw ParameterError("synth: require 1 <= a_max < width/2 - 2");
  }
  if (!(spec.b >= 1.0) || !(spec.b < spec.height / 2.0 - 2.0)) {
    throw ParameterError("synth: require 1 <= b < height/2 - 2");
  }
  if (!(spec.noise_sigma >= 0.0)) throw ParameterError("synth: noise_sigma must be >= 0");
  if (!(spec.texture_amp >= 0.0) || spec.texture_amp > 0.19) {
    throw ParameterError("synth: texture_amp must be in [0, 0.19]");
  }
  if (spec.frames < 1) throw ParameterError("synth: frames must be >= 1");
}

double synth_semi_axis(const SynthSpec& spec, int t) {
  const double a = spec.a_max * std::fabs(std::sin(std::numbers::pi * t / spec.period_frames));
  return std::max(a, 1.0);
}

std::vector<Eigen::Vector2d> ellipse_boundary(double cx, double cy, double a, double b,
                                              double spacing) {
  // Arc length by dense sampling, then resample uniformly in arc length.
  constexpr int kDense = 4096;
  std::vector<double> cumulative(kDense + 1, 0.0);
  auto point = [&](double t) { return Eigen::Vector2d(cx + a * std::cos(t), cy + b * std::sin(t)); };
  for (int k = 1; k <= kDense; ++k) {
    const double t0 = 2.0 * std::numbers::pi * (k - 1) / kDense;
    const double t1 = 2.0 * std::numbers::pi * k / kDense;
    cumulative[k] = cumulative[k - 1] + (point(t1) - point(t0)).norm();
  }
  const double perimeter = cumulative.back();
  const int count = std::max(3, static_cast<int>(std::round(perimeter / spacing)));
  std::vector<Eigen::Vector2d> out;
  out.reserve(count);
  int k = 1;
  for (int s = 0; s < count; ++s) {
    const double target = perimeter * s / count;
    while (k < kDense && cumulative[k] < target) ++k;
    const double span = cumulative[k] - cumulative[k - 1];
    const double frac = span > 0.0 ? (target - cumulative[k - 1]) / span : 0.0;
    const double t = 2.0 * std::numbers::pi * (k - 1 + frac) / kDense;
    out.push_back(point(t));
  }
  return out;
}

Mask SynthFrameTruth::interior(int width, int height) const {
  Mask m(height, width);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double u = (x - cx) / a;
      const double v = (y - cy) / b;
      m(y, x) = u * u + v * v <= 1.0;
    }
  }
  return m;
}

double SynthFrameTruth::area() const { return std::numbers::pi * a * b; }

SynthSequence generate(const SynthSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> wavelength(16.0, 28.0);
  std::normal_distribution<double> noise(0.0, 1.0);

  const double p1 = phase(rng), p2 = phase(rng), p3 = phase(rng);
  const double l1 = wavelength(rng), l2 = wavelength(rng), l3 = wavelength(rng);
  PlaneD texture(spec.height, spec.width);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const double s = std::sin(2.0 * std::numbers::pi * x / l1 + p1) *
                           std::cos(2.0 * std::numbers::pi * y / l2 + p2) +
                       std::sin(2.0 * std::numbers::pi * (x + y) / l3 + p3);
      texture(y, x) = 0.5 * spec.texture_amp * s;
    }
  }

  SynthSequence seq;
  seq.frames.reserve(spec.frames);
  seq.truth.reserve(spec.frames);
  const double cx = (spec.width - 1) / 2.0;
  const double cy = (spec.height - 1) / 2.0;
  for (int t = 0; t < spec.frames; ++t) {
    SynthFrameTruth truth;
    truth.cx = cx;
    truth.cy = cy;
    truth.a = synth_semi_axis(spec, t);
    truth.b = spec.b;
    truth.boundary = ellipse_boundary(cx, cy, truth.a, truth.b);
    const Mask inside = truth.interior(spec.width, spec.height);

    PlaneD data(spec.height, spec.width);
    for (int y = 0; y < spec.height; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        double v = inside(y, x) ? kSynthInside : kSynthBackground + texture(y, x);
        if (spec.noise_sigma > 0.0) v += spec.noise_sigma * noise(rng);
        data(y, x) = std::clamp(v, 0.0, 1.0);
      }
    }
    seq.frames.push_back(Frame{std::move(data), t});
    seq.truth.push_back(std::move(truth));
  }
  return seq;
}

}  // namespace glotsal
