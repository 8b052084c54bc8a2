#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "glotsal/imgproc.hpp"

namespace glotsal {

// Synthetic high-speed sequence: a dark ellipse whose horizontal semi-axis
// opens and closes with period `period_frames`, on a bright textured
// background with additive Gaussian noise.
struct SynthSpec {
  int width = 64;
  int height = 64;
  int period_frames = 20;
  double a_max = 14.0;
  double b = 5.0;
  double noise_sigma = 0.05;
  double texture_amp = 0.1;
  int frames = 60;
  std::uint64_t seed = 1;
};

void validate(const SynthSpec& spec);

inline constexpr double kSynthInside = 0.1;
inline constexpr double kSynthBackground = 0.8;

struct SynthFrameTruth {
  double cx = 0.0;
  double cy = 0.0;
  double a = 0.0;
  double b = 0.0;
  // Boundary sampled at ~1 px arc spacing, closed implicitly.
  std::vector<Eigen::Vector2d> boundary;

  // Pixels whose centers satisfy ((x-cx)/a)^2 + ((y-cy)/b)^2 <= 1.
  Mask interior(int width, int height) const;
  double area() const;
};

struct SynthSequence {
  std::vector<Frame> frames;
  std::vector<SynthFrameTruth> truth;
};

// Horizontal semi-axis at frame t: a_max |sin(pi t / P)|, at least 1 px.
double synth_semi_axis(const SynthSpec& spec, int t);

SynthSequence generate(const SynthSpec& spec);

// Ellipse boundary sampled at ~`spacing` arc length.
std::vector<Eigen::Vector2d> ellipse_boundary(double cx, double cy, double a, double b,
                                              double spacing = 1.0);

}  // namespace glotsal
