#pragma once

#include <Eigen/Core>

#include "glotsal/imgproc.hpp"

namespace glotsal {

// Per-pixel velocity. Raw Lucas-Kanade output is in pixels/frame; after
// normalize_velocity both components lie strictly inside (-1, 1).
struct VelocityField {
  PlaneD vx;
  PlaneD vy;
  Mask valid;

  int width() const { return static_cast<int>(vx.cols()); }
  int height() const { return static_cast<int>(vx.rows()); }

  Eigen::Vector2d at(int x, int y) const { return {vx(y, x), vy(y, x)}; }

  static VelocityField zeros(int width, int height);
};

struct FlowParams {
  int window_radius = 2;
  double min_eigenvalue = 1e-4;
  double lambda1 = 0.5;
  // Coarse-to-fine levels; 1 is plain single-level LK.
  int pyramid_levels = 1;
};

void validate(const FlowParams& p);

// Dense Lucas-Kanade between two frames. Central differences of `prev` for
// space, forward difference for time. Pixels whose structure tensor has a
// minimum eigenvalue below p.min_eigenvalue are invalid and carry (0, 0).
VelocityField lk_velocity(const Frame& prev, const Frame& next, const FlowParams& p = {});

// Componentwise tanh(lambda1 * v), kept strictly inside (-1, 1).
VelocityField normalize_velocity(const VelocityField& v, double lambda1);

double normalize_component(double x, double lambda1);

}  // namespace glotsal
