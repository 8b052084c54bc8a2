#pragma once

#include <Eigen/Core>

#include "glotsal/flow.hpp"
#include "glotsal/lattice.hpp"

namespace glotsal {

// Definitional evaluation of the saliency measures on explicit curves. The
// dynamic-programming solver must agree with these.

// Shape (SU) measure: sum_j C(0,j) rho(0,j) sigma_j with C the product of
// per-step curvature factors from the head and rho(0,j) the attenuation.
double su_measure(const Curve& curve, const ElementLattice& lattice, const NetworkParams& p);

// Cosine of the included angle; 0 when either vector is zero.
double angular_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b);
inline bool angular_degenerate(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.squaredNorm() == 0.0 || b.squaredNorm() == 0.0;
}

// sech(lambda2 * D) with D the distance between componentwise magnitudes.
double spatial_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double lambda2);

double magnitude(const Eigen::Vector2d& v);

// Motion term for the step from velocity `a` (previous element) to `b`:
// |b| * Da(a, b) * Ds(a, b), floored at zero when p.clamp_ms.
double motion_step(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const NetworkParams& p);

// Velocity sampled at the tail pixel of an element; zero for virtual
// elements when p.motion_on_active_only.
Eigen::Vector2d element_velocity(const VelocityField& field, const ElementLattice& lattice,
                                 ElementId id, const NetworkParams& p);

// Adjacent form: M(0) + sum_k step(k-1, k).
// Head-anchored form: sum_j M(0) Da(0, j) Ds(0, j).
double ms_measure(const Curve& curve, const ElementLattice& lattice, const VelocityField& field,
                  const NetworkParams& p);

// Per-frame maxima used to rescale each channel before blending.
struct MeasureScale {
  double su = 1.0;
  double ms = 1.0;
};

// alpha * SU / scale.su + beta * MS / scale.ms. With the default scale this is
// the raw blend; the solver supplies maxima when normalize_maps is set.
double combined_measure(const Curve& curve, const ElementLattice& lattice,
                        const VelocityField& field, const NetworkParams& p,
                        const MeasureScale& scale = {});

}  // namespace glotsal
