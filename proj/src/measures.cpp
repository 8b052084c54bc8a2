#include "glotsal/measures.hpp"

#include <cmath>
#include <string>

namespace glotsal {

namespace {

void require_field(const ElementLattice& lattice, const VelocityField& field) {
  if (field.width() != lattice.width() || field.height() != lattice.height()) {
    throw ShapeError("velocity field " + std::to_string(field.width()) + "x" +
                     std::to_string(field.height()) + " does not cover lattice " +
                     std::to_string(lattice.width()) + "x" + std::to_string(lattice.height()));
  }
}

}  // namespace

double su_measure(const Curve& curve, const ElementLattice& lattice, const NetworkParams& p) {
  validate_curve(curve, lattice);
  double weight = 1.0;
  double total = lattice.sigma(curve.elements.front());
  for (std::size_t k = 1; k < curve.elements.size(); ++k) {
    const ElementId prev = curve.elements[k - 1];
    const ElementId cur = curve.elements[k];
    const double dtheta = turn_angle(lattice.direction(prev), lattice.direction(cur));
    weight *= std::exp(-p.curvature_scale * dtheta * dtheta) * lattice.rho(cur);
    total += weight * lattice.sigma(cur);
  }
  return total;
}

double angular_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  if (angular_degenerate(a, b)) return 0.0;
  return std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0);
}

double spatial_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double lambda2) {
  if (!a.allFinite() || !b.allFinite()) throw DataError("spatial_distance: non-finite velocity");
  const double d = (a.cwiseAbs() - b.cwiseAbs()).norm();
  return 2.0 / (std::exp(-lambda2 * d) + std::exp(lambda2 * d));
}

double magnitude(const Eigen::Vector2d& v) { return v.norm(); }

double motion_step(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const NetworkParams& p) {
  const double step = magnitude(b) * angular_distance(a, b) * spatial_distance(a, b, p.lambda2);
  return p.clamp_ms ? std::max(step, 0.0) : step;
}

Eigen::Vector2d element_velocity(const VelocityField& field, const ElementLattice& lattice,
                                 ElementId id, const NetworkParams& p) {
  if (p.motion_on_active_only && !lattice.active(id)) return Eigen::Vector2d::Zero();
  const Pixel px = lattice.pixel(lattice.from_index(id));
  return field.at(px.x, px.y);
}

double ms_measure(const Curve& curve, const ElementLattice& lattice, const VelocityField& field,
                  const NetworkParams& p) {
  validate_curve(curve, lattice);
  require_field(lattice, field);
  const Eigen::Vector2d head = element_velocity(field, lattice, curve.elements.front(), p);
  double total = magnitude(head);
  if (p.ms_form == MsForm::adjacent) {
    Eigen::Vector2d prev = head;
    for (std::size_t k = 1; k < curve.elements.size(); ++k) {
      const Eigen::Vector2d cur = element_velocity(field, lattice, curve.elements[k], p);
      total += motion_step(prev, cur, p);
      prev = cur;
    }
  } else {
    const double m0 = magnitude(head);
    for (std::size_t k = 1; k < curve.elements.size(); ++k) {
      const Eigen::Vector2d cur = element_velocity(field, lattice, curve.elements[k], p);
      const double term =
          m0 * angular_distance(head, cur) * spatial_distance(head, cur, p.lambda2);
      total += p.clamp_ms ? std::max(term, 0.0) : term;
    }
  }
  return total;
}

double combined_measure(const Curve& curve, const ElementLattice& lattice,
                        const VelocityField& field, const NetworkParams& p,
                        const MeasureScale& scale) {
  double value = 0.0;
  if (p.alpha != 0.0) value += p.alpha * su_measure(curve, lattice, p) / scale.su;
  if (p.beta != 0.0) value += p.beta * ms_measure(curve, lattice, field, p) / scale.ms;
  return value;
}

}  // namespace glotsal
