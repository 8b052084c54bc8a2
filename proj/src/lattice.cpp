#include "glotsal/lattice.hpp"

#include <cmath>
#include <string>

namespace glotsal {

void validate(const NetworkParams& p) {
  if (!(p.rho_virtual > 0.0) || !(p.rho_virtual <= p.rho_active) || !(p.rho_active <= 1.0)) {
    throw ParameterError("network: require 0 < rho_virtual <= rho_active <= 1");
  }
  if (!(p.curvature_scale > 0.0)) throw ParameterError("network: curvature_scale must be > 0");
  if (p.iterations < 1) throw ParameterError("network: iterations must be >= 1");
  if (!(p.alpha >= 0.0) || !(p.beta >= 0.0) || !(p.alpha + p.beta > 0.0)) {
    throw ParameterError("network: require alpha >= 0, beta >= 0, alpha + beta > 0");
  }
  if (!(p.lambda2 > 0.0)) throw ParameterError("network: lambda2 must be > 0");
  if (!std::isfinite(p.alignment_tolerance)) {
    throw ParameterError("network: alignment_tolerance must be finite");
  }
  if (!(p.max_turn >= std::numbers::pi / 4.0 - 1e-9) || !(p.max_turn <= std::numbers::pi)) {
    throw ParameterError("network: max_turn must be in [pi/4, pi]");
  }
}

ElementId ElementLattice::element_count(int width, int height) {
  if (width < 1 || height < 1) return 0;
  const long horizontal = static_cast<long>(width - 1) * height;
  const long vertical = static_cast<long>(height - 1) * width;
  const long diagonal = 2L * (width - 1) * (height - 1);
  return static_cast<ElementId>(2 * (horizontal + vertical + diagonal));
}

ElementLattice::ElementLattice(int width, int height) : width_(width), height_(height) {
  const int pixels = width * height;
  first_out_.reserve(pixels + 1);
  by_direction_.assign(pixels, {});
  const ElementId total = element_count(width, height);
  from_.reserve(total);
  to_.reserve(total);
  direction_.reserve(total);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int p = y * width + x;
      first_out_.push_back(static_cast<ElementId>(from_.size()));
      for (int d = 0; d < 8; ++d) {
        const int nx = x + kDirections[d][0];
        const int ny = y + kDirections[d][1];
        if (nx < 0 || ny < 0 || nx >= width || ny >= height) {
          by_direction_[p][d] = kNoElement;
          continue;
        }
        by_direction_[p][d] = static_cast<ElementId>(from_.size());
        from_.push_back(p);
        to_.push_back(ny * width + nx);
        direction_.push_back(static_cast<std::uint8_t>(d));
      }
    }
  }
  first_out_.push_back(static_cast<ElementId>(from_.size()));
}

ElementLattice ElementLattice::from_activity(int width, int height, const std::vector<bool>& active,
                                             const NetworkParams& p) {
  if (width < 3 || height < 3) throw ShapeError("lattice: grid must be at least 3x3");
  ElementLattice lat(width, height);
  if (active.size() != static_cast<std::size_t>(lat.size())) {
    throw ShapeError("lattice: activity vector has " + std::to_string(active.size()) +
                     " entries, expected " + std::to_string(lat.size()));
  }
  lat.active_.resize(lat.size());
  lat.rho_.resize(lat.size());
  for (ElementId id = 0; id < lat.size(); ++id) {
    lat.active_[id] = active[id] ? 1 : 0;
    lat.rho_[id] = active[id] ? p.rho_active : p.rho_virtual;
  }
  return lat;
}

Element ElementLattice::element(ElementId id) const {
  if (id < 0 || id >= size()) throw TopologyError("lattice: element id out of range");
  Element e;
  e.id = id;
  e.from = pixel(from_[id]);
  e.to = pixel(to_[id]);
  e.direction = direction_[id];
  e.orientation = e.direction * std::numbers::pi / 4.0;
  e.active = active_[id] != 0;
  e.sigma = e.active ? 1.0 : 0.0;
  e.rho = rho_[id];
  return e;
}

ElementId ElementLattice::find(int pixel_index, int direction) const {
  return by_direction_[pixel_index][direction];
}

std::size_t ElementLattice::active_count() const {
  std::size_t n = 0;
  for (auto a : active_) n += a;
  return n;
}

ElementLattice build_lattice(const EdgeMap& edges, const NetworkParams& p) {
  const int w = edges.width();
  const int h = edges.height();
  if (w < 3 || h < 3) throw ShapeError("build_lattice: edge map must be at least 3x3");
  constexpr double kPi = std::numbers::pi;
  const double window = kPi / 4.0 + p.alignment_tolerance;

  std::vector<bool> active;
  active.reserve(ElementLattice::element_count(w, h));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const bool on_edge = edges.edge(y, x);
      const double tangent = std::fmod(edges.gradient_angle(y, x) + kPi / 2.0, kPi);
      for (int d = 0; d < 8; ++d) {
        const int nx = x + kDirections[d][0];
        const int ny = y + kDirections[d][1];
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        if (!on_edge) {
          active.push_back(false);
          continue;
        }
        double diff = std::fabs((d % 4) * kPi / 4.0 - tangent);
        diff = std::min(diff, kPi - diff);
        active.push_back(diff < window);
      }
    }
  }
  return ElementLattice::from_activity(w, h, active, p);
}

void validate_curve(const Curve& curve, const ElementLattice& lattice) {
  if (curve.elements.empty()) throw TopologyError("curve: empty");
  for (std::size_t k = 0; k < curve.elements.size(); ++k) {
    const ElementId id = curve.elements[k];
    if (id < 0 || id >= lattice.size()) {
      throw TopologyError("curve: element id " + std::to_string(id) + " out of range");
    }
    if (k == 0) continue;
    const ElementId prev = curve.elements[k - 1];
    if (!lattice.is_successor(prev, id)) {
      throw TopologyError("curve: element " + std::to_string(id) + " does not follow " +
                          std::to_string(prev));
    }
    if (lattice.reverse(prev) == id) {
      throw TopologyError("curve: element " + std::to_string(id) + " reverses " +
                          std::to_string(prev));
    }
  }
}

double curvature_factor(const Element& from, const Element& to, double kappa) {
  if (!(from.to == to.from)) {
    throw TopologyError("curvature_factor: element " + std::to_string(to.id) +
                        " is not a successor of " + std::to_string(from.id));
  }
  const double dtheta = turn_angle(from.direction, to.direction);
  return std::exp(-kappa * dtheta * dtheta);
}

double curvature_factor(const ElementLattice& lattice, ElementId from, ElementId to, double kappa) {
  return curvature_factor(lattice.element(from), lattice.element(to), kappa);
}

double attenuation_along(const Curve& curve, const ElementLattice& lattice) {
  validate_curve(curve, lattice);
  double product = 1.0;
  for (std::size_t k = 1; k < curve.elements.size(); ++k) product *= lattice.rho(curve.elements[k]);
  return product;
}

std::vector<Pixel> curve_pixels(const Curve& curve, const ElementLattice& lattice) {
  std::vector<Pixel> out;
  out.reserve(curve.elements.size() + 1);
  for (ElementId id : curve.elements) out.push_back(lattice.pixel(lattice.from_index(id)));
  if (!curve.elements.empty() && !curve.closed) {
    out.push_back(lattice.pixel(lattice.to_index(curve.elements.back())));
  }
  return out;
}

}  // namespace glotsal
