#include "glotsal/instances.hpp"

#include <numbers>
#include <random>

namespace glotsal {

RandomInstance random_instance(std::uint64_t seed, const InstanceSpec& spec, const NetworkParams& p) {
  if (spec.width < 2 || spec.height < 2) throw ParameterError("instance must be at least 2x2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> speed(0.0, spec.speed);

  EdgeMap edges;
  edges.edge = Mask::Constant(spec.height, spec.width, false);
  edges.gradient_angle = PlaneD::Zero(spec.height, spec.width);
  edges.gradient_magnitude = PlaneD::Zero(spec.height, spec.width);
  VelocityField field = VelocityField::zeros(spec.width, spec.height);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const bool on = unit(rng) < spec.edge_density;
      const double angle = unit(rng) * std::numbers::pi;
      edges.edge(y, x) = on;
      edges.gradient_angle(y, x) = angle;
      edges.gradient_magnitude(y, x) = on ? 0.5 + unit(rng) : 0.0;
      const double vx = speed(rng);
      const double vy = speed(rng);
      if (unit(rng) < spec.invalid_fraction) continue;
      field.vx(y, x) = normalize_component(vx, spec.lambda1);
      field.vy(y, x) = normalize_component(vy, spec.lambda1);
      field.valid(y, x) = true;
    }
  }
  ElementLattice lattice = build_lattice(edges, p);
  return {std::move(edges), std::move(lattice), std::move(field)};
}

}  // namespace glotsal
