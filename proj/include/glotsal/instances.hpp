#pragma once

#include <cstdint>

#include "glotsal/flow.hpp"
#include "glotsal/imgproc.hpp"
#include "glotsal/lattice.hpp"

namespace glotsal {

// A small random network problem: edge pixels with random gradient angles and
// a normalized velocity field where some pixels are invalid (zero).
struct RandomInstance {
  EdgeMap edges;
  ElementLattice lattice;
  VelocityField field;
};

struct InstanceSpec {
  int width = 6;
  int height = 6;
  double edge_density = 0.4;
  double invalid_fraction = 0.2;
  double speed = 1.5;  // std-dev of raw velocity components, px/frame
  double lambda1 = 0.5;
};

RandomInstance random_instance(std::uint64_t seed, const InstanceSpec& spec,
                               const NetworkParams& p = {});

}  // namespace glotsal
