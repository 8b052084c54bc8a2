#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "glotsal/flow.hpp"
#include "glotsal/lattice.hpp"
#include "glotsal/measures.hpp"

namespace glotsal {

// Result of the saliency network after `iteration` synchronous updates.
// Element i's entries describe the best curve of at most `iteration`
// elements starting at i under the raw alpha/beta blend.
struct SaliencyState {
  std::vector<double> phi;      // readout value, normalized when normalize_maps
  std::vector<double> raw_phi;  // alpha * su + beta * ms
  std::vector<double> su;
  std::vector<double> ms;
  std::vector<ElementId> best_next;
  // Size of each element's (SU, MS) front after the last iteration.
  std::vector<std::uint8_t> front_size;
  MeasureScale scale;
  int iteration = 0;
  std::size_t front_truncations = 0;

  ElementId size() const { return static_cast<ElementId>(phi.size()); }
  ElementId argmax() const;
};

// Largest (SU, MS) front kept per element. Fronts on real frames stay far
// below this; hitting it is counted in SaliencyState::front_truncations.
inline constexpr int kFrontCapacity = 24;

// Iterative dynamic programming over the element lattice.
//
// Curve values split into an SU part that is scaled by the coupling
// rho(j) * exp(-kappa dtheta^2) at every step and an MS part that only
// accumulates, so no single scalar per element is enough once beta > 0. Each
// element instead carries the upper convex front of its (SU, MS) pairs in the
// directions (a, beta), 0 <= a <= alpha, which is exactly what downstream
// couplings (all <= 1) can ask for. With beta == 0 the front is one point and
// this reduces to the classic saliency network update
//     phi(i) = sigma(i) + max_j rho(j) exp(-kappa dtheta_ij^2) phi(j).
//
// After n iterations, phi(i) is the best blend over curves of at most n
// elements starting at i. Successors never reverse the current element nor
// turn by more than p.max_turn; ties resolve to "stop here", then to the
// lowest successor id.
SaliencyState run_dp(const ElementLattice& lattice, const VelocityField& field,
                     const NetworkParams& p);

// Exhaustive search over every admissible curve of at most `max_len`
// elements, scored with combined_measure (raw blend). Throws CapacityError
// when size() * branching^max_len exceeds 1e7, branching being the number of
// admissible turns. Among equal maxima the witness is the shortest curve,
// then the one with the lowest starting id.
std::pair<double, Curve> brute_force_max(const ElementLattice& lattice, const VelocityField& field,
                                         const NetworkParams& p, int max_len);

// Same search, reporting the best value per starting element.
std::vector<double> brute_force_element_max(const ElementLattice& lattice,
                                            const VelocityField& field, const NetworkParams& p,
                                            int max_len);

// Follows best_next from `start` for at most max_steps steps, stopping at a
// missing pointer or when the next pixel was already visited. Sets
// Curve::closed when that pixel is the start pixel.
Curve backtrack(const SaliencyState& state, const ElementLattice& lattice, ElementId start,
                int max_steps);

// Per-pixel maximum over outgoing elements of state.phi.
PlaneD saliency_map(const SaliencyState& state, const ElementLattice& lattice);

}  // namespace glotsal
