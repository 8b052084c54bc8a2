#pragma once

#include <array>
#include <cstdint>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "glotsal/imgproc.hpp"

namespace glotsal {

enum class MsForm { adjacent, head_anchored };

struct NetworkParams {
  double rho_active = 1.0;
  double rho_virtual = 0.7;
  double curvature_scale = 1.0;  // kappa
  int iterations = 60;
  double alpha = 0.3;
  double beta = 0.7;
  MsForm ms_form = MsForm::adjacent;
  bool normalize_maps = true;
  // Floor negative motion step terms at zero.
  bool clamp_ms = true;
  // Only active elements carry velocity into the motion measure.
  bool motion_on_active_only = true;
  double lambda2 = 0.5;
  // Extra slack on the pi/4 tangent-alignment window of active elements.
  double alignment_tolerance = 0.0;
  // Largest orientation change allowed between consecutive elements.
  double max_turn = std::numbers::pi / 4.0;
};

void validate(const NetworkParams& p);

struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(Pixel, Pixel) = default;
};

// Chebyshev distance; 1 means 8-adjacent.
inline int chebyshev(Pixel a, Pixel b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

using ElementId = std::int32_t;
inline constexpr ElementId kNoElement = -1;

// Eight step directions, counter-clockwise in image coordinates where y grows
// downward, so direction d has orientation d * pi/4 = atan2(dy, dx).
inline constexpr std::array<std::array<int, 2>, 8> kDirections{{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1},
}};

// Orientation change from direction a to direction b, wrapped to (-pi, pi].
inline double turn_angle(int from_direction, int to_direction) {
  int k = ((to_direction - from_direction) % 8 + 8) % 8;
  if (k > 4) k -= 8;
  return k * std::numbers::pi / 4.0;
}

// Whether a curve may continue from direction a onto direction b: never a
// reversal, and no sharper than p.max_turn.
inline bool admissible_turn(int from_direction, int to_direction, const NetworkParams& p) {
  const double turn = std::fabs(turn_angle(from_direction, to_direction));
  return turn < std::numbers::pi - 1e-9 && turn <= p.max_turn + 1e-9;
}

struct Element {
  ElementId id = kNoElement;
  Pixel from;
  Pixel to;
  int direction = 0;
  double orientation = 0.0;
  bool active = false;
  double sigma = 0.0;
  double rho = 0.0;
};

struct IdRange {
  ElementId first = 0;
  ElementId last = 0;  // one past the end
  ElementId size() const { return last - first; }
};

// Directed elements between every ordered pair of 8-adjacent pixels. Ids are
// dense and ordered by (from pixel row-major, direction), so the elements
// leaving one pixel form a contiguous id range; that range is the successor
// list of every element arriving at the pixel.
class ElementLattice {
 public:
  // `active[id]` for every element in id order; see element_count().
  static ElementLattice from_activity(int width, int height, const std::vector<bool>& active,
                                      const NetworkParams& p = {});

  // Number of directed elements on a width x height grid.
  static ElementId element_count(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  ElementId size() const { return static_cast<ElementId>(direction_.size()); }

  Element element(ElementId id) const;

  int pixel_index(Pixel p) const { return p.y * width_ + p.x; }
  Pixel pixel(int index) const { return {index % width_, index / width_}; }

  int from_index(ElementId id) const { return from_[id]; }
  int to_index(ElementId id) const { return to_[id]; }
  int direction(ElementId id) const { return direction_[id]; }
  bool active(ElementId id) const { return active_[id] != 0; }
  double rho(ElementId id) const { return rho_[id]; }
  double sigma(ElementId id) const { return active_[id] ? 1.0 : 0.0; }

  IdRange outgoing(int pixel_index) const {
    return {first_out_[pixel_index], first_out_[pixel_index + 1]};
  }
  IdRange successors(ElementId id) const { return outgoing(to_[id]); }
  bool is_successor(ElementId from, ElementId to) const { return from_[to] == to_[from]; }

  // The element with the same pixels traversed the other way.
  ElementId reverse(ElementId id) const { return find(to_[id], (direction_[id] + 4) % 8); }
  // Element leaving pixel_index in `direction`, or kNoElement at the border.
  ElementId find(int pixel_index, int direction) const;

  std::size_t active_count() const;

 private:
  ElementLattice(int width, int height);

  int width_ = 0;
  int height_ = 0;
  std::vector<ElementId> first_out_;
  std::vector<std::array<ElementId, 8>> by_direction_;
  std::vector<int> from_;
  std::vector<int> to_;
  std::vector<std::uint8_t> direction_;
  std::vector<std::uint8_t> active_;
  std::vector<double> rho_;
};

// Active iff the tail pixel is an edge pixel and the element runs along the
// edge tangent: |orientation - (gradient_angle + pi/2)| mod pi < pi/4 + tol.
ElementLattice build_lattice(const EdgeMap& edges, const NetworkParams& p = {});

// Ordered element path; `closed` is set by backtracking when the path
// returns to its starting pixel.
struct Curve {
  std::vector<ElementId> elements;
  bool closed = false;
};

// Throws TopologyError unless the curve is non-empty, each element is a
// successor of the previous one, and no step reverses the previous element.
void validate_curve(const Curve& curve, const ElementLattice& lattice);

// exp(-kappa * dtheta^2) for one step between consecutive elements.
double curvature_factor(const Element& from, const Element& to, double kappa);
double curvature_factor(const ElementLattice& lattice, ElementId from, ElementId to, double kappa);

// Product of rho over every element after the head (1 for a single element).
double attenuation_along(const Curve& curve, const ElementLattice& lattice);

// Pixels the curve passes through: the tail of every element, then the head
// of the last one unless the curve is closed.
std::vector<Pixel> curve_pixels(const Curve& curve, const ElementLattice& lattice);

}  // namespace glotsal
