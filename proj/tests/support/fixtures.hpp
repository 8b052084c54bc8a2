#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "glotsal/contour.hpp"
#include "glotsal/imgproc.hpp"
#include "glotsal/lattice.hpp"
#include "glotsal/synth.hpp"

namespace fixture {

using namespace glotsal;

inline Frame frame_from(int width, int height, const std::function<double(int, int)>& f, int index = 0) {
  PlaneD data(height, width);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) data(y, x) = f(x, y);
  }
  return Frame{std::move(data), index};
}

// Smooth band-limited texture in [0, 1], sampled at (x - dx, y - dy), so that
// shifting by (dx, dy) is an exact translation.
struct Texture {
  std::array<double, 4> kx{}, ky{}, phase{};

  explicit Texture(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> freq(0.25, 0.6), ph(0.0, 6.283185307179586);
    for (int k = 0; k < 4; ++k) {
      kx[k] = freq(rng) * (k % 2 ? 1.0 : -1.0);
      ky[k] = freq(rng) * (k < 2 ? 1.0 : 0.5);
      phase[k] = ph(rng);
    }
  }
  double operator()(double x, double y) const {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += std::sin(kx[k] * x + ky[k] * y + phase[k]);
    return 0.5 + s / 8.0;
  }
  Frame frame(int width, int height, double dx, double dy, int index = 0) const {
    return frame_from(width, height, [&](int x, int y) { return (*this)(x - dx, y - dy); }, index);
  }
};

inline double dice(const Mask& a, const Mask& b) {
  const double both = (a && b).count();
  const double total = a.count() + b.count();
  return total == 0.0 ? 1.0 : 2.0 * both / total;
}

inline double contour_dice(const GlottisResult& r, const SynthFrameTruth& truth, int width, int height) {
  if (r.status != ContourStatus::ok) return 0.0;
  return dice(polygon_mask(r.contour, width, height), truth.interior(width, height));
}

// Lattice whose active elements are exactly the given (pixel, direction) pairs.
inline ElementLattice with_active(int width, int height, const std::vector<std::pair<Pixel, int>>& on,
                                  const NetworkParams& p = {}) {
  std::vector<bool> active(static_cast<std::size_t>(ElementLattice::element_count(width, height)), false);
  const ElementLattice blank = ElementLattice::from_activity(width, height, active, p);
  for (const auto& [px, dir] : on) {
    const ElementId id = blank.find(blank.pixel_index(px), dir);
    if (id != kNoElement) active[id] = true;
  }
  return ElementLattice::from_activity(width, height, active, p);
}

// Element path taking the directions `dirs` in turn from `start`.
inline Curve chain(const ElementLattice& lat, Pixel start, const std::vector<int>& dirs) {
  Curve c;
  int pixel = lat.pixel_index(start);
  for (int d : dirs) {
    const ElementId id = lat.find(pixel, d);
    c.elements.push_back(id);
    pixel = lat.to_index(id);
  }
  return c;
}

// Random admissible walk of up to `len` elements from a random element.
inline Curve random_walk(const ElementLattice& lat, std::mt19937_64& rng, int len,
                         const NetworkParams& p = {}) {
  std::uniform_int_distribution<ElementId> pick(0, lat.size() - 1);
  Curve c;
  c.elements.push_back(pick(rng));
  while (static_cast<int>(c.elements.size()) < len) {
    const ElementId last = c.elements.back();
    std::vector<ElementId> options;
    const IdRange succ = lat.successors(last);
    for (ElementId j = succ.first; j < succ.last; ++j) {
      if (admissible_turn(lat.direction(last), lat.direction(j), p)) options.push_back(j);
    }
    if (options.empty()) break;
    std::uniform_int_distribution<std::size_t> which(0, options.size() - 1);
    c.elements.push_back(options[which(rng)]);
  }
  return c;
}

}  // namespace fixture
