#include "glotsal/contour.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <unordered_map>

namespace glotsal {

std::string_view to_string(ContourStatus status) {
  switch (status) {
    case ContourStatus::ok: return "ok";
    case ContourStatus::open_curve: return "open_curve";
    case ContourStatus::no_salient_curve: return "no_salient_curve";
  }
  return "no_salient_curve";
}

ContourStatus parse_status(std::string_view text) {
  if (text == "ok") return ContourStatus::ok;
  if (text == "open_curve") return ContourStatus::open_curve;
  if (text == "no_salient_curve") return ContourStatus::no_salient_curve;
  throw FormatError("unknown contour status '" + std::string(text) + "'");
}

namespace {

// Pixels visited by a backtracked curve, without the repeated pixel that
// stopped it.
std::vector<Pixel> trace_pixels(const Curve& curve, const ElementLattice& lattice) {
  std::vector<Pixel> pixels = curve_pixels(curve, lattice);
  if (!curve.closed && pixels.size() > 1) {
    const Pixel last = pixels.back();
    for (std::size_t k = 0; k + 1 < pixels.size(); ++k) {
      if (pixels[k] == last) {
        pixels.pop_back();
        break;
      }
    }
  }
  return pixels;
}

// Drops the virtual elements before the first and after the last active one;
// they add nothing to the measure and only wander through empty space.
std::vector<Pixel> active_span(const Curve& curve, const ElementLattice& lattice) {
  std::vector<Pixel> pixels = trace_pixels(curve, lattice);
  if (curve.closed) return pixels;
  const std::size_t elements = pixels.size() - 1;
  std::size_t first = elements, last = 0;
  for (std::size_t k = 0; k < elements; ++k) {
    if (!lattice.active(curve.elements[k])) continue;
    first = std::min(first, k);
    last = k;
  }
  if (first == elements) return pixels;
  return {pixels.begin() + static_cast<long>(first), pixels.begin() + static_cast<long>(last) + 2};
}

// First prefix of `path` that ends next to its start and is long enough.
std::size_t closing_length(const std::vector<Pixel>& path, int min_pixels) {
  for (std::size_t m = static_cast<std::size_t>(std::max(min_pixels, 3)) - 1; m < path.size(); ++m) {
    if (chebyshev(path[m], path.front()) <= 1) return m + 1;
  }
  return 0;
}

}  // namespace

GlottisResult extract_contour(const SaliencyState& state, const ElementLattice& lattice,
                              const ContourParams& params, int frame_index) {
  GlottisResult result;
  result.frame_index = frame_index;
  if (state.size() == 0) return result;

  const ElementId start = state.argmax();
  result.peak_saliency = state.raw_phi[start];
  if (!(result.peak_saliency >= params.min_peak) || result.peak_saliency <= 0.0) return result;

  const int max_steps = lattice.width() * lattice.height();
  const std::vector<Pixel> forward = active_span(backtrack(state, lattice, start, max_steps), lattice);

  if (const std::size_t n = closing_length(forward, params.min_closed_pixels); n > 0) {
    result.contour.assign(forward.begin(), forward.begin() + static_cast<long>(n));
    result.closed = true;
  } else {
    std::unordered_map<int, std::size_t> on_forward;
    for (std::size_t k = 0; k < forward.size(); ++k) {
      on_forward.emplace(lattice.pixel_index(forward[k]), k);
    }
    // Walks outward along a backward trace (pixels after the start pixel);
    // every pixel that touches the forward trace far enough along closes a
    // loop and the longest wins, since a short one is the backward trace
    // curling back near the start. A loop needs active elements on at least
    // half of its tail. Returns the tail up to its last active element when
    // nothing closes.
    auto join = [&](const Curve& curve) {
      const std::vector<Pixel> backward = trace_pixels(curve, lattice);
      std::vector<Pixel> tail;
      std::size_t best_tail = 0, best_m = 0, active = 0, salient = 0;
      for (std::size_t k = 1; k < backward.size(); ++k) {
        const Pixel b = backward[k];
        if (on_forward.count(lattice.pixel_index(b))) break;
        tail.push_back(b);
        if (lattice.active(curve.elements[k - 1])) {
          ++active;
          salient = tail.size();
        }
        if (2 * active < tail.size()) continue;
        for (std::size_t m = forward.size(); m-- > 1;) {
          if (chebyshev(forward[m], b) > 1) continue;
          if (static_cast<int>(m + 1 + tail.size()) >= params.min_closed_pixels &&
              m + tail.size() > best_m + best_tail) {
            best_tail = tail.size();
            best_m = m;
          }
          break;
        }
      }
      if (best_m > 0 && !(result.closed && result.contour.size() >= best_m + 1 + best_tail)) {
        std::vector<Pixel> loop(tail.begin(), tail.begin() + static_cast<long>(best_tail));
        std::reverse(loop.begin(), loop.end());
        loop.insert(loop.end(), forward.begin(), forward.begin() + static_cast<long>(best_m) + 1);
        result.contour = std::move(loop);
        result.closed = true;
      }
      tail.resize(salient);
      return tail;
    };

    std::vector<Pixel> tail;
    // The other half leaves the first or second trace pixel onto a pixel the
    // forward trace does not use. The start often sits on a corner that
    // no admissible curve passes through, hence the second pixel.
    for (std::size_t k = 0; k < std::min<std::size_t>(2, forward.size()); ++k) {
      const IdRange out = lattice.outgoing(lattice.pixel_index(forward[k]));
      for (ElementId id = out.first; id < out.last; ++id) {
        if (on_forward.count(lattice.to_index(id))) continue;
        std::vector<Pixel> t = join(backtrack(state, lattice, id, max_steps));
        if (t.size() > tail.size()) tail = std::move(t);
      }
    }
    if (!result.closed) {
      result.contour.assign(tail.rbegin(), tail.rend());
      result.contour.insert(result.contour.end(), forward.begin(), forward.end());
    }
  }

  if (result.closed && result.contour.size() >= 3) {
    result.area = polygon_area(result.contour);
    result.status = ContourStatus::ok;
  } else {
    result.closed = false;
    result.area = 0.0;
    result.status = ContourStatus::open_curve;
  }
  return result;
}

namespace {

template <typename Point, typename GetX, typename GetY>
double shoelace(std::span<const Point> vertices, bool closed, GetX gx, GetY gy) {
  if (!closed) throw ParameterError("polygon_area: polyline is not closed");
  if (vertices.size() < 3) throw ParameterError("polygon_area: need at least 3 vertices");
  double twice = 0.0;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const Point& a = vertices[k];
    const Point& b = vertices[(k + 1) % vertices.size()];
    twice += static_cast<double>(gx(a)) * gy(b) - static_cast<double>(gx(b)) * gy(a);
  }
  return std::fabs(twice) / 2.0;
}

}  // namespace

double polygon_area(std::span<const Pixel> vertices, bool closed) {
  return shoelace(vertices, closed, [](const Pixel& p) { return p.x; },
                  [](const Pixel& p) { return p.y; });
}

double polygon_area(std::span<const Eigen::Vector2d> vertices, bool closed) {
  return shoelace(vertices, closed, [](const Eigen::Vector2d& p) { return p.x(); },
                  [](const Eigen::Vector2d& p) { return p.y(); });
}

Mask polygon_mask(std::span<const Pixel> vertices, int width, int height) {
  Mask mask = Mask::Constant(height, width, false);
  const std::size_t n = vertices.size();
  if (n == 0) return mask;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      bool inside = false;
      bool on_edge = false;
      for (std::size_t k = 0, j = n - 1; k < n; j = k++) {
        const Pixel a = vertices[j];
        const Pixel b = vertices[k];
        const long cross = static_cast<long>(b.x - a.x) * (y - a.y) - static_cast<long>(b.y - a.y) * (x - a.x);
        if (cross == 0 && x >= std::min(a.x, b.x) && x <= std::max(a.x, b.x) &&
            y >= std::min(a.y, b.y) && y <= std::max(a.y, b.y)) {
          on_edge = true;
          break;
        }
        if ((a.y > y) != (b.y > y)) {
          const double at = a.x + static_cast<double>(y - a.y) * (b.x - a.x) / (b.y - a.y);
          if (x < at) inside = !inside;
        }
      }
      mask(y, x) = on_edge || inside;
    }
  }
  return mask;
}

GawSeries build_gaw(std::span<const GlottisResult> results, double fps) {
  GawSeries gaw;
  gaw.frame_rate = fps;
  gaw.samples.reserve(results.size());
  for (const GlottisResult& r : results) {
    const bool ok = r.status == ContourStatus::ok;
    gaw.samples.emplace_back(r.frame_index, ok ? r.area : 0.0);
    if (!ok) gaw.flagged.push_back(r.frame_index);
  }
  return gaw;
}

SpectralPeak dominant_period(const GawSeries& gaw) {
  const std::size_t n = gaw.samples.size();
  SpectralPeak peak;
  if (n < 2) return peak;
  double mean = 0.0;
  for (const auto& s : gaw.samples) mean += s.second;
  mean /= static_cast<double>(n);
  double best = -1.0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(k * t) / static_cast<double>(n);
      acc += (gaw.samples[t].second - mean) * std::polar(1.0, phase);
    }
    if (std::abs(acc) > best) {
      best = std::abs(acc);
      peak.bin = static_cast<int>(k);
    }
  }
  peak.period_frames = static_cast<double>(n) / peak.bin;
  return peak;
}

}  // namespace glotsal
