#pragma once

#include <Eigen/Core>

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "glotsal/lattice.hpp"
#include "glotsal/solver.hpp"

namespace glotsal {

enum class ContourStatus { ok, open_curve, no_salient_curve };

std::string_view to_string(ContourStatus status);
ContourStatus parse_status(std::string_view text);

struct GlottisResult {
  int frame_index = 0;
  std::vector<Pixel> contour;
  bool closed = false;
  double area = 0.0;  // px^2, zero unless status == ok
  double peak_saliency = 0.0;
  ContourStatus status = ContourStatus::no_salient_curve;
};

struct ContourParams {
  // Frames whose best raw blended saliency falls below this have no contour.
  double min_peak = 1.0;
  // Shortest loop accepted as a closed contour.
  int min_closed_pixels = 8;
};

// Reads the glottis contour out of a solved network: trace best_next from the
// globally most salient element and close the trace when it comes back within
// one pixel of its start. Otherwise trace every other way out of the first two
// trace pixels and keep the longest loop that joins the forward trace.
GlottisResult extract_contour(const SaliencyState& state, const ElementLattice& lattice,
                              const ContourParams& params, int frame_index = 0);
inline GlottisResult extract_contour(const SaliencyState& state, const ElementLattice& lattice,
                                     double min_peak, int frame_index = 0) {
  return extract_contour(state, lattice, ContourParams{min_peak}, frame_index);
}

// Shoelace area of a closed polygon given by its vertices (the closing edge is
// implicit). Throws ParameterError when `closed` is false or there are fewer
// than three vertices.
double polygon_area(std::span<const Pixel> vertices, bool closed = true);
double polygon_area(std::span<const Eigen::Vector2d> vertices, bool closed = true);

// Pixels whose centers lie inside or on the polygon.
Mask polygon_mask(std::span<const Pixel> vertices, int width, int height);

struct GawSeries {
  std::vector<std::pair<int, double>> samples;  // (frame index, area px^2)
  double frame_rate = 4000.0;
  std::vector<int> flagged;  // frames whose status was not ok
};

GawSeries build_gaw(std::span<const GlottisResult> results, double fps);

struct SpectralPeak {
  int bin = 0;                // DFT bin with the largest non-DC magnitude
  double period_frames = 0.0; // samples / bin
};

SpectralPeak dominant_period(const GawSeries& gaw);

}  // namespace glotsal
