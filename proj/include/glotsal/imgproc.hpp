#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "glotsal/error.hpp"

namespace glotsal {

// Row-major dense plane indexed (row, col) = (y, x).
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using PlaneD = Plane<double>;
using Mask = Plane<bool>;

// Decoded image as stored on disk: interleaved samples, 1 or 3 channels,
// 8- or 16-bit.
struct RawImage {
  int width = 0;
  int height = 0;
  int channels = 1;
  int bit_depth = 8;
  std::vector<std::uint16_t> samples;
};

// One grayscale video frame with intensities in [0, 1].
struct Frame {
  PlaneD data;
  int index = 0;

  int width() const { return static_cast<int>(data.cols()); }
  int height() const { return static_cast<int>(data.rows()); }
};

// Throws DataError / ShapeError if the frame breaks its invariants
// (at least 3x3, finite intensities in [0, 1]).
void validate(const Frame& frame);
Frame make_frame(PlaneD data, int index = 0);

struct EdgeMap {
  Mask edge;
  PlaneD gradient_angle;      // radians in [0, pi)
  PlaneD gradient_magnitude;  // Sobel magnitude, a unit step reads 1

  int width() const { return static_cast<int>(edge.cols()); }
  int height() const { return static_cast<int>(edge.rows()); }
};

struct CannyParams {
  double sigma = 1.4;
  double low = 0.1;
  double high = 0.25;
};

Frame to_grayscale(const RawImage& raw, int index = 0);

// Normalized 1-D Gaussian taps, radius ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

// Separable Gaussian blur with replicated borders.
template <typename Derived>
Plane<typename Derived::Scalar> gaussian_blur(const Eigen::ArrayBase<Derived>& in, double sigma) {
  using Scalar = typename Derived::Scalar;
  if (!(sigma > 0.0)) throw ParameterError("gaussian_blur: sigma must be positive");
  const std::vector<double> taps = gaussian_kernel(sigma);
  const int radius = static_cast<int>(taps.size() / 2);
  const Eigen::Index rows = in.rows();
  const Eigen::Index cols = in.cols();

  Plane<Scalar> tmp(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const Eigen::Index sx = std::clamp<Eigen::Index>(x + k, 0, cols - 1);
        acc += taps[k + radius] * static_cast<double>(in(y, sx));
      }
      tmp(y, x) = static_cast<Scalar>(acc);
    }
  }
  Plane<Scalar> out(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const Eigen::Index sy = std::clamp<Eigen::Index>(y + k, 0, rows - 1);
        acc += taps[k + radius] * static_cast<double>(tmp(sy, x));
      }
      out(y, x) = static_cast<Scalar>(acc);
    }
  }
  return out;
}

Frame gaussian_blur(const Frame& frame, double sigma);

struct Gradient {
  PlaneD gx;
  PlaneD gy;
};

// 3x3 Sobel scaled by 1/4 with replicated borders.
Gradient sobel(const PlaneD& in);

EdgeMap canny_edges(const Frame& frame, double low, double high, double sigma);
inline EdgeMap canny_edges(const Frame& frame, const CannyParams& p = {}) {
  return canny_edges(frame, p.low, p.high, p.sigma);
}

}  // namespace glotsal
