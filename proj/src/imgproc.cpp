#include "glotsal/imgproc.hpp"

#include <array>
#include <numbers>
#include <queue>
#include <string>

namespace glotsal {

void validate(const Frame& frame) {
  if (frame.width() < 3 || frame.height() < 3) {
    throw ShapeError("frame must be at least 3x3, got " + std::to_string(frame.width()) + "x" +
                     std::to_string(frame.height()));
  }
  for (Eigen::Index y = 0; y < frame.data.rows(); ++y) {
    for (Eigen::Index x = 0; x < frame.data.cols(); ++x) {
      const double v = frame.data(y, x);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw DataError("frame " + std::to_string(frame.index) + ": intensity out of [0,1] at (" +
                        std::to_string(x) + "," + std::to_string(y) + ")");
      }
    }
  }
}

Frame make_frame(PlaneD data, int index) {
  Frame f{std::move(data), index};
  validate(f);
  return f;
}

Frame to_grayscale(const RawImage& raw, int index) {
  if (raw.channels != 1 && raw.channels != 3) {
    throw FormatError("unsupported channel count " + std::to_string(raw.channels) +
                      " (expected 1 or 3)");
  }
  if (raw.bit_depth != 8 && raw.bit_depth != 16) {
    throw FormatError("unsupported bit depth " + std::to_string(raw.bit_depth) +
                      " (expected 8 or 16)");
  }
  const std::size_t expected =
      static_cast<std::size_t>(raw.width) * static_cast<std::size_t>(raw.height) * raw.channels;
  if (raw.samples.size() != expected) {
    throw FormatError("sample buffer holds " + std::to_string(raw.samples.size()) +
                      " values, expected " + std::to_string(expected));
  }
  const double max_value = raw.bit_depth == 8 ? 255.0 : 65535.0;

  PlaneD data(raw.height, raw.width);
  for (int y = 0; y < raw.height; ++y) {
    for (int x = 0; x < raw.width; ++x) {
      const std::size_t at = (static_cast<std::size_t>(y) * raw.width + x) * raw.channels;
      double v;
      if (raw.channels == 1) {
        v = raw.samples[at] / max_value;
      } else {
        const auto r = raw.samples[at];
        const auto g = raw.samples[at + 1];
        const auto b = raw.samples[at + 2];
        // Gray pixels skip the weighted sum so saturation stays exact.
        v = (r == g && g == b) ? r / max_value : (0.299 * r + 0.587 * g + 0.114 * b) / max_value;
      }
      data(y, x) = std::clamp(v, 0.0, 1.0);
    }
  }
  return make_frame(std::move(data), index);
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("gaussian_kernel: sigma must be positive");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    taps[k + radius] = std::exp(-(k * k) / (2.0 * sigma * sigma));
    sum += taps[k + radius];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

Frame gaussian_blur(const Frame& frame, double sigma) {
  PlaneD out = gaussian_blur(frame.data, sigma);
  // Rounding can push a convex combination a hair past its inputs.
  const double lo = frame.data.minCoeff();
  const double hi = frame.data.maxCoeff();
  out = out.max(lo).min(hi);
  return Frame{std::move(out), frame.index};
}

Gradient sobel(const PlaneD& in) {
  const Eigen::Index rows = in.rows();
  const Eigen::Index cols = in.cols();
  auto at = [&](Eigen::Index y, Eigen::Index x) {
    return in(std::clamp<Eigen::Index>(y, 0, rows - 1), std::clamp<Eigen::Index>(x, 0, cols - 1));
  };
  Gradient g{PlaneD(rows, cols), PlaneD(rows, cols)};
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      const double gx = (at(y - 1, x + 1) + 2.0 * at(y, x + 1) + at(y + 1, x + 1)) -
                        (at(y - 1, x - 1) + 2.0 * at(y, x - 1) + at(y + 1, x - 1));
      const double gy = (at(y + 1, x - 1) + 2.0 * at(y + 1, x) + at(y + 1, x + 1)) -
                        (at(y - 1, x - 1) + 2.0 * at(y - 1, x) + at(y - 1, x + 1));
      g.gx(y, x) = gx / 4.0;
      g.gy(y, x) = gy / 4.0;
    }
  }
  return g;
}

namespace {

// Neighbor offset along the quantized gradient direction (y grows downward).
std::array<int, 2> nms_offset(double angle) {
  constexpr double kPi = std::numbers::pi;
  const int sector = static_cast<int>(std::floor((angle + kPi / 8.0) / (kPi / 4.0))) % 4;
  switch (sector) {
    case 0: return {1, 0};
    case 1: return {1, 1};
    case 2: return {0, 1};
    default: return {-1, 1};
  }
}

}  // namespace

EdgeMap canny_edges(const Frame& frame, double low, double high, double sigma) {
  if (!(low > 0.0) || !(low < high)) {
    throw ParameterError("canny_edges: thresholds must satisfy 0 < low < high");
  }
  validate(frame);
  const PlaneD blurred = gaussian_blur(frame, sigma).data;
  const Gradient g = sobel(blurred);
  const Eigen::Index rows = blurred.rows();
  const Eigen::Index cols = blurred.cols();

  EdgeMap out;
  out.gradient_magnitude = (g.gx.square() + g.gy.square()).sqrt();
  out.gradient_angle = PlaneD(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      double a = std::atan2(g.gy(y, x), g.gx(y, x));
      if (a < 0.0) a += std::numbers::pi;
      if (a >= std::numbers::pi) a -= std::numbers::pi;
      out.gradient_angle(y, x) = a;
    }
  }

  const PlaneD& mag = out.gradient_magnitude;
  auto mag_at = [&](Eigen::Index y, Eigen::Index x) {
    return mag(std::clamp<Eigen::Index>(y, 0, rows - 1), std::clamp<Eigen::Index>(x, 0, cols - 1));
  };

  // 0: suppressed, 1: weak, 2: strong
  Plane<std::uint8_t> cls = Plane<std::uint8_t>::Zero(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      const double m = mag(y, x);
      if (!(m > low)) continue;
      const auto [dx, dy] = nms_offset(out.gradient_angle(y, x));
      // Strict on one side, inclusive on the other: plateaus of two keep one pixel.
      if (m > mag_at(y - dy, x - dx) && m >= mag_at(y + dy, x + dx)) {
        cls(y, x) = m >= high ? 2 : 1;
      }
    }
  }

  out.edge = Mask::Constant(rows, cols, false);
  std::queue<std::array<Eigen::Index, 2>> frontier;
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      if (cls(y, x) == 2) {
        out.edge(y, x) = true;
        frontier.push({y, x});
      }
    }
  }
  while (!frontier.empty()) {
    const auto [y, x] = frontier.front();
    frontier.pop();
    for (Eigen::Index ny = y - 1; ny <= y + 1; ++ny) {
      for (Eigen::Index nx = x - 1; nx <= x + 1; ++nx) {
        if (ny < 0 || nx < 0 || ny >= rows || nx >= cols) continue;
        if (cls(ny, nx) == 1 && !out.edge(ny, nx)) {
          out.edge(ny, nx) = true;
          frontier.push({ny, nx});
        }
      }
    }
  }
  return out;
}

}  // namespace glotsal
