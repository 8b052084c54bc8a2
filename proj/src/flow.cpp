#include "glotsal/flow.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace glotsal {

VelocityField VelocityField::zeros(int width, int height) {
  return {PlaneD::Zero(height, width), PlaneD::Zero(height, width),
          Mask::Constant(height, width, false)};
}

void validate(const FlowParams& p) {
  if (p.window_radius < 1) throw ParameterError("flow: window_radius must be >= 1");
  if (!(p.min_eigenvalue > 0.0)) throw ParameterError("flow: min_eigenvalue must be > 0");
  if (!(p.lambda1 > 0.0)) throw ParameterError("flow: lambda1 must be > 0");
  if (p.pyramid_levels < 1) throw ParameterError("flow: pyramid_levels must be >= 1");
}

namespace {

double sample_clamped(const PlaneD& img, Eigen::Index y, Eigen::Index x) {
  return img(std::clamp<Eigen::Index>(y, 0, img.rows() - 1),
             std::clamp<Eigen::Index>(x, 0, img.cols() - 1));
}

double bilinear(const PlaneD& img, double y, double x) {
  const double fy = std::floor(y);
  const double fx = std::floor(x);
  const double ty = y - fy;
  const double tx = x - fx;
  const auto y0 = static_cast<Eigen::Index>(fy);
  const auto x0 = static_cast<Eigen::Index>(fx);
  return (1 - ty) * ((1 - tx) * sample_clamped(img, y0, x0) + tx * sample_clamped(img, y0, x0 + 1)) +
         ty * ((1 - tx) * sample_clamped(img, y0 + 1, x0) + tx * sample_clamped(img, y0 + 1, x0 + 1));
}

PlaneD downsample(const PlaneD& img) {
  const PlaneD smooth = gaussian_blur(img, 1.0);
  const Eigen::Index rows = std::max<Eigen::Index>(1, (img.rows() + 1) / 2);
  const Eigen::Index cols = std::max<Eigen::Index>(1, (img.cols() + 1) / 2);
  PlaneD out(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y)
    for (Eigen::Index x = 0; x < cols; ++x) out(y, x) = sample_clamped(smooth, 2 * y, 2 * x);
  return out;
}

PlaneD upsample_flow(const PlaneD& flow, Eigen::Index rows, Eigen::Index cols) {
  PlaneD out(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y)
    for (Eigen::Index x = 0; x < cols; ++x)
      out(y, x) = 2.0 * bilinear(flow, y / 2.0, x / 2.0);
  return out;
}

// One LK solve on a level, refining (u, v) in place. Returns validity.
Mask lk_level(const PlaneD& prev, const PlaneD& next, int radius, double min_eig, PlaneD& u,
              PlaneD& v) {
  const Eigen::Index rows = prev.rows();
  const Eigen::Index cols = prev.cols();
  PlaneD ix(rows, cols), iy(rows, cols), it(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      ix(y, x) = 0.5 * (sample_clamped(prev, y, x + 1) - sample_clamped(prev, y, x - 1));
      iy(y, x) = 0.5 * (sample_clamped(prev, y + 1, x) - sample_clamped(prev, y - 1, x));
      const double warped = (u(y, x) == 0.0 && v(y, x) == 0.0)
                                ? next(y, x)
                                : bilinear(next, y + v(y, x), x + u(y, x));
      it(y, x) = warped - prev(y, x);
    }
  }

  Mask valid = Mask::Constant(rows, cols, false);
  PlaneD du = PlaneD::Zero(rows, cols);
  PlaneD dv = PlaneD::Zero(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      Eigen::Matrix2d tensor = Eigen::Matrix2d::Zero();
      Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
      for (Eigen::Index wy = std::max<Eigen::Index>(0, y - radius);
           wy <= std::min<Eigen::Index>(rows - 1, y + radius); ++wy) {
        for (Eigen::Index wx = std::max<Eigen::Index>(0, x - radius);
             wx <= std::min<Eigen::Index>(cols - 1, x + radius); ++wx) {
          const double gx = ix(wy, wx);
          const double gy = iy(wy, wx);
          const double gt = it(wy, wx);
          tensor(0, 0) += gx * gx;
          tensor(0, 1) += gx * gy;
          tensor(1, 1) += gy * gy;
          rhs(0) -= gx * gt;
          rhs(1) -= gy * gt;
        }
      }
      tensor(1, 0) = tensor(0, 1);
      const double half_trace = 0.5 * (tensor(0, 0) + tensor(1, 1));
      const double half_diff = 0.5 * (tensor(0, 0) - tensor(1, 1));
      const double min_eigen = half_trace - std::hypot(half_diff, tensor(0, 1));
      if (!(min_eigen >= min_eig)) continue;
      const Eigen::Vector2d d = tensor.ldlt().solve(rhs);
      if (!d.allFinite()) continue;
      valid(y, x) = true;
      du(y, x) = d(0);
      dv(y, x) = d(1);
    }
  }
  u += du;
  v += dv;
  return valid;
}

}  // namespace

VelocityField lk_velocity(const Frame& prev, const Frame& next, const FlowParams& p) {
  validate(p);
  if (prev.width() != next.width() || prev.height() != next.height()) {
    throw ShapeError("lk_velocity: frame dimensions differ (" + std::to_string(prev.width()) + "x" +
                     std::to_string(prev.height()) + " vs " + std::to_string(next.width()) + "x" +
                     std::to_string(next.height()) + ")");
  }

  std::vector<PlaneD> prev_pyr{prev.data};
  std::vector<PlaneD> next_pyr{next.data};
  for (int level = 1; level < p.pyramid_levels; ++level) {
    if (prev_pyr.back().rows() < 8 || prev_pyr.back().cols() < 8) break;
    prev_pyr.push_back(downsample(prev_pyr.back()));
    next_pyr.push_back(downsample(next_pyr.back()));
  }

  const auto levels = static_cast<int>(prev_pyr.size());
  PlaneD u = PlaneD::Zero(prev_pyr.back().rows(), prev_pyr.back().cols());
  PlaneD v = u;
  Mask valid;
  for (int level = levels - 1; level >= 0; --level) {
    const PlaneD& a = prev_pyr[level];
    if (u.rows() != a.rows() || u.cols() != a.cols()) {
      u = upsample_flow(u, a.rows(), a.cols());
      v = upsample_flow(v, a.rows(), a.cols());
    }
    valid = lk_level(a, next_pyr[level], p.window_radius, p.min_eigenvalue, u, v);
  }

  VelocityField out{std::move(u), std::move(v), std::move(valid)};
  for (Eigen::Index y = 0; y < out.vx.rows(); ++y) {
    for (Eigen::Index x = 0; x < out.vx.cols(); ++x) {
      if (!out.valid(y, x) || !std::isfinite(out.vx(y, x)) || !std::isfinite(out.vy(y, x))) {
        out.valid(y, x) = false;
        out.vx(y, x) = 0.0;
        out.vy(y, x) = 0.0;
      }
    }
  }
  return out;
}

double normalize_component(double x, double lambda1) {
  // tanh rounds to exactly +-1 for large arguments; keep the open interval.
  constexpr double kEdge = 1.0 - std::numeric_limits<double>::epsilon();
  return std::clamp(std::tanh(lambda1 * x), -kEdge, kEdge);
}

VelocityField normalize_velocity(const VelocityField& v, double lambda1) {
  if (!(lambda1 > 0.0)) throw ParameterError("normalize_velocity: lambda1 must be > 0");
  VelocityField out = v;
  for (Eigen::Index y = 0; y < v.vx.rows(); ++y) {
    for (Eigen::Index x = 0; x < v.vx.cols(); ++x) {
      if (!std::isfinite(v.vx(y, x)) || !std::isfinite(v.vy(y, x))) {
        throw DataError("normalize_velocity: non-finite velocity at (" + std::to_string(x) + "," +
                        std::to_string(y) + ")");
      }
      out.vx(y, x) = normalize_component(v.vx(y, x), lambda1);
      out.vy(y, x) = normalize_component(v.vy(y, x), lambda1);
    }
  }
  return out;
}

}  // namespace glotsal
