#include "glotsal/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace glotsal {

ElementId SaliencyState::argmax() const {
  ElementId best = kNoElement;
  for (ElementId id = 0; id < size(); ++id) {
    if (best == kNoElement || phi[id] > phi[best]) best = id;
  }
  return best;
}

namespace {

struct FrontPoint {
  double su;
  double ms;
  ElementId next;
};

// Preference among exactly tied points: stopping first, then the lowest id.
inline long tie_rank(ElementId next) { return next == kNoElement ? -1L : static_cast<long>(next); }

inline double cross(const FrontPoint& o, const FrontPoint& a, const FrontPoint& b) {
  return (a.su - o.su) * (b.ms - o.ms) - (a.ms - o.ms) * (b.su - o.su);
}

// Reduces candidate (SU, MS) pairs to the points that maximize a*SU + beta*MS
// for some a in [0, alpha], ordered by increasing SU.
class FrontReducer {
 public:
  FrontReducer(double alpha, double beta) : alpha_(alpha), beta_(beta) {}

  // Writes at most kFrontCapacity points to `out`; returns the count and
  // sets `truncated` when more were on the front.
  int reduce(std::vector<FrontPoint>& cands, FrontPoint* out, bool& truncated) {
    truncated = false;
    if (beta_ == 0.0) {
      const FrontPoint* best = &cands.front();
      for (const FrontPoint& c : cands) {
        if (c.su > best->su || (c.su == best->su && (c.ms > best->ms ||
                                                     (c.ms == best->ms &&
                                                      tie_rank(c.next) < tie_rank(best->next))))) {
          best = &c;
        }
      }
      out[0] = *best;
      return 1;
    }

    const FrontPoint* top = &cands.front();
    for (const FrontPoint& c : cands) {
      if (c.ms > top->ms || (c.ms == top->ms && (c.su > top->su ||
                                                 (c.su == top->su &&
                                                  tie_rank(c.next) < tie_rank(top->next))))) {
        top = &c;
      }
    }
    const FrontPoint head = *top;
    right_.clear();
    for (const FrontPoint& c : cands) {
      if (c.su > head.su) right_.push_back(c);
    }
    std::sort(right_.begin(), right_.end(), [](const FrontPoint& a, const FrontPoint& b) {
      if (a.su != b.su) return a.su < b.su;
      if (a.ms != b.ms) return a.ms > b.ms;
      return tie_rank(a.next) < tie_rank(b.next);
    });

    hull_.clear();
    hull_.push_back(head);
    for (std::size_t k = 0; k < right_.size(); ++k) {
      if (k > 0 && right_[k].su == right_[k - 1].su) continue;
      const FrontPoint& c = right_[k];
      while (hull_.size() >= 2 && cross(hull_[hull_.size() - 2], hull_.back(), c) >= 0.0) {
        hull_.pop_back();
      }
      hull_.push_back(c);
    }

    // Keep points that become optimal before the direction reaches alpha.
    std::size_t keep = 1;
    const double limit = alpha_ * (1.0 + 1e-12);
    while (keep < hull_.size()) {
      const FrontPoint& a = hull_[keep - 1];
      const FrontPoint& b = hull_[keep];
      const double entry = beta_ * (a.ms - b.ms) / (b.su - a.su);
      if (!(entry <= limit)) break;
      ++keep;
    }

    if (keep > static_cast<std::size_t>(kFrontCapacity)) {
      truncated = true;
      std::copy(hull_.begin(), hull_.begin() + (kFrontCapacity - 1), out);
      out[kFrontCapacity - 1] = hull_[keep - 1];
      return kFrontCapacity;
    }
    std::copy(hull_.begin(), hull_.begin() + keep, out);
    return static_cast<int>(keep);
  }

 private:
  double alpha_;
  double beta_;
  std::vector<FrontPoint> right_;
  std::vector<FrontPoint> hull_;
};

void require_shapes(const ElementLattice& lattice, const VelocityField& field) {
  if (field.width() != lattice.width() || field.height() != lattice.height()) {
    throw ShapeError("solver: velocity field " + std::to_string(field.width()) + "x" +
                     std::to_string(field.height()) + " does not match lattice " +
                     std::to_string(lattice.width()) + "x" + std::to_string(lattice.height()));
  }
}

}  // namespace

SaliencyState run_dp(const ElementLattice& lattice, const VelocityField& field,
                     const NetworkParams& p) {
  validate(p);
  require_shapes(lattice, field);
  if (p.ms_form == MsForm::head_anchored) {
    throw ParameterError(
        "run_dp: the head-anchored motion form has no finite-state recurrence; use "
        "brute_force_max on small instances");
  }

  const ElementId n = lattice.size();
  std::array<double, 8> curvature{};
  for (int k = 0; k < 8; ++k) {
    const double dtheta = turn_angle(0, k);
    curvature[k] = std::exp(-p.curvature_scale * dtheta * dtheta);
  }

  // Per-element constants: local term, gated velocity and its magnitude.
  std::vector<double> sigma(n), motion(n);
  std::vector<Eigen::Vector2d> velocity(n);
  
  for (ElementId i = 0; i < n; ++i) {
    sigma[i] = lattice.sigma(i);
    velocity[i] = element_velocity(field, lattice, i, p);
    motion[i] = magnitude(velocity[i]);

  }

  std::vector<FrontPoint> current(static_cast<std::size_t>(n) * kFrontCapacity);
  std::vector<FrontPoint> updated(current.size());
  std::vector<std::uint8_t> count(n, 1), next_count(n, 0);
  for (ElementId i = 0; i < n; ++i) {
    current[static_cast<std::size_t>(i) * kFrontCapacity] = {sigma[i], motion[i], kNoElement};
  }

  SaliencyState state;
  FrontReducer reducer(p.alpha, p.beta);
  std::vector<FrontPoint> cands;
  cands.reserve(1 + 8 * kFrontCapacity);
  for (int iter = 2; iter <= p.iterations; ++iter) {
    for (ElementId i = 0; i < n; ++i) {
      cands.clear();
      cands.push_back({sigma[i], motion[i], kNoElement});
      const IdRange succ = lattice.successors(i);
      const int dir = lattice.direction(i);
      for (ElementId j = succ.first; j < succ.last; ++j) {
        if (!admissible_turn(dir, lattice.direction(j), p)) continue;
        const double w = lattice.rho(j) * curvature[((lattice.direction(j) - dir) % 8 + 8) % 8];
        const double shift = motion[i] - motion[j] + motion_step(velocity[i], velocity[j], p);
        const FrontPoint* f = &current[static_cast<std::size_t>(j) * kFrontCapacity];
        for (int k = 0; k < count[j]; ++k) {
          cands.push_back({sigma[i] + w * f[k].su, shift + f[k].ms, j});
        }
      }
      bool truncated = false;
      next_count[i] = static_cast<std::uint8_t>(
          reducer.reduce(cands, &updated[static_cast<std::size_t>(i) * kFrontCapacity], truncated));
      if (truncated) ++state.front_truncations;
    }
    current.swap(updated);
    count.swap(next_count);
  }

  state.iteration = p.iterations;
  state.phi.resize(n);
  state.raw_phi.resize(n);
  state.su.resize(n);
  state.ms.resize(n);
  state.best_next.resize(n);
  state.front_size = count;
  for (ElementId i = 0; i < n; ++i) {
    const FrontPoint* f = &current[static_cast<std::size_t>(i) * kFrontCapacity];
    int best = 0;
    double best_value = p.alpha * f[0].su + p.beta * f[0].ms;
    for (int k = 1; k < count[i]; ++k) {
      const double value = p.alpha * f[k].su + p.beta * f[k].ms;
      if (value > best_value ||
          (value == best_value && tie_rank(f[k].next) < tie_rank(f[best].next))) {
        best = k;
        best_value = value;
      }
    }
    if (!std::isfinite(best_value)) {
      throw NumericError("run_dp: non-finite saliency at element " + std::to_string(i));
    }
    state.raw_phi[i] = best_value;
    state.su[i] = f[best].su;
    state.ms[i] = f[best].ms;
    state.best_next[i] = f[best].next;
  }

  double su_max = 0.0;
  double ms_max = 0.0;
  for (ElementId i = 0; i < n; ++i) {
    su_max = std::max(su_max, state.su[i]);
    ms_max = std::max(ms_max, state.ms[i]);
  }
  state.scale = {su_max > 0.0 ? su_max : 1.0, ms_max > 0.0 ? ms_max : 1.0};
  for (ElementId i = 0; i < n; ++i) {
    state.phi[i] = p.normalize_maps
                       ? p.alpha * state.su[i] / state.scale.su + p.beta * state.ms[i] / state.scale.ms
                       : state.raw_phi[i];
  }
  return state;
}

namespace {

void check_capacity(const ElementLattice& lattice, const NetworkParams& p, int max_len) {
  if (max_len < 1) throw ParameterError("brute_force: max_len must be >= 1");
  int branching = 0;
  for (int d = 0; d < 8; ++d) branching += admissible_turn(0, d, p) ? 1 : 0;
  double work = lattice.size();
  for (int k = 0; k < max_len; ++k) work *= branching;
  if (work > 1e7) {
    throw CapacityError("brute_force: " + std::to_string(lattice.size()) + " elements x " +
                        std::to_string(branching) + "^" + std::to_string(max_len) +
                        " exceeds the 1e7 enumeration guard");
  }
}

class Enumerator {
 public:
  Enumerator(const ElementLattice& lattice, const VelocityField& field, const NetworkParams& p,
             int max_len)
      : lattice_(lattice), field_(field), p_(p), max_len_(max_len) {}

  // Best value and witness over curves starting at `start`.
  std::pair<double, Curve> from(ElementId start) {
    best_value_ = -std::numeric_limits<double>::infinity();
    best_.elements.clear();
    path_.elements.assign(1, start);
    descend();
    return {best_value_, best_};
  }

 private:
  void descend() {
    const double value = combined_measure(path_, lattice_, field_, p_);
    if (value > best_value_) {
      best_value_ = value;
      best_ = path_;
    }
    if (static_cast<int>(path_.elements.size()) == max_len_) return;
    const ElementId last = path_.elements.back();
    const ElementId rev = lattice_.reverse(last);
    const IdRange succ = lattice_.successors(last);
    for (ElementId j = succ.first; j < succ.last; ++j) {
      if (j == rev || !admissible_turn(lattice_.direction(last), lattice_.direction(j), p_)) continue;
      path_.elements.push_back(j);
      descend();
      path_.elements.pop_back();
    }
  }

  const ElementLattice& lattice_;
  const VelocityField& field_;
  const NetworkParams& p_;
  int max_len_;
  Curve path_;
  Curve best_;
  double best_value_ = 0.0;
};

}  // namespace

std::pair<double, Curve> brute_force_max(const ElementLattice& lattice, const VelocityField& field,
                                         const NetworkParams& p, int max_len) {
  validate(p);
  require_shapes(lattice, field);
  check_capacity(lattice, p, max_len);
  Enumerator walk(lattice, field, p, max_len);
  std::pair<double, Curve> best{-std::numeric_limits<double>::infinity(), Curve{}};
  for (ElementId start = 0; start < lattice.size(); ++start) {
    auto candidate = walk.from(start);
    if (candidate.first > best.first ||
        (candidate.first == best.first && candidate.second.elements.size() < best.second.elements.size())) {
      best = std::move(candidate);
    }
  }
  return best;
}

std::vector<double> brute_force_element_max(const ElementLattice& lattice,
                                            const VelocityField& field, const NetworkParams& p,
                                            int max_len) {
  validate(p);
  require_shapes(lattice, field);
  check_capacity(lattice, p, max_len);
  Enumerator walk(lattice, field, p, max_len);
  std::vector<double> out(lattice.size());
  for (ElementId start = 0; start < lattice.size(); ++start) out[start] = walk.from(start).first;
  return out;
}

Curve backtrack(const SaliencyState& state, const ElementLattice& lattice, ElementId start,
                int max_steps) {
  if (start < 0 || start >= lattice.size()) throw TopologyError("backtrack: start out of range");
  Curve curve;
  curve.elements.push_back(start);
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(lattice.width()) * lattice.height(), 0);
  const int origin = lattice.from_index(start);
  visited[origin] = 1;
  ElementId cur = start;
  for (int step = 0; step < max_steps; ++step) {
    const int head = lattice.to_index(cur);
    if (head == origin) {
      curve.closed = true;
      break;
    }
    if (visited[head]) break;
    visited[head] = 1;
    const ElementId next = state.best_next[cur];
    if (next == kNoElement) break;
    curve.elements.push_back(next);
    cur = next;
  }
  return curve;
}

PlaneD saliency_map(const SaliencyState& state, const ElementLattice& lattice) {
  PlaneD out = PlaneD::Zero(lattice.height(), lattice.width());
  for (int y = 0; y < lattice.height(); ++y) {
    for (int x = 0; x < lattice.width(); ++x) {
      const IdRange out_range = lattice.outgoing(y * lattice.width() + x);
      double best = -std::numeric_limits<double>::infinity();
      for (ElementId id = out_range.first; id < out_range.last; ++id) best = std::max(best, state.phi[id]);
      out(y, x) = best;
    }
  }
  return out;
}

}  // namespace glotsal
