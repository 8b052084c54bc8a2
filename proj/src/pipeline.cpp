#include "glotsal/pipeline.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace glotsal {

void validate(const PipelineConfig& cfg) {
  validate(cfg.flow);
  validate(cfg.network);
  if (!(cfg.canny.sigma > 0.0) || !(cfg.canny.low > 0.0) || !(cfg.canny.low < cfg.canny.high)) {
    throw ParameterError("canny: require sigma > 0 and 0 < low < high");
  }
  if (cfg.network.ms_form == MsForm::head_anchored) {
    throw ParameterError(
        "head_anchored motion form is only available through the brute-force oracle");
  }
  if (cfg.first_frame < 0) throw ParameterError("first frame must be >= 0");
  if (cfg.frame_count == 0 || cfg.frame_count < -1) {
    throw ParameterError("frame range must be non-empty");
  }
  if (!(cfg.fps > 0.0)) throw ParameterError("fps must be > 0");
  if (cfg.threads < 1) throw ParameterError("threads must be >= 1");
  if (cfg.contour.min_closed_pixels < 3) throw ParameterError("min_closed_pixels must be >= 3");
}

PipelineResult run_pipeline(std::span<const Frame> frames, const PipelineConfig& cfg,
                            const FrameObserver& observer) {
  validate(cfg);
  if (frames.size() < 2) throw InputError("pipeline needs at least 2 frames");
  for (const Frame& f : frames) {
    if (f.width() != frames[0].width() || f.height() != frames[0].height()) {
      throw InputError("frame " + std::to_string(f.index) + " is " + std::to_string(f.width()) +
                       "x" + std::to_string(f.height()) + ", expected " +
                       std::to_string(frames[0].width()) + "x" + std::to_string(frames[0].height()));
    }
  }

  const std::size_t n = frames.size();
  PipelineResult out;
  out.frames.resize(n);
  out.diagnostics.resize(n);

  auto process = [&](std::size_t t) {
    const Frame& frame = frames[t];
    const std::size_t pair = std::min(t, n - 2);
    const EdgeMap edges = canny_edges(frame, cfg.canny);
    const ElementLattice lattice = build_lattice(edges, cfg.network);
    const VelocityField raw = lk_velocity(frames[pair], frames[pair + 1], cfg.flow);
    const VelocityField velocity = normalize_velocity(raw, cfg.flow.lambda1);
    const SaliencyState state = run_dp(lattice, velocity, cfg.network);
    out.frames[t] = extract_contour(state, lattice, cfg.contour, frame.index);

    FrameDiagnostics& d = out.diagnostics[t];
    d.edge_pixels = static_cast<int>(edges.edge.count());
    d.active_elements = lattice.active_count();
    d.valid_velocity = static_cast<int>(velocity.valid.count());
    d.front_truncations = state.front_truncations;
    if (observer) observer({static_cast<int>(t), &frame, &edges, &velocity, &lattice, &state});
  };

  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(cfg.threads, n));
  if (workers <= 1) {
    for (std::size_t t = 0; t < n; ++t) process(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < n; t = next++) {
          try {
            process(t);
          } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  out.gaw = build_gaw(out.frames, cfg.fps);
  return out;
}

}  // namespace glotsal
