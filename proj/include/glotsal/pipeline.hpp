#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "glotsal/contour.hpp"
#include "glotsal/flow.hpp"
#include "glotsal/imgproc.hpp"
#include "glotsal/lattice.hpp"
#include "glotsal/solver.hpp"

namespace glotsal {

struct DebugDumps {
  bool velocity = false;
  bool saliency = false;
  bool lattice = false;
};

struct PipelineConfig {
  FlowParams flow;
  NetworkParams network;
  CannyParams canny;
  ContourParams contour;

  std::string input;   // directory or glob pattern of frames
  std::string output;  // output directory
  int first_frame = 0;
  int frame_count = -1;  // -1: through the last file
  double fps = 4000.0;
  int threads = 1;
  bool overlays = true;
  DebugDumps dumps;
};

void validate(const PipelineConfig& cfg);

struct FrameDiagnostics {
  int edge_pixels = 0;
  std::size_t active_elements = 0;
  int valid_velocity = 0;
  std::size_t front_truncations = 0;
};

struct PipelineResult {
  std::vector<GlottisResult> frames;
  std::vector<FrameDiagnostics> diagnostics;
  GawSeries gaw;
};

// Everything computed for one frame, handed to an observer (debug dumps).
// Observers run on worker threads, one call per frame, in no fixed order.
struct FrameProducts {
  int position = 0;
  const Frame* frame = nullptr;
  const EdgeMap* edges = nullptr;
  const VelocityField* velocity = nullptr;
  const ElementLattice* lattice = nullptr;
  const SaliencyState* state = nullptr;
};
using FrameObserver = std::function<void(const FrameProducts&)>;

// Per frame t: Canny edges and lattice on t; velocity from (t, t+1), the last
// frame reusing the previous pair; network solve; contour readout. Results
// come back in frame order whatever cfg.threads is.
PipelineResult run_pipeline(std::span<const Frame> frames, const PipelineConfig& cfg,
                            const FrameObserver& observer = {});

}  // namespace glotsal
