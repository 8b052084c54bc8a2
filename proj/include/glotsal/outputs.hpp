#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "glotsal/contour.hpp"
#include "glotsal/flow.hpp"
#include "glotsal/imgproc.hpp"
#include "glotsal/lattice.hpp"
#include "glotsal/pipeline.hpp"
#include "glotsal/solver.hpp"

namespace glotsal {

// contours.json body. The config block records every parameter that affects
// results; the thread count is left out so output does not depend on it.
std::string contours_json(std::span<const GlottisResult> frames, const PipelineConfig& cfg);

struct ContoursDocument {
  std::string config;  // the config object, re-serialized
  std::vector<GlottisResult> frames;  // peak_saliency is not stored
};

// Throws FormatError on malformed documents.
ContoursDocument parse_contours_json(const std::string& text);

// Header `frame,area_px2`, areas with two decimals.
std::string gaw_csv(const GawSeries& gaw);

// The frame as 8-bit RGB with the contour drawn in pure red, 1 px wide.
RawImage render_overlay(const Frame& frame, const GlottisResult& result);

// contours.json, gaw.csv and, when cfg.overlays, overlay_%06d.png into
// cfg.output (created if needed). `frames` are the inputs behind `result`.
void write_outputs(const PipelineResult& result, std::span<const Frame> frames,
                   const PipelineConfig& cfg);

// Debug dumps. Binary planes are little-endian float32, row-major, each with
// a JSON header next to it.
void dump_velocity(const std::filesystem::path& stem, const VelocityField& field, double lambda1);
void dump_saliency(const std::filesystem::path& stem, const SaliencyState& state,
                   const ElementLattice& lattice);
void dump_lattice(const std::filesystem::path& path, const ElementLattice& lattice);

// Observer writing the dumps enabled in cfg.dumps into cfg.output/debug.
FrameObserver dump_observer(const PipelineConfig& cfg);

std::string pattern_name(const char* prefix, int index, const char* suffix);

}  // namespace glotsal
