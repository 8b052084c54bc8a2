// glottal-saliency: batch glottis contour delineation.
//
//   glottal-saliency run --input DIR --output DIR [options]
//   glottal-saliency synth --output DIR [options]
//   glottal-saliency oracle [options]
//
// Every option can also be set through GLOTSAL_<OPTION>, e.g. GLOTSAL_ALPHA.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "glotsal/contour.hpp"
#include "glotsal/image_io.hpp"
#include "glotsal/instances.hpp"
#include "glotsal/outputs.hpp"
#include "glotsal/pipeline.hpp"
#include "glotsal/solver.hpp"
#include "glotsal/synth.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace glotsal;

namespace {

const std::map<std::string, MsForm> kMsForms{{"adjacent", MsForm::adjacent},
                                             {"head_anchored", MsForm::head_anchored}};

// Adds --name with GLOTSAL_NAME as its environment fallback.
template <typename T>
CLI::Option* option(CLI::App* app, const std::string& name, T& value, const std::string& help) {
  std::string env = "GLOTSAL_";
  for (char c : name) env += c == '-' ? '_' : static_cast<char>(std::toupper(c));
  return app->add_option("--" + name, value, help)->envname(env)->capture_default_str();
}

CLI::Option* flag(CLI::App* app, const std::string& name, bool& value, const std::string& help) {
  std::string env = "GLOTSAL_";
  for (char c : name) env += c == '-' ? '_' : static_cast<char>(std::toupper(c));
  return app->add_flag("--" + name, value, help)->envname(env);
}

void add_network_options(CLI::App* app, NetworkParams& n) {
  option(app, "alpha", n.alpha, "weight of the SU measure");
  option(app, "beta", n.beta, "weight of the motion measure");
  option(app, "rho-active", n.rho_active, "attenuation of active elements");
  option(app, "rho-virtual", n.rho_virtual, "attenuation of virtual elements");
  option(app, "kappa", n.curvature_scale, "curvature scale");
  option(app, "iterations", n.iterations, "network iterations (longest curve, in elements)");
  option(app, "ms-form", n.ms_form, "motion measure form")
      ->transform(CLI::CheckedTransformer(kMsForms, CLI::ignore_case));
  option(app, "lambda2", n.lambda2, "spatial distance steepness");
  option(app, "alignment-tolerance", n.alignment_tolerance,
         "extra radians on the pi/4 tangent window of active elements");
  option(app, "max-turn", n.max_turn, "largest turn between consecutive elements, radians");
  option(app, "normalize-maps", n.normalize_maps, "rescale SU and MS maps before blending");
  option(app, "clamp-ms", n.clamp_ms, "floor negative motion steps at zero");
  option(app, "motion-on-active-only", n.motion_on_active_only,
         "only active elements carry velocity into the motion measure");
}

int run(PipelineConfig& cfg) {
  const std::vector<Frame> frames = load_frames(cfg.input, cfg.first_frame, cfg.frame_count);
  const PipelineResult result = run_pipeline(frames, cfg, dump_observer(cfg));
  write_outputs(result, frames, cfg);

  int ok = 0;
  for (const GlottisResult& r : result.frames) ok += r.status == ContourStatus::ok;
  std::printf("%zu frames, %d ok", result.frames.size(), ok);
  if (result.frames.size() >= 4) {
    std::printf(", dominant GAW period %.2f frames", dominant_period(result.gaw).period_frames);
  }
  std::printf("\n");
  for (int index : result.gaw.flagged) {
    const auto& r = result.frames[static_cast<std::size_t>(index - result.frames.front().frame_index)];
    std::printf("  frame %d: %s\n", index, std::string(to_string(r.status)).c_str());
  }
  return 0;
}

int synth(const SynthSpec& spec, const std::string& output, const std::string& format) {
  const SynthSequence seq = generate(spec);
  const fs::path dir(output);
  fs::create_directories(dir);
  nlohmann::ordered_json truth;
  truth["width"] = spec.width;
  truth["height"] = spec.height;
  truth["period_frames"] = spec.period_frames;
  truth["noise_sigma"] = spec.noise_sigma;
  truth["seed"] = spec.seed;
  truth["frames"] = nlohmann::ordered_json::array();
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    const Frame& f = seq.frames[t];
    const std::string name = pattern_name("frame_", f.index, format == "pgm" ? ".pgm" : ".png");
    if (format == "pgm") {
      write_pgm(dir / name, to_raw(f, 16));
    } else {
      write_png(dir / name, to_raw(f, 16));
    }
    const SynthFrameTruth& g = seq.truth[t];
    nlohmann::ordered_json entry;
    entry["file"] = name;
    entry["cx"] = g.cx;
    entry["cy"] = g.cy;
    entry["a"] = g.a;
    entry["b"] = g.b;
    entry["area_px2"] = g.area();
    nlohmann::ordered_json boundary = nlohmann::ordered_json::array();
    for (const auto& p : g.boundary) boundary.push_back({p.x(), p.y()});
    entry["boundary"] = std::move(boundary);
    truth["frames"].push_back(std::move(entry));
  }
  std::ofstream out(dir / "truth.json");
  out << truth.dump(2) << "\n";
  if (!out) throw IoError("cannot write " + (dir / "truth.json").string());
  std::printf("wrote %zu frames to %s\n", seq.frames.size(), dir.c_str());
  return 0;
}

int oracle(NetworkParams p, int size, int instances, int max_len, std::uint64_t seed) {
  NetworkParams dp = p;
  dp.iterations = max_len;
  InstanceSpec spec;
  spec.width = spec.height = size;
  int mismatches = 0;
  for (int k = 0; k < instances; ++k) {
    const RandomInstance inst = random_instance(seed + static_cast<std::uint64_t>(k), spec, p);
    const double brute = brute_force_max(inst.lattice, inst.field, p, max_len).first;
    if (p.ms_form == MsForm::head_anchored) {
      std::printf("instance %d: brute force %.12f (no recurrence for head_anchored)\n", k, brute);
      continue;
    }
    const SaliencyState state = run_dp(inst.lattice, inst.field, dp);
    double best = -1e300;
    for (double v : state.raw_phi) best = std::max(best, v);
    const bool same = std::fabs(best - brute) <= 1e-9;
    mismatches += !same;
    std::printf("instance %d: dp %.12f brute force %.12f %s\n", k, best, brute, same ? "ok" : "MISMATCH");
  }
  if (p.ms_form == MsForm::adjacent) {
    std::printf("%d/%d instances agree\n", instances - mismatches, instances);
  }
  return mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Glottis contour delineation with a motion-augmented saliency network"};
  app.require_subcommand(1);

  PipelineConfig cfg;
  CLI::App* run_cmd = app.add_subcommand("run", "delineate the glottis in a frame sequence");
  option(run_cmd, "input", cfg.input, "directory of PNG/PGM frames or a glob pattern")->required();
  option(run_cmd, "output", cfg.output, "output directory")->required();
  option(run_cmd, "first-frame", cfg.first_frame, "first frame (position in sorted listing)");
  option(run_cmd, "frame-count", cfg.frame_count, "number of frames, -1 for all");
  option(run_cmd, "fps", cfg.fps, "frame rate recorded in the outputs");
  option(run_cmd, "threads", cfg.threads, "worker threads");
  add_network_options(run_cmd, cfg.network);
  option(run_cmd, "lambda1", cfg.flow.lambda1, "velocity tanh steepness");
  option(run_cmd, "window-radius", cfg.flow.window_radius, "Lucas-Kanade window radius");
  option(run_cmd, "min-eigenvalue", cfg.flow.min_eigenvalue, "Lucas-Kanade conditioning threshold");
  option(run_cmd, "pyramid-levels", cfg.flow.pyramid_levels, "Lucas-Kanade pyramid levels");
  option(run_cmd, "canny-sigma", cfg.canny.sigma, "Canny smoothing");
  option(run_cmd, "canny-low", cfg.canny.low, "Canny low threshold");
  option(run_cmd, "canny-high", cfg.canny.high, "Canny high threshold");
  option(run_cmd, "min-peak", cfg.contour.min_peak, "least raw saliency of a contour");
  option(run_cmd, "min-closed-pixels", cfg.contour.min_closed_pixels, "shortest closed contour");
  bool no_overlays = false;
  flag(run_cmd, "no-overlays", no_overlays, "skip overlay PNGs");
  flag(run_cmd, "dump-velocity", cfg.dumps.velocity, "write velocity fields to debug/");
  flag(run_cmd, "dump-saliency", cfg.dumps.saliency, "write saliency maps to debug/");
  flag(run_cmd, "dump-lattice", cfg.dumps.lattice, "write element lattices to debug/");

  SynthSpec spec;
  std::string synth_output;
  std::string format = "png";
  CLI::App* synth_cmd = app.add_subcommand("synth", "write a synthetic ground-truthed sequence");
  option(synth_cmd, "output", synth_output, "output directory")->required();
  option(synth_cmd, "width", spec.width, "frame width");
  option(synth_cmd, "height", spec.height, "frame height");
  option(synth_cmd, "period", spec.period_frames, "oscillation period in frames");
  option(synth_cmd, "a-max", spec.a_max, "largest horizontal semi-axis");
  option(synth_cmd, "b", spec.b, "vertical semi-axis");
  option(synth_cmd, "noise", spec.noise_sigma, "Gaussian noise sigma");
  option(synth_cmd, "texture", spec.texture_amp, "background texture amplitude");
  option(synth_cmd, "frames", spec.frames, "frame count");
  option(synth_cmd, "seed", spec.seed, "random seed");
  option(synth_cmd, "format", format, "png or pgm")->check(CLI::IsMember({"png", "pgm"}));

  NetworkParams oracle_params;
  int size = 6, instances = 50, max_len = 5;
  std::uint64_t oracle_seed = 1;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "check the solver against brute force on random tiny lattices");
  add_network_options(oracle_cmd, oracle_params);
  option(oracle_cmd, "size", size, "lattice width and height");
  option(oracle_cmd, "instances", instances, "number of random instances");
  option(oracle_cmd, "max-len", max_len, "longest curve, in elements");
  option(oracle_cmd, "seed", oracle_seed, "first instance seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      cfg.overlays = !no_overlays;
      return run(cfg);
    }
    if (*synth_cmd) return synth(spec, synth_output, format);
    if (*oracle_cmd) return oracle(oracle_params, size, instances, max_len, oracle_seed);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
