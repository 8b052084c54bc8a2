#include "glotsal/outputs.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "glotsal/image_io.hpp"
#include "json.hpp"

namespace glotsal {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

ordered_json config_object(const PipelineConfig& cfg) {
  const NetworkParams& n = cfg.network;
  ordered_json c;
  c["input"] = cfg.input;
  c["first_frame"] = cfg.first_frame;
  c["frame_count"] = cfg.frame_count;
  c["fps"] = cfg.fps;
  c["alpha"] = n.alpha;
  c["beta"] = n.beta;
  c["rho_active"] = n.rho_active;
  c["rho_virtual"] = n.rho_virtual;
  c["curvature_scale"] = n.curvature_scale;
  c["iterations"] = n.iterations;
  c["ms_form"] = n.ms_form == MsForm::adjacent ? "adjacent" : "head_anchored";
  c["normalize_maps"] = n.normalize_maps;
  c["clamp_ms"] = n.clamp_ms;
  c["motion_on_active_only"] = n.motion_on_active_only;
  c["lambda2"] = n.lambda2;
  c["alignment_tolerance"] = n.alignment_tolerance;
  c["max_turn"] = n.max_turn;
  c["lambda1"] = cfg.flow.lambda1;
  c["window_radius"] = cfg.flow.window_radius;
  c["min_eigenvalue"] = cfg.flow.min_eigenvalue;
  c["pyramid_levels"] = cfg.flow.pyramid_levels;
  c["canny_sigma"] = cfg.canny.sigma;
  c["canny_low"] = cfg.canny.low;
  c["canny_high"] = cfg.canny.high;
  c["min_peak"] = cfg.contour.min_peak;
  c["min_closed_pixels"] = cfg.contour.min_closed_pixels;
  return c;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

void write_floats(const fs::path& path, const std::vector<float>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (float v : values) {
    auto bits = std::bit_cast<std::uint32_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    char bytes[4];
    std::memcpy(bytes, &bits, 4);
    out.write(bytes, 4);
  }
  if (!out) throw IoError("cannot write " + path.string());
}

void draw_line(RawImage& img, Pixel a, Pixel b) {
  auto plot = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
    const std::size_t k = (static_cast<std::size_t>(y) * img.width + x) * 3;
    img.samples[k] = 255;
    img.samples[k + 1] = 0;
    img.samples[k + 2] = 0;
  };
  int dx = std::abs(b.x - a.x), sx = a.x < b.x ? 1 : -1;
  int dy = -std::abs(b.y - a.y), sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  for (int x = a.x, y = a.y;;) {
    plot(x, y);
    if (x == b.x && y == b.y) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }
}

}  // namespace

std::string pattern_name(const char* prefix, int index, const char* suffix) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%06d%s", prefix, index, suffix);
  return buf;
}

std::string contours_json(std::span<const GlottisResult> frames, const PipelineConfig& cfg) {
  ordered_json doc;
  doc["config"] = config_object(cfg);
  ordered_json list = ordered_json::array();
  for (const GlottisResult& r : frames) {
    ordered_json f;
    f["index"] = r.frame_index;
    f["status"] = std::string(to_string(r.status));
    f["closed"] = r.closed;
    f["area_px2"] = r.area;
    ordered_json pts = ordered_json::array();
    for (const Pixel& p : r.contour) pts.push_back({p.x, p.y});
    f["contour"] = std::move(pts);
    list.push_back(std::move(f));
  }
  doc["frames"] = std::move(list);
  return doc.dump(2) + "\n";
}

ContoursDocument parse_contours_json(const std::string& text) {
  ContoursDocument out;
  try {
    const ordered_json doc = ordered_json::parse(text);
    out.config = doc.at("config").dump();
    for (const auto& f : doc.at("frames")) {
      GlottisResult r;
      r.frame_index = f.at("index").get<int>();
      r.status = parse_status(f.at("status").get<std::string>());
      r.closed = f.at("closed").get<bool>();
      r.area = f.at("area_px2").get<double>();
      for (const auto& p : f.at("contour")) {
        if (!p.is_array() || p.size() != 2) throw FormatError("contour vertex must be [x, y]");
        r.contour.push_back({p[0].get<int>(), p[1].get<int>()});
      }
      out.frames.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("contours.json: ") + e.what());
  }
  return out;
}

std::string gaw_csv(const GawSeries& gaw) {
  std::string out = "frame,area_px2\n";
  char line[64];
  for (const auto& [frame, area] : gaw.samples) {
    std::snprintf(line, sizeof line, "%d,%.2f\n", frame, area);
    out += line;
  }
  return out;
}

RawImage render_overlay(const Frame& frame, const GlottisResult& result) {
  const RawImage gray = to_raw(frame, 8);
  RawImage img;
  img.width = gray.width;
  img.height = gray.height;
  img.channels = 3;
  img.bit_depth = 8;
  img.samples.resize(gray.samples.size() * 3);
  for (std::size_t k = 0; k < gray.samples.size(); ++k) {
    img.samples[3 * k] = img.samples[3 * k + 1] = img.samples[3 * k + 2] = gray.samples[k];
  }
  const auto& c = result.contour;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k + 1 < c.size()) {
      draw_line(img, c[k], c[k + 1]);
    } else if (result.closed && c.size() > 1) {
      draw_line(img, c[k], c.front());
    } else {
      draw_line(img, c[k], c[k]);
    }
  }
  return img;
}

void write_outputs(const PipelineResult& result, std::span<const Frame> frames,
                   const PipelineConfig& cfg) {
  if (result.frames.empty()) throw ParameterError("write_outputs: no frames");
  const fs::path dir(cfg.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
  write_text(dir / "contours.json", contours_json(result.frames, cfg));
  write_text(dir / "gaw.csv", gaw_csv(result.gaw));
  if (cfg.overlays) {
    for (std::size_t k = 0; k < result.frames.size() && k < frames.size(); ++k) {
      const GlottisResult& r = result.frames[k];
      write_png(dir / pattern_name("overlay_", r.frame_index, ".png"), render_overlay(frames[k], r));
    }
  }
}

void dump_velocity(const fs::path& stem, const VelocityField& field, double lambda1) {
  std::vector<float> values;
  values.reserve(static_cast<std::size_t>(field.width()) * field.height() * 2);
  for (const PlaneD* plane : {&field.vx, &field.vy}) {
    for (Eigen::Index y = 0; y < plane->rows(); ++y) {
      for (Eigen::Index x = 0; x < plane->cols(); ++x) values.push_back(static_cast<float>((*plane)(y, x)));
    }
  }
  fs::path bin = stem;
  bin += ".bin";
  fs::path header = stem;
  header += ".json";
  write_floats(bin, values);
  ordered_json h;
  h["width"] = field.width();
  h["height"] = field.height();
  h["lambda1"] = lambda1;
  h["planes"] = {"vx", "vy"};
  h["dtype"] = "float32le";
  write_text(header, h.dump(2) + "\n");
}

void dump_saliency(const fs::path& stem, const SaliencyState& state, const ElementLattice& lattice) {
  const PlaneD map = saliency_map(state, lattice);
  std::vector<float> values;
  values.reserve(static_cast<std::size_t>(map.size()));
  for (Eigen::Index y = 0; y < map.rows(); ++y) {
    for (Eigen::Index x = 0; x < map.cols(); ++x) values.push_back(static_cast<float>(map(y, x)));
  }
  fs::path bin = stem;
  bin += ".bin";
  fs::path header = stem;
  header += ".json";
  write_floats(bin, values);
  ordered_json h;
  h["width"] = lattice.width();
  h["height"] = lattice.height();
  h["iterations"] = state.iteration;
  h["dtype"] = "float32le";
  write_text(header, h.dump(2) + "\n");
}

void dump_lattice(const fs::path& path, const ElementLattice& lattice) {
  std::ostringstream out;
  out << "id,from,to,orientation,active\n";
  for (ElementId id = 0; id < lattice.size(); ++id) {
    const Pixel a = lattice.pixel(lattice.from_index(id));
    const Pixel b = lattice.pixel(lattice.to_index(id));
    char line[96];
    std::snprintf(line, sizeof line, "%d,%d:%d,%d:%d,%d,%d\n", id, a.x, a.y, b.x, b.y,
                  lattice.direction(id), lattice.active(id) ? 1 : 0);
    out << line;
  }
  write_text(path, out.str());
}

FrameObserver dump_observer(const PipelineConfig& cfg) {
  if (!cfg.dumps.velocity && !cfg.dumps.saliency && !cfg.dumps.lattice) return {};
  const fs::path dir = fs::path(cfg.output) / "debug";
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw IoError("cannot create " + dir.string());
  const DebugDumps dumps = cfg.dumps;
  const double lambda1 = cfg.flow.lambda1;
  return [dir, dumps, lambda1](const FrameProducts& p) {
    const int index = p.frame->index;
    if (dumps.velocity) dump_velocity(dir / pattern_name("velocity_", index, ""), *p.velocity, lambda1);
    if (dumps.saliency) dump_saliency(dir / pattern_name("saliency_", index, ""), *p.state, *p.lattice);
    if (dumps.lattice) dump_lattice(dir / pattern_name("lattice_", index, ".csv"), *p.lattice);
  };
}

}  // namespace glotsal
