#include "glotsal/image_io.hpp"

#include <glob.h>
#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace glotsal {

namespace fs = std::filesystem;

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_file(const fs::path& path, const char* mode) {
  File f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

void png_error_handler(png_structp png, png_const_charp message) {
  auto* text = static_cast<std::string*>(png_get_error_ptr(png));
  if (text) *text = message;
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

}  // namespace

RawImage read_png(const fs::path& path) {
  File file = open_file(path, "rb");
  std::string message;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, png_error_handler,
                                           png_warning_handler);
  if (!png) throw IoError("libpng: out of memory");
  png_infop info = png_create_info_struct(png);
  RawImage img;
  std::vector<png_bytep> rows;
  std::vector<unsigned char> buffer;
  std::string format_problem;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(path.string() + ": " + message);
  }
  png_init_io(png, file.get());
  png_read_info(png, info);

  const int color = png_get_color_type(png, info);
  int depth = png_get_bit_depth(png, info);
  if (color & PNG_COLOR_MASK_ALPHA) {
    format_problem = "alpha channel is not supported";
  } else if (color == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(png);
    depth = 8;
  } else if (color == PNG_COLOR_TYPE_GRAY && depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
    depth = 8;
  }
  if (format_problem.empty() && png_get_valid(png, info, PNG_INFO_tRNS)) {
    format_problem = "transparency is not supported";
  }
  if (!format_problem.empty()) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(path.string() + ": " + format_problem);
  }
  if (depth == 16) png_set_swap(png);  // host-order samples below
  png_read_update_info(png, info);

  img.width = static_cast<int>(png_get_image_width(png, info));
  img.height = static_cast<int>(png_get_image_height(png, info));
  img.channels = png_get_channels(png, info);
  img.bit_depth = depth;
  const std::size_t stride = png_get_rowbytes(png, info);
  buffer.resize(stride * img.height);
  rows.resize(img.height);
  for (int y = 0; y < img.height; ++y) rows[y] = buffer.data() + stride * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  const std::size_t n = static_cast<std::size_t>(img.width) * img.height * img.channels;
  img.samples.resize(n);
  if (depth == 16) {
    for (int y = 0; y < img.height; ++y) {
      const auto* row = reinterpret_cast<const std::uint16_t*>(rows[y]);
      std::copy(row, row + static_cast<std::size_t>(img.width) * img.channels,
                img.samples.begin() + static_cast<long>(y) * img.width * img.channels);
    }
  } else {
    for (int y = 0; y < img.height; ++y) {
      std::copy(rows[y], rows[y] + static_cast<std::size_t>(img.width) * img.channels,
                img.samples.begin() + static_cast<long>(y) * img.width * img.channels);
    }
  }
  return img;
}

void write_png(const fs::path& path, const RawImage& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw FormatError("write_png: unsupported channel count " + std::to_string(image.channels));
  }
  if (image.bit_depth != 8 && image.bit_depth != 16) {
    throw FormatError("write_png: unsupported bit depth " + std::to_string(image.bit_depth));
  }
  File file = open_file(path, "wb");
  std::string message;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, png_error_handler,
                                            png_warning_handler);
  if (!png) throw IoError("libpng: out of memory");
  png_infop info = png_create_info_struct(png);

  const int bytes = image.bit_depth / 8;
  const std::size_t stride = static_cast<std::size_t>(image.width) * image.channels * bytes;
  std::vector<unsigned char> buffer(stride * image.height);
  for (std::size_t k = 0; k < image.samples.size(); ++k) {
    const std::uint16_t v = image.samples[k];
    if (bytes == 1) {
      buffer[k] = static_cast<unsigned char>(v);
    } else {
      buffer[2 * k] = static_cast<unsigned char>(v >> 8);  // PNG is big-endian
      buffer[2 * k + 1] = static_cast<unsigned char>(v & 0xff);
    }
  }
  std::vector<png_bytep> rows(image.height);
  for (int y = 0; y < image.height; ++y) rows[y] = buffer.data() + stride * y;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError(path.string() + ": " + message);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, image.width, image.height, image.bit_depth,
               image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

namespace {

// Next header token of a PNM file, skipping whitespace and comments.
std::string pnm_token(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  return token;
}

int pnm_int(std::istream& in, const fs::path& path, const char* what) {
  const std::string token = pnm_token(in);
  try {
    std::size_t used = 0;
    const int v = std::stoi(token, &used);
    if (used == token.size() && v > 0) return v;
  } catch (const std::exception&) {
  }
  throw FormatError(path.string() + ": bad PGM " + what + " '" + token + "'");
}

}  // namespace

RawImage read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string magic = pnm_token(in);
  if (magic != "P5" && magic != "P2") {
    throw FormatError(path.string() + ": not a PGM file (magic '" + magic + "')");
  }
  RawImage img;
  img.width = pnm_int(in, path, "width");
  img.height = pnm_int(in, path, "height");
  const int maxval = pnm_int(in, path, "maxval");
  if (maxval > 65535) throw FormatError(path.string() + ": PGM maxval " + std::to_string(maxval));
  img.channels = 1;
  img.bit_depth = maxval > 255 ? 16 : 8;
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  img.samples.resize(n);

  if (magic == "P5") {
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(n * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
      throw FormatError(path.string() + ": truncated PGM data");
    }
    for (std::size_t k = 0; k < n; ++k) {
      img.samples[k] = bytes == 1 ? raw[k] : static_cast<std::uint16_t>(raw[2 * k] << 8 | raw[2 * k + 1]);
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      long v = -1;
      if (!(in >> v) || v < 0 || v > maxval) {
        throw FormatError(path.string() + ": bad PGM sample at " + std::to_string(k));
      }
      img.samples[k] = static_cast<std::uint16_t>(v);
    }
  }
  // Samples are rescaled to the full range of the stored bit depth.
  const int full = img.bit_depth == 16 ? 65535 : 255;
  if (maxval != full) {
    for (auto& s : img.samples) {
      s = static_cast<std::uint16_t>((static_cast<long>(s) * full + maxval / 2) / maxval);
    }
  }
  return img;
}

void write_pgm(const fs::path& path, const RawImage& image) {
  if (image.channels != 1) {
    throw FormatError("write_pgm: unsupported channel count " + std::to_string(image.channels));
  }
  if (image.bit_depth != 8 && image.bit_depth != 16) {
    throw FormatError("write_pgm: unsupported bit depth " + std::to_string(image.bit_depth));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const int maxval = image.bit_depth == 16 ? 65535 : 255;
  out << "P5\n" << image.width << ' ' << image.height << '\n' << maxval << '\n';
  for (const std::uint16_t v : image.samples) {
    if (maxval > 255) out.put(static_cast<char>(v >> 8));
    out.put(static_cast<char>(v & 0xff));
  }
  if (!out) throw IoError("cannot write " + path.string());
}

RawImage read_image(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), 8);
  in.close();
  if (png_sig_cmp(sig, 0, 8) == 0) return read_png(path);
  if (sig[0] == 'P' && (sig[1] == '5' || sig[1] == '2')) return read_pgm(path);
  throw FormatError(path.string() + ": unrecognized image format");
}

RawImage to_raw(const Frame& frame, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) {
    throw FormatError("unsupported bit depth " + std::to_string(bit_depth));
  }
  RawImage img;
  img.width = frame.width();
  img.height = frame.height();
  img.channels = 1;
  img.bit_depth = bit_depth;
  const double full = bit_depth == 16 ? 65535.0 : 255.0;
  img.samples.resize(static_cast<std::size_t>(img.width) * img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double v = std::clamp(frame.data(y, x), 0.0, 1.0);
      img.samples[static_cast<std::size_t>(y) * img.width + x] =
          static_cast<std::uint16_t>(std::lround(v * full));
    }
  }
  return img;
}

std::vector<fs::path> list_frames(const std::string& input) {
  std::vector<fs::path> files;
  std::error_code ec;
  if (fs::is_directory(input, ec)) {
    for (const auto& entry : fs::directory_iterator(input)) {
      if (!entry.is_regular_file()) continue;
      std::string ext = entry.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (ext == ".png" || ext == ".pgm") files.push_back(entry.path());
    }
  } else {
    glob_t matches{};
    const int rc = ::glob(input.c_str(), 0, nullptr, &matches);
    if (rc == 0) {
      for (std::size_t k = 0; k < matches.gl_pathc; ++k) files.emplace_back(matches.gl_pathv[k]);
    }
    globfree(&matches);
    if (rc != 0 && rc != GLOB_NOMATCH) throw IoError("cannot expand pattern " + input);
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<Frame> load_frames(const std::string& input, int first, int count) {
  if (first < 0) throw ParameterError("first frame must be >= 0");
  const std::vector<fs::path> files = list_frames(input);
  const int available = static_cast<int>(files.size()) - first;
  const int take = count < 0 ? available : std::min(count, available);
  if (take < 2) {
    throw InputError("need at least 2 frames, found " + std::to_string(std::max(take, 0)) +
                     " in " + input);
  }
  std::vector<Frame> frames;
  frames.reserve(take);
  for (int k = 0; k < take; ++k) {
    const fs::path& file = files[first + k];
    Frame f = to_grayscale(read_image(file), first + k);
    if (!frames.empty() && (f.width() != frames[0].width() || f.height() != frames[0].height())) {
      throw InputError("frame size mismatch: " + file.string() + " is " + std::to_string(f.width()) +
                       "x" + std::to_string(f.height()) + " but " + files[first].string() + " is " +
                       std::to_string(frames[0].width()) + "x" + std::to_string(frames[0].height()));
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace glotsal
