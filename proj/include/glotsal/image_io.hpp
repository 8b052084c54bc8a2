#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "glotsal/imgproc.hpp"

namespace glotsal {

// PNG: 1 or 3 channels (palette expanded to 3), 8 or 16 bit. Images with an
// alpha channel are rejected.
RawImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RawImage& image);

// Binary (P5) and ASCII (P2) graymaps, maxval up to 65535.
RawImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const RawImage& image);

// Dispatches on the file signature.
RawImage read_image(const std::filesystem::path& path);

// Quantizes a [0, 1] frame to a 1-channel raw image.
RawImage to_raw(const Frame& frame, int bit_depth = 8);

// Frame files named by `input`: every .png/.pgm in a directory, or the
// matches of a glob pattern, in lexicographic order.
std::vector<std::filesystem::path> list_frames(const std::string& input);

// Decodes frames [first, first + count) of list_frames(input); count -1 takes
// the rest. Frame indices are positions in the full listing.
std::vector<Frame> load_frames(const std::string& input, int first = 0, int count = -1);

}  // namespace glotsal
