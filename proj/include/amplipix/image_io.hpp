#pragma once

#include <string>

#include "amplipix/image.hpp"

namespace amplipix {

// PNG, 8- or 16-bit, grayscale or RGB (alpha channels are dropped on read).
// Integer samples map to floats by dividing by the bit depth's max value.
// Palette and interlaced files are rejected.
ImageBuf read_png(const std::string& path);
void write_png(const ImageBuf& img, const std::string& path,
               int bit_depth = 8);

// Binary netpbm: P6 (color) and P5 (grayscale), maxval up to 65535.
ImageBuf read_pnm(const std::string& path);
void write_pnm(const ImageBuf& img, const std::string& path,
               int bit_depth = 8);

// Dispatch on file magic (read) or extension (write: .png/.ppm/.pgm/.pnm).
ImageBuf read_image(const std::string& path);
void write_image(const ImageBuf& img, const std::string& path,
                 int bit_depth = 8);

}  // namespace amplipix
