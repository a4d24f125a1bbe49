#pragma once

#include <array>
#include <string>

#include "essclose/setmodel.hpp"

namespace essclose {

struct RenderConfig {
  int width = 512;
  int height = 512;
  std::array<int, 2> proj{0, 1};  // axis pair displayed for k = 3 inputs
  int stroke = 3;                 // pixels
};

/// Row-major 8-bit canvas, row 0 on top; the unit square maps with the
/// origin at the lower-left corner.
struct Canvas {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;
};

Canvas render(const TaggedPieceSet& S, const RenderConfig& cfg);
Canvas render(const DyadicGridSet& A, const RenderConfig& cfg);

/// Binary PGM (P5), maxval 255.
void write_pgm(const std::string& path, const Canvas& canvas);
std::string pgm_bytes(const Canvas& canvas);

}  // namespace essclose
