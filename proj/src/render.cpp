#include "essclose/render.hpp"

#include <cmath>
#include <fstream>

namespace essclose {

namespace {

constexpr uint8_t kBackground = 255;
constexpr uint8_t kFullShade = 64;
constexpr uint8_t kNullShade = 176;

void splat(Canvas& canvas, double x, double y, double radius_px, uint8_t shade) {
  double cx = x * (canvas.width - 1);
  double cy = (1.0 - y) * (canvas.height - 1);
  int r = static_cast<int>(std::ceil(radius_px));
  int c0 = std::max(0, static_cast<int>(std::floor(cx)) - r);
  int c1 = std::min(canvas.width - 1, static_cast<int>(std::ceil(cx)) + r);
  int r0 = std::max(0, static_cast<int>(std::floor(cy)) - r);
  int r1 = std::min(canvas.height - 1, static_cast<int>(std::ceil(cy)) + r);
  double rr = radius_px * radius_px;
  for (int row = r0; row <= r1; ++row) {
    for (int col = c0; col <= c1; ++col) {
      double dx = col - cx, dy = row - cy;
      if (dx * dx + dy * dy > rr) continue;
      uint8_t& px = canvas.pixels[static_cast<size_t>(row) * static_cast<size_t>(canvas.width) + static_cast<size_t>(col)];
      px = std::min(px, shade);
    }
  }
}

std::array<double, 2> project_point(const RatVec& x, int k, const RenderConfig& cfg) {
  if (k == 1) return {x[0].to_double(), 0.5};
  int a0 = cfg.proj[0], a1 = cfg.proj[1];
  if (a0 < 0 || a0 >= k || a1 < 0 || a1 >= k || a0 == a1)
    throw InputError("render: projection axes out of range");
  return {x[a0].to_double(), x[a1].to_double()};
}

}  // namespace

Canvas render(const TaggedPieceSet& S, const RenderConfig& cfg) {
  if (cfg.width < 1 || cfg.height < 1) throw InputError("render: non-positive canvas");
  Canvas canvas{cfg.width, cfg.height,
                std::vector<uint8_t>(static_cast<size_t>(cfg.width) * static_cast<size_t>(cfg.height), kBackground)};
  double radius = std::max(0.75, cfg.stroke / 2.0);
  int steps = 4 * std::max(cfg.width, cfg.height);
  for (const auto& piece : S.pieces) {
    uint8_t shade = piece.tag == Tag::Full ? kFullShade : kNullShade;
    if (piece.p == 0) {
      auto [x, y] = project_point(piece.anchor, S.k, cfg);
      splat(canvas, x, y, radius, shade);
    } else if (piece.p == 1) {
      for (int i = 0; i <= steps; ++i) {
        RatVec t(1);
        t[0] = piece.box[0].lo + piece.box[0].length() * Rat(i, steps);
        auto [x, y] = project_point(piece.at(t), S.k, cfg);
        splat(canvas, x, y, radius, shade);
      }
    } else {
      int grid = 2 * std::max(cfg.width, cfg.height);
      for (int i = 0; i <= grid; ++i) {
        for (int j = 0; j <= grid; ++j) {
          RatVec t(2);
          t[0] = piece.box[0].lo + piece.box[0].length() * Rat(i, grid);
          t[1] = piece.box[1].lo + piece.box[1].length() * Rat(j, grid);
          auto [x, y] = project_point(piece.at(t), S.k, cfg);
          splat(canvas, x, y, radius * 0.75, shade);
        }
      }
    }
  }
  return canvas;
}

Canvas render(const DyadicGridSet& A, const RenderConfig& cfg) {
  if (cfg.width < 1 || cfg.height < 1) throw InputError("render: non-positive canvas");
  Canvas canvas{cfg.width, cfg.height,
                std::vector<uint8_t>(static_cast<size_t>(cfg.width) * static_cast<size_t>(cfg.height), kBackground)};
  if (A.k == 0) return canvas;
  int m = A.cells_per_axis();
  for (const auto& cell : A.cells) {
    int ix, iy;
    if (A.k == 1) {
      ix = cell[0];
      iy = -1;  // draw a band around mid-height
    } else {
      int a0 = cfg.proj[0], a1 = cfg.proj[1];
      if (A.k == 2) {
        a0 = 0;
        a1 = 1;
      } else if (a0 < 0 || a0 >= A.k || a1 < 0 || a1 >= A.k || a0 == a1) {
        throw InputError("render: projection axes out of range");
      }
      ix = cell[static_cast<size_t>(a0)];
      iy = cell[static_cast<size_t>(a1)];
    }
    int c0 = static_cast<int>(std::floor(static_cast<double>(ix) / m * cfg.width));
    int c1 = static_cast<int>(std::ceil(static_cast<double>(ix + 1) / m * cfg.width)) - 1;
    int r0, r1;
    if (iy < 0) {
      r0 = cfg.height / 2 - std::max(1, cfg.stroke);
      r1 = cfg.height / 2 + std::max(1, cfg.stroke);
    } else {
      r0 = static_cast<int>(std::floor((1.0 - static_cast<double>(iy + 1) / m) * cfg.height));
      r1 = static_cast<int>(std::ceil((1.0 - static_cast<double>(iy) / m) * cfg.height)) - 1;
    }
    c0 = std::clamp(c0, 0, cfg.width - 1);
    c1 = std::clamp(c1, 0, cfg.width - 1);
    r0 = std::clamp(r0, 0, cfg.height - 1);
    r1 = std::clamp(r1, 0, cfg.height - 1);
    for (int row = r0; row <= r1; ++row)
      for (int col = c0; col <= c1; ++col) {
        uint8_t& px = canvas.pixels[static_cast<size_t>(row) * static_cast<size_t>(cfg.width) + static_cast<size_t>(col)];
        px = std::min(px, kFullShade);
      }
  }
  return canvas;
}

std::string pgm_bytes(const Canvas& canvas) {
  std::string out = "P5\n" + std::to_string(canvas.width) + " " + std::to_string(canvas.height) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(canvas.pixels.data()), canvas.pixels.size());
  return out;
}

void write_pgm(const std::string& path, const Canvas& canvas) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file '" + path + "'");
  std::string bytes = pgm_bytes(canvas);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace essclose
