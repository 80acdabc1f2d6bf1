#include "jetseg/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "jetseg/errors.hpp"

namespace jetseg {

FlameMask flame_region(const LabelMask& mask) {
  FlameMask out(mask.rows(), mask.cols());
  const auto src = mask.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = src[i] != kBackground ? 1 : 0;
  }
  return out;
}

FlameMask boundary_region(const TemperatureField& field, double boundary_kelvin) {
  FlameMask out(field.rows(), field.cols());
  const auto src = field.kelvin.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = src[i] >= boundary_kelvin ? 1 : 0;
  }
  return out;
}

Components label_components(const FlameMask& mask) {
  Components out{Grid<std::int32_t, ComponentTag>(mask.rows(), mask.cols()), {}};
  std::vector<Pixel> stack;
  std::int32_t next_id = 0;
  for (int r = 0; r < mask.rows(); ++r) {
    for (int c = 0; c < mask.cols(); ++c) {
      if (!mask(r, c) || out.labels(r, c) != 0) {
        continue;
      }
      const std::int32_t id = ++next_id;
      std::int64_t size = 0;
      out.labels(r, c) = id;
      stack.push_back({r, c});
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        ++size;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int rr = p.row + dr;
            const int cc = p.col + dc;
            if (mask.contains(rr, cc) && mask(rr, cc) && out.labels(rr, cc) == 0) {
              out.labels(rr, cc) = id;
              stack.push_back({rr, cc});
            }
          }
        }
      }
      out.sizes.push_back(size);
    }
  }
  return out;
}

FlameMask largest_component(const FlameMask& mask) {
  const auto comps = label_components(mask);
  if (comps.sizes.empty()) {
    throw NoFlameError("mask contains no flame pixels");
  }
  // max_element returns the first maximum, i.e. the earliest in raster order.
  const auto best = std::max_element(comps.sizes.begin(), comps.sizes.end());
  const auto id = static_cast<std::int32_t>(best - comps.sizes.begin()) + 1;
  FlameMask out(mask.rows(), mask.cols());
  const auto labels = comps.labels.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    dst[i] = labels[i] == id ? 1 : 0;
  }
  return out;
}

namespace {

// Counter-clockwise on screen, starting west: W, SW, S, SE, E, NE, N, NW.
constexpr std::array<Pixel, 8> kRing{{
    {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}}};

int ring_index(int dr, int dc) {
  for (int i = 0; i < 8; ++i) {
    if (kRing[static_cast<std::size_t>(i)].row == dr && kRing[static_cast<std::size_t>(i)].col == dc) {
      return i;
    }
  }
  return 0;
}

}  // namespace

std::vector<Pixel> contour(const FlameMask& mask) {
  const auto component = largest_component(mask);
  Pixel start{-1, -1};
  for (int r = 0; r < component.rows() && start.row < 0; ++r) {
    for (int c = 0; c < component.cols(); ++c) {
      if (component(r, c)) {
        start = {r, c};
        break;
      }
    }
  }
  const auto inside = [&](int r, int c) { return component.contains(r, c) && component(r, c); };

  // The raster-order first pixel has a background west neighbour.
  std::vector<Pixel> trace{start};
  Pixel current = start;
  int backtrack = 0;  // direction from current to the background pixel we came from
  int first_move = -1;
  const std::size_t limit = 4 * component.size() + 8;
  while (trace.size() < limit) {
    int move = -1;
    for (int step = 1; step <= 8; ++step) {
      const int d = (backtrack + step) % 8;
      const auto& off = kRing[static_cast<std::size_t>(d)];
      if (inside(current.row + off.row, current.col + off.col)) {
        move = d;
        break;
      }
    }
    if (move < 0) {
      break;  // isolated pixel
    }
    if (current == start && first_move >= 0 && move == first_move) {
      break;  // Jacob's criterion: re-entering start the same way
    }
    if (first_move < 0) {
      first_move = move;
    }
    const auto& off = kRing[static_cast<std::size_t>(move)];
    const Pixel next{current.row + off.row, current.col + off.col};
    // The pixel checked just before the hit is background; seen from next it
    // becomes the new backtrack direction.
    const auto& prev = kRing[static_cast<std::size_t>((move + 7) % 8)];
    backtrack = ring_index(current.row + prev.row - next.row, current.col + prev.col - next.col);
    current = next;
    if (current == start) {
      // Peek whether the loop closes here.
      int again = -1;
      for (int step = 1; step <= 8; ++step) {
        const int d = (backtrack + step) % 8;
        const auto& o = kRing[static_cast<std::size_t>(d)];
        if (inside(current.row + o.row, current.col + o.col)) {
          again = d;
          break;
        }
      }
      if (again == first_move) {
        break;
      }
    }
    trace.push_back(current);
  }
  return trace;
}

double polygon_area_px(const std::vector<Pixel>& polygon) {
  if (polygon.size() < 3) {
    return 0.0;
  }
  double twice = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const auto& a = polygon[i];
    const auto& b = polygon[(i + 1) % polygon.size()];
    // x = col, y = -row
    twice += static_cast<double>(a.col) * (-b.row) - static_cast<double>(b.col) * (-a.row);
  }
  return twice / 2.0;
}

FlameGeometry extract_features(const FlameMask& mask, const Calibration& calibration) {
  calibration.validate(mask.rows(), mask.cols());
  const auto component = largest_component(mask);

  FlameGeometry g;
  int tip_row = -1;
  int base_row = -1;
  for (int r = 0; r < component.rows(); ++r) {
    for (int c = 0; c < component.cols(); ++c) {
      if (!component(r, c)) {
        continue;
      }
      ++g.component_pixel_count;
      if (tip_row < 0) {
        tip_row = r;
        g.tip_px = {r, c};
      }
      if (r > base_row) {
        base_row = r;
        g.base_px = {r, c};
      }
    }
  }
  const double mpp = calibration.meters_per_pixel;
  g.height_m = static_cast<double>(base_row - tip_row + 1) * mpp;
  const int gap = calibration.nozzle_row - base_row;
  g.liftoff_clamped = gap < 0;
  g.liftoff_m = static_cast<double>(std::max(0, gap)) * mpp;
  g.area_m2 = static_cast<double>(g.component_pixel_count) * mpp * mpp;
  g.polygon_area_m2 = std::abs(polygon_area_px(contour(component))) * mpp * mpp;
  return g;
}

}  // namespace jetseg
