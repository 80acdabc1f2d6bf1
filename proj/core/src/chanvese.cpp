#include "jetseg/chanvese.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "jetseg/errors.hpp"
#include "jetseg/preprocess.hpp"

namespace jetseg {

void ChanVeseParams::validate() const {
  if (!(mu >= 0.0) || !(lambda1 > 0.0) || !(lambda2 > 0.0) || !(tolerance > 0.0) ||
      max_iter < 1 || !(dt > 0.0)) {
    throw ConfigError(
        "Chan-Vese needs mu >= 0, lambda1 > 0, lambda2 > 0, tolerance > 0, max_iter >= 1, "
        "dt > 0");
  }
}

namespace {

struct PhaseMeans {
  double inside = 0.0;
  double outside = 0.0;
  std::size_t inside_count = 0;
  std::size_t outside_count = 0;
};

PhaseMeans phase_means(std::span<const double> image, std::span<const double> phi,
                       std::span<const std::uint8_t> domain) {
  PhaseMeans m;
  double in_sum = 0.0;
  double out_sum = 0.0;
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (!domain.empty() && !domain[i]) {
      continue;
    }
    if (phi[i] > 0.0) {
      in_sum += image[i];
      ++m.inside_count;
    } else {
      out_sum += image[i];
      ++m.outside_count;
    }
  }
  if (m.inside_count > 0) {
    m.inside = in_sum / static_cast<double>(m.inside_count);
  }
  if (m.outside_count > 0) {
    m.outside = out_sum / static_cast<double>(m.outside_count);
  }
  return m;
}

// An empty `domain` span means the whole image. Pixels outside the domain
// take no part in the phase means and keep phi fixed; the domain edge acts
// like the image border.
ChanVeseRun run_two_phase(const NormalizedImage& image, const ChanVeseParams& params,
                          std::span<const std::uint8_t> domain) {
  params.validate();
  const int rows = image.rows();
  const int cols = image.cols();
  const auto pixels = image.values();
  const auto inside_domain = [&](std::size_t i) { return domain.empty() || domain[i] != 0; };

  ChanVeseRun run;
  run.region = BinaryMask(rows, cols);
  double lo = 0.0;
  double hi = 0.0;
  std::size_t domain_size = 0;
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    if (!inside_domain(i)) {
      continue;
    }
    lo = domain_size == 0 ? pixels[i] : std::min(lo, pixels[i]);
    hi = domain_size == 0 ? pixels[i] : std::max(hi, pixels[i]);
    ++domain_size;
  }
  if (domain_size == 0 || lo == hi) {
    run.degenerate = true;
    run.converged = true;
    run.region_mean = run.complement_mean = lo;
    return run;
  }

  // The evolution sees the domain stretched to [0, 1]; reported means use
  // the input scale.
  std::vector<double> scaled(pixels.size(), 0.0);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    if (inside_domain(i)) {
      scaled[i] = (pixels[i] - lo) / (hi - lo);
    }
  }

  NormalizedImage phi(rows, cols, -1.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (inside_domain(static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                        static_cast<std::size_t>(c))) {
        phi(r, c) = std::sin(std::numbers::pi / 5.0 * r) * std::sin(std::numbers::pi / 5.0 * c);
      }
    }
  }
  {
    const auto m = phase_means(scaled, phi.values(), domain);
    if (m.inside_count > 0 && m.outside_count > 0 && m.inside < m.outside) {
      for (std::size_t i = 0; i < pixels.size(); ++i) {
        if (inside_domain(i)) {
          phi.values()[i] = -phi.values()[i];
        }
      }
    }
  }

  constexpr double kEta = 1e-16;
  NormalizedImage next = phi;
  const auto neighbour = [&](int r, int c, double self) {
    if (r < 0 || r >= rows || c < 0 || c >= cols) {
      return self;
    }
    const auto i = static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                   static_cast<std::size_t>(c);
    return inside_domain(i) ? phi.values()[i] : self;
  };

  for (int iter = 1; iter <= params.max_iter; ++iter) {
    const auto m = phase_means(scaled, phi.values(), domain);
    double change = 0.0;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const auto i = static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                       static_cast<std::size_t>(c);
        if (!inside_domain(i)) {
          continue;
        }
        const double p = phi(r, c);
        const double east = neighbour(r, c + 1, p);
        const double west = neighbour(r, c - 1, p);
        const double south = neighbour(r + 1, c, p);
        const double north = neighbour(r - 1, c, p);
        const double dx_center = (east - west) / 2.0;
        const double dy_center = (south - north) / 2.0;
        const double c1 = 1.0 / std::sqrt(kEta + (east - p) * (east - p) + dy_center * dy_center);
        const double c2 = 1.0 / std::sqrt(kEta + (p - west) * (p - west) + dy_center * dy_center);
        const double c3 = 1.0 / std::sqrt(kEta + dx_center * dx_center + (south - p) * (south - p));
        const double c4 = 1.0 / std::sqrt(kEta + dx_center * dx_center + (p - north) * (p - north));
        const double curvature = east * c1 + west * c2 + south * c3 + north * c4;
        const double u = scaled[i];
        const double fit = -params.lambda1 * (u - m.inside) * (u - m.inside) +
                           params.lambda2 * (u - m.outside) * (u - m.outside);
        const double delta = 1.0 / (1.0 + p * p);
        const double updated = (p + params.dt * delta * (params.mu * curvature + fit)) /
                               (1.0 + params.mu * params.dt * delta * (c1 + c2 + c3 + c4));
        next(r, c) = updated;
        change += (updated - p) * (updated - p);
      }
    }
    std::swap(phi, next);
    run.iterations = iter;
    if (std::sqrt(change / static_cast<double>(domain_size)) < params.tolerance) {
      run.converged = true;
      break;
    }
  }

  const auto m = phase_means(pixels, phi.values(), domain);
  if (m.inside_count == 0 || m.outside_count == 0 || m.inside == m.outside) {
    run.degenerate = true;
    run.region_mean = run.complement_mean = m.inside_count > 0 ? m.inside : m.outside;
    return run;
  }
  const bool positive_is_bright = m.inside > m.outside;
  run.region_mean = positive_is_bright ? m.inside : m.outside;
  run.complement_mean = positive_is_bright ? m.outside : m.inside;
  const auto src = phi.values();
  auto dst = run.region.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = (inside_domain(i) && (src[i] > 0.0) == positive_is_bright) ? 1 : 0;
  }
  return run;
}

}  // namespace

ChanVeseRun chanvese_two_phase(const NormalizedImage& image, const ChanVeseParams& params) {
  return run_two_phase(image, params, {});
}

ChanVeseRun chanvese_two_phase(const NormalizedImage& image, const ChanVeseParams& params,
                               const BinaryMask& domain) {
  if (!image.same_shape(domain)) {
    throw ShapeError("Chan-Vese domain differs in shape from the image");
  }
  return run_two_phase(image, params, domain.values());
}

LabelMask composite_zones(const BinaryMask& outer, const BinaryMask& middle,
                          const BinaryMask& central) {
  if (!outer.same_shape(middle) || !outer.same_shape(central)) {
    throw ShapeError("zone masks differ in shape");
  }
  LabelMask out(outer.rows(), outer.cols());
  const auto o = outer.values();
  const auto m = middle.values();
  const auto c = central.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = c[i] ? kCentral : m[i] ? kMiddle : o[i] ? kOuter : kBackground;
  }
  return out;
}

ChanVeseResult chanvese_segment(const IntensityImage& image, const ChanVeseZoneParams& params) {
  const auto scaled = unit_scale(image);
  ChanVeseResult result;
  result.zones[0] = chanvese_two_phase(scaled, params.outer);
  result.zones[1] = chanvese_two_phase(scaled, params.middle, result.zones[0].region);
  result.zones[2] = chanvese_two_phase(scaled, params.central, result.zones[1].region);
  result.mask = composite_zones(result.zones[0].region, result.zones[1].region,
                                result.zones[2].region);
  result.converged = std::all_of(result.zones.begin(), result.zones.end(),
                                 [](const ChanVeseRun& z) { return z.converged; });
  result.degenerate = std::any_of(result.zones.begin(), result.zones.end(),
                                  [](const ChanVeseRun& z) { return z.degenerate; });
  return result;
}

}  // namespace jetseg
