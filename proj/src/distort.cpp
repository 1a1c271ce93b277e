#include "rriqa/distort.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "rriqa/error.hpp"

namespace rriqa {
namespace {

void add_noise(ColorImage& img, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (Plane& p : img.planes) {
    for (double& v : p.values()) v = std::clamp(v + normal(rng), 0.0, 1.0);
  }
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-0.5 * (i / sigma) * (i / sigma));
    k[static_cast<std::size_t>(i + radius)] = w;
    total += w;
  }
  for (double& w : k) w /= total;
  return k;
}

void blur_plane(Plane& p, const std::vector<double>& k) {
  const int w = p.width(), h = p.height();
  const int r = static_cast<int>(k.size() / 2);
  Plane tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) s += k[static_cast<std::size_t>(i + r)] * p.at(std::clamp(x + i, 0, w - 1), y);
      tmp.at(x, y) = s;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) s += k[static_cast<std::size_t>(i + r)] * tmp.at(x, std::clamp(y + i, 0, h - 1));
      p.at(x, y) = s;
    }
  }
}

void quantize(ColorImage& img, double level) {
  const double bins = std::max(1.0, std::round(level));
  for (Plane& p : img.planes) {
    for (double& v : p.values()) {
      const double bin = std::min(std::floor(std::clamp(v, 0.0, 1.0) * bins), bins - 1.0);
      v = (bin + 0.5) / bins;
    }
  }
}

}  // namespace

std::string_view to_string(DistortionKind kind) {
  switch (kind) {
    case DistortionKind::gaussian_noise: return "gaussian_noise";
    case DistortionKind::gaussian_blur: return "gaussian_blur";
    case DistortionKind::quantization: return "quantization";
  }
  throw ContractError("unknown distortion kind");
}

DistortionKind parse_distortion_kind(std::string_view name) {
  if (name == "gaussian_noise" || name == "noise") return DistortionKind::gaussian_noise;
  if (name == "gaussian_blur" || name == "blur") return DistortionKind::gaussian_blur;
  if (name == "quantization") return DistortionKind::quantization;
  throw ContractError("unknown distortion kind '" + std::string(name) + "'");
}

int tid_type(DistortionKind kind) {
  switch (kind) {
    case DistortionKind::gaussian_noise: return 1;
    case DistortionKind::gaussian_blur: return 8;
    case DistortionKind::quantization: return 7;
  }
  throw ContractError("unknown distortion kind");
}

ColorImage distort(const ColorImage& rgb, DistortionKind kind, double level, std::uint64_t seed) {
  rgb.validate();
  if (rgb.space != ColorSpace::rgb) throw ContractError("distort expects an RGB image");
  if (!(level > 0.0) || !std::isfinite(level)) {
    throw ContractError("distortion level must be positive and finite");
  }
  ColorImage out = rgb;
  switch (kind) {
    case DistortionKind::gaussian_noise:
      add_noise(out, level, seed);
      return out;
    case DistortionKind::gaussian_blur: {
      const std::vector<double> k = gaussian_kernel(level);
      for (Plane& p : out.planes) blur_plane(p, k);
      return out;
    }
    case DistortionKind::quantization:
      quantize(out, level);
      return out;
  }
  throw ContractError("unknown distortion kind");
}

}  // namespace rriqa
