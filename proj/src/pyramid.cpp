#include "rriqa/pyramid.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "rriqa/error.hpp"

namespace rriqa {
namespace {

using detail::ComplexGrid;
using detail::fft2;
using cplx = std::complex<double>;

constexpr double kHalfPi = std::numbers::pi / 2.0;

// Signed integer frequency of DFT index k on an n-point axis.
int signed_frequency(int k, int n) { return k < n / 2 ? k : k - n; }

// Raised-cosine pair on log2 radius with transition (edge - 1, edge).
double radial_high(double log_r, double edge) {
  if (log_r >= edge) return 1.0;
  if (log_r <= edge - 1.0) return 0.0;
  return std::cos(kHalfPi * (edge - log_r));
}

double radial_low(double log_r, double edge) {
  if (log_r >= edge) return 0.0;
  if (log_r <= edge - 1.0) return 1.0;
  return std::sin(kHalfPi * (edge - log_r));
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Polar frequency coordinates of one pyramid level, in units of the
// full-resolution grid (Nyquist along an axis at radius 1).
struct PolarGrid {
  int width = 0;
  int height = 0;
  std::vector<double> log_radius;
  std::vector<double> angle;

  PolarGrid(int w, int h, int full_w, int full_h) : width(w), height(h) {
    log_radius.resize(static_cast<std::size_t>(w) * h);
    angle.resize(log_radius.size());
    for (int ky = 0; ky < h; ++ky) {
      const double fy = 2.0 * signed_frequency(ky, h) / full_h;
      for (int kx = 0; kx < w; ++kx) {
        const double fx = 2.0 * signed_frequency(kx, w) / full_w;
        const std::size_t i = static_cast<std::size_t>(ky) * w + kx;
        const double r = std::hypot(fx, fy);
        log_radius[i] = r > 0.0 ? std::log2(r) : -std::numeric_limits<double>::infinity();
        angle[i] = std::atan2(fy, fx);
      }
    }
  }
};

// Angular profile c * cos^(K-1)(theta - pi*b/K); the squares of the K
// profiles sum to one.
class AngularFilters {
 public:
  explicit AngularFilters(int orientations) : count_(orientations), order_(orientations - 1) {
    norm_ = std::sqrt(std::pow(2.0, 2 * order_) * factorial(order_) * factorial(order_) /
                      (count_ * factorial(2 * order_)));
    phase_ = std::pow(cplx(0.0, -1.0), order_);
  }

  double gain(double theta, int b) const {
    return norm_ * std::pow(std::cos(theta - std::numbers::pi * b / count_), order_);
  }
  // (-i)^(K-1) keeps every oriented band real.
  cplx analysis_phase() const { return phase_; }
  cplx synthesis_phase() const { return std::conj(phase_); }

 private:
  int count_;
  int order_;
  double norm_;
  cplx phase_;
};

ComplexGrid to_complex(const Plane& p) {
  ComplexGrid g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) g[i] = p[i];
  return g;
}

Plane real_part_inverse(ComplexGrid g, int w, int h) {
  fft2(g, w, h, true);
  Plane out(w, h);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i].real() * scale;
  return out;
}

ComplexGrid forward(const Plane& p) {
  ComplexGrid g = to_complex(p);
  fft2(g, p.width(), p.height(), false);
  return g;
}

// Low-frequency quarter of a spectrum, keeping signed frequencies. The 1/4
// factor keeps spatial amplitudes after decimation.
ComplexGrid crop_spectrum(const ComplexGrid& g, int w, int h) {
  const int cw = w / 2, ch = h / 2;
  ComplexGrid out(static_cast<std::size_t>(cw) * ch);
  for (int ky = 0; ky < ch; ++ky) {
    const int fy = signed_frequency(ky, ch);
    const int sy = fy < 0 ? fy + h : fy;
    for (int kx = 0; kx < cw; ++kx) {
      const int fx = signed_frequency(kx, cw);
      const int sx = fx < 0 ? fx + w : fx;
      out[static_cast<std::size_t>(ky) * cw + kx] =
          0.25 * g[static_cast<std::size_t>(sy) * w + sx];
    }
  }
  return out;
}

// Inverse of crop_spectrum: zero-padded embedding into a w x h spectrum.
ComplexGrid embed_spectrum(const ComplexGrid& small, int w, int h) {
  const int cw = w / 2, ch = h / 2;
  ComplexGrid out(static_cast<std::size_t>(w) * h, cplx(0.0, 0.0));
  for (int ky = 0; ky < ch; ++ky) {
    const int fy = signed_frequency(ky, ch);
    const int sy = fy < 0 ? fy + h : fy;
    for (int kx = 0; kx < cw; ++kx) {
      const int fx = signed_frequency(kx, cw);
      const int sx = fx < 0 ? fx + w : fx;
      out[static_cast<std::size_t>(sy) * w + sx] =
          4.0 * small[static_cast<std::size_t>(ky) * cw + kx];
    }
  }
  return out;
}

// Transition edge (in log2 radius) of the band-pass split at `scale`.
double band_edge(int scale) { return -1.0 - scale; }

// All real filter gains of one (size, config) pair.
struct FilterMasks {
  std::vector<double> high0;                             // top level, outer ring
  std::vector<double> low0;                              // top level, inner disc
  std::vector<std::vector<std::vector<double>>> bands;   // [scale][orientation]
  std::vector<std::vector<double>> low;                  // [scale], on the decimated grid

  FilterMasks(int w, int h, const PyramidConfig& cfg) {
    const PolarGrid top(w, h, w, h);
    high0.resize(top.log_radius.size());
    low0.resize(top.log_radius.size());
    for (std::size_t i = 0; i < high0.size(); ++i) {
      high0[i] = radial_high(top.log_radius[i], 0.0);
      low0[i] = radial_low(top.log_radius[i], 0.0);
    }
    const AngularFilters angular(cfg.orientations);
    int lw = w, lh = h;
    for (int s = 0; s < cfg.scales; ++s) {
      const double edge = band_edge(s);
      const PolarGrid grid(lw, lh, w, h);
      auto& per_scale = bands.emplace_back();
      for (int b = 0; b < cfg.orientations; ++b) {
        auto& m = per_scale.emplace_back(grid.angle.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
          m[i] = angular.gain(grid.angle[i], b) * radial_high(grid.log_radius[i], edge);
        }
      }
      lw /= 2;
      lh /= 2;
      const PolarGrid coarse(lw, lh, w, h);
      auto& l = low.emplace_back(coarse.log_radius.size());
      for (std::size_t i = 0; i < l.size(); ++i) l[i] = radial_low(coarse.log_radius[i], edge);
    }
  }
};

std::shared_ptr<const FilterMasks> filter_masks(int w, int h, const PyramidConfig& cfg) {
  using Key = std::tuple<int, int, int, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const FilterMasks>> cache;
  const Key key{w, h, cfg.scales, cfg.orientations};
  {
    std::lock_guard lock(mutex);
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto masks = std::make_shared<const FilterMasks>(w, h, cfg);
  std::lock_guard lock(mutex);
  if (cache.size() >= 16) cache.clear();
  return cache.emplace(key, std::move(masks)).first->second;
}

}  // namespace

void PyramidConfig::validate() const {
  if (scales < 1 || scales > 8) {
    throw ConfigError("pyramid scales must be in [1, 8], got " + std::to_string(scales));
  }
  if (orientations < 1 || orientations > 16) {
    throw ConfigError("pyramid orientations must be in [1, 16], got " +
                      std::to_string(orientations));
  }
}

int minimum_pyramid_edge(int scales) { return 4 << scales; }

SubbandSet decompose(const Plane& plane, const PyramidConfig& cfg) {
  cfg.validate();
  const int w = (plane.width() >> cfg.scales) << cfg.scales;
  const int h = (plane.height() >> cfg.scales) << cfg.scales;
  const int min_edge = minimum_pyramid_edge(cfg.scales);
  if (w < min_edge || h < min_edge) {
    throw ConfigError("plane of " + std::to_string(plane.width()) + "x" +
                      std::to_string(plane.height()) + " is too small for " +
                      std::to_string(cfg.scales) + " scales (need at least " +
                      std::to_string(min_edge) + " pixels per side)");
  }

  Plane region(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) region.at(x, y) = plane.at(x, y);
  }

  SubbandSet out;
  out.cfg = cfg;
  out.bands.reserve(static_cast<std::size_t>(cfg.band_count()));

  const auto masks = filter_masks(w, h, cfg);
  const cplx phase = AngularFilters(cfg.orientations).analysis_phase();
  const ComplexGrid spectrum = forward(region);
  ComplexGrid high(spectrum.size());
  ComplexGrid low(spectrum.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    high[i] = spectrum[i] * masks->high0[i];
    low[i] = spectrum[i] * masks->low0[i];
  }
  out.residual_high = real_part_inverse(std::move(high), w, h);

  int lw = w, lh = h;
  for (int s = 0; s < cfg.scales; ++s) {
    for (int b = 0; b < cfg.orientations; ++b) {
      const std::vector<double>& gain = masks->bands[s][b];
      ComplexGrid band(low.size());
      for (std::size_t i = 0; i < low.size(); ++i) band[i] = phase * gain[i] * low[i];
      out.bands.push_back(real_part_inverse(std::move(band), lw, lh));
    }
    low = crop_spectrum(low, lw, lh);
    lw /= 2;
    lh /= 2;
    for (std::size_t i = 0; i < low.size(); ++i) low[i] *= masks->low[s][i];
  }
  out.residual_low = real_part_inverse(std::move(low), lw, lh);
  return out;
}

Plane reconstruct(const SubbandSet& set, const PyramidConfig& cfg) {
  cfg.validate();
  if (set.cfg != cfg || static_cast<int>(set.bands.size()) != cfg.band_count()) {
    throw ContractError("reconstruct: sub-band set does not match the pyramid configuration");
  }
  const int w = set.residual_high.width();
  const int h = set.residual_high.height();
  for (int s = 0; s < cfg.scales; ++s) {
    for (int b = 0; b < cfg.orientations; ++b) {
      const Plane& band = set.band(s, b);
      if (band.width() != (w >> s) || band.height() != (h >> s)) {
        throw ContractError("reconstruct: band dimensions do not match scale " +
                            std::to_string(s));
      }
    }
  }
  if (set.residual_low.width() != (w >> cfg.scales) ||
      set.residual_low.height() != (h >> cfg.scales)) {
    throw ContractError("reconstruct: low-pass residual has wrong dimensions");
  }

  const auto masks = filter_masks(w, h, cfg);
  const cplx phase = AngularFilters(cfg.orientations).synthesis_phase();
  int lw = w >> cfg.scales, lh = h >> cfg.scales;
  ComplexGrid low = forward(set.residual_low);
  for (int s = cfg.scales - 1; s >= 0; --s) {
    for (std::size_t i = 0; i < low.size(); ++i) low[i] *= masks->low[s][i];
    lw *= 2;
    lh *= 2;
    low = embed_spectrum(low, lw, lh);
    for (int b = 0; b < cfg.orientations; ++b) {
      const ComplexGrid band = forward(set.band(s, b));
      const std::vector<double>& gain = masks->bands[s][b];
      for (std::size_t i = 0; i < low.size(); ++i) low[i] += phase * gain[i] * band[i];
    }
  }

  ComplexGrid spectrum = forward(set.residual_high);
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    spectrum[i] = spectrum[i] * masks->high0[i] + low[i] * masks->low0[i];
  }
  return real_part_inverse(std::move(spectrum), w, h);
}

SubbandVectors stack_color_subbands(const SubbandSet& c1, const SubbandSet& c2,
                                    const SubbandSet& c3, int band_index) {
  if (band_index < 0 || band_index >= static_cast<int>(c1.bands.size()) ||
      c2.bands.size() != c1.bands.size() || c3.bands.size() != c1.bands.size()) {
    throw ContractError("stack_color_subbands: band index " + std::to_string(band_index) +
                        " out of range or band counts differ");
  }
  const auto idx = static_cast<std::size_t>(band_index);
  const Plane& a = c1.bands[idx];
  const Plane& b = c2.bands[idx];
  const Plane& c = c3.bands[idx];
  if (!a.same_shape(b) || !a.same_shape(c)) {
    throw ContractError("stack_color_subbands: band dimensions differ across color planes");
  }
  SubbandVectors out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.set_row(i, a[i], b[i], c[i]);
  return out;
}

SubbandVectors::SubbandVectors(std::vector<double> packed) : data_(std::move(packed)) {
  if (data_.size() % 3 != 0) {
    throw ContractError("SubbandVectors: packed length must be a multiple of 3");
  }
}

}  // namespace rriqa
