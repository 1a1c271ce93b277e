#include "rriqa/feature_codec.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <string>

#include "rriqa/error.hpp"

namespace rriqa {
namespace {

constexpr char kMagic[4] = {'R', 'R', 'I', 'Q'};

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint64_t uint(int bytes) {
    if (pos_ + static_cast<std::size_t>(bytes) > in_.size()) {
      throw DecodeError("truncated feature stream at offset " + std::to_string(pos_) +
                        " (length " + std::to_string(in_.size()) + ")");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(bytes);
    return v;
  }
  double f64() { return std::bit_cast<double>(uint(8)); }
  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_features(const FeatureSet& fs) {
  fs.validate();
  Writer w;
  for (const char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u8(kFeatureFormatVersion);
  w.u8(static_cast<std::uint8_t>(fs.color_space));
  w.u8(static_cast<std::uint8_t>(fs.cfg.scales));
  w.u8(static_cast<std::uint8_t>(fs.cfg.orientations));
  w.u32(static_cast<std::uint32_t>(fs.width));
  w.u32(static_cast<std::uint32_t>(fs.height));
  w.u16(static_cast<std::uint16_t>(fs.features.size()));
  w.u16(0);
  for (const MggdParams& p : fs.features) {
    w.f64(p.beta);
    w.f64(p.scale);
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) w.f64(p.sigma(i, j));
    }
  }
  return w.take();
}

FeatureSet decode_features(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  for (const char c : kMagic) {
    if (r.uint(1) != static_cast<std::uint8_t>(c)) {
      throw DecodeError("bad magic: not a feature stream");
    }
  }
  const auto version = r.uint(1);
  if (version != kFeatureFormatVersion) {
    throw DecodeError("unsupported version " + std::to_string(version));
  }
  const auto space = r.uint(1);
  if (space > 3) throw DecodeError("unknown color space id " + std::to_string(space));

  FeatureSet fs;
  fs.color_space = static_cast<ColorSpace>(space);
  fs.cfg.scales = static_cast<int>(r.uint(1));
  fs.cfg.orientations = static_cast<int>(r.uint(1));
  fs.width = static_cast<int>(r.uint(4));
  fs.height = static_cast<int>(r.uint(4));
  const auto bands = static_cast<std::size_t>(r.uint(2));
  if (r.uint(2) != 0) throw DecodeError("reserved header bytes must be zero");
  try {
    fs.cfg.validate();
  } catch (const ConfigError& e) {
    throw DecodeError(std::string("invalid pyramid configuration: ") + e.what());
  }
  if (bands != static_cast<std::size_t>(fs.cfg.band_count())) {
    throw DecodeError("band count " + std::to_string(bands) + " does not match " +
                      std::to_string(fs.cfg.scales) + " scales x " +
                      std::to_string(fs.cfg.orientations) + " orientations");
  }
  if (r.remaining() != bands * kFeatureBandSize) {
    if (r.remaining() < bands * kFeatureBandSize) {
      throw DecodeError("truncated feature stream at offset " +
                        std::to_string(r.offset() + r.remaining()) + ": expected " +
                        std::to_string(kFeatureHeaderSize + bands * kFeatureBandSize) +
                        " bytes");
    }
    throw DecodeError("trailing bytes after offset " +
                      std::to_string(kFeatureHeaderSize + bands * kFeatureBandSize));
  }

  fs.features.resize(bands);
  for (std::size_t b = 0; b < bands; ++b) {
    MggdParams& p = fs.features[b];
    p.beta = r.f64();
    p.scale = r.f64();
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        p.sigma(i, j) = r.f64();
        p.sigma(j, i) = p.sigma(i, j);
      }
    }
    try {
      p.validate();
    } catch (const ContractError& e) {
      throw DecodeError("band " + std::to_string(b) + ": " + e.what());
    }
  }
  return fs;
}

std::string features_to_text(const FeatureSet& fs) {
  std::string out;
  char line[512];
  std::snprintf(line, sizeof line,
                "format %u\ncolor_space %s\nscales %d\norientations %d\nwidth %d\nheight %d\n"
                "bands %zu\n",
                static_cast<unsigned>(kFeatureFormatVersion),
                std::string(to_string(fs.color_space)).c_str(), fs.cfg.scales,
                fs.cfg.orientations, fs.width, fs.height, fs.features.size());
  out += line;
  out += "# band beta scale s00 s01 s02 s11 s12 s22\n";
  for (std::size_t b = 0; b < fs.features.size(); ++b) {
    const MggdParams& p = fs.features[b];
    std::snprintf(line, sizeof line,
                  "%zu %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", b, p.beta, p.scale,
                  p.sigma(0, 0), p.sigma(0, 1), p.sigma(0, 2), p.sigma(1, 1), p.sigma(1, 2),
                  p.sigma(2, 2));
    out += line;
  }
  return out;
}

}  // namespace rriqa
