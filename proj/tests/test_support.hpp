#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "rriqa/color.hpp"
#include "rriqa/distort.hpp"
#include "rriqa/image_io.hpp"
#include "rriqa/mggd.hpp"

namespace testing {

inline std::filesystem::path data_dir() { return RRIQA_DATA_DIR; }

inline const std::vector<std::string>& natural_images() {
  static const std::vector<std::string> names = {"astronaut", "coffee", "chelsea"};
  return names;
}

inline rriqa::ColorImage load_natural(const std::string& name) {
  return rriqa::read_image(data_dir() / (name + ".png"));
}

inline rriqa::ColorImage center_crop(const rriqa::ColorImage& img, int w, int h) {
  rriqa::ColorImage out(w, h, img.space);
  const int x0 = (img.width() - w) / 2, y0 = (img.height() - h) / 2;
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) out.planes[c].at(x, y) = img.planes[c].at(x0 + x, y0 + y);
    }
  }
  return out;
}

/// Random SPD matrix with eigenvalues in [lo, hi] and a random orientation.
inline rriqa::Mat3 random_spd(std::mt19937_64& rng, double lo = 0.2, double hi = 3.0) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> ev(lo, hi);
  rriqa::Mat3 a;
  for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = normal(rng);
  const rriqa::Mat3 q = Eigen::HouseholderQR<rriqa::Mat3>(a).householderQ();
  const rriqa::Vec3 d(ev(rng), ev(rng), ev(rng));
  const rriqa::Mat3 m = q * d.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

inline rriqa::MggdParams random_params(std::mt19937_64& rng, double beta_lo = 0.3,
                                       double beta_hi = 2.5) {
  std::uniform_real_distribution<double> beta(beta_lo, beta_hi);
  const double b = beta(rng);
  return rriqa::MggdParams::from_dispersion(b, random_spd(rng));
}

inline rriqa::Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  rriqa::Mat3 a;
  for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = normal(rng);
  return Eigen::HouseholderQR<rriqa::Mat3>(a).householderQ();
}

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("rriqa_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct SyntheticLevel {
  rriqa::DistortionKind kind;
  double level;  // distortion strength passed to distort()
  int code;      // 1..4 in the file name
  double mos;
};

/// Writes a TID2008-style tree (reference_images/, distorted_images/,
/// manifest.txt) built from center crops of the bundled images.
inline std::filesystem::path write_synthetic_dataset(const std::filesystem::path& root, int edge,
                                                     const std::vector<SyntheticLevel>& levels,
                                                     std::uint64_t seed = 1) {
  namespace fs = std::filesystem;
  fs::create_directories(root / "reference_images");
  fs::create_directories(root / "distorted_images");
  const fs::path manifest = root / "manifest.txt";
  std::ofstream out(manifest);
  int ref = 1;
  for (const std::string& name : natural_images()) {
    const rriqa::ColorImage img = center_crop(load_natural(name), edge, edge);
    char stem[16];
    std::snprintf(stem, sizeof stem, "I%02d.BMP", ref);
    rriqa::write_image(root / "reference_images" / stem, img);
    for (const SyntheticLevel& l : levels) {
      char file[32];
      std::snprintf(file, sizeof file, "i%02d_%02d_%d.bmp", ref, rriqa::tid_type(l.kind), l.code);
      rriqa::write_image(root / "distorted_images" / file,
                         rriqa::distort(img, l.kind, l.level, seed + 97 * ref + l.code));
      out << l.mos << " " << file << "\n";
    }
    ++ref;
  }
  return manifest;
}

/// Noise, blur and quantization at four levels each, MOS falling with level.
inline std::vector<SyntheticLevel> three_kind_levels() {
  using K = rriqa::DistortionKind;
  return {
      {K::gaussian_noise, 0.02, 1, 7.0}, {K::gaussian_noise, 0.05, 2, 6.0},
      {K::gaussian_noise, 0.1, 3, 4.5},  {K::gaussian_noise, 0.2, 4, 2.5},
      {K::gaussian_blur, 0.5, 1, 6.8},   {K::gaussian_blur, 1.0, 2, 5.5},
      {K::gaussian_blur, 2.0, 3, 4.0},   {K::gaussian_blur, 3.0, 4, 3.0},
      {K::quantization, 32, 1, 6.9},     {K::quantization, 16, 2, 6.1},
      {K::quantization, 8, 3, 4.8},      {K::quantization, 4, 4, 2.8},
  };
}

}  // namespace testing
