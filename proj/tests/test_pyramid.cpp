#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rriqa/error.hpp"
#include "rriqa/metric.hpp"
#include "rriqa/pyramid.hpp"
#include "test_support.hpp"

using namespace rriqa;

namespace {

Plane noise_plane(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Plane p(w, h);
  for (double& v : p.values()) v = normal(rng);
  return p;
}

double energy(const Plane& p) {
  double e = 0.0;
  for (double v : p.values()) e += v * v;
  return e;
}

double snr_db(const Plane& ref, const Plane& test) {
  double err = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) err += (ref[i] - test[i]) * (ref[i] - test[i]);
  return 10.0 * std::log10(energy(ref) / err);
}

Plane natural_plane(const std::string& name, int edge) {
  const ColorImage img = testing::center_crop(testing::load_natural(name), edge, edge);
  return analysis_planes(img, ColorSpace::cielab)[0];
}

}  // namespace

TEST_SUITE("pyramid") {
  TEST_CASE("band layout and dimensions") {
    const PyramidConfig cfg{3, 4};
    const SubbandSet set = decompose(noise_plane(64, 32, 1), cfg);
    REQUIRE(set.bands.size() == 12u);
    for (int s = 0; s < 3; ++s) {
      for (int b = 0; b < 4; ++b) {
        CHECK(set.band(s, b).width() == (64 >> s));
        CHECK(set.band(s, b).height() == (32 >> s));
      }
    }
    CHECK(set.residual_high.width() == 64);
    CHECK(set.residual_low.width() == 8);
    CHECK(set.residual_low.height() == 4);
  }

  TEST_CASE("odd sizes are cropped to a multiple of 2^scales") {
    const SubbandSet set = decompose(noise_plane(70, 45, 2), PyramidConfig{2, 3});
    CHECK(set.band(0, 0).width() == 68);
    CHECK(set.band(0, 0).height() == 44);
  }

  TEST_CASE("constant plane has no oriented energy") {
    const Plane flat(64, 64, 0.7);
    const SubbandSet set = decompose(flat, PyramidConfig{});
    for (const Plane& band : set.bands) {
      for (double v : band.values()) CHECK(std::abs(v) < 1e-8 * 0.7);
    }
    double low = 0.0;
    for (double v : set.residual_low.values()) low += v;
    CHECK(low / set.residual_low.size() == doctest::Approx(0.7));
  }

  TEST_CASE("sinusoid lands in the band aligned with its normal") {
    // Period 4 pixels along x: radius 1/2 of Nyquist, wholly in scale 0.
    Plane p(64, 64);
    for (int y = 0; y < 64; ++y) {
      for (int x = 0; x < 64; ++x) p.at(x, y) = std::cos(2.0 * std::numbers::pi * x / 4.0);
    }
    const SubbandSet set = decompose(p, PyramidConfig{});
    const double dominant = energy(set.band(0, 0));
    CHECK(dominant > 0.0);
    for (std::size_t i = 1; i < set.bands.size(); ++i) CHECK(dominant >= 5.0 * energy(set.bands[i]));

    // The same pattern along y goes to the band whose angle is closest to 90 degrees.
    Plane q(64, 64);
    for (int y = 0; y < 64; ++y) {
      for (int x = 0; x < 64; ++x) q.at(x, y) = std::cos(2.0 * std::numbers::pi * y / 4.0);
    }
    const SubbandSet vert = decompose(q, PyramidConfig{2, 4});
    const double e2 = energy(vert.band(0, 2));
    for (std::size_t i = 0; i < vert.bands.size(); ++i) {
      if (i != 2) CHECK(e2 >= 5.0 * energy(vert.bands[i]));
    }
  }

  TEST_CASE("round trip on noise and natural planes") {
    for (int seed = 0; seed < 10; ++seed) {
      const Plane x = noise_plane(64, 64, 100 + seed);
      CHECK(snr_db(x, reconstruct(decompose(x, PyramidConfig{}), PyramidConfig{})) > 40.0);
    }
    const Plane big = noise_plane(128, 128, 7);
    CHECK(snr_db(big, reconstruct(decompose(big, PyramidConfig{3, 5}), PyramidConfig{3, 5})) > 40.0);
    for (const std::string& name : testing::natural_images()) {
      const Plane x = natural_plane(name, 128);
      CHECK(snr_db(x, reconstruct(decompose(x, PyramidConfig{}), PyramidConfig{})) > 40.0);
    }
  }

  TEST_CASE("zero sub-band set reconstructs to zero") {
    SubbandSet set = decompose(noise_plane(32, 32, 3), PyramidConfig{});
    for (Plane& b : set.bands) b = Plane(b.width(), b.height());
    set.residual_high = Plane(32, 32);
    set.residual_low = Plane(8, 8);
    const Plane back = reconstruct(set, PyramidConfig{});
    for (double v : back.values()) CHECK(v == 0.0);
  }

  TEST_CASE("linearity") {
    const Plane x = noise_plane(64, 64, 4), y = noise_plane(64, 64, 5);
    Plane combo(64, 64);
    for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = 2.5 * x[i] - 0.75 * y[i];
    const PyramidConfig cfg{};
    const SubbandSet sx = decompose(x, cfg), sy = decompose(y, cfg), sc = decompose(combo, cfg);
    for (std::size_t b = 0; b < sc.bands.size(); ++b) {
      double err = 0.0;
      for (std::size_t i = 0; i < sc.bands[b].size(); ++i) {
        const double expect = 2.5 * sx.bands[b][i] - 0.75 * sy.bands[b][i];
        err = std::max(err, std::abs(sc.bands[b][i] - expect));
      }
      CHECK(err < 1e-10 * std::sqrt(energy(sc.bands[b]) / sc.bands[b].size()));
    }
    Plane scaled(64, 64);
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = 2.5 * x[i];
    const Plane rec = reconstruct(decompose(scaled, cfg), cfg);
    for (std::size_t i = 0; i < rec.size(); ++i) CHECK(rec[i] == doctest::Approx(2.5 * x[i]).epsilon(1e-6));
  }

  TEST_CASE("oriented bands of natural planes are nearly zero mean") {
    for (const std::string& name : testing::natural_images()) {
      const SubbandSet set = decompose(natural_plane(name, 128), PyramidConfig{});
      for (const Plane& band : set.bands) {
        double mean = 0.0;
        for (double v : band.values()) mean += v;
        mean /= band.size();
        const double sd = std::sqrt(energy(band) / band.size() - mean * mean);
        CHECK(std::abs(mean) <= 0.01 * sd);
      }
    }
  }

  TEST_CASE("one pixel shift keeps band energy") {
    for (const std::string& name : testing::natural_images()) {
      const Plane x = natural_plane(name, 128);
      Plane shifted(128, 128);
      for (int y = 0; y < 128; ++y) {
        for (int c = 0; c < 128; ++c) shifted.at((c + 1) % 128, y) = x.at(c, y);
      }
      const SubbandSet a = decompose(x, PyramidConfig{}), b = decompose(shifted, PyramidConfig{});
      double ea = 0.0, eb = 0.0;
      for (std::size_t i = 0; i < a.bands.size(); ++i) {
        ea += energy(a.bands[i]);
        eb += energy(b.bands[i]);
      }
      CHECK(std::abs(ea - eb) < 0.01 * ea);
    }
  }

  TEST_CASE("configuration errors") {
    CHECK(minimum_pyramid_edge(2) == 16);
    CHECK_THROWS_AS(decompose(Plane(15, 64), PyramidConfig{}), ConfigError);
    CHECK_THROWS_AS(decompose(Plane(64, 64), PyramidConfig{0, 3}), ConfigError);
    CHECK_THROWS_AS(decompose(Plane(64, 64), PyramidConfig{2, 0}), ConfigError);
    CHECK_THROWS_AS(decompose(Plane(64, 64), PyramidConfig{9, 3}), ConfigError);
    CHECK_NOTHROW(decompose(Plane(16, 16), PyramidConfig{}));
  }

  TEST_CASE("reconstruct rejects mismatched sets") {
    SubbandSet set = decompose(noise_plane(32, 32, 6), PyramidConfig{});
    CHECK_THROWS_AS(reconstruct(set, PyramidConfig{2, 4}), ContractError);
    set.bands[4] = Plane(5, 5);
    CHECK_THROWS_AS(reconstruct(set, PyramidConfig{}), ContractError);
  }

  TEST_CASE("stacking color sub-bands") {
    const Plane x = noise_plane(32, 32, 8), z = noise_plane(32, 32, 9);
    const PyramidConfig cfg{};
    const SubbandSet a = decompose(x, cfg), c = decompose(z, cfg);
    const SubbandVectors same = stack_color_subbands(a, a, a, 0);
    CHECK(same.size() == 1024u);
    for (std::size_t i = 0; i < same.size(); ++i) {
      const auto r = same.row(i);
      CHECK(r[0] == r[1]);
      CHECK(r[1] == r[2]);
    }
    CHECK(stack_color_subbands(a, a, a, 3).size() == 256u);
    const SubbandVectors fwd = stack_color_subbands(a, a, c, 1);
    const SubbandVectors swp = stack_color_subbands(c, a, a, 1);
    for (std::size_t i = 0; i < fwd.size(); ++i) {
      CHECK(fwd.row(i)[0] == swp.row(i)[2]);
      CHECK(fwd.row(i)[2] == swp.row(i)[0]);
    }
    CHECK_THROWS_AS(stack_color_subbands(a, a, a, 6), ContractError);
    const SubbandSet small = decompose(noise_plane(16, 16, 1), cfg);
    CHECK_THROWS_AS(stack_color_subbands(a, small, a, 0), ContractError);
  }
}
