#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rriqa/dataset.hpp"
#include "rriqa/error.hpp"
#include "rriqa/evaluate.hpp"
#include "rriqa/feature_codec.hpp"
#include "rriqa/image_io.hpp"
#include "rriqa/metric.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string space = "cielab";
  std::string distance = "kld";
  int scales = 2;
  int orientations = 3;
  double d0 = 0.1;
  std::uint64_t seed = 0;
  bool per_type_fit = false;
  std::string input;
  std::string second;
  std::string output;
  std::string text;
};

void write_text(const fs::path& path, const std::string& text) {
  rriqa::write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

int run_extract(const Options& o) {
  rriqa::PyramidConfig cfg{o.scales, o.orientations};
  const rriqa::ColorImage img = rriqa::read_image(o.input);
  const rriqa::FeatureSet fs =
      rriqa::extract_features(img, rriqa::parse_color_space(o.space), cfg);
  const fs::path out = o.output.empty() ? fs::path(o.input).replace_extension(".rrf") : fs::path(o.output);
  const auto bytes = rriqa::encode_features(fs);
  rriqa::write_file(out, bytes);
  if (!o.text.empty()) write_text(o.text, rriqa::features_to_text(fs));
  std::printf("wrote %s (%zu bytes, %zu bands)\n", out.string().c_str(), bytes.size(),
              fs.features.size());
  return 0;
}

int run_score(const Options& o) {
  const rriqa::FeatureSet ref = rriqa::decode_features(rriqa::read_file(o.input));
  const rriqa::ColorImage img = rriqa::read_image(o.second);
  rriqa::MetricOptions metric;
  metric.d0 = o.d0;
  const rriqa::QualityResult r =
      rriqa::score(ref, img, rriqa::parse_distance_kind(o.distance), metric);
  std::printf("distance %s\ncolor_space %s\nD %.10g\nQ %.10g\n",
              std::string(rriqa::to_string(r.distance_kind)).c_str(),
              std::string(rriqa::to_string(ref.color_space)).c_str(), r.d_total, r.q);
  for (std::size_t b = 0; b < r.per_band.size(); ++b) {
    std::printf("d[%zu] %.10g\n", b, r.per_band[b]);
  }
  return 0;
}

int run_evaluate(const Options& o) {
  const rriqa::Dataset data = rriqa::load_dataset(o.input, o.second);
  for (const std::string& w : data.warnings) std::cerr << "warning: " << w << "\n";

  rriqa::EvaluationConfig config;
  config.space = rriqa::parse_color_space(o.space);
  config.distance = rriqa::parse_distance_kind(o.distance);
  config.cfg = {o.scales, o.orientations};
  config.metric.d0 = o.d0;
  config.per_type_fit = o.per_type_fit;
  config.seed = o.seed;
  const rriqa::EvaluationReport report = rriqa::evaluate(data.samples, config);

  fs::path out = o.output;
  if (out.empty()) {
    const fs::path manifest(o.second);
    out = manifest.parent_path() / (manifest.stem().string() + "_report.txt");
  }
  const std::string text = rriqa::report_to_text(report);
  write_text(out, text);
  write_text(fs::path(out).replace_extension(".csv"), rriqa::report_to_csv(report));
  std::fputs(text.c_str(), stdout);
  std::printf("report written to %s\n", out.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced-reference color image quality from sub-band MGGD features"};
  app.require_subcommand(1);
  Options o;

  const auto add_pyramid = [&](CLI::App* sub) {
    sub->add_option("--scales", o.scales, "pyramid scales")->capture_default_str();
    sub->add_option("--orientations", o.orientations, "orientations per scale")
        ->capture_default_str();
  };
  const auto add_space = [&](CLI::App* sub) {
    sub->add_option("--space", o.space, "color space: rgb, hsv, cielab, ycrcb")
        ->capture_default_str()
        ->check(CLI::IsMember({"rgb", "hsv", "cielab", "lab", "ycrcb", "ycbcr"}, CLI::ignore_case));
  };
  const auto add_distance = [&](CLI::App* sub) {
    sub->add_option("--distance", o.distance, "band dissimilarity: kld or gd")
        ->capture_default_str()
        ->check(CLI::IsMember({"kld", "gd"}, CLI::ignore_case));
    sub->add_option("--d0", o.d0, "normalisation constant of Q")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };

  CLI::App* extract = app.add_subcommand("extract", "write the feature file of a reference image");
  extract->add_option("image", o.input, "reference image (PNG or BMP)")->required();
  extract->add_option("-o,--output", o.output, "feature file (default: image name with .rrf)");
  extract->add_option("--text", o.text, "also write a readable dump of the features");
  add_space(extract);
  add_pyramid(extract);

  CLI::App* score = app.add_subcommand("score", "score a distorted image against a feature file");
  score->add_option("features", o.input, "feature file from extract")->required();
  score->add_option("image", o.second, "distorted image")->required();
  add_distance(score);

  CLI::App* evaluate = app.add_subcommand("evaluate", "run the regression protocol on a dataset");
  evaluate->add_option("root", o.input, "dataset directory")->required();
  evaluate->add_option("manifest", o.second, "lines of '<mos> <file>'")->required();
  evaluate->add_option("-o,--output", o.output,
                       "report path (default: beside the manifest); a .csv is written next to it");
  evaluate->add_flag("--per-type-fit", o.per_type_fit, "fit the logistic per distortion type");
  add_space(evaluate);
  add_distance(evaluate);
  add_pyramid(evaluate);

  app.add_option("--seed", o.seed, "seed for every random choice")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*extract) return run_extract(o);
    if (*score) return run_score(o);
    return run_evaluate(o);
  } catch (const rriqa::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
