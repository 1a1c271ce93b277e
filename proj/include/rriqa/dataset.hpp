#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rriqa {

struct LabeledSample {
  int ref_id = 0;
  std::filesystem::path distorted_path;
  std::filesystem::path reference_path;
  int distortion_type = 0;  ///< 1..17, TID2008 numbering
  int level = 0;            ///< 1..4
  double mos = 0.0;
};

struct DatasetOptions {
  double mos_min = 0.0;
  double mos_max = 9.0;
};

struct Dataset {
  std::vector<LabeledSample> samples;
  std::vector<std::string> warnings;
};

/// Reads a manifest of "<mos> <file>" lines, file names following
/// iRR_TT_L.bmp. Distorted images are looked up in root/distorted_images and
/// root, references as IRR.BMP in root/reference_images and root (any case,
/// .bmp or .png). Blank lines and lines starting with '#' are skipped.
///
/// Throws IngestionError listing every bad line with its number.
Dataset load_dataset(const std::filesystem::path& root, const std::filesystem::path& manifest,
                     const DatasetOptions& options = {});

}  // namespace rriqa
