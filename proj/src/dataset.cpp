#include "rriqa/dataset.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>

#include "rriqa/error.hpp"

namespace rriqa {
namespace {

namespace fs = std::filesystem;

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::optional<fs::path> first_existing(const std::vector<fs::path>& dirs,
                                       const std::vector<std::string>& names) {
  for (const fs::path& dir : dirs) {
    for (const std::string& name : names) {
      std::error_code ec;
      if (fs::is_regular_file(dir / name, ec)) return dir / name;
    }
  }
  return std::nullopt;
}

}  // namespace

Dataset load_dataset(const fs::path& root, const fs::path& manifest,
                     const DatasetOptions& options) {
  std::ifstream in(manifest);
  if (!in) throw IngestionError("cannot open manifest " + manifest.string());

  static const std::regex kName(R"(i(\d\d)_(\d\d)_(\d)\.(bmp|png))", std::regex::icase);
  const std::vector<fs::path> distorted_dirs = {root / "distorted_images", root};
  const std::vector<fs::path> reference_dirs = {root / "reference_images", root};

  Dataset out;
  std::vector<std::string> problems;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string mos_text, name, extra;
    if (!(fields >> mos_text) || mos_text.front() == '#') continue;
    const std::string where = "line " + std::to_string(number) + ": ";
    if (!(fields >> name) || (fields >> extra)) {
      problems.push_back(where + "expected '<mos> <file>'");
      continue;
    }

    LabeledSample s;
    const char* end = mos_text.data() + mos_text.size();
    const auto [ptr, ec] = std::from_chars(mos_text.data(), end, s.mos);
    if (ec != std::errc{} || ptr != end || !std::isfinite(s.mos)) {
      problems.push_back(where + "bad mos '" + mos_text + "'");
      continue;
    }
    if (s.mos < options.mos_min || s.mos > options.mos_max) {
      problems.push_back(where + "mos " + mos_text + " outside [" +
                         std::to_string(options.mos_min) + ", " +
                         std::to_string(options.mos_max) + "]");
      continue;
    }
    std::smatch m;
    if (!std::regex_match(name, m, kName)) {
      problems.push_back(where + "'" + name + "' does not match iRR_TT_L.bmp");
      continue;
    }
    s.ref_id = std::stoi(m[1]);
    s.distortion_type = std::stoi(m[2]);
    s.level = std::stoi(m[3]);
    if (s.distortion_type < 1 || s.distortion_type > 17) {
      problems.push_back(where + "distortion type " + m[2].str() + " outside 1..17");
      continue;
    }
    if (s.level < 1 || s.level > 4) {
      problems.push_back(where + "level " + m[3].str() + " outside 1..4");
      continue;
    }

    const auto distorted = first_existing(distorted_dirs, {name, lower(name), upper(name)});
    if (!distorted) {
      problems.push_back(where + "missing distorted image " + name);
      continue;
    }
    const std::string stem = "I" + m[1].str();
    std::vector<std::string> ref_names;
    for (const char* ext : {".BMP", ".bmp", ".png", ".PNG"}) {
      ref_names.push_back(stem + ext);
      ref_names.push_back(lower(stem) + ext);
    }
    const auto reference = first_existing(reference_dirs, ref_names);
    if (!reference) {
      problems.push_back(where + "missing reference image " + stem + ".BMP");
      continue;
    }
    s.distorted_path = *distorted;
    s.reference_path = *reference;
    out.samples.push_back(std::move(s));
  }

  if (!problems.empty()) {
    std::string msg = manifest.string() + ": " + std::to_string(problems.size()) + " bad line(s)";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw IngestionError(msg);
  }
  if (out.samples.empty()) out.warnings.push_back("manifest " + manifest.string() + " is empty");
  return out;
}

}  // namespace rriqa
