#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rriqa/feature_codec.hpp"
#include "rriqa/image_io.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

Run run_cli(const std::string& args, const fs::path& scratch) {
  const fs::path out = scratch / "stdout.txt", err = scratch / "stderr.txt";
  const std::string cmd = quote(RRIQA_CLI_PATH) + " " + args + " >" + quote(out.string()) + " 2>" +
                          quote(err.string());
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("help and argument errors") {
    testing::TempDir dir("cli_help");
    const Run help = run_cli("--help", dir.path());
    CHECK(help.code == 0);
    for (const char* word : {"extract", "score", "evaluate", "--seed"}) {
      CHECK(help.out.find(word) != std::string::npos);
    }
    const Run sub = run_cli("evaluate --help", dir.path());
    CHECK(sub.code == 0);
    for (const char* flag : {"--per-type-fit", "--space", "--distance", "--d0", "--scales",
                             "--orientations", "--output"}) {
      CHECK(sub.out.find(flag) != std::string::npos);
    }
    CHECK(run_cli("extract --bogus x.png", dir.path()).code == 2);
    CHECK(run_cli("", dir.path()).code == 2);
    CHECK(run_cli("extract x.png --scales 0", dir.path()).code != 0);
  }

  TEST_CASE("extract and self score") {
    testing::TempDir dir("cli_extract");
    const fs::path img = dir.path() / "ref.png";
    rriqa::write_image(img, testing::center_crop(testing::load_natural("coffee"), 96, 96));
    const Run ex = run_cli("extract " + quote(img.string()) + " --text " +
                               quote((dir.path() / "ref.txt").string()),
                           dir.path());
    REQUIRE(ex.code == 0);
    const fs::path feat = dir.path() / "ref.rrf";
    REQUIRE(fs::exists(feat));
    CHECK(fs::file_size(feat) == 404u);
    CHECK(fs::exists(dir.path() / "ref.txt"));
    CHECK(rriqa::decode_features(rriqa::read_file(feat)).features.size() == 6u);

    const Run self = run_cli("score " + quote(feat.string()) + " " + quote(img.string()), dir.path());
    REQUIRE(self.code == 0);
    const auto pos = self.out.find("\nQ ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(self.out.substr(pos + 3)) < 0.01);

    const Run again = run_cli("score " + quote(feat.string()) + " " + quote(img.string()), dir.path());
    CHECK(again.out == self.out);

    const Run missing = run_cli("score " + quote(feat.string()) + " nowhere.png", dir.path());
    CHECK(missing.code == 1);
    CHECK_FALSE(missing.err.empty());
    CHECK(run_cli("extract " + quote(img.string()) + " --space xyz", dir.path()).code == 2);
  }

  TEST_CASE("evaluate writes text and csv reports") {
    testing::TempDir dir("cli_eval");
    const fs::path manifest =
        testing::write_synthetic_dataset(dir.path(), 32, testing::three_kind_levels());
    const std::string args = "evaluate " + quote(dir.path().string()) + " " + quote(manifest.string());
    const Run first = run_cli(args, dir.path());
    REQUIRE(first.code == 0);
    const fs::path report = dir.path() / "manifest_report.txt";
    const fs::path csv = dir.path() / "manifest_report.csv";
    REQUIRE(fs::exists(report));
    REQUIRE(fs::exists(csv));
    const std::string table = slurp(csv);
    CHECK(std::count(table.begin(), table.end(), '\n') == 5);
    CHECK(table.find("\nall,36,") != std::string::npos);
    const std::string text = slurp(report);

    REQUIRE(run_cli(args, dir.path()).code == 0);
    CHECK(slurp(report) == text);
    CHECK(slurp(csv) == table);

    const Run bad = run_cli("evaluate " + quote(dir.path().string()) + " " +
                                quote((dir.path() / "none.txt").string()),
                            dir.path());
    CHECK(bad.code == 1);
  }
}
