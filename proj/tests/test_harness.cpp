#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mdl/family_io.hpp"
#include "mdl/harness.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mdl;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("mdl_harness_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kMixFamily =
    R"({"type": "mixture", "tau": 0.2, "components": [[0.9, 0.1], [0.2, 0.8]]})";
const char* kBerFamily = R"({"type": "canonical_bernoulli", "eta_lo": -1.5, "eta_hi": 1.5})";

}  // namespace

TEST_CASE("Experiment kinds map to and from strings") {
  for (const char* name : {"regret-curve", "bound-audit", "risk-cert", "kraft-sweep",
                           "nml-compare", "compress"}) {
    CHECK(to_string(experiment_kind_from_string(name)) == name);
  }
  CHECK_THROWS_AS(experiment_kind_from_string("bogus"), config_error);
}

TEST_CASE("Specification loading validates and resolves paths") {
  TempDir tmp("spec");
  write_text(tmp.path / "family.json", kMixFamily);

  nlohmann::json ok{{"family", "family.json"},
                    {"kind", "kraft-sweep"},
                    {"n_list", {2, 4}},
                    {"out_dir", "out"}};
  write_text(tmp.path / "ok.json", ok.dump());
  ExperimentSpec spec = load_experiment_spec(tmp.path / "ok.json");
  CHECK(spec.kind == ExperimentKind::kKraftSweep);
  // Relative paths resolve against the spec file's directory.
  CHECK(spec.family_path == tmp.path / "family.json");
  CHECK(spec.out_dir == tmp.path / "out");
  CHECK(spec.n_list == std::vector<std::uint64_t>{2, 4});

  // Unknown configuration keys are rejected, not ignored.
  nlohmann::json bad_key = ok;
  bad_key["config"] = {{"alpha", 2.0}, {"alhpa", 3.0}};
  write_text(tmp.path / "bad_key.json", bad_key.dump());
  CHECK_THROWS_AS(load_experiment_spec(tmp.path / "bad_key.json"), config_error);

  // n_list must ascend strictly.
  nlohmann::json bad_n = ok;
  bad_n["n_list"] = {4, 4};
  write_text(tmp.path / "bad_n.json", bad_n.dump());
  CHECK_THROWS_AS(load_experiment_spec(tmp.path / "bad_n.json"), config_error);

  // The family file must exist at load time.
  nlohmann::json bad_fam = ok;
  bad_fam["family"] = "missing.json";
  write_text(tmp.path / "bad_fam.json", bad_fam.dump());
  CHECK_THROWS_AS(load_experiment_spec(tmp.path / "bad_fam.json"), config_error);

  // Malformed JSON fails with a configuration error, not a parser leak.
  write_text(tmp.path / "broken.json", "{nope");
  CHECK_THROWS_AS(load_experiment_spec(tmp.path / "broken.json"), config_error);

  CHECK_THROWS_AS(load_experiment_spec(tmp.path / "never_written.json"), config_error);
}

TEST_CASE("Kraft sweep runs, certifies, and is byte-deterministic") {
  TempDir tmp("kraft");
  write_text(tmp.path / "family.json", kBerFamily);
  nlohmann::json j{{"family", "family.json"},
                   {"kind", "kraft-sweep"},
                   {"n_list", {2, 4, 6}},
                   {"out_dir", "out_a"}};
  write_text(tmp.path / "run.json", j.dump());

  ExperimentSpec spec = load_experiment_spec(tmp.path / "run.json");
  RunResult res = run_experiment(spec);
  CHECK(res.status == 0);
  CHECK(res.failures.empty());

  const fs::path out = tmp.path / "out_a";
  CHECK(fs::exists(out / "kraft_sweep.csv"));
  CHECK(fs::exists(out / "certificates.json"));
  CHECK(fs::exists(out / "manifest.json"));

  // Certificates all pass and carry the mass values.
  auto certs = nlohmann::json::parse(read_text(out / "certificates.json"));
  REQUIRE(certs.is_array());
  CHECK(certs.size() == 3);
  for (const auto& c : certs) {
    CHECK(c.at("pass").get<bool>());
  }

  auto manifest = nlohmann::json::parse(read_text(out / "manifest.json"));
  CHECK(manifest.at("schema") == "run-manifest/1");
  CHECK(manifest.at("pass").get<bool>());
  CHECK(manifest.contains("wall_ms"));

  // The CSV begins with its schema comment.
  std::string csv = read_text(out / "kraft_sweep.csv");
  CHECK(csv.rfind("# schema=kraft-sweep/1", 0) == 0);

  // A second run into a fresh directory yields identical artifact bytes.
  spec.out_dir = tmp.path / "out_b";
  run_experiment(spec);
  CHECK(read_text(out / "kraft_sweep.csv") == read_text(tmp.path / "out_b" / "kraft_sweep.csv"));
  CHECK(read_text(out / "certificates.json") ==
        read_text(tmp.path / "out_b" / "certificates.json"));
}

TEST_CASE("Regret curve artifacts") {
  TempDir tmp("curve");
  write_text(tmp.path / "family.json", kBerFamily);
  nlohmann::json j{{"family", "family.json"},
                   {"kind", "regret-curve"},
                   {"n_list", {4, 6}},
                   {"out_dir", "out"},
                   {"config", {{"alpha", 2.0}}}};
  write_text(tmp.path / "run.json", j.dump());
  RunResult res = run_experiment(load_experiment_spec(tmp.path / "run.json"));
  CHECK(res.status == 0);

  std::string csv = read_text(tmp.path / "out" / "regret_curve.csv");
  CHECK(csv.rfind("# schema=regret-curve/1", 0) == 0);
  // Schema comment + header + one row per sample size.
  int lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 4);
}

TEST_CASE("Grid dump format") {
  auto fam = family_from_json(nlohmann::json::parse(kMixFamily));
  QuantizerGrid grid = build_grid(*fam, 16, GridConfig{2.0, 0.25});
  std::ostringstream os;
  write_grid_csv(grid, os);
  std::string text = os.str();
  CHECK(text.rfind("# schema=grid-dump/1", 0) == 0);
  CHECK(text.find("point_index,") != std::string::npos);
  int lines = 0;
  for (char ch : text) lines += ch == '\n';
  CHECK(lines == static_cast<int>(grid.size()) + 2);
}

TEST_CASE("File compression round trip through the harness") {
  TempDir tmp("compress");
  write_text(tmp.path / "family.json", kMixFamily);

  // 64 binary symbols as raw bytes.
  std::string data;
  for (int i = 0; i < 64; ++i) data.push_back(static_cast<char>((i * 7 + i / 9) % 2));
  write_text(tmp.path / "input.bin", data);

  nlohmann::json j{{"family", "family.json"},
                   {"kind", "compress"},
                   {"input", "input.bin"},
                   {"out_dir", "out"}};
  write_text(tmp.path / "run.json", j.dump());
  RunResult res = run_experiment(load_experiment_spec(tmp.path / "run.json"));
  CHECK(res.status == 0);

  const fs::path out = tmp.path / "out";
  REQUIRE(fs::exists(out / "input.bin.mdl"));
  REQUIRE(fs::exists(out / "input.bin.mdl.roundtrip"));
  CHECK(read_text(out / "input.bin.mdl.roundtrip") == data);

  auto fam = family_from_json(nlohmann::json::parse(kMixFamily));

  // Direct file API: an empty input produces the bare six-byte envelope.
  write_text(tmp.path / "empty.bin", "");
  compress_file(fam, CodeConfig{}, tmp.path / "empty.bin", tmp.path / "empty.mdl");
  CHECK(fs::file_size(tmp.path / "empty.mdl") == 6);
  decompress_file(fam, CodeConfig{}, tmp.path / "empty.mdl", tmp.path / "empty.out");
  CHECK(read_text(tmp.path / "empty.out").empty());

  // Bytes outside the alphabet are reported with their offset.
  std::string bad("\x00\x05\x01", 3);
  write_text(tmp.path / "bad.bin", bad);
  CHECK_THROWS_AS(
      compress_file(fam, CodeConfig{}, tmp.path / "bad.bin", tmp.path / "bad.mdl"),
      domain_error);
}

TEST_CASE("Risk certification artifacts") {
  TempDir tmp("risk");
  write_text(tmp.path / "family.json", kMixFamily);
  nlohmann::json j{{"family", "family.json"},
                   {"kind", "risk-cert"},
                   {"n_list", {6}},
                   {"theta_star", {0.5}},
                   {"b_list", {2.0}},
                   {"trials", 500},
                   {"seed", 3},
                   {"out_dir", "out"}};
  write_text(tmp.path / "run.json", j.dump());
  ExperimentSpec spec = load_experiment_spec(tmp.path / "run.json");
  CHECK(spec.trials == 500);
  REQUIRE(spec.theta_stars.size() == 1);

  RunResult res = run_experiment(spec);
  CHECK(res.status == 0);
  CHECK(fs::exists(tmp.path / "out" / "risk_cert.csv"));
  CHECK(fs::exists(tmp.path / "out" / "tail_audit.csv"));

  // A boundary evaluation point is a configuration error.
  nlohmann::json bad = j;
  bad["theta_star"] = {0.8};
  write_text(tmp.path / "bad.json", bad.dump());
  CHECK_THROWS_AS(run_experiment(load_experiment_spec(tmp.path / "bad.json")), config_error);
}
