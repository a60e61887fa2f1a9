#pragma once
// Experiment driver behind the CLI: loads an experiment specification from
// JSON, runs the requested sweep, and writes deterministic CSV artifacts, a
// JSON run manifest, and JSON certificates for every pass/fail judgement.
//
// Determinism contract: CSV and certificate bytes are a pure function of
// the specification (wall-clock timing lives only in the manifest).

#include "mdl/codec.hpp"
#include "mdl/oracles.hpp"

#include <filesystem>
#include <iosfwd>

namespace mdl {

enum class ExperimentKind {
  kRegretCurve,  // exhaustive regret by route vs the guaranteed bounds, per n
  kBoundAudit,   // certified constants, regret report, cardinality check, grid dumps
  kRiskCert,     // risk-chain audit per (n, theta*), optional exceedance audits
  kKraftSweep,   // exact code-space mass per n
  kNmlCompare,   // minimax benchmark vs two-part max regret per n
  kCompress,     // file round trip through the bitstream
};

ExperimentKind experiment_kind_from_string(const std::string& s);
std::string to_string(ExperimentKind kind);

struct ExperimentSpec {
  std::filesystem::path family_path;
  ExperimentKind kind = ExperimentKind::kBoundAudit;
  std::vector<std::uint64_t> n_list;  // ascending; required except for compress
  CodeConfig config;
  std::filesystem::path out_dir;

  // risk-cert inputs
  std::vector<Vec> theta_stars;
  std::optional<double> lambda;  // default: 1 - 1/alpha
  std::vector<double> b_list;    // exceedance thresholds; empty = skip
  std::uint64_t trials = 100000;

  // compress inputs
  std::filesystem::path input_path;
  std::filesystem::path output_path;  // default: out_dir / (input filename + ".mdl")
};

// Parses a JSON experiment specification; relative paths are resolved
// against the specification file's directory.  Throws config_error on
// malformed or inconsistent input.
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

struct RunResult {
  int status = 0;                     // 0 = all certificates pass, 1 = some failed
  std::vector<std::string> outputs;   // files written, relative to out_dir
  std::vector<std::string> failures;  // human-readable failed-certificate labels
};

// Runs the experiment and writes its artifacts under spec.out_dir
// (created if missing).  Configuration problems throw config_error /
// domain_error; the CLI maps those to exit status 2.
RunResult run_experiment(const ExperimentSpec& spec);

// Grid dump: one row per grid point with its parent-cell lattice index and
// the parent's boundary flag.
void write_grid_csv(const QuantizerGrid& grid, std::ostream& os);

// File round trip: each input byte is one symbol and must be below the
// family's alphabet size (domain_error otherwise).  An empty input file
// produces an envelope-only stream that restores to an empty file.
void compress_file(std::shared_ptr<const Family> fam, const CodeConfig& cfg,
                   const std::filesystem::path& input, const std::filesystem::path& output);
void decompress_file(std::shared_ptr<const Family> fam, const CodeConfig& cfg,
                     const std::filesystem::path& input, const std::filesystem::path& output);

}  // namespace mdl
