#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "soficlab/complex.hpp"
#include "soficlab/entropy.hpp"
#include "soficlab/oracle.hpp"

namespace soficlab::cli {

enum class ExperimentKind { entropy, betti, defect, luck, oracle_check, chain_info };

std::optional<ExperimentKind> parse_kind(std::string_view text);
std::string_view to_string(ExperimentKind kind) noexcept;

enum ExitCode : int { kOk = 0, kConfigError = 2, kCapExceeded = 3, kInvariantViolation = 4 };

// One [[chain.level]] entry. An abelianization entry expands to several levels.
struct AbelianizationLevels {
  std::uint64_t modulus = 2;
  std::size_t levels = 1;
};
struct QuotientLevel {
  std::map<char, std::vector<std::uint32_t>> perms;
};
struct SubgroupLevel {
  std::vector<std::string> generators;
};
struct RandomLevel {
  std::size_t size = 1;
  std::optional<std::uint64_t> seed;
};
using ChainEntry = std::variant<AbelianizationLevels, QuotientLevel, SubgroupLevel, RandomLevel>;

struct ComplexConfig {
  bool cayley = true;
  std::vector<std::size_t> orbit_counts;
  std::vector<std::vector<std::vector<std::string>>> coboundaries;  // delta^1.. as rows of ring strings
  std::vector<std::size_t> acyclic;
};

struct SubshiftConfig {
  SubshiftSpec::Kind kind = SubshiftSpec::Kind::ker_coboundary;
  std::size_t dim = 1;
  std::vector<std::vector<std::string>> matrix;
  std::size_t components = 1;
};

struct Caps {
  std::size_t coset_cap = kDefaultCosetCap;
  std::uint64_t oracle_cap = kDefaultOracleCap;
  std::size_t exact_rank_limit = kExactRankLimit;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string generators;
  std::vector<std::string> relators;
  std::vector<ChainEntry> chain;
  ComplexConfig complex;
  std::optional<SubshiftConfig> subshift;
  std::uint32_t prime = 2;
  std::size_t dim = 1;
  std::size_t tail = kDefaultTailWindow;
  std::uint64_t seed = 1;
  bool rational = true;
  std::size_t prime_count = 3;
  std::size_t max_word_length = 4;
  std::optional<std::string> reference_group;
  Caps caps;
};

/// Parses a TOML experiment description. Throws InvalidInput with the
/// offending key or source position.
ExperimentConfig parse_config(std::string_view text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Reads SOFICLAB_COSET_CAP into `caps` when set.
void apply_environment(Caps& caps);

/// Levels described by the chain entries, numbered from 1 in order.
std::vector<SoficApproximation> build_chain(const ExperimentConfig& config, const Presentation& presentation);
EquivariantComplex build_complex(const ExperimentConfig& config, const Presentation& presentation);

struct LevelRow {
  std::size_t level = 0;
  std::size_t size = 0;
  std::string provenance;
  bool homomorphism = false;
  std::optional<std::size_t> dim_ker;
  std::optional<std::size_t> rank;
  std::optional<std::size_t> dim_h_ffp;
  std::optional<std::size_t> dim_h_q;
  std::optional<bool> q_certain;
  std::optional<std::int64_t> defect;  // exact dimension; the CSV shows defect·log p / N
  std::optional<std::uint64_t> brute_count;
  std::optional<std::uint64_t> linear_count;
};

struct WordDefect {
  std::string word;
  double fixed_fraction = 0.0;
};

struct ChainInfoRow {
  std::size_t level = 0;
  std::size_t size = 0;
  std::size_t orbits = 0;
  bool homomorphism = false;
  std::vector<WordDefect> words;
};

struct ReferenceLine {
  std::string label;
  double value = 0.0;  // units of log p
};

struct Report {
  std::string name;
  ExperimentKind kind = ExperimentKind::entropy;
  std::uint32_t prime = 2;
  std::size_t dim = 1;
  std::string subject;  // complex or subshift description
  std::vector<LevelRow> rows;
  std::vector<ChainInfoRow> chain_rows;
  TailSummary tail;
  std::vector<ReferenceLine> references;
};

/// Runs an experiment, farming levels out to `jobs` workers; rows come back
/// in level order regardless of scheduling.
Report run_experiment(const ExperimentConfig& config, ExperimentKind kind, std::size_t jobs = 1);

inline constexpr std::string_view kCsvSchema = "# soficlab-report v1";

void write_csv(std::ostream& os, const Report& report);
std::string to_json(const Report& report);
/// Line chart of the normalized series against log N with reference lines.
void write_svg(std::ostream& os, const Report& report);

struct Options {
  ExperimentKind kind = ExperimentKind::entropy;
  std::filesystem::path config;
  std::size_t jobs = 1;
  std::filesystem::path out = ".";
  bool plot = false;
};

/// Loads, runs, and writes reports; maps errors to exit codes with a
/// diagnostic on `err`.
int run(const Options& options, std::ostream& out, std::ostream& err);

}  // namespace soficlab::cli
