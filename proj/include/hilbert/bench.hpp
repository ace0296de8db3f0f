#pragma once

// Experiment grid: datasets x manifold kinds x dimensionalities x replicates,
// each cell solved by hyperparameter search, persisted to a resumable CSV.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hilbert/embed.hpp"

namespace hilbert {

enum class DatasetKind { ErdosRenyi, BarabasiAlbert, RandomPoints };
enum class LossKind { Stress, KL };

struct DatasetDescriptor {
  DatasetKind kind = DatasetKind::ErdosRenyi;
  std::size_t n = 50;
  double p = 0.5;
  std::size_t m = 2;
  LossKind loss = LossKind::Stress;
  int steps = 5;
  std::uint64_t base_seed = 1;

  /// Stable identifier, e.g. "er-n50-p0.5-stress" or "ba-n100-m2-kl5".
  std::string id() const;
};

struct ExperimentSpec {
  DatasetDescriptor dataset;
  std::vector<ManifoldKind> kinds;
  std::vector<int> dims;
  int repetitions = 10;
  int trials = 30;
  int max_epochs = 3000;
  int patience_epochs = 100;
  double init_scale = 1.0;

  void validate() const;
};

/// Parses `key = value` lines; '#' starts a comment. Keys: dataset (er|ba|points),
/// n, p, m, loss (stress|kl), steps, base_seed, kinds (comma list), dims (comma
/// list, a-b ranges allowed), repetitions, trials, max_epochs, patience,
/// init_scale. base_seed is mandatory; kinds defaults to all five.
ExperimentSpec parse_experiment_spec(std::istream& in);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

struct ResultRecord {
  std::string dataset_id;
  std::uint64_t seed = 0;
  ManifoldKind kind = ManifoldKind::Euclidean;
  int d = 0;
  double lr = 0.0;
  int batch = 0;
  double loss = 0.0;
  int epochs = 0;
  double wall_ms = 0.0;

  /// Equality on everything except wall time.
  bool same_outcome(const ResultRecord& other) const;
};

inline constexpr const char* kResultsHeader = "dataset_id,seed,kind,d,lr,batch,loss,epochs,wall_ms";

std::string format_record(const ResultRecord& r);
ResultRecord parse_record(const std::string& line);
std::vector<ResultRecord> read_results_csv(const std::filesystem::path& path);

/// Seed of dataset replicate `rep`.
std::uint64_t replicate_seed(std::uint64_t base_seed, int rep);
/// Search seed for one (replicate, kind, d) cell; independent of list order.
std::uint64_t cell_seed(std::uint64_t replicate_seed, ManifoldKind kind, int d);

/// Generates the target of one replicate.
EmbeddingTarget generate_target(const DatasetDescriptor& dataset, std::uint64_t seed);

struct SuiteOptions {
  int workers = 1;
  /// Append completed records here; records already present are skipped.
  std::optional<std::filesystem::path> results_csv;
  /// One line per finished or failed record; may be null.
  std::ostream* log = nullptr;
};

struct SuiteFailure {
  std::string dataset_id;
  std::uint64_t seed;
  ManifoldKind kind;
  int d;
  std::string message;
};

struct SuiteOutcome {
  /// Successful records in grid order (replicate, kind, d), including resumed ones.
  std::vector<ResultRecord> records;
  std::vector<SuiteFailure> failures;
  int resumed = 0;
};

SuiteOutcome run_suite(const ExperimentSpec& spec, const SuiteOptions& options = {});

struct SummaryRow {
  ManifoldKind kind;
  int d;
  double mean_loss;
  /// Population standard deviation.
  double std_loss;
  int count;
};

/// Per-(kind, d) statistics ordered by kind then d.
std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace hilbert
