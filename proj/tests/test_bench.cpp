#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hilbert/bench.hpp"
#include "hilbert/errors.hpp"

using namespace hilbert;
namespace fs = std::filesystem;

namespace {

ExperimentSpec tiny_spec() {
  std::istringstream in(R"(
# small stress grid
dataset = er
n = 10
p = 0.5
loss = stress
base_seed = 3
kinds = euclidean, hilbert
dims = 2,3
repetitions = 2
trials = 2
max_epochs = 40
)");
  return parse_experiment_spec(in);
}

class TempDir {
public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("hilbert_bench_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                         "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

private:
  fs::path path_;
};

}  // namespace

TEST(ExperimentSpecTest, ParsesAllKeys) {
  std::istringstream in(R"(
dataset = ba   # trailing comment
n = 30
m = 3
loss = kl
steps = 4
base_seed = 99
kinds = hyperboloid,funk
dims = 2-4, 8
repetitions = 3
trials = 5
max_epochs = 100
patience = 20
init_scale = 0.5
)");
  const ExperimentSpec spec = parse_experiment_spec(in);
  EXPECT_EQ(spec.dataset.kind, DatasetKind::BarabasiAlbert);
  EXPECT_EQ(spec.dataset.n, 30u);
  EXPECT_EQ(spec.dataset.m, 3u);
  EXPECT_EQ(spec.dataset.loss, LossKind::KL);
  EXPECT_EQ(spec.dataset.steps, 4);
  EXPECT_EQ(spec.dataset.base_seed, 99u);
  EXPECT_EQ(spec.kinds, (std::vector<ManifoldKind>{ManifoldKind::Hyperboloid, ManifoldKind::FunkSimplex}));
  EXPECT_EQ(spec.dims, (std::vector<int>{2, 3, 4, 8}));
  EXPECT_EQ(spec.repetitions, 3);
  EXPECT_EQ(spec.trials, 5);
  EXPECT_EQ(spec.max_epochs, 100);
  EXPECT_EQ(spec.patience_epochs, 20);
  EXPECT_EQ(spec.init_scale, 0.5);
  EXPECT_EQ(spec.dataset.id(), "ba-n30-m3-kl4");
}

TEST(ExperimentSpecTest, DefaultsAndErrors) {
  std::istringstream minimal("dataset = er\nn = 50\np = 0.5\nbase_seed = 1\ndims = 2\n");
  const ExperimentSpec spec = parse_experiment_spec(minimal);
  EXPECT_EQ(spec.kinds.size(), 5u);
  EXPECT_EQ(spec.repetitions, 10);
  EXPECT_EQ(spec.trials, 30);
  EXPECT_EQ(spec.dataset.id(), "er-n50-p0.5-stress");

  for (const char* bad : {
           "dataset = er\ndims = 2\n",                                // no base_seed
           "dataset = er\nbase_seed = 1\n",                           // no dims
           "dataset = tree\nbase_seed = 1\ndims = 2\n",               // unknown dataset
           "dataset = er\nbase_seed = 1\ndims = 2\nkinds = poincare\n",
           "dataset = er\nbase_seed = 1\ndims = 0\n",
           "dataset = er\nbase_seed = 1\ndims = 2\nrepetitions = 0\n",
           "dataset = er\nbase_seed = 1\ndims = 2\nn = ten\n",
           "dataset = er\nbase_seed = 1\ndims = 2\ncolour = red\n",
           "dataset = er\nbase_seed = 1\nbase_seed = 2\ndims = 2\n",
           "dataset = points\nloss = kl\nbase_seed = 1\ndims = 2\n",
           "dataset er\n",
       }) {
    std::istringstream in(bad);
    EXPECT_THROW(parse_experiment_spec(in), std::invalid_argument) << bad;
  }
  EXPECT_THROW(load_experiment_spec("/nonexistent/spec.txt"), IoError);
}

TEST(ResultRecordTest, CsvRoundTrip) {
  ResultRecord r{"er-n50-p0.5-stress", 1234567890123ull, ManifoldKind::HilbertSimplex, 7, 0.0123456789,
                 32, 0.31415926535897931, 812, 15.25};
  const ResultRecord back = parse_record(format_record(r));
  EXPECT_TRUE(back.same_outcome(r));
  EXPECT_EQ(back.wall_ms, 15.25);
  EXPECT_THROW(parse_record("a,b,c"), std::invalid_argument);
  EXPECT_THROW(parse_record("x,1,sphere,2,0.1,16,0.5,10,1"), std::invalid_argument);
  ResultRecord other = r;
  other.wall_ms = 99.0;
  EXPECT_TRUE(other.same_outcome(r));
  other.loss += 1e-12;
  EXPECT_FALSE(other.same_outcome(r));
}

TEST(Seeds, CellSeedsAreDistinct) {
  std::set<std::uint64_t> seeds;
  for (int rep = 0; rep < 10; ++rep) {
    for (ManifoldKind kind : kAllManifoldKinds) {
      for (int d = 1; d <= 10; ++d) seeds.insert(cell_seed(replicate_seed(5, rep), kind, d));
    }
  }
  EXPECT_EQ(seeds.size(), 500u);
}

TEST(GenerateTarget, MatchesDatasetKind) {
  DatasetDescriptor ds;
  ds.kind = DatasetKind::BarabasiAlbert;
  ds.n = 20;
  ds.m = 2;
  ds.loss = LossKind::KL;
  ds.steps = 5;
  const EmbeddingTarget t = generate_target(ds, 11);
  ASSERT_TRUE(std::holds_alternative<SimilarityMatrix>(t));
  EXPECT_EQ(std::get<SimilarityMatrix>(t).size(), 20u);
  ds.kind = DatasetKind::RandomPoints;
  ds.loss = LossKind::Stress;
  EXPECT_TRUE(std::holds_alternative<DistanceMatrix>(generate_target(ds, 11)));
}

TEST(RunSuite, SingleCellGivesOneRecord) {
  std::istringstream in("dataset = er\nn = 8\np = 0.6\nbase_seed = 2\nkinds = euclidean\ndims = 2\n"
                        "repetitions = 1\ntrials = 1\nmax_epochs = 20\n");
  const SuiteOutcome out = run_suite(parse_experiment_spec(in));
  ASSERT_EQ(out.records.size(), 1u);
  EXPECT_TRUE(out.failures.empty());
  const ResultRecord& r = out.records[0];
  EXPECT_EQ(r.dataset_id, "er-n8-p0.6-stress");
  EXPECT_EQ(r.seed, replicate_seed(2, 0));
  EXPECT_EQ(r.kind, ManifoldKind::Euclidean);
  EXPECT_EQ(r.batch, 8);
  EXPECT_GE(r.loss, 0.0);
  EXPECT_TRUE(std::isfinite(r.loss));
}

TEST(RunSuite, FullGridCardinality) {
  std::istringstream in("dataset = er\nn = 50\np = 0.5\nbase_seed = 1\ndims = 2-10\n");
  const ExperimentSpec spec = parse_experiment_spec(in);
  EXPECT_EQ(static_cast<std::size_t>(spec.repetitions) * spec.kinds.size() * spec.dims.size(), 450u);
}

TEST(RunSuite, DeterministicAcrossWorkerCounts) {
  const ExperimentSpec spec = tiny_spec();
  const SuiteOutcome serial = run_suite(spec, {1, std::nullopt, nullptr});
  const SuiteOutcome parallel = run_suite(spec, {4, std::nullopt, nullptr});
  ASSERT_EQ(serial.records.size(), 8u);
  ASSERT_EQ(parallel.records.size(), 8u);
  for (std::size_t k = 0; k < 8; ++k) EXPECT_TRUE(serial.records[k].same_outcome(parallel.records[k])) << k;
}

TEST(RunSuite, ResumesFromCsv) {
  TempDir dir;
  const fs::path csv = dir.path() / "results.csv";
  ExperimentSpec partial = tiny_spec();
  partial.dims = {2};
  const SuiteOutcome first = run_suite(partial, {1, csv, nullptr});
  ASSERT_EQ(first.records.size(), 4u);
  EXPECT_EQ(first.resumed, 0);

  std::ostringstream log;
  const SuiteOutcome second = run_suite(tiny_spec(), {2, csv, &log});
  EXPECT_EQ(second.resumed, 4);
  ASSERT_EQ(second.records.size(), 8u);
  const auto on_disk = read_results_csv(csv);
  EXPECT_EQ(on_disk.size(), 8u);

  const SuiteOutcome fresh = run_suite(tiny_spec());
  for (std::size_t k = 0; k < 8; ++k) EXPECT_TRUE(second.records[k].same_outcome(fresh.records[k])) << k;

  const SuiteOutcome third = run_suite(tiny_spec(), {1, csv, nullptr});
  EXPECT_EQ(third.resumed, 8);
  EXPECT_EQ(read_results_csv(csv).size(), 8u);

  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, kResultsHeader);
}

TEST(RunSuite, FailuresAreReportedPerRecord) {
  // With init_scale 1000 every KL similarity underflows on the first evaluation.
  std::istringstream in("dataset = ba\nn = 12\nm = 2\nloss = kl\nsteps = 3\nbase_seed = 4\n"
                        "kinds = euclidean\ndims = 2\nrepetitions = 2\ntrials = 2\nmax_epochs = 10\n"
                        "init_scale = 1000\n");
  std::ostringstream log;
  const SuiteOutcome out = run_suite(parse_experiment_spec(in), {1, std::nullopt, &log});
  EXPECT_TRUE(out.records.empty());
  ASSERT_EQ(out.failures.size(), 2u);
  EXPECT_NE(out.failures[0].message.find("diverged"), std::string::npos);
  EXPECT_NE(log.str().find("failed"), std::string::npos);
}

TEST(Summarize, Statistics) {
  ResultRecord a{"x", 1, ManifoldKind::L1, 2, 0.1, 16, 1.0, 10, 0.0};
  ResultRecord b = a;
  b.seed = 2;
  b.loss = 3.0;
  ResultRecord c = a;
  c.d = 3;
  c.loss = 5.0;
  const auto rows = summarize({a, b, c});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].d, 2);
  EXPECT_DOUBLE_EQ(rows[0].mean_loss, 2.0);
  EXPECT_DOUBLE_EQ(rows[0].std_loss, 1.0);
  EXPECT_EQ(rows[0].count, 2);
  EXPECT_EQ(rows[1].std_loss, 0.0);
  EXPECT_EQ(rows[1].count, 1);
  EXPECT_THROW(summarize({}), std::invalid_argument);

  std::ostringstream out;
  write_summary_csv(out, rows);
  EXPECT_EQ(out.str(), "kind,d,mean_loss,std_loss,count\nl1,2,2,1,2\nl1,3,5,0,1\n");
}

TEST(Summarize, CountsEqualRepetitions) {
  const SuiteOutcome out = run_suite(tiny_spec());
  for (const SummaryRow& row : summarize(out.records)) EXPECT_EQ(row.count, 2);
}
