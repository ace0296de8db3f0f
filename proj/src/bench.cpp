#include "hilbert/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "hilbert/errors.hpp"
#include "hilbert/random.hpp"

namespace hilbert {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(const std::string& text, const std::string& what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("bad value for " + what + ": '" + text + "'");
  }
  return value;
}

std::string format_number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  for (const std::string& item : split(text, ',')) {
    const auto dash = item.find('-');
    if (dash != std::string::npos && dash > 0) {
      const int lo = parse_number<int>(trim(item.substr(0, dash)), "dims");
      const int hi = parse_number<int>(trim(item.substr(dash + 1)), "dims");
      if (hi < lo) throw std::invalid_argument("dims: empty range '" + item + "'");
      for (int d = lo; d <= hi; ++d) dims.push_back(d);
    } else {
      dims.push_back(parse_number<int>(item, "dims"));
    }
  }
  return dims;
}

using RecordKey = std::tuple<std::string, std::uint64_t, ManifoldKind, int>;

RecordKey key_of(const ResultRecord& r) { return {r.dataset_id, r.seed, r.kind, r.d}; }

}  // namespace

std::string DatasetDescriptor::id() const {
  std::ostringstream out;
  switch (kind) {
    case DatasetKind::ErdosRenyi: out << "er-n" << n << "-p" << format_number(p); break;
    case DatasetKind::BarabasiAlbert: out << "ba-n" << n << "-m" << m; break;
    case DatasetKind::RandomPoints: out << "points-n" << n; break;
  }
  if (loss == LossKind::Stress) {
    out << "-stress";
  } else {
    out << "-kl" << steps;
  }
  return out.str();
}

void ExperimentSpec::validate() const {
  if (repetitions < 1) throw std::invalid_argument("experiment spec: repetitions must be >= 1");
  if (trials < 1) throw std::invalid_argument("experiment spec: trials must be >= 1");
  if (kinds.empty()) throw std::invalid_argument("experiment spec: no manifold kinds");
  if (dims.empty()) throw std::invalid_argument("experiment spec: no dimensions");
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("experiment spec: dimensions must be >= 1");
  }
  if (dataset.n < 2) throw std::invalid_argument("experiment spec: n must be >= 2");
  if (dataset.kind == DatasetKind::ErdosRenyi && !(dataset.p > 0.0 && dataset.p <= 1.0)) {
    throw std::invalid_argument("experiment spec: p must be in (0, 1]");
  }
  if (dataset.kind == DatasetKind::BarabasiAlbert && (dataset.m < 1 || dataset.n <= dataset.m)) {
    throw std::invalid_argument("experiment spec: need n > m >= 1");
  }
  if (dataset.kind == DatasetKind::RandomPoints && dataset.loss == LossKind::KL) {
    throw std::invalid_argument("experiment spec: the kl loss needs a graph dataset");
  }
  if (dataset.loss == LossKind::KL && dataset.steps < 1) {
    throw std::invalid_argument("experiment spec: steps must be >= 1");
  }
  if (max_epochs < 0 || patience_epochs < 1 || !(init_scale > 0.0)) {
    throw std::invalid_argument("experiment spec: bad optimizer settings");
  }
}

ExperimentSpec parse_experiment_spec(std::istream& in) {
  ExperimentSpec spec;
  std::string line;
  int line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("experiment spec line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw std::invalid_argument("experiment spec: duplicate key " + key);

    if (key == "dataset") {
      if (value == "er") spec.dataset.kind = DatasetKind::ErdosRenyi;
      else if (value == "ba") spec.dataset.kind = DatasetKind::BarabasiAlbert;
      else if (value == "points") spec.dataset.kind = DatasetKind::RandomPoints;
      else throw std::invalid_argument("experiment spec: unknown dataset '" + value + "'");
    } else if (key == "n") {
      spec.dataset.n = parse_number<std::size_t>(value, key);
    } else if (key == "p") {
      spec.dataset.p = parse_number<double>(value, key);
    } else if (key == "m") {
      spec.dataset.m = parse_number<std::size_t>(value, key);
    } else if (key == "loss") {
      if (value == "stress") spec.dataset.loss = LossKind::Stress;
      else if (value == "kl") spec.dataset.loss = LossKind::KL;
      else throw std::invalid_argument("experiment spec: unknown loss '" + value + "'");
    } else if (key == "steps") {
      spec.dataset.steps = parse_number<int>(value, key);
    } else if (key == "base_seed") {
      spec.dataset.base_seed = parse_number<std::uint64_t>(value, key);
    } else if (key == "kinds") {
      for (const std::string& name : split(value, ',')) {
        const auto kind = parse_manifold_kind(name);
        if (!kind) throw std::invalid_argument("experiment spec: unknown manifold kind '" + name + "'");
        spec.kinds.push_back(*kind);
      }
    } else if (key == "dims") {
      spec.dims = parse_dims(value);
    } else if (key == "repetitions") {
      spec.repetitions = parse_number<int>(value, key);
    } else if (key == "trials") {
      spec.trials = parse_number<int>(value, key);
    } else if (key == "max_epochs") {
      spec.max_epochs = parse_number<int>(value, key);
    } else if (key == "patience") {
      spec.patience_epochs = parse_number<int>(value, key);
    } else if (key == "init_scale") {
      spec.init_scale = parse_number<double>(value, key);
    } else {
      throw std::invalid_argument("experiment spec: unknown key '" + key + "'");
    }
  }
  if (!seen.count("base_seed")) throw std::invalid_argument("experiment spec: base_seed is required");
  if (spec.kinds.empty()) spec.kinds.assign(kAllManifoldKinds.begin(), kAllManifoldKinds.end());
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_experiment_spec(in);
}

bool ResultRecord::same_outcome(const ResultRecord& o) const {
  return dataset_id == o.dataset_id && seed == o.seed && kind == o.kind && d == o.d && lr == o.lr &&
         batch == o.batch && loss == o.loss && epochs == o.epochs;
}

std::string format_record(const ResultRecord& r) {
  std::ostringstream out;
  out << r.dataset_id << ',' << r.seed << ',' << to_string(r.kind) << ',' << r.d << ','
      << format_number(r.lr) << ',' << r.batch << ',' << format_number(r.loss) << ',' << r.epochs
      << ',' << format_number(std::round(r.wall_ms * 1000.0) / 1000.0);
  return out.str();
}

ResultRecord parse_record(const std::string& line) {
  const auto fields = split(line, ',');
  if (fields.size() != 9) throw std::invalid_argument("results CSV: expected 9 fields in '" + line + "'");
  ResultRecord r;
  r.dataset_id = fields[0];
  r.seed = parse_number<std::uint64_t>(fields[1], "seed");
  const auto kind = parse_manifold_kind(fields[2]);
  if (!kind) throw std::invalid_argument("results CSV: unknown kind '" + fields[2] + "'");
  r.kind = *kind;
  r.d = parse_number<int>(fields[3], "d");
  r.lr = parse_number<double>(fields[4], "lr");
  r.batch = parse_number<int>(fields[5], "batch");
  r.loss = parse_number<double>(fields[6], "loss");
  r.epochs = parse_number<int>(fields[7], "epochs");
  r.wall_ms = parse_number<double>(fields[8], "wall_ms");
  return r;
}

std::vector<ResultRecord> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<ResultRecord> records;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (header) {
      header = false;
      if (trim(line) != kResultsHeader) throw std::invalid_argument("results CSV: unexpected header in " + path.string());
      continue;
    }
    records.push_back(parse_record(trim(line)));
  }
  return records;
}

std::uint64_t replicate_seed(std::uint64_t base_seed, int rep) {
  return derive_seed(base_seed, static_cast<std::uint64_t>(rep));
}

std::uint64_t cell_seed(std::uint64_t rep_seed, ManifoldKind kind, int d) {
  const auto kind_index = static_cast<std::uint64_t>(kind);
  return derive_seed(derive_seed(rep_seed, 1000 + kind_index), static_cast<std::uint64_t>(d));
}

EmbeddingTarget generate_target(const DatasetDescriptor& dataset, std::uint64_t seed) {
  if (dataset.kind == DatasetKind::RandomPoints) {
    if (dataset.loss != LossKind::Stress) throw std::invalid_argument("generate_target: points only support stress");
    return random_points_distance_matrix(dataset.n, seed);
  }
  const Graph g = dataset.kind == DatasetKind::ErdosRenyi ? gen_erdos_renyi(dataset.n, dataset.p, seed)
                                                          : gen_barabasi_albert(dataset.n, dataset.m, seed);
  if (dataset.loss == LossKind::Stress) return all_pairs_shortest_paths(g);
  return random_walk_similarity(g, dataset.steps);
}

SuiteOutcome run_suite(const ExperimentSpec& spec, const SuiteOptions& options) {
  spec.validate();
  if (options.workers < 1) throw std::invalid_argument("run_suite: workers must be >= 1");
  const std::string dataset_id = spec.dataset.id();

  struct Job {
    std::uint64_t seed;
    ManifoldKind kind;
    int d;
  };
  std::vector<Job> jobs;
  for (int rep = 0; rep < spec.repetitions; ++rep) {
    for (ManifoldKind kind : spec.kinds) {
      for (int d : spec.dims) jobs.push_back({replicate_seed(spec.dataset.base_seed, rep), kind, d});
    }
  }

  std::map<RecordKey, ResultRecord> done;
  std::ofstream csv;
  if (options.results_csv) {
    const bool exists = std::filesystem::exists(*options.results_csv);
    if (exists) {
      for (ResultRecord& r : read_results_csv(*options.results_csv)) done.emplace(key_of(r), std::move(r));
    }
    csv.open(*options.results_csv, std::ios::app);
    if (!csv) throw IoError("cannot open " + options.results_csv->string() + " for appending");
    if (!exists) csv << kResultsHeader << '\n' << std::flush;
  }

  std::vector<std::optional<ResultRecord>> slots(jobs.size());
  std::vector<std::optional<SuiteFailure>> failures(jobs.size());
  SuiteOutcome outcome;
  std::vector<std::size_t> pending;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const auto it = done.find({dataset_id, jobs[k].seed, jobs[k].kind, jobs[k].d});
    if (it != done.end()) {
      slots[k] = it->second;
      ++outcome.resumed;
    } else {
      pending.push_back(k);
    }
  }

  std::mutex writer;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= pending.size()) return;
      const std::size_t k = pending[slot];
      const Job& job = jobs[k];
      const auto start = std::chrono::steady_clock::now();
      try {
        const EmbeddingTarget target = generate_target(spec.dataset, job.seed);
        EmbeddingConfig base;
        base.kind = job.kind;
        base.d = job.d;
        base.n = static_cast<int>(spec.dataset.n);
        base.max_epochs = spec.max_epochs;
        base.patience_epochs = spec.patience_epochs;
        base.init_scale = spec.init_scale;
        const SearchResult found =
            hyperparameter_search(base, target, spec.trials, cell_seed(job.seed, job.kind, job.d));
        ResultRecord r;
        r.dataset_id = dataset_id;
        r.seed = job.seed;
        r.kind = job.kind;
        r.d = job.d;
        r.lr = found.config.learning_rate;
        r.batch = found.config.batch_size;
        r.loss = found.result.final_loss;
        r.epochs = found.result.epochs_run;
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        // Round-trip through the CSV text so fresh and resumed records compare equal.
        r = parse_record(format_record(r));
        std::lock_guard lock(writer);
        if (csv.is_open()) csv << format_record(r) << '\n' << std::flush;
        if (options.log) {
          *options.log << "done " << dataset_id << " seed=" << r.seed << " kind=" << to_string(r.kind)
                       << " d=" << r.d << " loss=" << format_number(r.loss) << '\n';
        }
        slots[k] = std::move(r);
      } catch (const std::exception& e) {
        std::lock_guard lock(writer);
        if (options.log) {
          *options.log << "failed " << dataset_id << " seed=" << job.seed << " kind=" << to_string(job.kind)
                       << " d=" << job.d << ": " << e.what() << '\n';
        }
        failures[k] = SuiteFailure{dataset_id, job.seed, job.kind, job.d, e.what()};
      }
    }
  };

  const int threads = std::min<int>(options.workers, static_cast<int>(std::max<std::size_t>(pending.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t k = 0; k < jobs.size(); ++k) {
    if (slots[k]) outcome.records.push_back(std::move(*slots[k]));
    if (failures[k]) outcome.failures.push_back(std::move(*failures[k]));
  }
  return outcome;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  std::map<std::pair<ManifoldKind, int>, std::vector<double>> groups;
  for (const ResultRecord& r : records) groups[{r.kind, r.d}].push_back(r.loss);
  std::vector<SummaryRow> rows;
  for (const auto& [key, losses] : groups) {
    const double count = static_cast<double>(losses.size());
    double mean = 0.0;
    for (double x : losses) mean += x;
    mean /= count;
    double var = 0.0;
    for (double x : losses) var += (x - mean) * (x - mean);
    var /= count;
    rows.push_back({key.first, key.second, mean, std::sqrt(var), static_cast<int>(losses.size())});
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "kind,d,mean_loss,std_loss,count\n";
  for (const SummaryRow& r : rows) {
    out << to_string(r.kind) << ',' << r.d << ',' << format_number(r.mean_loss) << ','
        << format_number(r.std_loss) << ',' << r.count << '\n';
  }
}

}  // namespace hilbert
