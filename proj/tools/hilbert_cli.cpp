// hilbert_cli: dataset generation, distance matrices, embeddings, the
// benchmark grid and simplex renderings.
//
// Exit codes: 0 success, 2 usage, 3 I/O, 4 data, 5 total failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hilbert/bench.hpp"
#include "hilbert/embed.hpp"
#include "hilbert/errors.hpp"
#include "hilbert/geometry.hpp"
#include "hilbert/graphs.hpp"
#include "hilbert/matrix_io.hpp"
#include "hilbert/random.hpp"
#include "hilbert/raster.hpp"

namespace {

using namespace hilbert;
using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitData = 4;
constexpr int kExitFailure = 5;

/// Usage problem detected after parsing.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string format_number(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

std::ofstream open_output(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

SimplexPoint parse_simplex_point(const std::string& text) {
  std::vector<double> coords;
  std::string normalized = text;
  for (char& c : normalized) {
    if (c == ',' || c == '\t') c = ' ';
  }
  std::istringstream in(normalized);
  double x;
  while (in >> x) coords.push_back(x);
  if (!in.eof()) throw std::invalid_argument("cannot parse point '" + text + "'");
  return SimplexPoint(std::move(coords));
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  std::string kind;
  std::size_t n = 0;
  double p = 0.5;
  std::size_t m = 2;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenArgs& a) {
  std::ostringstream id;
  json summary;
  std::ostringstream body;
  if (a.kind == "er" || a.kind == "ba") {
    const Graph g = a.kind == "er" ? gen_erdos_renyi(a.n, a.p, a.seed) : gen_barabasi_albert(a.n, a.m, a.seed);
    if (a.kind == "er") {
      id << "er-n" << a.n << "-p" << format_number(a.p) << "-seed" << a.seed;
    } else {
      id << "ba-n" << a.n << "-m" << a.m << "-seed" << a.seed;
    }
    write_edge_list(body, g);
    summary = {{"dataset_id", id.str()}, {"nodes", g.node_count()}, {"edges", g.edge_count()}};
  } else if (a.kind == "points") {
    const DistanceMatrix D = random_points_distance_matrix(a.n, a.seed);
    id << "points-n" << a.n << "-seed" << a.seed;
    write_matrix_csv(body, D.values());
    summary = {{"dataset_id", id.str()}, {"points", a.n}};
  } else {
    throw UsageError("gen: kind must be er, ba or points");
  }
  if (a.out.empty()) {
    std::cout << body.str();
    std::cerr << summary.dump() << '\n';
  } else {
    auto out = open_output(a.out);
    out << body.str();
    if (!out) throw IoError("failed writing " + a.out);
    std::cout << summary.dump() << '\n';
  }
  return kExitOk;
}

// ---- dist ------------------------------------------------------------------

struct DistArgs {
  std::string mode;
  std::string graph;
  std::string matrix;
  int steps = 5;
  std::string out;
};

int run_dist(const DistArgs& a) {
  if (a.graph.empty() == a.matrix.empty()) throw UsageError("dist: give exactly one of --graph or --matrix");
  const Graph g = a.graph.empty() ? graph_from_adjacency(load_matrix_csv(a.matrix)) : load_edge_list(a.graph);
  Matrix result;
  if (a.mode == "apsp") {
    result = all_pairs_shortest_paths(g).values();
  } else if (a.mode == "rw") {
    if (a.steps < 1) throw UsageError("dist rw: --steps must be >= 1");
    result = random_walk_similarity(g, a.steps).values();
  } else {
    throw UsageError("dist: mode must be apsp or rw");
  }
  json summary = {{"mode", a.mode}, {"nodes", g.node_count()}};
  if (a.mode == "rw") summary["steps"] = a.steps;
  if (a.out.empty()) {
    write_matrix_csv(std::cout, result);
    std::cerr << summary.dump() << '\n';
  } else {
    auto out = open_output(a.out);
    write_matrix_csv(out, result);
    if (!out) throw IoError("failed writing " + a.out);
    std::cout << summary.dump() << '\n';
  }
  return kExitOk;
}

// ---- embed -----------------------------------------------------------------

struct EmbedArgs {
  std::string target;
  std::string as;
  std::string kind;
  int d = 2;
  int trials = 30;
  std::uint64_t seed = 0;
  std::string out;
  std::optional<double> lr;
  std::optional<int> batch;
  int max_epochs = 3000;
  int patience = 100;
  double init_scale = 1.0;
};

EmbeddingTarget load_target(const std::string& path, const std::string& as) {
  Matrix m = load_matrix_csv(path);
  if (as == "dist") return DistanceMatrix(std::move(m));
  if (as == "sim") return SimilarityMatrix(std::move(m));
  if (!as.empty()) throw UsageError("embed: --as must be dist or sim");

  std::optional<EmbeddingTarget> as_dist, as_sim;
  try {
    as_dist.emplace(DistanceMatrix(m));
  } catch (const std::invalid_argument&) {
  }
  try {
    as_sim.emplace(SimilarityMatrix(m));
  } catch (const std::invalid_argument&) {
  }
  if (as_dist && as_sim) {
    throw UsageError("embed: " + path +
                     " is both a valid distance and similarity matrix; pass --as dist or --as sim");
  }
  if (as_dist) return std::move(*as_dist);
  if (as_sim) return std::move(*as_sim);
  throw DataError("embed: " + path +
                  " is neither a distance matrix (symmetric, zero diagonal) nor a row-stochastic similarity matrix");
}

int run_embed(const EmbedArgs& a) {
  const auto kind = parse_manifold_kind(a.kind);
  if (!kind) throw UsageError("embed: unknown --kind '" + a.kind + "'");
  const EmbeddingTarget target = load_target(a.target, a.as);
  const int n = static_cast<int>(std::visit([](const auto& t) { return t.size(); }, target));

  EmbeddingConfig config;
  config.kind = *kind;
  config.d = a.d;
  config.n = n;
  config.max_epochs = a.max_epochs;
  config.patience_epochs = a.patience;
  config.init_scale = a.init_scale;

  EmbeddingResult result;
  int diverged = 0;
  if (a.lr) {
    config.learning_rate = *a.lr;
    config.batch_size = a.batch.value_or(std::min(16, n));
    config.seed = a.seed;
    result = sgd_embed(config, target);
  } else {
    if (a.batch) throw UsageError("embed: --batch requires --lr");
    SearchResult found = hyperparameter_search(config, target, a.trials, a.seed);
    config = found.config;
    result = std::move(found.result);
    diverged = found.diverged_trials;
  }
  if (!a.out.empty()) {
    auto out = open_output(a.out);
    write_matrix_csv(out, result.Y);
    if (!out) throw IoError("failed writing " + a.out);
  }
  const bool stress = std::holds_alternative<DistanceMatrix>(target);
  json summary = {{"loss_type", stress ? "stress" : "kl"},
                  {"final_loss", result.final_loss},
                  {"kind", std::string(to_string(config.kind))},
                  {"d", config.d},
                  {"n", config.n},
                  {"learning_rate", config.learning_rate},
                  {"batch_size", config.batch_size},
                  {"momentum", config.momentum},
                  {"epochs", result.epochs_run},
                  {"seed", a.seed},
                  {"diverged_trials", diverged}};
  std::cout << summary.dump() << '\n';
  return kExitOk;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
  std::string spec;
  int workers = 1;
  std::string out;
};

int run_bench(const BenchArgs& a) {
  if (a.workers < 1) throw UsageError("bench: --workers must be >= 1");
  const ExperimentSpec spec = load_experiment_spec(a.spec);
  std::error_code ec;
  std::filesystem::create_directories(a.out, ec);
  if (ec) throw IoError("cannot create " + a.out + ": " + ec.message());
  const std::filesystem::path dir(a.out);

  SuiteOptions options;
  options.workers = a.workers;
  options.results_csv = dir / "results.csv";
  options.log = &std::cerr;
  const SuiteOutcome outcome = run_suite(spec, options);

  if (!outcome.records.empty()) {
    auto out = open_output((dir / "summary.csv").string());
    write_summary_csv(out, summarize(outcome.records));
  }
  json summary = {{"dataset_id", spec.dataset.id()},
                  {"records", outcome.records.size()},
                  {"resumed", outcome.resumed},
                  {"failed", outcome.failures.size()},
                  {"results", options.results_csv->string()}};
  std::cout << summary.dump() << '\n';
  return outcome.records.empty() ? kExitFailure : kExitOk;
}

// ---- render ----------------------------------------------------------------

struct RenderArgs {
  std::string what;
  std::string dist;
  std::string center;
  std::string sites;
  int random_sites = 0;
  std::optional<std::uint64_t> seed;
  int res = 256;
  double step = 0.25;
  std::string out;
};

std::vector<SimplexPoint> load_sites(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<SimplexPoint> sites;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    sites.push_back(parse_simplex_point(line));
  }
  return sites;
}

std::vector<SimplexPoint> random_sites(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SimplexPoint> sites;
  for (int i = 0; i < count; ++i) {
    // Flat Dirichlet, kept away from the boundary.
    std::vector<double> w(3);
    for (double& x : w) x = 0.05 - std::log(rng.uniform_open01());
    sites.push_back(SimplexPoint::normalized(std::move(w)));
  }
  return sites;
}

int run_render(const RenderArgs& a) {
  if (a.out.empty()) throw UsageError("render: --out is required");
  if (a.what == "balls") {
    FieldDistance distance;
    if (a.dist == "hilbert") distance = FieldDistance::Hilbert;
    else if (a.dist == "funk") distance = FieldDistance::FunkForward;
    else if (a.dist == "rfunk") distance = FieldDistance::FunkReverse;
    else if (a.dist == "aitchison") distance = FieldDistance::Aitchison;
    else throw UsageError("render balls: --dist must be hilbert, funk, rfunk or aitchison");
    if (a.center.empty()) throw UsageError("render balls: --center is required");
    const SimplexPoint center = parse_simplex_point(a.center);
    const ScalarField field = render_distance_field(distance, center, a.res);
    {
      auto out = open_output(a.out, std::ios::out | std::ios::binary);
      write_pgm(out, field);
      if (!out) throw IoError("failed writing " + a.out);
    }
    const std::vector<double> levels = contour_levels(field, a.step);
    {
      auto out = open_output(a.out + ".levels");
      for (double level : levels) out << format_number(level) << '\n';
    }
    json summary = {{"image", a.out}, {"levels", a.out + ".levels"}, {"resolution", a.res},
                    {"max_distance", field.max_value}, {"level_count", levels.size()}};
    std::cout << summary.dump() << '\n';
    return kExitOk;
  }
  if (a.what == "voronoi") {
    VoronoiDistance distance;
    if (a.dist == "hilbert") distance = VoronoiDistance::Hilbert;
    else if (a.dist == "aitchison") distance = VoronoiDistance::Aitchison;
    else if (a.dist == "varlog") distance = VoronoiDistance::VariationNormOnLogRep;
    else throw UsageError("render voronoi: --dist must be hilbert, aitchison or varlog");
    std::vector<SimplexPoint> sites;
    if (!a.sites.empty() == (a.random_sites > 0)) {
      throw UsageError("render voronoi: give exactly one of --sites or --random");
    }
    if (!a.sites.empty()) {
      sites = load_sites(a.sites);
    } else {
      if (!a.seed) throw UsageError("render voronoi: --random requires --seed");
      sites = random_sites(a.random_sites, *a.seed);
    }
    const LabelRaster raster = render_voronoi(sites, distance, a.res);
    auto out = open_output(a.out, std::ios::out | std::ios::binary);
    write_ppm(out, raster);
    if (!out) throw IoError("failed writing " + a.out);
    json summary = {{"image", a.out}, {"resolution", a.res}, {"sites", sites.size()}};
    std::cout << summary.dump() << '\n';
    return kExitOk;
  }
  throw UsageError("render: expected balls or voronoi");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hilbert simplex geometry: distances, graph embeddings and benchmarks"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a dataset (er | ba graph edge list, points distance CSV)");
  gen_cmd->add_option("kind", gen.kind, "er, ba or points")->required()->check(CLI::IsMember({"er", "ba", "points"}));
  gen_cmd->add_option("--n", gen.n, "Number of nodes or points")->required();
  gen_cmd->add_option("--p", gen.p, "Edge probability (er)");
  gen_cmd->add_option("--m", gen.m, "Edges per new node (ba)");
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->required();
  gen_cmd->add_option("--out", gen.out, "Output file (default: stdout)");

  DistArgs dist;
  auto* dist_cmd = app.add_subcommand("dist", "Shortest-path distances or random-walk similarities of a graph");
  dist_cmd->add_option("mode", dist.mode, "apsp or rw")->required()->check(CLI::IsMember({"apsp", "rw"}));
  dist_cmd->add_option("--graph", dist.graph, "Edge list file");
  dist_cmd->add_option("--matrix", dist.matrix, "Adjacency matrix CSV");
  dist_cmd->add_option("--steps", dist.steps, "Random-walk length (rw)");
  dist_cmd->add_option("--out", dist.out, "Output CSV (default: stdout)");

  EmbedArgs embed;
  auto* embed_cmd = app.add_subcommand("embed", "Embed a distance or similarity matrix");
  embed_cmd->add_option("--target", embed.target, "Matrix CSV")->required();
  embed_cmd->add_option("--as", embed.as, "Force matrix type: dist or sim");
  embed_cmd->add_option("--kind", embed.kind, "euclidean, l1, hyperboloid, hilbert or funk")->required();
  embed_cmd->add_option("--d", embed.d, "Dimensionality")->required();
  embed_cmd->add_option("--trials", embed.trials, "Random-search trials");
  embed_cmd->add_option("--seed", embed.seed, "Random seed")->required();
  embed_cmd->add_option("--out", embed.out, "Coordinates CSV");
  embed_cmd->add_option("--lr", embed.lr, "Fixed learning rate (skips the search)");
  embed_cmd->add_option("--batch", embed.batch, "Fixed batch size (with --lr)");
  embed_cmd->add_option("--max-epochs", embed.max_epochs, "Epoch cap");
  embed_cmd->add_option("--patience", embed.patience, "Early-stopping patience in epochs");
  embed_cmd->add_option("--init-scale", embed.init_scale, "Std. dev. of initial coordinates");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run an experiment grid");
  bench_cmd->add_option("--spec", bench.spec, "Experiment spec file")->required();
  bench_cmd->add_option("--workers", bench.workers, "Parallel workers");
  bench_cmd->add_option("--out", bench.out, "Output directory")->required();

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Render simplex balls (PGM) or Voronoi diagrams (PPM)");
  render_cmd->add_option("what", render.what, "balls or voronoi")->required()->check(CLI::IsMember({"balls", "voronoi"}));
  render_cmd->add_option("--dist", render.dist, "Distance")->required();
  render_cmd->add_option("--center", render.center, "Ball center, e.g. 0.4,0.3,0.3");
  render_cmd->add_option("--sites", render.sites, "Voronoi sites file, one point per line");
  render_cmd->add_option("--random", render.random_sites, "Number of random Voronoi sites");
  render_cmd->add_option("--seed", render.seed, "Seed for --random");
  render_cmd->add_option("--res", render.res, "Resolution in pixels");
  render_cmd->add_option("--step", render.step, "Contour radius step");
  render_cmd->add_option("--out", render.out, "Output image");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*dist_cmd) return run_dist(dist);
    if (*embed_cmd) return run_embed(embed);
    if (*bench_cmd) return run_bench(bench);
    if (*render_cmd) return run_render(render);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const DivergenceError& e) {
    std::cerr << "failed: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
