#include "hilbert/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hilbert/errors.hpp"

namespace hilbert {
namespace {

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

double parse_double(std::string_view field, std::size_t line_no) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw std::invalid_argument("matrix CSV line " + std::to_string(line_no) + ": bad number '" +
                                std::string(field) + "'");
  }
  return value;
}

}  // namespace

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.node_count() << '\n';
  for (const auto& [a, b] : g.edges()) out << a << ' ' << b << '\n';
}

Graph read_edge_list(std::istream& in) {
  long long n = -1;
  if (!(in >> n) || n < 1) throw std::invalid_argument("edge list: first line must be the node count");
  Graph g(static_cast<std::size_t>(n));
  long long a, b;
  while (in >> a >> b) {
    if (a < 0 || b < 0 || a >= n || b >= n) throw std::invalid_argument("edge list: node index out of range");
    g.add_edge(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  }
  if (!in.eof()) throw std::invalid_argument("edge list: malformed edge line");
  return g;
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      const std::string_view field(line.data() + start,
                                   (comma == std::string::npos ? line.size() : comma) - start);
      row.push_back(parse_double(field, line_no));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument("matrix CSV line " + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("matrix CSV: no rows");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

Graph graph_from_adjacency(const Matrix& adjacency) {
  if (adjacency.rows() != adjacency.cols()) throw std::invalid_argument("adjacency matrix must be square");
  Graph g(static_cast<std::size_t>(adjacency.rows()));
  for (Eigen::Index i = 0; i < adjacency.rows(); ++i) {
    for (Eigen::Index j = 0; j < adjacency.cols(); ++j) {
      const double a = adjacency(i, j);
      if (a != 0.0 && a != 1.0) throw std::invalid_argument("adjacency matrix entries must be 0 or 1");
      if (a != adjacency(j, i)) throw std::invalid_argument("adjacency matrix must be symmetric");
      if (i == j && a != 0.0) throw std::invalid_argument("adjacency matrix must have a zero diagonal");
      if (i < j && a == 1.0) g.add_edge(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  return g;
}

void save_edge_list(const std::filesystem::path& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_edge_list(out, g);
  if (!out) throw IoError("failed writing " + path.string());
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_edge_list(in);
}

void save_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_matrix_csv(out, m);
  if (!out) throw IoError("failed writing " + path.string());
}

Matrix load_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_matrix_csv(in);
}

}  // namespace hilbert
