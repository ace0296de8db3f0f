#pragma once

// Plain-text formats.
//   edge list   first line "n", then one "i j" pair per line
//   matrix CSV  one full row per line, comma separated, shortest round-trip digits

#include <filesystem>
#include <iosfwd>

#include "hilbert/graphs.hpp"

namespace hilbert {

void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);

void write_matrix_csv(std::ostream& out, const Matrix& m);
Matrix read_matrix_csv(std::istream& in);

/// Symmetric 0/1 adjacency matrix (CSV) to a graph.
Graph graph_from_adjacency(const Matrix& adjacency);

// File variants throw IoError when the file cannot be opened or written.
void save_edge_list(const std::filesystem::path& path, const Graph& g);
Graph load_edge_list(const std::filesystem::path& path);
void save_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix_csv(const std::filesystem::path& path);

}  // namespace hilbert
