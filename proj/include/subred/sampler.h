#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "subred/pairs.h"
#include "subred/rng.h"

namespace subred {

/// Simple undirected graph on [n] stored as the upper triangle.
class GraphSample {
 public:
  explicit GraphSample(int n = 0);

  int n() const { return n_; }
  bool edge(int i, int j) const;
  void set_edge(int i, int j, bool present);
  std::int64_t edge_count() const;
  std::int64_t pair_count() const { return static_cast<std::int64_t>(n_) * (n_ - 1) / 2; }

  /// Index of the unordered pair {i, j}, i != j, in the upper-triangle layout.
  std::int64_t pair_index(int i, int j) const;
  std::vector<std::uint8_t>& bits() { return bits_; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  std::optional<std::vector<int>> planted;

 private:
  int n_;
  std::vector<std::uint8_t> bits_;
};

enum class SampleSpace { kBit, kReal };

/// d x d matrix of observations, row-major.
struct MatrixSample {
  int d = 0;
  SampleSpace space = SampleSpace::kReal;
  std::vector<double> data;
  std::optional<std::vector<int>> planted;       // row support (and columns for ssd)
  std::optional<std::vector<int>> planted_cols;  // column support when it differs (asd)

  MatrixSample() = default;
  MatrixSample(int dim, SampleSpace s) : d(dim), space(s), data(static_cast<std::size_t>(dim) * dim, 0.0) {}

  double& at(int i, int j) { return data[static_cast<std::size_t>(i) * d + j]; }
  double at(int i, int j) const { return data[static_cast<std::size_t>(i) * d + j]; }
};

SampleSpace space_of(const PairGrid& grid);

GraphSample sample_er(int n, double q, Rng& rng);

/// Planted dense subgraph: a uniform k-subset S whose internal edges are
/// Bern(p), all other edges Bern(q). p = 1 gives planted clique.
GraphSample sample_pds(int n, int k, double p, double q, Rng& rng);

/// Symmetric-index planted submatrix: entries (i, j) with i, j in a uniform
/// k-subset S follow P_ij, all others Q_ij. No k means the pure null.
MatrixSample sample_submatrix(int d, std::optional<int> k, const PairGrid& grid, Rng& rng);

/// Asymmetric variant with independent uniform row and column supports.
MatrixSample sample_submatrix_asd(int d, int k, const PairGrid& grid, Rng& rng);

/// Length-N vector with entries in S drawn from P and the rest from Q.
std::vector<double> sample_planted_vector(int N, const ComputablePair& pair,
                                          const std::vector<int>& S, Rng& rng);

/// Dump format: header line `SUBRED v1 kind=<graph|matrix> d=<int>
/// space=<bit|real>`, then the d x d entries row-major. Bits are packed
/// eight per byte, most significant bit first; reals are little-endian
/// IEEE-754 doubles. Graphs are written as their full adjacency matrix.
void write_dump(std::ostream& out, const MatrixSample& m);
void write_dump(std::ostream& out, const GraphSample& g);
MatrixSample read_matrix_dump(std::istream& in);
GraphSample read_graph_dump(std::istream& in);

void save_dump(const std::string& path, const MatrixSample& m);
void save_dump(const std::string& path, const GraphSample& g);
MatrixSample load_matrix_dump(const std::string& path);
GraphSample load_graph_dump(const std::string& path);

}  // namespace subred
