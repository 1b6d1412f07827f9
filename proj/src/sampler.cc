#include "subred/sampler.h"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace subred {

GraphSample::GraphSample(int n) : n_(n) {
  if (n < 0) throw std::invalid_argument("graph: negative vertex count");
  bits_.assign(static_cast<std::size_t>(pair_count()), 0);
}

std::int64_t GraphSample::pair_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  return static_cast<std::int64_t>(i) * (2 * n_ - i - 1) / 2 + (j - i - 1);
}

bool GraphSample::edge(int i, int j) const {
  if (i == j) return false;
  return bits_[pair_index(i, j)] != 0;
}

void GraphSample::set_edge(int i, int j, bool present) {
  if (i == j) throw std::invalid_argument("graph: self-loops are not allowed");
  bits_[pair_index(i, j)] = present ? 1 : 0;
}

std::int64_t GraphSample::edge_count() const {
  return std::count(bits_.begin(), bits_.end(), std::uint8_t{1});
}

SampleSpace space_of(const PairGrid& grid) {
  return grid.family() == Family::kGaussian ? SampleSpace::kReal : SampleSpace::kBit;
}

GraphSample sample_er(int n, double q, Rng& rng) {
  if (n < 1 || !(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("sample_er: need n >= 1, q in [0,1]");
  GraphSample g(n);
  for (auto& b : g.bits()) b = bernoulli(rng, q) ? 1 : 0;
  return g;
}

GraphSample sample_pds(int n, int k, double p, double q, Rng& rng) {
  if (!(1 <= k && k <= n)) throw std::invalid_argument("sample_pds: need 1 <= k <= n");
  if (!(0.0 <= q && q < p && p <= 1.0)) throw std::invalid_argument("sample_pds: need 0 <= q < p <= 1");
  std::vector<int> s = uniform_subset(rng, n, k);
  std::sort(s.begin(), s.end());
  std::vector<char> in(n, 0);
  for (int v : s) in[v] = 1;
  GraphSample g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.set_edge(i, j, bernoulli(rng, in[i] && in[j] ? p : q));
  g.planted = std::move(s);
  return g;
}

namespace {

MatrixSample fill_matrix(int d, const std::vector<char>& rows, const std::vector<char>& cols,
                         const PairGrid& grid, Rng& rng) {
  MatrixSample m(d, space_of(grid));
  PairDrawer draw(rng);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const auto& pair = grid.at(i, j);
      m.at(i, j) = rows[i] && cols[j] ? draw.alt(pair) : draw.null(pair);
    }
  }
  return m;
}

std::vector<char> indicator(int d, const std::vector<int>& s) {
  std::vector<char> in(d, 0);
  for (int v : s) in[v] = 1;
  return in;
}

}  // namespace

MatrixSample sample_submatrix(int d, std::optional<int> k, const PairGrid& grid, Rng& rng) {
  if (grid.dim() != d) throw std::invalid_argument("sample_submatrix: grid dimension mismatch");
  if (k && !(0 <= *k && *k <= d)) throw std::invalid_argument("sample_submatrix: need 0 <= k <= d");
  std::vector<int> s;
  if (k) {
    s = uniform_subset(rng, d, *k);
    std::sort(s.begin(), s.end());
  }
  const auto in = indicator(d, s);
  MatrixSample m = fill_matrix(d, in, in, grid, rng);
  if (k) m.planted = std::move(s);
  return m;
}

MatrixSample sample_submatrix_asd(int d, int k, const PairGrid& grid, Rng& rng) {
  if (grid.dim() != d) throw std::invalid_argument("sample_submatrix_asd: grid dimension mismatch");
  if (!(0 <= k && k <= d)) throw std::invalid_argument("sample_submatrix_asd: need 0 <= k <= d");
  std::vector<int> rows = uniform_subset(rng, d, k), cols = uniform_subset(rng, d, k);
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());
  MatrixSample m = fill_matrix(d, indicator(d, rows), indicator(d, cols), grid, rng);
  m.planted = std::move(rows);
  m.planted_cols = std::move(cols);
  return m;
}

std::vector<double> sample_planted_vector(int N, const ComputablePair& pair,
                                          const std::vector<int>& S, Rng& rng) {
  const auto in = indicator(N, S);
  std::vector<double> v(N);
  PairDrawer draw(rng);
  for (int i = 0; i < N; ++i) v[i] = in[i] ? draw.alt(pair) : draw.null(pair);
  return v;
}

namespace {

void write_header(std::ostream& out, const char* kind, int d, SampleSpace space) {
  out << "SUBRED v1 kind=" << kind << " d=" << d
      << " space=" << (space == SampleSpace::kBit ? "bit" : "real") << '\n';
}

void write_bits(std::ostream& out, std::int64_t count, const auto& bit_at) {
  std::uint8_t byte = 0;
  int used = 0;
  for (std::int64_t i = 0; i < count; ++i) {
    byte = static_cast<std::uint8_t>(byte | (bit_at(i) ? 0x80 >> used : 0));
    if (++used == 8) {
      out.put(static_cast<char>(byte));
      byte = 0;
      used = 0;
    }
  }
  if (used > 0) out.put(static_cast<char>(byte));
}

struct Header {
  std::string kind;
  int d = 0;
  SampleSpace space = SampleSpace::kReal;
};

Header read_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("dump: missing header");
  std::istringstream ss(line);
  std::string magic, version, kind, dim, space;
  ss >> magic >> version >> kind >> dim >> space;
  if (magic != "SUBRED" || version != "v1") throw std::runtime_error("dump: bad magic or version");
  auto value = [](const std::string& tok, const std::string& key) {
    if (tok.rfind(key + "=", 0) != 0) throw std::runtime_error("dump: expected " + key + "=");
    return tok.substr(key.size() + 1);
  };
  Header h;
  h.kind = value(kind, "kind");
  h.d = std::stoi(value(dim, "d"));
  const std::string sp = value(space, "space");
  if (sp == "bit") h.space = SampleSpace::kBit;
  else if (sp == "real") h.space = SampleSpace::kReal;
  else throw std::runtime_error("dump: unknown space " + sp);
  if (h.d < 0) throw std::runtime_error("dump: negative dimension");
  return h;
}

std::vector<bool> read_bits(std::istream& in, std::int64_t count) {
  std::vector<bool> bits(count);
  const std::int64_t bytes = (count + 7) / 8;
  for (std::int64_t b = 0; b < bytes; ++b) {
    const int c = in.get();
    if (c == EOF) throw std::runtime_error("dump: truncated bit payload");
    for (int r = 0; r < 8 && b * 8 + r < count; ++r) bits[b * 8 + r] = (c >> (7 - r)) & 1;
  }
  return bits;
}

}  // namespace

void write_dump(std::ostream& out, const MatrixSample& m) {
  write_header(out, "matrix", m.d, m.space);
  if (m.space == SampleSpace::kBit) {
    write_bits(out, static_cast<std::int64_t>(m.data.size()),
               [&m](std::int64_t i) { return m.data[i] != 0.0; });
    return;
  }
  for (double x : m.data) {
    std::uint64_t u = std::bit_cast<std::uint64_t>(x);
    for (int b = 0; b < 8; ++b) out.put(static_cast<char>((u >> (8 * b)) & 0xff));
  }
}

void write_dump(std::ostream& out, const GraphSample& g) {
  write_header(out, "graph", g.n(), SampleSpace::kBit);
  const int n = g.n();
  write_bits(out, static_cast<std::int64_t>(n) * n,
             [&g, n](std::int64_t i) { return g.edge(static_cast<int>(i / n), static_cast<int>(i % n)); });
}

MatrixSample read_matrix_dump(std::istream& in) {
  const Header h = read_header(in);
  if (h.kind != "matrix") throw std::runtime_error("dump: expected kind=matrix");
  MatrixSample m(h.d, h.space);
  const std::int64_t count = static_cast<std::int64_t>(h.d) * h.d;
  if (h.space == SampleSpace::kBit) {
    const auto bits = read_bits(in, count);
    for (std::int64_t i = 0; i < count; ++i) m.data[i] = bits[i] ? 1.0 : 0.0;
    return m;
  }
  for (std::int64_t i = 0; i < count; ++i) {
    std::uint64_t u = 0;
    for (int b = 0; b < 8; ++b) {
      const int c = in.get();
      if (c == EOF) throw std::runtime_error("dump: truncated real payload");
      u |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * b);
    }
    m.data[i] = std::bit_cast<double>(u);
  }
  return m;
}

GraphSample read_graph_dump(std::istream& in) {
  const Header h = read_header(in);
  if (h.kind != "graph" || h.space != SampleSpace::kBit)
    throw std::runtime_error("dump: expected kind=graph space=bit");
  const int n = h.d;
  const auto bits = read_bits(in, static_cast<std::int64_t>(n) * n);
  GraphSample g(n);
  for (int i = 0; i < n; ++i) {
    if (bits[static_cast<std::size_t>(i) * n + i]) throw std::runtime_error("dump: graph has a self-loop");
    for (int j = i + 1; j < n; ++j) {
      const bool a = bits[static_cast<std::size_t>(i) * n + j];
      if (a != bits[static_cast<std::size_t>(j) * n + i])
        throw std::runtime_error("dump: graph adjacency is not symmetric");
      g.set_edge(i, j, a);
    }
  }
  return g;
}

namespace {

template <class T>
void save_any(const std::string& path, const T& value) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("dump: cannot write " + path);
  write_dump(out, value);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("dump: cannot read " + path);
  return in;
}

}  // namespace

void save_dump(const std::string& path, const MatrixSample& m) { save_any(path, m); }
void save_dump(const std::string& path, const GraphSample& g) { save_any(path, g); }

MatrixSample load_matrix_dump(const std::string& path) {
  auto in = open_in(path);
  return read_matrix_dump(in);
}

GraphSample load_graph_dump(const std::string& path) {
  auto in = open_in(path);
  return read_graph_dump(in);
}

}  // namespace subred
