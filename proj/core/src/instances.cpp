#include "lpreg/instances.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

namespace lpreg {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  // modulo bias is irrelevant at benchmark scales
  return next_u64() % n;
}

GeneralInstance gen_random_matrix(const RandomMatrixSpec& spec, double p) {
  if (spec.rows < 1 || spec.cols < 1)
    throw SolverError("gen_random_matrix: need rows, cols >= 1");
  Rng rng(spec.seed);
  Matrix N(spec.rows, spec.cols);
  for (Index i = 0; i < spec.rows; ++i)
    for (Index j = 0; j < spec.cols; ++j) N(i, j) = rng.uniform();
  Vector v(spec.rows);
  for (Index i = 0; i < spec.rows; ++i) v[i] = rng.uniform();
  return GeneralInstance::unconstrained(std::move(N), std::move(v), p);
}

namespace {

bool connected(Index n, const std::vector<std::pair<Index, Index>>& edges) {
  std::vector<Index> parent(n);
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& [u, v] : edges) {
    const Index ru = find(u), rv = find(v);
    if (ru != rv) parent[ru] = rv;
  }
  const Index root = find(0);
  for (Index i = 1; i < n; ++i)
    if (find(i) != root) return false;
  return true;
}

}  // namespace

GeneralInstance gen_random_graph(const RandomGraphSpec& spec) {
  if (spec.n_labeled >= spec.n_nodes)
    throw SolverError("gen_random_graph: n_labeled must be < n_nodes");
  if (spec.k_neighbors >= spec.n_nodes)
    throw SolverError("gen_random_graph: k_neighbors must be < n_nodes");
  if (!(spec.p >= 1.0)) throw SolverError("gen_random_graph: need p >= 1");

  const Index n = spec.n_nodes, dim = spec.ambient_dim, k = spec.k_neighbors;
  Rng rng(spec.seed);

  for (int attempt = 0; attempt < 10; ++attempt) {
    Matrix pts(n, dim);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < dim; ++j) pts(i, j) = rng.uniform();

    // directed k-NN, then symmetrize to an undirected edge set
    std::set<std::pair<Index, Index>> edge_set;
    double sq_dist_sum = 0.0;
    long sq_dist_count = 0;
    std::vector<std::pair<double, Index>> dist(n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j)
        dist[j] = {(pts.row(i) - pts.row(j)).squaredNorm(), j};
      dist[i].first = std::numeric_limits<double>::infinity();
      std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
      for (Index t = 0; t < k; ++t) {
        const Index j = dist[t].second;
        sq_dist_sum += dist[t].first;
        ++sq_dist_count;
        edge_set.insert({std::min(i, j), std::max(i, j)});
      }
    }
    const double sigma2 = sq_dist_sum / double(sq_dist_count);
    std::vector<std::pair<Index, Index>> edges(edge_set.begin(),
                                               edge_set.end());
    if (!connected(n, edges)) continue;

    const Index E = static_cast<Index>(edges.size());
    // signed incidence: edge (i, j), i < j, gets +1 at i and -1 at j
    Matrix WB(E, n);
    WB.setZero();
    for (Index e = 0; e < E; ++e) {
      const auto& [i, j] = edges[e];
      const double d2 = (pts.row(i) - pts.row(j)).squaredNorm();
      const double w = std::exp(-d2 / sigma2);
      const double wp = std::pow(w, 1.0 / spec.p);
      WB(e, i) = wp;
      WB(e, j) = -wp;
    }

    Vector labels(spec.n_labeled);
    for (Index i = 0; i < spec.n_labeled; ++i) labels[i] = rng.uniform();

    // last n_labeled node columns are the labeled ones
    const Index nu = n - spec.n_labeled;
    GeneralInstance inst;
    inst.N = WB.leftCols(nu);
    inst.v = -(WB.rightCols(spec.n_labeled) * labels);
    inst.A.resize(0, nu);
    inst.b.resize(0);
    inst.p = spec.p;
    return inst;
  }
  throw GraphDisconnected("graph stayed disconnected after 10 attempts");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  try {
    size_t pos = 0;
    out = std::stod(s, &pos);
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    return pos == s.size() && std::isfinite(out);
  } catch (...) {
    return false;
  }
}

}  // namespace

GeneralInstance load_csv(const std::string& path,
                         const std::string& target_column, double p,
                         CsvReport* report) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": missing header row");
  const std::vector<std::string> header = split_csv_line(line);
  Index target = -1;
  for (size_t j = 0; j < header.size(); ++j)
    if (header[j] == target_column) target = static_cast<Index>(j);
  if (target < 0)
    throw ParseError(path + ": target column '" + target_column +
                     "' not found in header");

  const Index ncols = static_cast<Index>(header.size());
  std::vector<std::vector<double>> rows;
  Index dropped = 0;
  Index lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (static_cast<Index>(cells.size()) != ncols)
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected " + std::to_string(ncols) + " cells, got " +
                       std::to_string(cells.size()));
    std::vector<double> vals(ncols);
    bool ok = true;
    for (Index j = 0; j < ncols; ++j)
      if (!parse_double(cells[j], vals[j])) {
        ok = false;
        break;
      }
    if (ok)
      rows.push_back(std::move(vals));
    else
      ++dropped;
  }
  if (rows.empty()) throw EmptyAfterCleaning(path + ": no numeric rows left");
  if (report) {
    report->rows_kept = static_cast<Index>(rows.size());
    report->rows_dropped = dropped;
  }

  const Index m = static_cast<Index>(rows.size());
  Matrix N(m, ncols);  // features + intercept
  Vector v(m);
  for (Index i = 0; i < m; ++i) {
    Index c = 0;
    for (Index j = 0; j < ncols; ++j) {
      if (j == target) continue;
      N(i, c++) = rows[i][j];
    }
    N(i, ncols - 1) = 1.0;
    v[i] = rows[i][target];
  }
  return GeneralInstance::unconstrained(std::move(N), std::move(v), p);
}

}  // namespace lpreg
