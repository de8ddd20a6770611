#pragma once

#include "lpreg/reductions.hpp"
#include "lpreg/types.hpp"

#include <cstdint>
#include <string>

namespace lpreg {

/// xoshiro256++ seeded through splitmix64. Fixed algorithm, fixed 53-bit
/// double conversion: streams are identical across platforms and sessions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform();
  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t s_[4];
};

struct RandomMatrixSpec {
  Index rows = 1;   // d
  Index cols = 1;   // n
  std::uint64_t seed = 0;
};

struct RandomGraphSpec {
  Index n_nodes = 100;
  Index ambient_dim = 10;
  Index k_neighbors = 10;
  Index n_labeled = 10;
  double p = 2.0;
  std::uint64_t seed = 0;
};

/// Dense instance min ||Ax - b||_p with i.i.d. Uniform[0,1] entries.
/// Deterministic per seed.
GeneralInstance gen_random_matrix(const RandomMatrixSpec& spec, double p);

/// p-Laplacian labeling instance: n points in [0,1]^10, symmetrized k-NN
/// edges, Gaussian weights w_e = exp(-||u-v||^2 / sigma^2) with sigma^2 the
/// mean squared neighbor distance, signed incidence B (+1 at the smaller
/// endpoint), uniform labels g on the last n_labeled nodes. Emits
/// N = W^{1/p} B restricted to unlabeled columns and v = -(labeled block) g.
/// Regenerates up to 10 times if the graph is disconnected.
GeneralInstance gen_random_graph(const RandomGraphSpec& spec);

struct CsvReport {
  Index rows_kept = 0;
  Index rows_dropped = 0;
};

/// Numeric CSV with a header row; N = feature columns plus an all-ones
/// intercept column, v = the target column. Rows with non-numeric cells are
/// dropped and counted.
GeneralInstance load_csv(const std::string& path,
                         const std::string& target_column, double p,
                         CsvReport* report = nullptr);

}  // namespace lpreg
