#pragma once

#include <cstdint>
#include <random>

namespace spinlearn {

/// Portable seeded generator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Distributions are implemented here rather than taken from
/// <random>, whose distribution algorithms are implementation-defined.
///
/// Stream splitting: child(root, stream, sub) seeds the engine with
/// std::seed_seq{lo(root), hi(root), lo(stream), hi(stream), lo(sub), hi(sub)}.
/// Sample i of a dataset draws from child(root, i, attempt), so results do not
/// depend on thread count or completion order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng child(std::uint64_t root, std::uint64_t stream, std::uint64_t sub = 0);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n); n > 0. Rejection-sampled, unbiased.
  std::uint64_t below(std::uint64_t n);
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace spinlearn
