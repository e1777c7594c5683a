#pragma once

#include <cstdint>
#include <random>

#include "symcap/matcore.hpp"

namespace symcap {

/// Seeded pseudo-random source. Identical (seed, stream) pairs reproduce identical sequences.
///
/// A stream is owned by one consumer at a time; parallel work derives per-task streams with
/// `split`, which depends only on the seed, stream id and index (never on how far the parent has
/// been consumed).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  RandomStream split(std::uint64_t index) const;

  double uniform();  // [0, 1)
  double normal();
  /// Circularly symmetric complex Gaussian with E|z|^2 = 1.
  Complex complex_normal();
  /// Uniform on the unit circle.
  Complex unit_phase();
  double cauchy();
  std::size_t uniform_index(std::size_t n);
  bool coin();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

ComplexMatrix complex_gaussian_matrix(int rows, int cols, RandomStream& rng);

/// Hermitian matrix from the unit Gaussian Hermitian ensemble, (Z + Z*)/2.
ComplexMatrix random_hermitian(int n, RandomStream& rng);

/// Random element of C_{N,1}: normalized complex Wishart Z Z* / Tr(Z Z*).
CovarianceMatrix random_covariance(int n, RandomStream& rng);

}  // namespace symcap
