#include "symcap/random_stream.hpp"

#include <cmath>
#include <numbers>

namespace symcap {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

RandomStream RandomStream::split(std::uint64_t index) const {
  return RandomStream(seed_, splitmix64(stream_ * 0x2545F4914F6CDD1DULL + index + 1));
}

double RandomStream::uniform() { return uniform_(engine_); }

double RandomStream::normal() { return normal_(engine_); }

Complex RandomStream::complex_normal() {
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

Complex RandomStream::unit_phase() {
  return std::polar(1.0, 2.0 * std::numbers::pi * uniform());
}

double RandomStream::cauchy() {
  // tan of a uniform angle in (-pi/2, pi/2); the endpoint has probability zero in doubles.
  double u = uniform();
  while (u == 0.0) u = uniform();
  return std::tan(std::numbers::pi * (u - 0.5));
}

std::size_t RandomStream::uniform_index(std::size_t n) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

bool RandomStream::coin() { return (engine_() >> 63) != 0; }

ComplexMatrix complex_gaussian_matrix(int rows, int cols, RandomStream& rng) {
  ComplexMatrix z(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) z(i, j) = rng.complex_normal();
  }
  return z;
}

ComplexMatrix random_hermitian(int n, RandomStream& rng) {
  const ComplexMatrix z = complex_gaussian_matrix(n, n, rng);
  return 0.5 * (z + z.adjoint());
}

CovarianceMatrix random_covariance(int n, RandomStream& rng) {
  const ComplexMatrix z = complex_gaussian_matrix(n, n, rng);
  ComplexMatrix w = z * z.adjoint();
  w /= w.trace().real();
  w = hermitian_part(w);
  w.diagonal().array() -= (w.trace().real() - 1.0) / n;
  return CovarianceMatrix(w);
}

}  // namespace symcap
