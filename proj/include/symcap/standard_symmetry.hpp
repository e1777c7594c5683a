#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symcap/symgroups.hpp"

namespace symcap {

struct Rational {
  std::int64_t num;
  std::int64_t den;  // > 0
};

/// Eigenvalue phases theta_j = arg(D_jj) / 2pi in [0, 1). An entry may carry an exact rational
/// value; when every entry does, independence is decided in exact arithmetic.
struct PhaseVector {
  std::vector<double> values;
  std::vector<std::optional<Rational>> exact;

  static PhaseVector from_values(std::vector<double> values);
  static PhaseVector from_rationals(const std::vector<Rational>& values);

  std::size_t size() const { return values.size(); }
};

/// Outcome of the bounded integer-relation search.
///
/// `independent` means no integers (q_0..q_N), not all zero and |q_j| <= bound, satisfy
/// |q_0 + sum_j q_j theta_j| <= tol. Floating phases can never certify true rational
/// independence, so this is a certificate up to the bound only.
struct IndependenceVerdict {
  bool independent = false;
  std::vector<std::int64_t> relation;  // (q_0, q_1, ..., q_N) when dependent
  double residual = 0.0;
  int bound = 0;
  bool exact = false;
};

inline constexpr int kDefaultRelationBound = 100;
inline constexpr double kDefaultRelationTol = 1e-9;

IndependenceVerdict rational_independence(const PhaseVector& phases,
                                          int denominator_bound = kDefaultRelationBound,
                                          double tol = kDefaultRelationTol);

/// V = W D W* with columns of W ordered by ascending phase and each column scaled so its
/// largest-modulus entry is real positive.
struct UnitaryEigendecomposition {
  UnitaryMatrix basis;
  PhaseVector phases;
};

UnitaryEigendecomposition unitary_eigendecomposition(const UnitaryMatrix& v);

/// N x N entry tolerance for "W_ij != 0": 1e-8 sqrt(N).
double default_entry_tol(int n);

/// Closure of the group generated by a standard symmetry, W Diag_N(T) W*. Throws
/// "not a standard symmetry" when the phases are rationally dependent within the bound.
SymmetryGroup closure_of_standard_symmetry(const UnitaryMatrix& v,
                                           int denominator_bound = kDefaultRelationBound,
                                           double tol = kDefaultRelationTol);

struct TwoSymmetryReport {
  bool isotropic_optimal = false;
  std::string reason;  // failing check when inconclusive
  IndependenceVerdict first;
  IndependenceVerdict second;
  double min_overlap_entry = 0.0;  // min_{i,j} |(W1* W2)_ij|
  double entry_tol = 0.0;
  ComplexMatrix overlap;  // W1* W2
};

TwoSymmetryReport check_two_symmetry_condition(const UnitaryMatrix& v1, const UnitaryMatrix& v2,
                                               std::optional<double> entry_tol = std::nullopt,
                                               int denominator_bound = kDefaultRelationBound,
                                               double tol = kDefaultRelationTol);

/// W1 Diag_{N,1}(R+) W1* intersected with W2 Diag_{N,1}(R+) W2*, from the connected components of
/// the bipartite support graph of W1* W2. Returns {I/N} when the graph is connected.
ReducedSet intersect_torus_fixed_sets(const UnitaryMatrix& w1, const UnitaryMatrix& w2,
                                      std::optional<double> entry_tol = std::nullopt);

}  // namespace symcap
