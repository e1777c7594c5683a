#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "symcap/matcore.hpp"
#include "symcap/random_stream.hpp"

namespace symcap {

class SymmetryGroup;

namespace group {

struct FullUnitary {
  int n;
};

/// W Diag_N(T) W*.
struct ConjugatedTorus {
  UnitaryMatrix basis;
};

/// S_N, the N x N permutation matrices.
struct Permutations {
  int n;
};

/// Diag_N(+-1).
struct SignFlips {
  int n;
};

/// S_N^+- = S_N Diag_N(+-1).
struct SignedPermutations {
  int n;
};

enum class Semantics { kGroup, kMultiset };

/// Finite collection of unitaries. With `kGroup` semantics it must be closed under products and
/// inverses (checked on construction) and carries the counting Haar measure; with `kMultiset` it
/// only defines the plain average (1/|F|) sum F A F*, multiplicities included.
struct FiniteMultiset {
  std::vector<UnitaryMatrix> elements;
  Semantics semantics;
};

/// G1 (x) G2 acting on C^{N1 N2}.
struct TensorProduct {
  std::shared_ptr<const SymmetryGroup> first;
  std::shared_ptr<const SymmetryGroup> second;
};

/// Block-diagonal G1 (+) ... (+) GK.
struct DirectSum {
  std::vector<SymmetryGroup> parts;
};

/// W G W* for an arbitrary inner group G.
struct Conjugated {
  UnitaryMatrix basis;
  std::shared_ptr<const SymmetryGroup> inner;
};

/// {I_N}.
struct Trivial {
  int n;
};

}  // namespace group

/// Descriptor of a closed subgroup of U(N) (or of a finite multiset of unitaries). Immutable.
class SymmetryGroup {
 public:
  using Variant = std::variant<group::FullUnitary, group::ConjugatedTorus, group::Permutations,
                               group::SignFlips, group::SignedPermutations, group::FiniteMultiset,
                               group::TensorProduct, group::DirectSum, group::Conjugated,
                               group::Trivial>;

  static SymmetryGroup full_unitary(int n);
  static SymmetryGroup conjugated_torus(const UnitaryMatrix& basis);
  static SymmetryGroup diagonal_torus(int n);
  static SymmetryGroup permutations(int n);
  static SymmetryGroup sign_flips(int n);
  static SymmetryGroup signed_permutations(int n);
  static SymmetryGroup finite(std::vector<UnitaryMatrix> elements, group::Semantics semantics);
  static SymmetryGroup tensor(SymmetryGroup first, SymmetryGroup second);
  static SymmetryGroup direct_sum(std::vector<SymmetryGroup> parts);
  static SymmetryGroup conjugated(const UnitaryMatrix& basis, SymmetryGroup inner);
  static SymmetryGroup trivial(int n);

  int dim() const;
  const Variant& variant() const { return v_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&v_);
  }

  /// True when Haar semantics apply (everything except a plain multiset).
  bool is_group() const;

  std::string describe() const;

 private:
  explicit SymmetryGroup(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// ---------------------------------------------------------------------------------------------
// Reduced sets: explicit parameterizations of A_G(C_{N,1}).

class ReducedSet;

namespace reduced {

struct Singleton {
  CovarianceMatrix point;
};

/// W Diag_{N,1}(R+) W*, parameterized by a probability vector of length N.
struct ConjugatedSimplex {
  UnitaryMatrix basis;
};

/// inner (x) I_{mixed}/mixed (or I_{mixed}/mixed (x) inner when `mixed_first`).
struct BlockKron {
  std::shared_ptr<const ReducedSet> inner;
  int mixed_dim;
  bool mixed_first = false;
};

/// (+)_k p_k S_k with (p_1..p_K) a probability vector.
struct WeightedDirectSum {
  std::vector<ReducedSet> blocks;
};

/// All of C_{N,1}.
struct FullSet {
  int n;
};

/// W S W*.
struct Conjugated {
  UnitaryMatrix basis;
  std::shared_ptr<const ReducedSet> inner;
};

}  // namespace reduced

/// Free parameters of a point in a ReducedSet. Which fields are read depends on the variant:
/// ConjugatedSimplex and WeightedDirectSum read `weights`; FullSet reads `covariance`;
/// BlockKron, WeightedDirectSum and Conjugated read `children`.
struct SetParameters {
  std::vector<double> weights;
  std::optional<ComplexMatrix> covariance;
  std::vector<SetParameters> children;
};

class ReducedSet {
 public:
  using Variant = std::variant<reduced::Singleton, reduced::ConjugatedSimplex, reduced::BlockKron,
                               reduced::WeightedDirectSum, reduced::FullSet, reduced::Conjugated>;

  static ReducedSet singleton(const CovarianceMatrix& q);
  static ReducedSet conjugated_simplex(const UnitaryMatrix& basis);
  static ReducedSet block_kron(ReducedSet inner, int mixed_dim, bool mixed_first = false);
  static ReducedSet weighted_direct_sum(std::vector<ReducedSet> blocks);
  static ReducedSet full_set(int n);
  static ReducedSet conjugated(const UnitaryMatrix& basis, ReducedSet inner);

  int dim() const;
  const Variant& variant() const { return v_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&v_);
  }

  bool is_singleton() const { return std::holds_alternative<reduced::Singleton>(v_); }

  /// Real dimension of the parameterization (0 for a singleton).
  int free_dimension() const;

  std::string describe() const;

 private:
  explicit ReducedSet(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// ---------------------------------------------------------------------------------------------
// Operations.

/// One draw from the Haar measure of `g`. Plain multisets have no Haar measure and throw.
UnitaryMatrix haar_sample(const SymmetryGroup& g, RandomStream& rng);

/// A_G(A) in closed form (the plain element sum for finite multisets). Exact, no sampling.
ComplexMatrix average(const SymmetryGroup& g, const ComplexMatrix& a);

/// Mean element of the group, the integral of F dmu(F).
ComplexMatrix mean_element(const SymmetryGroup& g);

/// True when A_G(B) = Tr(B)/N I for every B.
bool is_fully_mixing(const SymmetryGroup& g);

/// Exact parameterization of A_G(C_{N,1}).
ReducedSet averaged_set(const SymmetryGroup& g);

CovarianceMatrix embed(const ReducedSet& s, const SetParameters& params);

/// Random feasible parameters (Dirichlet(1) weights, Wishart inner covariances).
SetParameters random_parameters(const ReducedSet& s, RandomStream& rng);

bool is_fixed_point(const SymmetryGroup& g, const CovarianceMatrix& q, double tol);
double fixed_point_residual(const SymmetryGroup& g, const ComplexMatrix& q);

/// Structural membership of a unitary in a group descriptor within `tol`.
bool contains(const SymmetryGroup& g, const ComplexMatrix& v, double tol = 1e-9);

/// Structural subgroup test for the recognized pairs. Returns std::nullopt when the pair is not
/// one the library knows how to decide.
std::optional<bool> is_structural_subgroup(const SymmetryGroup& sub, const SymmetryGroup& g);

}  // namespace symcap
