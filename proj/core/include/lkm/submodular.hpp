#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "lkm/vector.hpp"

namespace lkm {

/// F(S) = sum_{s=1}^{|S|} (n + 1 - s). Its base polytope is the permutahedron
/// whose vertices are the permutations of (n, n-1, ..., 1).
struct Permutahedron {};

/// F(S) = min(|S|, k). k = 1 gives the probability simplex.
struct CardinalityTruncation {
  int k = 1;
};

/// F(S) = max_{e in S} h(e) - min_e h(e), shifted so that F(empty) = 0.
struct MaximalElement {
  std::vector<double> h;
};

/// Arbitrary set function given by its 2^n values, indexed by bitmask.
struct ExplicitTable {
  std::vector<double> values;
};

enum class TieRule { AscendingIndex, DescendingIndex };

/// Evaluation oracle for a set function F: 2^V -> R with F(empty) = 0.
/// Immutable once built; copies are cheap except for explicit tables.
class SubmodularFunction {
 public:
  using Family = std::variant<Permutahedron, CardinalityTruncation, MaximalElement, ExplicitTable>;

  static constexpr int kMaxTableSize = 16;

  static SubmodularFunction permutahedron(int n);
  static SubmodularFunction cardinality_truncation(int n, int k);
  static SubmodularFunction maximal_element(std::vector<double> h);
  static SubmodularFunction explicit_table(int n, std::vector<double> values);

  int size() const noexcept { return n_; }
  const Family& family() const noexcept { return family_; }
  std::string_view kind() const noexcept;

  /// F(S) for S given as a list of element indices (duplicates ignored).
  double evaluate(std::span<const int> elements) const;
  /// F(S) for S given as a bitmask; requires n <= 63.
  double evaluate_mask(std::uint64_t mask) const;

  /// F({order[0..k)}) for k = 0..n. `order` must be a permutation of 0..n-1.
  std::vector<double> chain_values(std::span<const int> order) const;

 private:
  SubmodularFunction(int n, Family family);

  int n_;
  Family family_;
  double shift_ = 0.0;  // min h for MaximalElement
};

struct GreedyResult {
  std::vector<int> permutation;
  Vector vertex;
  double value = 0.0;
};

/// Edmonds' greedy algorithm: sorts x in non-increasing order (stable, ties
/// by `tie`) and assigns marginal gains. The vertex maximises w'x over B(F)
/// and lies in the subdifferential of the Lovasz extension at x.
GreedyResult greedy_vertex(const SubmodularFunction& f, const Vector& x,
                           TieRule tie = TieRule::AscendingIndex);

/// Lovasz extension f(x) = max_{w in B(F)} w'x.
double lovasz_value(const SubmodularFunction& f, const Vector& x);

// Brute-force helpers. Each refuses sizes it cannot enumerate.

/// All distinct greedy vertices over the n! orderings; n <= 8.
std::vector<Vector> enumerate_vertices(const SubmodularFunction& f);

/// w in B(F) up to tol, by checking every subset; n <= 16.
bool check_membership(const SubmodularFunction& f, const Vector& w, double tol);

/// Exhaustive pairwise submodularity check; n <= 10.
bool check_submodular(const SubmodularFunction& f);

}  // namespace lkm
