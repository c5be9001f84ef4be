#include "lkm/submodular.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "lkm/errors.hpp"

namespace lkm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double permutahedron_value(int n, int card) {
  // sum_{s=1}^{card} (n + 1 - s)
  return 0.5 * static_cast<double>(card) * static_cast<double>(2 * n - card + 1);
}

}  // namespace

SubmodularFunction::SubmodularFunction(int n, Family family) : n_(n), family_(std::move(family)) {
  if (n_ < 1) throw InvalidInput("ground set must have at least one element");
}

SubmodularFunction SubmodularFunction::permutahedron(int n) {
  return SubmodularFunction(n, Permutahedron{});
}

SubmodularFunction SubmodularFunction::cardinality_truncation(int n, int k) {
  if (k < 0) throw InvalidInput("truncation level k must be non-negative");
  return SubmodularFunction(n, CardinalityTruncation{k});
}

SubmodularFunction SubmodularFunction::maximal_element(std::vector<double> h) {
  const int n = static_cast<int>(h.size());
  for (double v : h)
    if (!std::isfinite(v)) throw InvalidInput("maximal-element weights must be finite");
  const double lo = h.empty() ? 0.0 : *std::min_element(h.begin(), h.end());
  SubmodularFunction f(n, MaximalElement{std::move(h)});
  f.shift_ = lo;
  return f;
}

SubmodularFunction SubmodularFunction::explicit_table(int n, std::vector<double> values) {
  if (n < 1 || n > kMaxTableSize)
    throw InvalidInput("explicit table requires 1 <= n <= " + std::to_string(kMaxTableSize));
  if (values.size() != (std::size_t{1} << n))
    throw InvalidInput("explicit table must have 2^n entries");
  if (values[0] != 0.0) throw InvalidInput("explicit table must satisfy F(empty) = 0");
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidInput("explicit table entries must be finite");
  return SubmodularFunction(n, ExplicitTable{std::move(values)});
}

std::string_view SubmodularFunction::kind() const noexcept {
  return std::visit(Overloaded{[](const Permutahedron&) { return std::string_view("permutahedron"); },
                               [](const CardinalityTruncation&) {
                                 return std::string_view("cardinality_truncation");
                               },
                               [](const MaximalElement&) { return std::string_view("maximal_element"); },
                               [](const ExplicitTable&) { return std::string_view("explicit_table"); }},
                    family_);
}

double SubmodularFunction::evaluate(std::span<const int> elements) const {
  std::vector<int> s(elements.begin(), elements.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (!s.empty() && (s.front() < 0 || s.back() >= n_))
    throw InvalidInput("subset element out of range");
  const int card = static_cast<int>(s.size());

  return std::visit(
      Overloaded{
          [&](const Permutahedron&) { return permutahedron_value(n_, card); },
          [&](const CardinalityTruncation& t) { return static_cast<double>(std::min(card, t.k)); },
          [&](const MaximalElement& m) {
            if (s.empty()) return 0.0;
            double best = m.h[s.front()];
            for (int e : s) best = std::max(best, m.h[e]);
            return best - shift_;
          },
          [&](const ExplicitTable& t) {
            std::uint64_t mask = 0;
            for (int e : s) mask |= std::uint64_t{1} << e;
            return t.values[mask];
          }},
      family_);
}

double SubmodularFunction::evaluate_mask(std::uint64_t mask) const {
  if (n_ > 63) throw ResourceLimit("bitmask evaluation requires n <= 63");
  if (n_ < 64 && (mask >> n_) != 0) throw InvalidInput("subset mask out of range");
  if (const auto* t = std::get_if<ExplicitTable>(&family_)) return t->values[mask];
  std::vector<int> s;
  for (int e = 0; e < n_; ++e)
    if (mask & (std::uint64_t{1} << e)) s.push_back(e);
  return evaluate(s);
}

std::vector<double> SubmodularFunction::chain_values(std::span<const int> order) const {
  if (static_cast<int>(order.size()) != n_) throw InvalidInput("chain order must list every element");
  std::vector<double> out(n_ + 1, 0.0);
  std::visit(Overloaded{[&](const Permutahedron&) {
                          for (int k = 1; k <= n_; ++k) out[k] = permutahedron_value(n_, k);
                        },
                        [&](const CardinalityTruncation& t) {
                          for (int k = 1; k <= n_; ++k) out[k] = static_cast<double>(std::min(k, t.k));
                        },
                        [&](const MaximalElement& m) {
                          double best = m.h[order[0]];
                          for (int k = 1; k <= n_; ++k) {
                            best = std::max(best, m.h[order[k - 1]]);
                            out[k] = best - shift_;
                          }
                        },
                        [&](const ExplicitTable& t) {
                          std::uint64_t mask = 0;
                          for (int k = 1; k <= n_; ++k) {
                            mask |= std::uint64_t{1} << order[k - 1];
                            out[k] = t.values[mask];
                          }
                        }},
             family_);
  return out;
}

GreedyResult greedy_vertex(const SubmodularFunction& f, const Vector& x, TieRule tie) {
  const int n = f.size();
  if (x.size() != n) throw InvalidInput("greedy: dimension mismatch");
  for (int i = 0; i < n; ++i)
    if (std::isnan(x[i])) throw InvalidInput("greedy: NaN in direction");

  GreedyResult r;
  r.permutation.resize(n);
  std::iota(r.permutation.begin(), r.permutation.end(), 0);
  if (tie == TieRule::DescendingIndex) std::reverse(r.permutation.begin(), r.permutation.end());
  std::stable_sort(r.permutation.begin(), r.permutation.end(),
                   [&](int a, int b) { return x[a] > x[b]; });

  const std::vector<double> chain = f.chain_values(r.permutation);
  r.vertex.resize(n);
  for (int k = 0; k < n; ++k) r.vertex[r.permutation[k]] = chain[k + 1] - chain[k];
  r.value = dot(r.vertex, x);
  return r;
}

double lovasz_value(const SubmodularFunction& f, const Vector& x) {
  return greedy_vertex(f, x).value;
}

std::vector<Vector> enumerate_vertices(const SubmodularFunction& f) {
  const int n = f.size();
  if (n > 8) throw ResourceLimit("vertex enumeration requires n <= 8");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto less = [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  };
  std::set<Vector, decltype(less)> seen(less);
  std::vector<Vector> out;
  do {
    const std::vector<double> chain = f.chain_values(order);
    Vector v(n);
    for (int k = 0; k < n; ++k) v[order[k]] = chain[k + 1] - chain[k];
    if (seen.insert(v).second) out.push_back(v);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

bool check_membership(const SubmodularFunction& f, const Vector& w, double tol) {
  const int n = f.size();
  if (n > SubmodularFunction::kMaxTableSize) throw ResourceLimit("membership check requires n <= 16");
  if (w.size() != n) throw InvalidInput("membership: dimension mismatch");
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t mask = 1; mask <= full; ++mask) {
    double wa = 0.0;
    for (int e = 0; e < n; ++e)
      if (mask & (std::uint64_t{1} << e)) wa += w[e];
    const double fa = f.evaluate_mask(mask);
    if (wa > fa + tol) return false;
    if (mask == full && std::abs(wa - fa) > tol) return false;
  }
  return true;
}

bool check_submodular(const SubmodularFunction& f) {
  const int n = f.size();
  if (n > 10) throw ResourceLimit("submodularity check requires n <= 10");
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<double> table(count);
  for (std::uint64_t m = 0; m < count; ++m) table[m] = f.evaluate_mask(m);
  // Integer-valued families compare exactly; the slack only absorbs rounding
  // in explicit tables built from real arithmetic.
  for (std::uint64_t a = 0; a < count; ++a)
    for (std::uint64_t b = a + 1; b < count; ++b) {
      const double lhs = table[a] + table[b];
      const double rhs = table[a | b] + table[a & b];
      if (lhs < rhs - 1e-12 * (1.0 + std::abs(rhs))) return false;
    }
  return true;
}

}  // namespace lkm
