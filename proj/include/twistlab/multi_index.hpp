#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace twistlab {

/// Multi-index alpha in N_0^n.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
    for (int e : entries_)
      if (e < 0) throw std::invalid_argument("MultiIndex: negative entry");
  }
  static MultiIndex zero(int n) { return MultiIndex(std::vector<int>(n, 0)); }

  int dim() const { return static_cast<int>(entries_.size()); }
  /// |alpha|
  int order() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }
  int max_entry() const {
    return entries_.empty() ? 0 : *std::max_element(entries_.begin(), entries_.end());
  }
  int operator[](std::size_t j) const { return entries_[j]; }
  const std::vector<int>& entries() const { return entries_; }

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

  std::string str() const {
    std::string s = "(";
    for (std::size_t j = 0; j < entries_.size(); ++j) {
      if (j) s += ",";
      s += std::to_string(entries_[j]);
    }
    return s + ")";
  }

 private:
  std::vector<int> entries_;
};

/// Label (mu, nu) of the special Hermite function Phi_{mu nu}.
struct MultiIndexPair {
  MultiIndex mu;
  MultiIndex nu;

  MultiIndexPair(MultiIndex m, MultiIndex v) : mu(std::move(m)), nu(std::move(v)) {
    if (mu.dim() != nu.dim()) throw dimension_error("MultiIndexPair: mu and nu differ in length");
    if (mu.dim() < 1) throw dimension_error("MultiIndexPair: empty multi-index");
  }
  /// Convenience for n = 1.
  MultiIndexPair(int m, int v) : MultiIndexPair(MultiIndex({m}), MultiIndex({v})) {}

  int dim() const { return mu.dim(); }
  /// Eigenvalue of the twisted Laplacian, 2|nu| + n.
  int eigenvalue() const { return 2 * nu.order() + dim(); }

  auto operator<=>(const MultiIndexPair&) const = default;
  bool operator==(const MultiIndexPair&) const = default;

  std::string str() const { return "[" + mu.str() + "," + nu.str() + "]"; }
};

namespace detail {

inline bool graded_less(const MultiIndex& a, const MultiIndex& b) {
  if (a.order() != b.order()) return a.order() < b.order();
  return a.entries() < b.entries();
}

inline void fill_indices(int n, int k_max, std::vector<int>& cur, std::vector<MultiIndex>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.emplace_back(cur);
    return;
  }
  int used = std::accumulate(cur.begin(), cur.end(), 0);
  for (int v = 0; v + used <= k_max; ++v) {
    cur.push_back(v);
    fill_indices(n, k_max, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

/// All alpha in N_0^n with |alpha| <= k_max, graded lexicographic.
inline std::vector<MultiIndex> multi_indices_up_to(int n, int k_max) {
  if (n < 1) throw dimension_error("multi_indices_up_to: n must be >= 1");
  if (k_max < 0) throw std::invalid_argument("multi_indices_up_to: k_max must be >= 0");
  std::vector<MultiIndex> out;
  std::vector<int> cur;
  detail::fill_indices(n, k_max, cur, out);
  std::sort(out.begin(), out.end(), detail::graded_less);
  return out;
}

/// All alpha in N_0^n with |alpha| == k.
inline std::vector<MultiIndex> multi_indices_of_order(int n, int k) {
  std::vector<MultiIndex> out;
  for (auto& a : multi_indices_up_to(n, k))
    if (a.order() == k) out.push_back(a);
  return out;
}

/// Finite index set {(mu, nu) : |mu|, |nu| <= k_max}.
///
/// Pairs are ordered by |mu| + |nu|, then lexicographically on the
/// concatenated entries (mu, nu). The order fixes every matrix layout in
/// the library (spectral coefficients, propagation matrix columns).
class Truncation {
 public:
  Truncation(int n, int k_max) : n_(n), k_max_(k_max) {
    auto idx = multi_indices_up_to(n, k_max);
    pairs_.reserve(idx.size() * idx.size());
    for (auto& m : idx)
      for (auto& v : idx) pairs_.emplace_back(m, v);
    std::sort(pairs_.begin(), pairs_.end(), [](const MultiIndexPair& a, const MultiIndexPair& b) {
      int ga = a.mu.order() + a.nu.order(), gb = b.mu.order() + b.nu.order();
      if (ga != gb) return ga < gb;
      if (a.mu.entries() != b.mu.entries()) return a.mu.entries() < b.mu.entries();
      return a.nu.entries() < b.nu.entries();
    });
  }

  int dim() const { return n_; }
  int k_max() const { return k_max_; }
  std::size_t size() const { return pairs_.size(); }
  const MultiIndexPair& operator[](std::size_t i) const { return pairs_[i]; }
  const std::vector<MultiIndexPair>& pairs() const { return pairs_; }
  auto begin() const { return pairs_.begin(); }
  auto end() const { return pairs_.end(); }

  std::optional<std::size_t> index_of(const MultiIndexPair& p) const {
    auto it = std::find(pairs_.begin(), pairs_.end(), p);
    if (it == pairs_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - pairs_.begin());
  }

  bool operator==(const Truncation& o) const { return n_ == o.n_ && k_max_ == o.k_max_; }

 private:
  int n_;
  int k_max_;
  std::vector<MultiIndexPair> pairs_;
};

inline Truncation enumerate_pairs(int n, int k_max) {
  if (n < 1) throw dimension_error("enumerate_pairs: n must be >= 1");
  if (k_max < 0) throw std::invalid_argument("enumerate_pairs: k_max must be >= 0");
  return Truncation(n, k_max);
}

/// Smallest k such that Truncation(n, k) holds at least `states` pairs.
inline int minimal_truncation_degree(int n, std::size_t states) {
  int k = 0;
  while (true) {
    auto m = multi_indices_up_to(n, k).size();
    if (m * m >= states) return k;
    ++k;
  }
}

}  // namespace twistlab
