// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include "frobevo/errors.hpp"
#include "frobevo/util.hpp"

namespace frobevo {

/// Sorted tuple of numerical-semigroup generators.
class GenTuple {
 public:
  explicit GenTuple(std::vector<int64_t> elems) : elems_(std::move(elems)) {
    if (elems_.size() < 2) throw Error("generator tuple needs at least 2 elements");
    for (int64_t v : elems_)
      if (v < 1) throw Error("generator elements must be positive, got " + std::to_string(v));
    std::sort(elems_.begin(), elems_.end());
  }

  const std::vector<int64_t>& elements() const { return elems_; }
  int64_t min() const { return elems_.front(); }
  int64_t max() const { return elems_.back(); }
  int64_t gcd() const { return gcd_all(elems_); }
  bool coprime() const { return gcd() == 1; }

  std::string to_string() const {
    std::string s = "(";
    for (size_t i = 0; i < elems_.size(); ++i) {
      if (i > 0) s += ", ";
      s += std::to_string(elems_[i]);
    }
    return s + ")";
  }

 private:
  std::vector<int64_t> elems_;
};

namespace detail {

inline void require_coprime(const GenTuple& t) {
  if (!t.coprime())
    throw NotCoprime("gcd of " + t.to_string() + " is " + std::to_string(t.gcd()) + ", Frobenius number undefined");
}

// Least representable integer in each residue class mod m (the Apery set of m,
// shifted). dist[r] = shortest path from node 0 to node r where each generator
// a contributes edges r -> (r + a) mod m of weight a.
inline std::vector<int64_t> apery_distances(const GenTuple& t) {
  const int64_t m = t.min();
  const int64_t inf = std::numeric_limits<int64_t>::max();
  std::vector<int64_t> dist(static_cast<size_t>(m), inf);
  dist[0] = 0;
  using Item = std::pair<int64_t, int64_t>;  // (distance, residue)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  queue.emplace(0, 0);
  while (!queue.empty()) {
    auto [d, r] = queue.top();
    queue.pop();
    if (d != dist[static_cast<size_t>(r)]) continue;
    for (int64_t a : t.elements()) {
      int64_t nd = checked_add(d, a);
      int64_t nr = (r + a % m) % m;
      if (nd < dist[static_cast<size_t>(nr)]) {
        dist[static_cast<size_t>(nr)] = nd;
        queue.emplace(nd, nr);
      }
    }
  }
  return dist;
}

}  // namespace detail

/// Exact Frobenius number of a coprime tuple: the largest integer that is not
/// a non-negative integer combination of the generators. Returns -1 when 1 is
/// among them (every natural number is then representable).
/// Runs in O(n * m * log m) for m = min element via the Apery set.
inline int64_t frobenius(const GenTuple& t) {
  detail::require_coprime(t);
  if (t.min() == 1) return -1;
  std::vector<int64_t> dist = detail::apery_distances(t);
  int64_t worst = *std::max_element(dist.begin(), dist.end());
  return worst - t.min();
}

/// Conservative reachability bound for the dynamic-programming oracle: the
/// pair Frobenius number of the two smallest elements when they are coprime
/// (plus one min-element stride so the table's top window can pass the
/// completeness check), otherwise their product. The DP itself reports
/// BoundTooSmall when this heuristic is insufficient (possible in the
/// non-coprime-pair case).
inline int64_t default_dp_bound(const GenTuple& t) {
  int64_t a = t.elements()[0];
  int64_t b = t.elements()[1];
  if (std::gcd(a, b) == 1) return checked_mul(b, a - 1);  // (ab - a - b) + a
  return checked_mul(a, b);
}

/// Independent brute-force oracle: boolean table of representable integers up
/// to `bound`; the Frobenius number is the largest unreachable index. The top
/// min-element-wide window of the table must be fully reachable, otherwise the
/// bound proves nothing and BoundTooSmall is thrown.
inline int64_t frobenius_bruteforce(const GenTuple& t, int64_t bound) {
  detail::require_coprime(t);
  if (t.min() == 1) return -1;
  if (bound < 1) throw BoundTooSmall("bound must be >= 1");
  if (bound > (int64_t{1} << 31)) throw Overflow("DP bound too large: " + std::to_string(bound));

  std::vector<char> reachable(static_cast<size_t>(bound) + 1, 0);
  reachable[0] = 1;
  for (int64_t i = 1; i <= bound; ++i)
    for (int64_t a : t.elements()) {
      if (a > i) break;  // elements sorted ascending
      if (reachable[static_cast<size_t>(i - a)]) {
        reachable[static_cast<size_t>(i)] = 1;
        break;
      }
    }

  for (int64_t i = bound - t.min() + 1; i <= bound; ++i)
    if (i < 0 || !reachable[static_cast<size_t>(i)])
      throw BoundTooSmall("top window not fully reachable; raise the bound above " + std::to_string(bound));

  for (int64_t i = bound; i >= 1; --i)
    if (!reachable[static_cast<size_t>(i)]) return i;
  throw BoundTooSmall("no unreachable value at or below " + std::to_string(bound));
}

inline int64_t frobenius_bruteforce(const GenTuple& t) { return frobenius_bruteforce(t, default_dp_bound(t)); }

/// True iff m is a non-negative integer combination of the tuple.
inline bool is_representable(const GenTuple& t, int64_t m) {
  if (m < 0) throw Error("representability is defined for non-negative integers");
  if (m == 0 || t.min() == 1) return true;
  std::vector<int64_t> dist = detail::apery_distances(t);
  return dist[static_cast<size_t>(m % t.min())] <= m;
}

}  // namespace frobevo
