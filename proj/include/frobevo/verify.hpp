// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frobevo/dataset.hpp"
#include "frobevo/errors.hpp"
#include "frobevo/expr.hpp"
#include "frobevo/oracle.hpp"
#include "frobevo/util.hpp"

namespace frobevo {

/// A closed-form claim about a tuple family: formula(k) equals the Frobenius
/// number of family(k) for all k >= k_min. Formulas use floor-division
/// semantics.
struct Conjecture {
  std::string name;
  std::string description;
  TupleFamily family;  // parameter k
  Expr formula;
  int64_t k_min = 1;

  std::string formula_text() const { return formula.to_string(family.param_name); }
};

struct Counterexample {
  int64_t k = 0;
  std::vector<int64_t> tuple;
  int64_t oracle_value = 0;
  Rational formula_value;  // may be non-integral, which is itself a mismatch
};

enum class Verdict { Verified, Refuted };

struct VerifyReport {
  int64_t from = 0, to = 0;       // inclusive parameter range checked
  int64_t matches = 0;
  std::vector<Counterexample> counterexamples;
  std::vector<int64_t> skipped;   // non-coprime parameters, left out of the comparison

  Verdict verdict() const { return counterexamples.empty() ? Verdict::Verified : Verdict::Refuted; }
  bool verified() const { return verdict() == Verdict::Verified; }
  const Counterexample* first_counterexample() const {
    return counterexamples.empty() ? nullptr : &counterexamples.front();
  }
};

/// Which Frobenius algorithm backs the sweep. The DP route exists so reports
/// can be cross-checked against an independent oracle.
enum class OracleKind { Apery, BruteForce };

namespace detail {

inline int64_t frobenius_via(const GenTuple& t, OracleKind kind) {
  if (kind == OracleKind::Apery) return frobenius(t);
  // Generous bound: any residue class mod the min element is reached within
  // min-1 steps, each adding at most the max element.
  int64_t bound = checked_add(checked_mul(t.min() - 1, t.max()), t.min());
  return frobenius_bruteforce(t, bound < 1 ? 1 : bound);
}

}  // namespace detail

/// Compares oracle and formula for every k in [k_lo, k_hi]. Exact integer
/// equality; parameters where the family is not coprime are skipped and
/// recorded. Throws FamilyError if a generator is non-positive somewhere in
/// the range, and propagates oracle Overflow.
inline VerifyReport verify(const Conjecture& c, int64_t k_lo, int64_t k_hi, int jobs = 0,
                           OracleKind oracle = OracleKind::Apery) {
  if (k_lo > k_hi) throw Error("verification range is empty: " + std::to_string(k_lo) + " > " + std::to_string(k_hi));
  VerifyReport report;
  report.from = k_lo;
  report.to = k_hi;

  const size_t n = static_cast<size_t>(k_hi - k_lo + 1);
  enum class Outcome : uint8_t { Match, Mismatch, Skipped };
  std::vector<Outcome> outcomes(n);
  std::vector<Counterexample> details(n);
  std::vector<std::exception_ptr> errors(n);

  parallel_for(n, jobs, [&](size_t i) {
    int64_t k = k_lo + static_cast<int64_t>(i);
    try {
      GenTuple t = c.family.tuple_at(k);
      if (!t.coprime()) {
        outcomes[i] = Outcome::Skipped;
        return;
      }
      int64_t g = detail::frobenius_via(t, oracle);
      Rational predicted = c.formula.evaluate(k, EvalMode::FloorDiv);
      if (predicted.is_integer() && predicted.num() == g) {
        outcomes[i] = Outcome::Match;
      } else {
        outcomes[i] = Outcome::Mismatch;
        details[i] = Counterexample{k, t.elements(), g, predicted};
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });

  for (const auto& ep : errors)
    if (ep) std::rethrow_exception(ep);

  for (size_t i = 0; i < n; ++i) {
    switch (outcomes[i]) {
      case Outcome::Match: ++report.matches; break;
      case Outcome::Mismatch: report.counterexamples.push_back(std::move(details[i])); break;
      case Outcome::Skipped: report.skipped.push_back(k_lo + static_cast<int64_t>(i)); break;
    }
  }
  return report;
}

namespace detail {

inline Conjecture make_conjecture(std::string name, std::string description, std::string_view family,
                                  std::string_view formula, int64_t k_min) {
  Conjecture c;
  c.name = std::move(name);
  c.description = std::move(description);
  c.family = TupleFamily::parse(family);
  c.family.param_start = k_min;
  std::string var = c.family.param_name;
  c.formula = Expr::parse(formula, &var).floorized();
  c.k_min = k_min;
  return c;
}

}  // namespace detail

// Shipped conjectures and identities. Formulas are written with plain '/'
// and floorized on construction, so every division below reads as a floor.
// k_min for the affine-recurrence entries was established by oracle sweep:
// recurrence-4k3 holds from k = 0 (x = 3) and recurrence-4k1 from k = 1
// (x = 5; the k = 0 tuple contains 1 and is degenerate). Both remain
// conjectures, not theorems.
inline std::vector<Conjecture> builtin_conjectures() {
  std::vector<Conjecture> all;
  all.push_back(detail::make_conjecture(
      "theorem1", "quadruple (3k+1, 3k+4, 6k+3, 6k+9)",
      "3*k+1, 3*k+4, 6*k+3, 6*k+9",
      "(3*k+1) * (k - (3*k+1)/21) - 1", 5));
  all.push_back(detail::make_conjecture(
      "recurrence-4k1", "quadruple x=4k+1, y=3x+2, z=3y+2, w=3z+2",
      "4*k+1, 12*k+5, 36*k+17, 108*k+53",
      "48*k*k + 16*k - 1 - 3*(4*k+1) * (k + (2*k)/13 + (2*k+6)/13 - (2*k+19)/26)", 1));
  all.push_back(detail::make_conjecture(
      "recurrence-4k3", "quadruple x=4k+3, y=3x+2, z=3y+2, w=3z+2",
      "4*k+3, 12*k+11, 36*k+35, 108*k+107",
      "48*k*k + 64*k + 19 - 3*(4*k+3) * (k + (2*k+1)/13 + (2*k+7)/13 - (k+3)/13)", 0));
  all.push_back(detail::make_conjecture(
      "sextuple", "sextuple (6k+1, 6k+4, 6k+7, 12k+3, 12k+9, 12k+15)",
      "6*k+1, 6*k+4, 6*k+7, 12*k+3, 12*k+9, 12*k+15",
      "(6*k+1) * (k - k/13) - 1", 5));
  all.push_back(detail::make_conjecture(
      "pair", "consecutive pair (k, k+1); the classical two-generator closed form",
      "k, k+1",
      "k*(k+1) - k - (k+1)", 2));
  all.push_back(detail::make_conjecture(
      "quadruple-a124", "quadruple (a, a+1, a+2, a+4)",
      "k, k+1, k+2, k+4",
      "(k+1) * (k/4) + (k+1)/4 + 2 * ((k+2)/4) - 1", 2));
  return all;
}

inline std::optional<Conjecture> find_builtin(std::string_view name) {
  for (auto& c : builtin_conjectures())
    if (c.name == name) return c;
  return std::nullopt;
}

}  // namespace frobevo
