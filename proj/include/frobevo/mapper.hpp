// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frobevo/errors.hpp"
#include "frobevo/grammar.hpp"

namespace frobevo {

/// Fixed-length sequence of 8-bit codons; the genotype.
struct Chromosome {
  std::vector<uint8_t> codons;

  size_t size() const { return codons.size(); }

  /// Parses "120,44,42" (each value must fit in 8 bits).
  static Chromosome from_string(std::string_view text) {
    Chromosome c;
    size_t i = 0;
    while (i <= text.size()) {
      size_t comma = text.find(',', i);
      std::string_view item = text.substr(i, (comma == std::string_view::npos ? text.size() : comma) - i);
      size_t b = item.find_first_not_of(" \t");
      size_t e = item.find_last_not_of(" \t");
      if (b == std::string_view::npos) throw ParseError("empty codon in chromosome string");
      item = item.substr(b, e - b + 1);
      long v = 0;
      for (char ch : item) {
        if (ch < '0' || ch > '9') throw ParseError("bad codon '" + std::string(item) + "'");
        v = v * 10 + (ch - '0');
        if (v > 255) throw ParseError("codon out of 8-bit range: '" + std::string(item) + "'");
      }
      c.codons.push_back(static_cast<uint8_t>(v));
      if (comma == std::string_view::npos) break;
      i = comma + 1;
    }
    return c;
  }

  std::string to_string() const {
    std::string s;
    for (size_t i = 0; i < codons.size(); ++i) {
      if (i > 0) s += ',';
      s += std::to_string(codons[i]);
    }
    return s;
  }

  friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

struct MappingLimits {
  int max_wraps = 2;         // wrap to codon 0 at most this many times
  int max_expansions = 500;  // nonterminal expansions before giving up
};

enum class InvalidReason { MaxWrapsExceeded, MaxExpansionsExceeded };

inline std::string_view to_string(InvalidReason r) {
  return r == InvalidReason::MaxWrapsExceeded ? "max_wraps_exceeded" : "max_expansions_exceeded";
}

/// Result of mapping a chromosome through a grammar; the phenotype.
struct Phenotype {
  std::vector<std::string> tokens;       // terminal tokens of the derivation (valid only)
  std::optional<InvalidReason> invalid;  // set when the derivation was cut off
  size_t codons_consumed = 0;
  int wraps_used = 0;

  bool valid() const { return !invalid.has_value(); }

  /// Terminal tokens joined by single spaces, e.g. "x + x".
  std::string text() const {
    std::string s;
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (i > 0) s += ' ';
      s += tokens[i];
    }
    return s;
  }
};

/// One derivation step: which codon expanded which nonterminal, and how.
struct TraceStep {
  uint8_t codon = 0;
  std::string nonterminal;
  size_t alternative = 0;            // chosen index: codon mod alternative_count
  std::vector<Symbol> sentential_form;  // form after this step

  std::string form_text() const {
    std::string s;
    for (size_t i = 0; i < sentential_form.size(); ++i) {
      if (i > 0) s += ' ';
      const Symbol& sym = sentential_form[i];
      s += sym.is_terminal() ? sym.text : "<" + sym.text + ">";
    }
    return s;
  }
};

struct MappingTrace {
  std::vector<TraceStep> steps;
  Phenotype result;
};

namespace detail {

// Leftmost derivation with modulo rule selection. Every nonterminal expansion
// consumes one codon, including nonterminals with a single alternative
// (v mod 1 = 0). Wraps back to codon 0 on exhaustion, up to limits.max_wraps.
inline Phenotype map_impl(const Chromosome& chrom, const Grammar& g, const MappingLimits& limits,
                          std::vector<TraceStep>* trace) {
  Phenotype ph;
  if (chrom.codons.empty()) {
    // No codons to consume: the very first expansion already needs a wrap past the end.
    ph.invalid = InvalidReason::MaxWrapsExceeded;
    return ph;
  }

  std::vector<Symbol> form{Symbol{Symbol::Kind::Nonterminal, g.start_def().name}};
  size_t cursor = 0;  // everything before cursor is terminal
  size_t next_codon = 0;
  int expansions = 0;

  while (true) {
    while (cursor < form.size() && form[cursor].is_terminal()) ++cursor;
    if (cursor == form.size()) break;  // sentence complete

    if (expansions == limits.max_expansions) {
      ph.invalid = InvalidReason::MaxExpansionsExceeded;
      return ph;
    }
    if (next_codon == chrom.size()) {
      if (ph.wraps_used == limits.max_wraps) {
        ph.invalid = InvalidReason::MaxWrapsExceeded;
        return ph;
      }
      ++ph.wraps_used;
      next_codon = 0;
    }

    uint8_t v = chrom.codons[next_codon++];
    ++ph.codons_consumed;
    ++expansions;

    const NonterminalDef& def = g.def(form[cursor].text);
    size_t alt = v % def.alternatives.size();
    const auto& replacement = def.alternatives[alt].symbols;
    form.erase(form.begin() + static_cast<std::ptrdiff_t>(cursor));
    form.insert(form.begin() + static_cast<std::ptrdiff_t>(cursor), replacement.begin(), replacement.end());

    if (trace) trace->push_back(TraceStep{v, def.name, alt, form});
  }

  ph.tokens.reserve(form.size());
  for (auto& s : form) ph.tokens.push_back(std::move(s.text));
  return ph;
}

}  // namespace detail

/// Maps a chromosome to a phenotype. Total: never throws on mapping itself;
/// derivations cut off by the limits come back as Invalid phenotypes.
inline Phenotype map_genotype(const Chromosome& c, const Grammar& g, const MappingLimits& limits = {}) {
  return detail::map_impl(c, g, limits, nullptr);
}

/// Same derivation as map_genotype, recording every step.
inline MappingTrace trace_mapping(const Chromosome& c, const Grammar& g, const MappingLimits& limits = {}) {
  MappingTrace t;
  t.result = detail::map_impl(c, g, limits, &t.steps);
  return t;
}

}  // namespace frobevo
