// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "frobevo/errors.hpp"

namespace frobevo {

// BNF grammar representation. The dialect:
//
//   <name> ::= alternative | alternative | ...
//            | further alternatives on continuation lines
//   # comment lines are ignored
//
// Tokens within an alternative are separated by whitespace; a token of the
// form <name> refers to a nonterminal, everything else is an opaque terminal.
// Rule and alternative order follow source order; the start symbol is the
// first nonterminal defined.

struct Symbol {
  enum class Kind { Terminal, Nonterminal };
  Kind kind;
  std::string text;  // terminal token, or nonterminal name without brackets

  bool is_terminal() const { return kind == Kind::Terminal; }
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

struct Production {
  std::vector<Symbol> symbols;  // non-empty
  friend bool operator==(const Production&, const Production&) = default;
};

struct NonterminalDef {
  std::string name;
  std::vector<Production> alternatives;  // in source order; selection is positional
  friend bool operator==(const NonterminalDef&, const NonterminalDef&) = default;
};

class Grammar {
 public:
  const std::vector<NonterminalDef>& nonterminals() const { return defs_; }

  /// Index of the start symbol; always 0 (first nonterminal in file order).
  size_t start() const { return 0; }
  const NonterminalDef& start_def() const { return defs_.front(); }

  size_t index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw UnknownNonterminal("unknown nonterminal <" + std::string(name) + ">");
    return it->second;
  }

  const NonterminalDef& def(std::string_view name) const { return defs_[index_of(name)]; }
  const NonterminalDef& def(size_t index) const { return defs_[index]; }

  size_t alternative_count(std::string_view name) const { return def(name).alternatives.size(); }

  /// Re-emits the grammar in the same dialect parse_bnf accepts.
  std::string to_bnf() const {
    std::string out;
    for (const auto& d : defs_) {
      std::string head = "<" + d.name + "> ::= ";
      std::string indent(head.size() - 2, ' ');
      for (size_t i = 0; i < d.alternatives.size(); ++i) {
        out += i == 0 ? head : indent + "| ";
        const auto& syms = d.alternatives[i].symbols;
        for (size_t j = 0; j < syms.size(); ++j) {
          if (j > 0) out += ' ';
          out += syms[j].is_terminal() ? syms[j].text : "<" + syms[j].text + ">";
        }
        out += '\n';
      }
    }
    return out;
  }

  friend bool operator==(const Grammar& a, const Grammar& b) { return a.defs_ == b.defs_; }

  friend Grammar parse_bnf(std::string_view source);

 private:
  std::vector<NonterminalDef> defs_;
  std::unordered_map<std::string, size_t> index_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline Symbol parse_symbol(std::string_view token) {
  if (token.front() == '<') {
    if (token.size() < 3 || token.back() != '>')
      throw SyntaxError("unclosed angle bracket in token '" + std::string(token) + "'");
    std::string_view name = token.substr(1, token.size() - 2);
    if (name.find_first_of("<>") != std::string_view::npos)
      throw SyntaxError("malformed nonterminal token '" + std::string(token) + "'");
    return {Symbol::Kind::Nonterminal, std::string(name)};
  }
  if (token.find_first_of("<>") != std::string_view::npos)
    throw SyntaxError("stray angle bracket in token '" + std::string(token) + "'");
  return {Symbol::Kind::Terminal, std::string(token)};
}

inline Production parse_production(std::string_view text) {
  Production p;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
    size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\r') ++j;
    if (j > i) p.symbols.push_back(parse_symbol(text.substr(i, j - i)));
    i = j;
  }
  if (p.symbols.empty()) throw SyntaxError("empty production alternative");
  return p;
}

}  // namespace detail

/// Parses BNF source text into a Grammar. Throws SyntaxError on malformed
/// rules, DuplicateDefinition if a nonterminal is defined twice, and
/// UndefinedNonterminal if a referenced nonterminal has no rule.
inline Grammar parse_bnf(std::string_view source) {
  using detail::trim;
  Grammar g;

  // Gather logical rules: a "::=" line plus any following "|" continuation lines.
  std::vector<std::pair<std::string, std::string>> rules;  // (lhs token, body text)
  size_t pos = 0;
  while (pos <= source.size()) {
    size_t eol = source.find('\n', pos);
    std::string_view line = source.substr(pos, eol == std::string_view::npos ? source.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? source.size() + 1 : eol + 1;

    std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    size_t sep = t.find("::=");
    if (sep != std::string_view::npos) {
      std::string lhs(trim(t.substr(0, sep)));
      std::string body(t.substr(sep + 3));
      rules.emplace_back(std::move(lhs), std::move(body));
    } else if (t.front() == '|') {
      if (rules.empty()) throw SyntaxError("continuation line before any rule: '" + std::string(t) + "'");
      rules.back().second += " | ";
      rules.back().second += t.substr(1);
    } else {
      throw SyntaxError("malformed rule (expected '::=' or '|' continuation): '" + std::string(t) + "'");
    }
  }

  for (auto& [lhs, body] : rules) {
    Symbol head = detail::parse_symbol(lhs);
    if (head.is_terminal() || lhs.front() != '<')
      throw SyntaxError("left hand side must be a single <nonterminal>, got '" + lhs + "'");
    if (g.index_.count(head.text))
      throw DuplicateDefinition("nonterminal <" + head.text + "> defined twice");

    NonterminalDef def;
    def.name = head.text;
    size_t i = 0;
    while (true) {
      size_t bar = body.find('|', i);
      std::string_view alt(body.data() + i, (bar == std::string::npos ? body.size() : bar) - i);
      def.alternatives.push_back(detail::parse_production(alt));
      if (bar == std::string::npos) break;
      i = bar + 1;
    }
    g.index_.emplace(def.name, g.defs_.size());
    g.defs_.push_back(std::move(def));
  }

  if (g.defs_.empty()) throw SyntaxError("grammar defines no rules");

  for (const auto& d : g.defs_)
    for (const auto& alt : d.alternatives)
      for (const auto& s : alt.symbols)
        if (!s.is_terminal() && !g.index_.count(s.text))
          throw UndefinedNonterminal("nonterminal <" + s.text + "> referenced but never defined");

  return g;
}

}  // namespace frobevo
