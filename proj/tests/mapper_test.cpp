// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "frobevo/mapper.hpp"
#include "test_support.hpp"

using namespace frobevo;

TEST_CASE("worked example maps to x + x") {
  Grammar g = test::expr_grammar();
  Chromosome c = Chromosome::from_string("120,44,42,96,189,64");
  Phenotype p = map_genotype(c, g);
  REQUIRE(p.valid());
  CHECK(p.text() == "x + x");
  CHECK(p.tokens == std::vector<std::string>{"x", "+", "x"});
  CHECK(p.codons_consumed == 6);
  CHECK(p.wraps_used == 0);
}

TEST_CASE("worked example trace follows the modulo arithmetic") {
  Grammar g = test::expr_grammar();
  MappingTrace t = trace_mapping(Chromosome::from_string("120,44,42,96,189,64"), g);
  REQUIRE(t.steps.size() == 6);

  // 120 = 0 (mod 5), 44 = 4 (mod 5), 42 = 0 (mod 2), 96 = 0 (mod 3)
  CHECK(t.steps[0].alternative == 0);
  CHECK(t.steps[1].alternative == 4);
  CHECK(t.steps[2].alternative == 0);
  CHECK(t.steps[3].alternative == 0);
  CHECK(t.steps[4].alternative == 4);  // 189 = 4 (mod 5)
  CHECK(t.steps[5].alternative == 0);  // 64 = 0 (mod 2)

  CHECK(t.steps[0].nonterminal == "expr");
  CHECK(t.steps[1].nonterminal == "expr");
  CHECK(t.steps[2].nonterminal == "var");
  CHECK(t.steps[3].nonterminal == "op");
  CHECK(t.steps[4].nonterminal == "expr");
  CHECK(t.steps[5].nonterminal == "var");

  CHECK(t.steps[0].form_text() == "<expr> <op> <expr>");
  CHECK(t.steps[1].form_text() == "<var> <op> <expr>");
  CHECK(t.steps[2].form_text() == "x <op> <expr>");
  CHECK(t.steps[3].form_text() == "x + <expr>");
  CHECK(t.steps[4].form_text() == "x + <var>");
  CHECK(t.steps[5].form_text() == "x + x");
  CHECK(t.result.text() == "x + x");
}

TEST_CASE("short derivation by hand: (4, 0) maps to x") {
  // 4 mod 5 = 4 selects <expr> -> <var>; 0 mod 2 = 0 selects <var> -> x
  Phenotype p = map_genotype(Chromosome{{4, 0}}, test::expr_grammar());
  REQUIRE(p.valid());
  CHECK(p.text() == "x");
  CHECK(p.codons_consumed == 2);
}

TEST_CASE("all-zero chromosome diverges") {
  Grammar g = test::expr_grammar();

  // rule 0 of <expr> is self-recursive, so the derivation never terminates.
  // With 200+ codons the expansion cap (500) fires inside the wrap budget.
  Chromosome wide;
  wide.codons.assign(200, 0);
  Phenotype p1 = map_genotype(wide, g);
  REQUIRE_FALSE(p1.valid());
  CHECK(*p1.invalid == InvalidReason::MaxExpansionsExceeded);
  CHECK(p1.codons_consumed == 500);

  // at the default length of 100, the wrap budget runs out first
  Chromosome narrow;
  narrow.codons.assign(100, 0);
  Phenotype p2 = map_genotype(narrow, g);
  REQUIRE_FALSE(p2.valid());
  CHECK(*p2.invalid == InvalidReason::MaxWrapsExceeded);
  CHECK(p2.wraps_used == 2);
  CHECK(p2.codons_consumed == 300);
}

TEST_CASE("single-alternative nonterminal still consumes a codon") {
  Grammar g = parse_bnf("<s> ::= x");
  MappingTrace t = trace_mapping(Chromosome{{7}}, g);
  REQUIRE(t.result.valid());
  REQUIRE(t.steps.size() == 1);
  CHECK(t.steps[0].alternative == 0);  // 7 mod 1 = 0
  CHECK(t.result.codons_consumed == 1);
  CHECK(t.result.text() == "x");
}

TEST_CASE("wrapping reuses codons from the start") {
  // "x + x" needs 6 codons; give only 3 so the mapper wraps once.
  // (120,44,42) then wraps: 120 -> op alt 0 (+), 44 -> expr alt 4, 42 -> var alt 0
  Phenotype p = map_genotype(Chromosome{{120, 44, 42}}, test::expr_grammar());
  REQUIRE(p.valid());
  CHECK(p.text() == "x + x");
  CHECK(p.wraps_used == 1);
  CHECK(p.codons_consumed == 6);
}

TEST_CASE("empty chromosome is invalid") {
  Phenotype p = map_genotype(Chromosome{}, test::expr_grammar());
  CHECK_FALSE(p.valid());
}

TEST_CASE("mapping is deterministic") {
  Grammar g = test::expr_grammar();
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    Chromosome c = test::random_chromosome(rng, 30);
    Phenotype a = map_genotype(c, g);
    Phenotype b = map_genotype(c, g);
    CHECK(a.tokens == b.tokens);
    CHECK(a.invalid == b.invalid);
    CHECK(a.codons_consumed == b.codons_consumed);
    CHECK(a.wraps_used == b.wraps_used);
  }
}

TEST_CASE("trace replay re-derives every valid phenotype") {
  Grammar g = test::expr_grammar();
  Rng rng(17);
  int replayed = 0;
  for (int i = 0; i < 2000 && replayed < 100; ++i) {
    Chromosome c = test::random_chromosome(rng, 40);
    MappingTrace t = trace_mapping(c, g);
    if (!t.result.valid()) continue;
    ++replayed;

    // replay the leftmost derivation using only (nonterminal, alternative)
    std::vector<Symbol> form{Symbol{Symbol::Kind::Nonterminal, g.start_def().name}};
    for (const TraceStep& step : t.steps) {
      size_t leftmost = 0;
      while (leftmost < form.size() && form[leftmost].is_terminal()) ++leftmost;
      REQUIRE(leftmost < form.size());
      REQUIRE(form[leftmost].text == step.nonterminal);
      const auto& alt = g.def(step.nonterminal).alternatives.at(step.alternative).symbols;
      form.erase(form.begin() + static_cast<std::ptrdiff_t>(leftmost));
      form.insert(form.begin() + static_cast<std::ptrdiff_t>(leftmost), alt.begin(), alt.end());
    }
    std::vector<std::string> tokens;
    for (const Symbol& s : form) {
      REQUIRE(s.is_terminal());
      tokens.push_back(s.text);
    }
    CHECK(tokens == t.result.tokens);
  }
  CHECK(replayed == 100);
}

TEST_CASE("consumption bound holds") {
  Grammar g = test::expr_grammar();
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    size_t len = 1 + rng.below(60);
    Chromosome c = test::random_chromosome(rng, len);
    Phenotype p = map_genotype(c, g);
    CHECK(p.codons_consumed <= c.size() * static_cast<size_t>(p.wraps_used + 1));
  }
}

TEST_CASE("codons beyond the consumed prefix cannot change the phenotype") {
  Grammar g = test::expr_grammar();
  Rng rng(31);
  int checked = 0;
  for (int i = 0; i < 500 && checked < 60; ++i) {
    Chromosome c = test::random_chromosome(rng, 50);
    Phenotype p = map_genotype(c, g);
    if (!p.valid() || p.wraps_used != 0 || p.codons_consumed >= c.size()) continue;
    ++checked;
    Chromosome mutated = c;
    for (size_t j = p.codons_consumed; j < mutated.size(); ++j)
      mutated.codons[j] = static_cast<uint8_t>(rng.below(256));
    Phenotype q = map_genotype(mutated, g);
    REQUIRE(q.valid());
    CHECK(q.tokens == p.tokens);
  }
  CHECK(checked == 60);
}

TEST_CASE("chromosome string round-trip and validation") {
  Chromosome c = Chromosome::from_string(" 120, 44,42 ");
  CHECK(c.codons == std::vector<uint8_t>{120, 44, 42});
  CHECK(Chromosome::from_string(c.to_string()) == c);
  CHECK_THROWS_AS(Chromosome::from_string("256"), ParseError);
  CHECK_THROWS_AS(Chromosome::from_string("1,,2"), ParseError);
  CHECK_THROWS_AS(Chromosome::from_string("12a"), ParseError);
}
