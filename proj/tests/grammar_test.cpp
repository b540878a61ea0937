// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "frobevo/grammar.hpp"
#include "test_support.hpp"

using namespace frobevo;

TEST_CASE("expression grammar parses with expected shape") {
  Grammar g = test::expr_grammar();
  REQUIRE(g.nonterminals().size() == 4);
  CHECK(g.start_def().name == "expr");
  CHECK(g.alternative_count("expr") == 5);
  CHECK(g.alternative_count("op") == 3);
  CHECK(g.alternative_count("var") == 2);
  CHECK(g.alternative_count("const") == 6);

  // first rule of <expr> is the self-recursive one
  const auto& first = g.def("expr").alternatives[0].symbols;
  REQUIRE(first.size() == 3);
  CHECK(first[0] == Symbol{Symbol::Kind::Nonterminal, "expr"});
  CHECK(first[1] == Symbol{Symbol::Kind::Nonterminal, "op"});
  CHECK(first[2] == Symbol{Symbol::Kind::Nonterminal, "expr"});

  // terminals preserved verbatim
  CHECK(g.def("const").alternatives[4].symbols[0] == Symbol{Symbol::Kind::Terminal, "1.0"});
  CHECK(g.def("const").alternatives[5].symbols[0] == Symbol{Symbol::Kind::Terminal, "3.0"});
}

TEST_CASE("shipped grammar file matches the inline grammar") {
  Grammar shipped = test::shipped_grammar();
  CHECK(shipped == test::expr_grammar());
}

TEST_CASE("minimal grammar") {
  Grammar g = parse_bnf("<s> ::= x");
  REQUIRE(g.nonterminals().size() == 1);
  CHECK(g.alternative_count("s") == 1);
  REQUIRE(g.def("s").alternatives[0].symbols.size() == 1);
  CHECK(g.def("s").alternatives[0].symbols[0].is_terminal());
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_bnf("<s> ::= <t>"), UndefinedNonterminal);
  CHECK_THROWS_AS(parse_bnf("<s> ::= x\n<s> ::= y"), DuplicateDefinition);
  CHECK_THROWS_AS(parse_bnf("<s ::= x"), SyntaxError);          // unclosed angle bracket on lhs
  CHECK_THROWS_AS(parse_bnf("<s> ::= <t x"), SyntaxError);      // unclosed angle bracket in body
  CHECK_THROWS_AS(parse_bnf("<s> ::= a<b"), SyntaxError);       // stray bracket inside token
  CHECK_THROWS_AS(parse_bnf("<s> ::= x |"), SyntaxError);       // empty alternative
  CHECK_THROWS_AS(parse_bnf("<s> ::= x | | y"), SyntaxError);   // empty alternative
  CHECK_THROWS_AS(parse_bnf("<s> ::="), SyntaxError);           // empty body
  CHECK_THROWS_AS(parse_bnf("just some text"), SyntaxError);    // no ::=
  CHECK_THROWS_AS(parse_bnf("| x"), SyntaxError);               // continuation before any rule
  CHECK_THROWS_AS(parse_bnf(""), SyntaxError);                  // no rules at all
  CHECK_THROWS_AS(parse_bnf("# only a comment\n"), SyntaxError);
  CHECK_THROWS_AS(test::expr_grammar().alternative_count("nope"), UnknownNonterminal);
  CHECK_THROWS_AS(parse_bnf("x ::= y"), SyntaxError);           // lhs must be <nonterminal>
}

TEST_CASE("comments and blank lines are ignored") {
  Grammar g = parse_bnf("# header\n\n<s> ::= a\n  # indented comment\n       | b\n");
  CHECK(g.alternative_count("s") == 2);
}

TEST_CASE("alternative order is source order") {
  // unique terminal per alternative, in a deliberately shuffled spelling
  Grammar g = parse_bnf("<s> ::= t3 | t0 | t2 | t1");
  const auto& alts = g.def("s").alternatives;
  REQUIRE(alts.size() == 4);
  CHECK(alts[0].symbols[0].text == "t3");
  CHECK(alts[1].symbols[0].text == "t0");
  CHECK(alts[2].symbols[0].text == "t2");
  CHECK(alts[3].symbols[0].text == "t1");
}

TEST_CASE("start symbol is the first nonterminal in file order") {
  Grammar g = parse_bnf("<b> ::= <a>\n<a> ::= x");
  CHECK(g.start() == 0);
  CHECK(g.start_def().name == "b");
}

TEST_CASE("round-trip: to_bnf then parse is structurally identical") {
  for (const char* src : {test::kExprGrammar, "<s> ::= x", "<a> ::= <b> <b> | y\n<b> ::= z | ( <a> )"}) {
    Grammar g = parse_bnf(src);
    Grammar again = parse_bnf(g.to_bnf());
    CHECK(g == again);
    CHECK(again.to_bnf() == g.to_bnf());
  }
}

TEST_CASE("parsing is deterministic") {
  Grammar a = parse_bnf(test::kExprGrammar);
  Grammar b = parse_bnf(test::kExprGrammar);
  CHECK(a == b);
}
