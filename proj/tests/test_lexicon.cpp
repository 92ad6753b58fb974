#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "testutil.hpp"
#include "turnsig/errors.hpp"
#include "turnsig/lexicon.hpp"

using namespace turnsig;
using namespace turnsig::lex;

#ifndef TURNSIG_LEXICON_DIR
#define TURNSIG_LEXICON_DIR "lexicons"
#endif

TEST_CASE("prefix and literal matching") {
  auto l = Lexicon::parse("test\tcategory\nknow*\n");
  CHECK(match_count(l, {"know", "knowing", "now"}) == 2);
  CHECK(match_count(l, {}) == 0);

  auto lit = Lexicon::parse("test\tcategory\nall\nnever\n");
  CHECK(match_count(lit, {"all", "or", "nothing", "never", "never"}) == 3);
}

TEST_CASE("longest pattern wins, literal beats equal-length prefix") {
  auto l = Lexicon::parse("t\tweighted\nknow\t1.0\nknow*\t10.0\nknowing\t100.0\n");
  CHECK(l.match("know")->weight == 1.0);       // literal over know*
  CHECK(l.match("knowing")->weight == 100.0);  // longer literal over know*
  CHECK(l.match("knows")->weight == 10.0);     // only the prefix applies
  CHECK(l.match("unknown") == nullptr);
}

TEST_CASE("weighted_score formula") {
  auto l = Lexicon::parse("mood\tweighted\nhappy\t2.0\nsad\t-1.0\n");
  CHECK(weighted_score(l, {"happy", "happy", "sad", "go"}) == doctest::Approx(0.75));
  CHECK(weighted_score(l, {}) == 0.0);

  auto zero = Lexicon::parse("z\tweighted\nhappy\t0.0\nsad\t0.0\n");
  CHECK(weighted_score(zero, {"happy", "sad"}) == 0.0);

  SUBCASE("linear in the weights") {
    auto scaled = Lexicon::parse("mood\tweighted\nhappy\t6.0\nsad\t-3.0\n");
    std::vector<std::string> toks{"happy", "sad", "sad", "x", "happy", "happy"};
    CHECK(weighted_score(scaled, toks) == doctest::Approx(3.0 * weighted_score(l, toks)).epsilon(1e-15));
  }
}

TEST_CASE("kind preconditions") {
  auto cat = Lexicon::parse("c\tcategory\nfoo\n");
  auto wgt = Lexicon::parse("w\tweighted\nfoo\t1.0\n");
  CHECK_THROWS_AS(match_count(wgt, {"foo"}), std::invalid_argument);
  CHECK_THROWS_AS(weighted_score(cat, {"foo"}), std::invalid_argument);
}

TEST_CASE("parser error paths") {
  CHECK_THROWS_AS(Lexicon::parse(""), ParseError);
  CHECK_THROWS_AS(Lexicon::parse("name\tcategory\n"), ParseError);          // no entries
  CHECK_THROWS_AS(Lexicon::parse("name\tbogus\nfoo\n"), ParseError);        // bad kind
  CHECK_THROWS_AS(Lexicon::parse("n\tcategory\nfoo\nfoo\n"), ParseError);   // duplicate
  CHECK_THROWS_AS(Lexicon::parse("n\tweighted\nfoo\tabc\n"), ParseError);   // bad weight
  CHECK_THROWS_AS(Lexicon::parse("n\tweighted\nfoo\n"), ParseError);        // missing weight
  CHECK_THROWS_AS(Lexicon::parse("n\tcategory\nfoo\t2.0\n"), ParseError);   // weight on category
  CHECK_THROWS_AS(Lexicon::parse("n\tcategory\nFoo\n"), ParseError);        // not lowercase
  CHECK_THROWS_AS(Lexicon::parse("n\tcategory\nf*o\n"), ParseError);        // inner wildcard
  CHECK_THROWS_AS(Lexicon::parse("n\tcategory\n*\n"), ParseError);          // empty prefix

  SUBCASE("comments and blank lines are fine") {
    auto l = Lexicon::parse("# top comment\nn\tcategory\n\nfoo # trailing\nbar\n");
    CHECK(l.size() == 2);
    CHECK(l.match("foo") != nullptr);
  }
}

TEST_CASE("match_count bounded by token count and order-invariant") {
  testutil::Rng rng(3);
  auto l = Lexicon::parse("t\tcategory\naa\nbb*\ncc\n");
  std::vector<std::string> pool{"aa", "bb", "bbq", "cc", "dd", "ee", "ccx"};
  for (int it = 0; it < 50; ++it) {
    std::vector<std::string> toks;
    for (int i = 0, n = rng.uniform_int(0, 12); i < n; ++i)
      toks.push_back(pool[static_cast<std::size_t>(rng.uniform_int(0, 6))]);
    int count = match_count(l, toks);
    CHECK(count <= static_cast<int>(toks.size()));
    auto shuffled = toks;
    std::sort(shuffled.begin(), shuffled.end());
    CHECK(match_count(l, shuffled) == count);
  }
}

TEST_CASE("shipped lexicon directory loads with the expected inventory") {
  auto set = LexiconSet::load_dir(TURNSIG_LEXICON_DIR);
  const char* required[] = {
      "function_words", "ppron", "i", "we", "you", "shehe", "they", "ipron", "articles",
      "prepositions", "auxiliary_verbs", "adverbs", "conjunctions", "negations", "quantifiers",
      "swear", "nonfluencies", "fillers", "absolutist", "affect", "posemo", "negemo", "anxiety",
      "anger", "sadness", "social", "family", "friend", "insight", "cause", "cogproc", "drives",
      "reward", "risk", "health", "empathy", "distress", "optimism"};
  for (const char* name : required) CHECK_NOTHROW(set.require(name));
  CHECK(set.require("absolutist").size() == 19);
  CHECK(set.require("empathy").kind() == LexiconKind::Weighted);
  CHECK(set.require("function_words").kind() == LexiconKind::Category);
  CHECK_THROWS_AS(set.require("no_such"), DataError);
}
