#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <deque>
#include <random>
#include <set>

#include "actpres/monoid.hpp"
#include "actpres/rewriting.hpp"
#include "actpres/word.hpp"
#include "fixtures.hpp"

using namespace actpres;
using namespace actpres::fixtures;

namespace {

// Independent rewriting oracle: instantiate every schema up to `bound`, then
// explore all reduction orders by naive substring scanning. Used to validate
// the engine's matching, not built from it.
std::vector<RewriteRule> instantiate_rules(const RewritingSystem& sys, int bound) {
  std::vector<RewriteRule> out = sys.rules;
  for (const RuleSchema& s : sys.schemas)
    for (int i = s.min_count; i <= bound; ++i) out.push_back(s.instance(i));
  return out;
}

std::set<Word> oracle_normal_forms(const std::vector<RewriteRule>& rules, const Word& start) {
  std::set<Word> seen{start};
  std::set<Word> nfs;
  std::deque<Word> queue{start};
  while (!queue.empty()) {
    Word cur = queue.front();
    queue.pop_front();
    bool reducible = false;
    for (const RewriteRule& r : rules) {
      for (std::size_t p = 0; p + r.lhs.size() <= cur.size(); ++p) {
        bool hit = true;
        for (std::size_t j = 0; j < r.lhs.size(); ++j)
          if (cur[p + j] != r.lhs[j]) {
            hit = false;
            break;
          }
        if (!hit) continue;
        reducible = true;
        Word next = cur.prefix(p).concat(r.rhs).concat(cur.suffix_from(p + r.lhs.size()));
        if (seen.insert(next).second) queue.push_back(next);
      }
    }
    if (!reducible) nfs.insert(cur);
  }
  return nfs;
}

Word random_word(std::mt19937_64& rng, const Alphabet& a, int max_len) {
  std::uniform_int_distribution<int> len_dist(0, max_len);
  std::uniform_int_distribution<int> letter_dist(0, static_cast<int>(a.size()) - 1);
  Word w;
  int len = len_dist(rng);
  for (int i = 0; i < len; ++i) w.ids.push_back(letter_dist(rng));
  return w;
}

}  // namespace

TEST_CASE("letter tokens reject reserved characters") {
  CHECK(valid_letter_token("a"));
  CHECK(valid_letter_token("ab"));
  CHECK(valid_letter_token("z_2"));
  CHECK_FALSE(valid_letter_token(""));
  CHECK_FALSE(valid_letter_token("1"));
  CHECK_FALSE(valid_letter_token("->"));
  CHECK_FALSE(valid_letter_token("a->b"));
  CHECK_FALSE(valid_letter_token("a b"));
  CHECK_FALSE(valid_letter_token("x."));
  CHECK_FALSE(valid_letter_token("x^2"));
  CHECK_FALSE(valid_letter_token("(y)"));
  CHECK_FALSE(valid_letter_token("u=v"));
}

TEST_CASE("alphabets are ordered sets of distinct letters") {
  Alphabet a({"a", "b", "c"});
  CHECK(a.size() == 3);
  CHECK(*a.index_of("b") == 1);
  CHECK_FALSE(a.index_of("d").has_value());
  CHECK_THROWS_AS(Alphabet({"a", "a"}), Error);
  CHECK_THROWS_AS(Alphabet({"a", "1"}), Error);

  Alphabet b({"x", "y"});
  CHECK(a.disjoint_from(b));
  Alphabet c({"x", "b"});
  CHECK_FALSE(a.disjoint_from(c));

  Alphabet ext = a.extended({"d"});
  CHECK(ext.size() == 4);
  CHECK(*ext.index_of("d") == 3);
  CHECK_THROWS_AS(a.extended({"b"}), Error);
}

TEST_CASE("word parsing and printing round-trip, with 1 as the empty word") {
  Alphabet a({"a", "b"});
  Word w = parse_word(a, "a b b a");
  CHECK(w.size() == 4);
  CHECK(print_word(a, w) == "a b b a");
  CHECK(parse_word(a, "1").empty());
  CHECK(print_word(a, Word{}) == "1");
  CHECK(parse_word(a, "1 a 1 b").size() == 2);
  CHECK_THROWS_AS(parse_word(a, "a x"), Error);

  CHECK(w.starts_with(parse_word(a, "a b")));
  CHECK_FALSE(w.starts_with(parse_word(a, "b")));
  CHECK(w.prefix(2) == parse_word(a, "a b"));
  CHECK(w.suffix_from(2) == parse_word(a, "b a"));
  CHECK(w.subword(1, 2) == parse_word(a, "b b"));
}

TEST_CASE("shortlex orders by length then letter indices") {
  Alphabet a({"a", "b"});
  CHECK(shortlex_less(parse_word(a, "b"), parse_word(a, "a a")));
  CHECK(shortlex_less(parse_word(a, "a b"), parse_word(a, "b a")));
  CHECK_FALSE(shortlex_less(parse_word(a, "a"), parse_word(a, "a")));
  CHECK(shortlex_less(Word{}, parse_word(a, "a")));
}

TEST_CASE("free act elements parse and print") {
  Alphabet gens({"x", "y"});
  Alphabet mon({"a", "b"});
  FreeActElement e = parse_element(gens, mon, "x . a b");
  CHECK(e.gen == 0);
  CHECK(e.m == parse_word(mon, "a b"));
  CHECK(print_element(gens, mon, e) == "x . a b");
  FreeActElement unit = parse_element(gens, mon, "y . 1");
  CHECK(unit.m.empty());
  CHECK(print_element(gens, mon, unit) == "y . 1");
  CHECK_THROWS_AS(parse_element(gens, mon, "a . a"), Error);
  CHECK_THROWS_AS(parse_element(gens, mon, "x a b"), Error);
}

TEST_CASE("termination check accepts the sample systems and rejects growth") {
  CHECK(check_termination(ex5_7_system()).ok);
  CHECK(check_termination(ex5_13_system()).ok);
  CHECK(check_termination(ex5_14_system()).ok);
  CHECK(check_termination(ex6_10_system()).ok);

  RewritingSystem grow;
  grow.alphabet = Alphabet({"a", "b"});
  grow.push_rule(RewriteRule{mkw(grow.alphabet, "a"), mkw(grow.alphabet, "a b")});
  CHECK_FALSE(check_termination(grow).ok);

  // pumped exponent that grows as fast as the left side
  RewritingSystem pump;
  pump.alphabet = Alphabet({"a", "c"});
  RuleSchema s;
  s.lhs_prefix = mkw(pump.alphabet, "a");
  s.pumped = *pump.alphabet.index_of("c");
  s.min_count = 2;
  s.lhs_suffix = mkw(pump.alphabet, "a");
  s.rhs_prefix = mkw(pump.alphabet, "a");
  s.rhs_pump = true;
  s.rhs_pumped = *pump.alphabet.index_of("c");
  s.rhs_exp_affine = true;
  s.rhs_exp_shift = 1;
  s.rhs_suffix = Word{};
  pump.push_schema(s);
  CHECK_FALSE(check_termination(pump).ok);

  // exponent negative at the smallest instance
  RuleSchema neg = pump.schemas[0];
  neg.rhs_exp_shift = -3;
  RewritingSystem negative;
  negative.alphabet = pump.alphabet;
  negative.push_schema(neg);
  CHECK_FALSE(check_termination(negative).ok);
}

TEST_CASE("deterministic normal forms agree with the exhaustive rewriter") {
  const int kMaxLen = 9;
  const int kSamples = 300;
  int case_idx = 0;
  for (const RewritingSystem& sys :
       {ex5_7_system(), ex5_13_system(), ex5_14_system(), ex6_10_system()}) {
    std::mt19937_64 rng(20240800u + static_cast<unsigned>(case_idx++));
    std::vector<RewriteRule> flat = instantiate_rules(sys, kMaxLen);
    for (int n = 0; n < kSamples; ++n) {
      Word w = random_word(rng, sys.alphabet, kMaxLen);
      Word nf = normal_form(sys, w);
      std::set<Word> oracle = oracle_normal_forms(flat, w);
      CAPTURE(print_word(sys.alphabet, w));
      REQUIRE(oracle.count(nf) == 1);
      CHECK(is_irreducible(sys, nf));
      CHECK(normal_form(sys, nf) == nf);
      CHECK(nf.size() <= w.size());
      ReachableNormalForms all = all_normal_forms(sys, w);
      REQUIRE(all.complete);
      CHECK(std::set<Word>(all.forms.begin(), all.forms.end()) == oracle);
    }
  }
}

TEST_CASE("pinned normal forms") {
  RewritingSystem s7 = ex5_7_system();
  CHECK(normal_form(s7, mkw(s7.alphabet, "a b b b a")) == mkw(s7.alphabet, "a b a"));
  CHECK(normal_form(s7, mkw(s7.alphabet, "s a")) == mkw(s7.alphabet, "a"));
  CHECK(normal_form(s7, mkw(s7.alphabet, "t b a b")) == mkw(s7.alphabet, "b a b"));
  CHECK(normal_form(s7, Word{}) == Word{});

  RewritingSystem s14 = ex5_14_system();
  CHECK(normal_form(s14, mkw(s14.alphabet, "c a b")) == mkw(s14.alphabet, "a b"));
  CHECK(normal_form(s14, mkw(s14.alphabet, "a a")) == mkw(s14.alphabet, "a"));
  CHECK(normal_form(s14, mkw(s14.alphabet, "a b b a")) == mkw(s14.alphabet, "a b a"));
  CHECK(normal_form(s14, mkw(s14.alphabet, "a a b b a")) == mkw(s14.alphabet, "a b a"));

  RewritingSystem s13 = ex5_13_system();
  CHECK(normal_form(s13, mkw(s13.alphabet, "a c c a")) == mkw(s13.alphabet, "b c b"));
  CHECK(normal_form(s13, mkw(s13.alphabet, "a c c c a")) == mkw(s13.alphabet, "b c c b"));
  CHECK(is_irreducible(s13, mkw(s13.alphabet, "a c a")));  // below the exponent bound
}

TEST_CASE("schema matching takes the maximal pumped run") {
  RewritingSystem s14 = ex5_14_system();
  // two overlapping redexes: the leftmost one wins, then the residue reduces
  Word w = mkw(s14.alphabet, "a b b a b b a");
  CHECK(normal_form(s14, w) == mkw(s14.alphabet, "a b a b a"));
  // one redex spanning the whole word
  CHECK(normal_form(s14, mkw(s14.alphabet, "a b b b b b a")) == mkw(s14.alphabet, "a b a"));
}

TEST_CASE("local confluence holds for three sample systems at bound 8") {
  for (RewritingSystem sys : {ex5_7_system(), ex5_14_system(), ex6_10_system()}) {
    ConfluenceReport rep = check_local_confluence(sys, 8);
    CAPTURE(rep.failures.empty() ? std::string("-")
                                 : print_word(sys.alphabet, rep.failures[0].overlap));
    CHECK(rep.ok);
    CHECK(rep.pairs_checked > 0);
  }
  RewritingSystem lone;
  lone.alphabet = Alphabet({"a", "b"});
  lone.push_rule(RewriteRule{mkw(lone.alphabet, "a b"), mkw(lone.alphabet, "b")});
  CHECK(check_local_confluence(lone, 8).ok);
}

TEST_CASE("a genuinely non-confluent system is detected") {
  // The c-pumped collapse family has a word with two distinct normal forms:
  // the two overlapping redexes of "a c c a c c a" never rejoin.
  RewritingSystem s13 = ex5_13_system();
  Word w = mkw(s13.alphabet, "a c c a c c a");
  ReachableNormalForms all = all_normal_forms(s13, w);
  REQUIRE(all.complete);
  REQUIRE(all.forms.size() == 2);
  CHECK(all.forms[0] == mkw(s13.alphabet, "a c c b c b"));
  CHECK(all.forms[1] == mkw(s13.alphabet, "b c b c c a"));

  ConfluenceReport rep = check_local_confluence(s13, 8);
  CHECK_FALSE(rep.ok);
  REQUIRE_FALSE(rep.failures.empty());
  // the reported pair is a real divergence, re-checked through the oracle
  const CriticalPairFailure& f = rep.failures[0];
  std::set<Word> oracle = oracle_normal_forms(instantiate_rules(s13, 12), f.overlap);
  CHECK(oracle.size() >= 2);
  CHECK(oracle.count(f.reduct_a) == 1);
  CHECK(oracle.count(f.reduct_b) == 1);
}

TEST_CASE("irreducible enumeration equals filtering by irreducibility") {
  for (const RewritingSystem& sys : {ex5_7_system(), ex5_14_system()}) {
    std::vector<Word> listed = enumerate_irreducible(sys, 4);
    std::vector<Word> expected;
    std::deque<Word> queue{Word{}};
    while (!queue.empty()) {
      Word w = queue.front();
      queue.pop_front();
      if (is_irreducible(sys, w)) expected.push_back(w);
      if (w.size() == 4) continue;
      for (int l = 0; l < static_cast<int>(sys.alphabet.size()); ++l) {
        Word next = w;
        next.ids.push_back(l);
        queue.push_back(next);
      }
    }
    std::sort(expected.begin(), expected.end(), shortlex_less);
    CHECK(listed == expected);
  }
}

TEST_CASE("ancestors finds exactly the words reducing to the target") {
  RewritingSystem s14 = ex5_14_system();
  AncestorBall ball = ancestors(s14, mkw(s14.alphabet, "a b"), 5);
  CHECK_FALSE(ball.closed);  // c^k a b reduces to a b for every k
  CHECK(ball.words.count(mkw(s14.alphabet, "a b")));
  CHECK(ball.words.count(mkw(s14.alphabet, "c a b")));
  CHECK(ball.words.count(mkw(s14.alphabet, "a a b")));
  CHECK(ball.words.count(mkw(s14.alphabet, "c c a b")));
  CHECK_FALSE(ball.words.count(mkw(s14.alphabet, "b a b")));

  RewritingSystem s13 = ex5_13_system();
  AncestorBall small = ancestors(s13, mkw(s13.alphabet, "b c b"), 10);
  CHECK(small.closed);
  CHECK(small.words.size() == 2);
  CHECK(small.words.count(mkw(s13.alphabet, "a c c a")));
}

TEST_CASE("congruence class search closes on finite classes") {
  RewritingSystem s13 = ex5_13_system();
  WordClassBall cls = congruence_class(s13, mkw(s13.alphabet, "a c c b c b"), 16);
  CHECK(cls.closed);
  CHECK(cls.words.size() == 3);
  CHECK(cls.words.count(mkw(s13.alphabet, "a c c a c c a")));
  CHECK(cls.words.count(mkw(s13.alphabet, "b c b c c a")));

  WordClassBall tiny = congruence_class(s13, mkw(s13.alphabet, "b c b"), 16);
  CHECK(tiny.closed);
  CHECK(tiny.words.size() == 2);
}

TEST_CASE("frozen prefixes") {
  RewritingSystem s7 = ex5_7_system();
  CHECK(frozen_prefix(s7, mkw(s7.alphabet, "b a")) == mkw(s7.alphabet, "b a"));
  CHECK(frozen_prefix(s7, mkw(s7.alphabet, "b b a")) == mkw(s7.alphabet, "b b a"));
  CHECK(frozen_prefix(s7, mkw(s7.alphabet, "b b b b b a")) == mkw(s7.alphabet, "b b b b b a"));

  RewritingSystem s14 = ex5_14_system();
  CHECK(frozen_prefix(s14, mkw(s14.alphabet, "a")) == mkw(s14.alphabet, "a"));
  CHECK(frozen_prefix(s14, mkw(s14.alphabet, "a b")) == mkw(s14.alphabet, "a b"));

  RewritingSystem s13 = ex5_13_system();
  CHECK(frozen_prefix(s13, mkw(s13.alphabet, "b c b")) == mkw(s13.alphabet, "b c b"));

  // a word whose first letter can be rewritten away has no frozen prefix
  RewritingSystem drift;
  drift.alphabet = Alphabet({"a", "b", "c"});
  drift.push_rule(RewriteRule{mkw(drift.alphabet, "a b"), mkw(drift.alphabet, "c")});
  CHECK(frozen_prefix(drift, mkw(drift.alphabet, "a")) == Word{});
}

TEST_CASE("free monoid handle") {
  Monoid m = Monoid::free_monoid(Alphabet({"a", "b"}));
  CHECK(m.kind() == Monoid::Kind::Free);
  CHECK(m.multiply(mkw(m.letters(), "a b"), mkw(m.letters(), "a")) == mkw(m.letters(), "a b a"));
  CHECK(m.equal(mkw(m.letters(), "a"), mkw(m.letters(), "a")));
  CHECK_FALSE(m.equal(mkw(m.letters(), "a"), mkw(m.letters(), "b")));

  Monoid one = Monoid::free_monoid(Alphabet({"a"}));
  std::vector<Word> ball = one.elements(3);
  CHECK(ball.size() == 4);

  DivisorResult d = m.left_divisors(mkw(m.letters(), "a b"), mkw(m.letters(), "a b a"));
  CHECK(d.exact);
  REQUIRE(d.multipliers.size() == 1);
  CHECK(d.multipliers[0] == mkw(m.letters(), "a"));
  DivisorResult none = m.left_divisors(mkw(m.letters(), "b"), mkw(m.letters(), "a b"));
  CHECK(none.exact);
  CHECK(none.multipliers.empty());
}

TEST_CASE("rewriting monoid handle") {
  RewritingSystem s14 = ex5_14_system();
  Monoid m = Monoid::from_rules(s14);
  CHECK(m.multiply(mkw(m.letters(), "c a"), mkw(m.letters(), "b")) == mkw(m.letters(), "a b"));
  CHECK(m.equal(mkw(m.letters(), "c a b"), mkw(m.letters(), "a b")));
  CHECK(m.is_identity(parse_word(m.letters(), "1")));
  CHECK_FALSE(m.is_identity(mkw(m.letters(), "a")));

  RewritingSystem grow;
  grow.alphabet = Alphabet({"a"});
  grow.push_rule(RewriteRule{mkw(grow.alphabet, "a"), mkw(grow.alphabet, "a a")});
  CHECK_THROWS_AS(Monoid::from_rules(grow), Error);
}

TEST_CASE("equality through zigzag search when normal forms disagree") {
  RewritingSystem s13 = ex5_13_system();
  Monoid m = Monoid::from_rules(s13);
  Word u = mkw(m.letters(), "a c c b c b");
  Word v = mkw(m.letters(), "b c b c c a");
  CHECK(m.canon(u) != m.canon(v));
  auto eq = m.try_equal(u, v);
  REQUIRE(eq.has_value());
  CHECK(*eq);
  auto neq = m.try_equal(mkw(m.letters(), "b c b"), mkw(m.letters(), "b c c b"));
  REQUIRE(neq.has_value());
  CHECK_FALSE(*neq);
}

TEST_CASE("finite monoid tables") {
  // left-zero band adjoined with an identity: x y = x for x, y != 1
  std::vector<int> table = {
      0, 1, 2,  // 1 * _
      1, 1, 1,  // u * _
      2, 2, 2,  // v * _
  };
  FiniteMonoid band(3, table, 0, {"1e", "u", "v"}, Alphabet({"u", "v"}), {1, 2});
  CHECK(band.eval(Word{}) == 0);
  CHECK(band.eval(parse_word(band.letters(), "u v")) == 1);
  CHECK(band.canonical_word(0).empty());
  CHECK(band.canonical_word(1) == parse_word(band.letters(), "u"));
  CHECK(band.canonical_word(2) == parse_word(band.letters(), "v"));

  Monoid m = Monoid::from_table(band);
  CHECK(m.elements(0).size() == 3);
  DivisorResult d = m.left_divisors(parse_word(m.letters(), "u"), parse_word(m.letters(), "u"));
  CHECK(d.exact);
  CHECK(d.multipliers.size() == 3);  // 1, u, v all fix u on the right
  DivisorResult none = m.left_divisors(parse_word(m.letters(), "u"), parse_word(m.letters(), "v"));
  CHECK(none.exact);
  CHECK(none.multipliers.empty());

  // non-associative table rejected: (q q) q = q but q (q q) = p
  std::vector<int> bad = {
      0, 1, 2,
      1, 1, 2,
      2, 1, 1,
  };
  CHECK_THROWS_AS(FiniteMonoid(3, bad, 0, {"1e", "p", "q"}, Alphabet({"p", "q"}), {1, 2}), Error);

  // identity law violation rejected
  std::vector<int> bad_id = {
      0, 0,
      1, 1,
  };
  CHECK_THROWS_AS(FiniteMonoid(2, bad_id, 0, {"1e", "p"}, Alphabet({"p"}), {1}), Error);

  // unreachable element rejected
  CHECK_THROWS_AS(FiniteMonoid(3, table, 0, {"1e", "u", "v"}, Alphabet({"u"}), {1}), Error);
}

TEST_CASE("element words through a multiplication table presentation") {
  std::vector<int> table = {
      0, 1, 2,
      1, 1, 1,
      2, 2, 2,
  };
  FiniteMonoid band = cayley_monoid(3, table, 0, {"e", "u", "v"});
  RewritingSystem sys = cayley_presentation(band, {"ze", "zu", "zv"});
  CHECK(check_termination(sys).ok);
  CHECK(check_local_confluence(sys, 4).ok);

  Monoid m = Monoid::from_rules(sys);
  // z_u z_v collapses to z_u, the identity letter vanishes
  CHECK(m.equal(parse_word(m.letters(), "zu zv"), parse_word(m.letters(), "zu")));
  CHECK(m.canon(parse_word(m.letters(), "ze")).empty());

  std::mt19937_64 rng(7);
  for (int n = 0; n < 200; ++n) {
    Word w = random_word(rng, m.letters(), 6);
    int direct = band.identity();
    for (LetterId l : w.ids) direct = band.mul(direct, static_cast<int>(l));
    Word nf = m.canon(w);
    int folded = band.identity();
    for (LetterId l : nf.ids) folded = band.mul(folded, static_cast<int>(l));
    CHECK(folded == direct);
  }
}

TEST_CASE("left division in rewriting monoids") {
  RewritingSystem s7 = ex5_7_system();
  ConfluenceReport rep = check_local_confluence(s7, 8);
  REQUIRE(rep.ok);
  s7.confluence = ConfluenceStatus::Checked;
  s7.confluence_bound = 8;
  Monoid m = Monoid::from_rules(s7);

  // no multiplier can turn b a into a b a: the b a prefix never unfreezes
  DivisorResult refuted = m.left_divisors(mkw(m.letters(), "b a"), mkw(m.letters(), "a b a"));
  CHECK(refuted.multipliers.empty());
  CHECK(refuted.exact);

  DivisorResult unit = m.left_divisors(mkw(m.letters(), "a b a"), mkw(m.letters(), "a b a"));
  REQUIRE(!unit.multipliers.empty());
  CHECK(unit.multipliers[0] == Word{});

  DivisorResult many = m.left_divisors(mkw(m.letters(), "a"), mkw(m.letters(), "a b a"));
  CHECK(std::find(many.multipliers.begin(), many.multipliers.end(), mkw(m.letters(), "b a")) !=
        many.multipliers.end());

  // exact closed-class division without confluence
  Monoid m13 = Monoid::from_rules(ex5_13_system());
  DivisorResult cca =
      m13.left_divisors(mkw(m13.letters(), "b c b"), mkw(m13.letters(), "b c b c c a"));
  CHECK(cca.exact);
  REQUIRE(cca.multipliers.size() == 1);
  CHECK(cca.multipliers[0] == mkw(m13.letters(), "c c a"));
  DivisorResult empty =
      m13.left_divisors(mkw(m13.letters(), "b c b"), mkw(m13.letters(), "b c c b"));
  CHECK(empty.exact);
  CHECK(empty.multipliers.empty());
}

TEST_CASE("monoid equality is a congruence on samples") {
  RewritingSystem s14 = ex5_14_system();
  s14.confluence = ConfluenceStatus::Checked;
  Monoid m = Monoid::from_rules(s14);
  std::mt19937_64 rng(99);
  for (int n = 0; n < 200; ++n) {
    Word u = random_word(rng, m.letters(), 6);
    Word v = random_word(rng, m.letters(), 6);
    Word w = random_word(rng, m.letters(), 4);
    if (!m.equal(u, v)) continue;
    CHECK(m.equal(u.concat(w), v.concat(w)));
    CHECK(m.equal(w.concat(u), w.concat(v)));
  }
}
