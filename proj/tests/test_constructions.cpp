#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "actpres/act.hpp"
#include "actpres/constructions.hpp"
#include "actpres/monoid.hpp"
#include "actpres/presentation.hpp"
#include "fixtures.hpp"
#include "actpres/sampling.hpp"

using namespace actpres;
using namespace actpres::fixtures;
using namespace actpres::sampling;

namespace {

FreeActElement el(int gen, const Alphabet& letters, const std::string& text) {
  return FreeActElement{gen, parse_word(letters, text)};
}

// Member flags over the original act, translated to the numbering of
// act_from_presentation(pres) so they can seed a finite construction scene.
std::vector<char> presented_flags(const ActPresentation& pres, const std::vector<int>& image,
                                  const FiniteAct& act, const std::vector<char>& member) {
  PresentedAct p = act_from_presentation(pres);
  const FiniteMonoid& fm = pres.monoid().table();
  std::vector<char> out(static_cast<std::size_t>(p.act.size()), 0);
  for (LetterId g = 0; g < static_cast<LetterId>(pres.generators().size()); ++g)
    for (int n = 0; n < fm.size(); ++n) {
      FreeActElement e{g, fm.canonical_word(n)};
      int orig = act.act_element(image[static_cast<std::size_t>(g)], n);
      out[static_cast<std::size_t>(p.element_of(e))] = member[static_cast<std::size_t>(orig)];
    }
  return out;
}

bool has_relation(const ActPresentation& pres, const FreeActElement& lhs, const FreeActElement& rhs) {
  const Monoid& m = pres.monoid();
  FreeActElement cl{lhs.gen, m.canon(lhs.m)};
  FreeActElement cr{rhs.gen, m.canon(rhs.m)};
  for (const ActRelation& r : pres.relations()) {
    if (r.lhs == cl && r.rhs == cr) return true;
    if (r.lhs == cr && r.rhs == cl) return true;
  }
  return false;
}

bool transcript_mentions(const ConstructionResult& res, const std::string& needle) {
  for (const std::string& line : res.transcript)
    if (line.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("restriction keeps the action and the element numbering") {
  std::mt19937_64 rng(2026);
  for (int round = 0; round < 6; ++round) {
    Monoid m = sample_monoid(rng);
    FiniteAct act = random_act(m, 3 + static_cast<int>(rng() % 6), rng);
    std::vector<char> member = random_subact_flags(act, 1 + static_cast<int>(rng() % 2), rng);
    RestrictedAct r = restrict_act(act, member);
    int count = 0;
    for (int a = 0; a < act.size(); ++a) {
      if (!member[static_cast<std::size_t>(a)]) {
        CHECK(r.index[static_cast<std::size_t>(a)] == -1);
        continue;
      }
      ++count;
      CHECK(r.act.name(r.index[static_cast<std::size_t>(a)]) == act.name(a));
      for (LetterId l = 0; l < static_cast<LetterId>(m.letters().size()); ++l)
        CHECK(r.act.act_letter(r.index[static_cast<std::size_t>(a)], l) ==
              r.index[static_cast<std::size_t>(act.act_letter(a, l))]);
    }
    CHECK(r.act.size() == count);
  }

  Monoid m2 = Monoid::from_table(two_element_monoid());
  FiniteAct chain(m2, {"p", "q"}, {1, 1});  // p.e = q, q.e = q
  CHECK_THROWS_WITH(restrict_act(chain, {1, 0}), doctest::Contains("not closed"));
  CHECK_THROWS_WITH(restrict_act(chain, {0, 0}), doctest::Contains("empty"));
  CHECK_THROWS_WITH(restrict_act(chain, {1}), doctest::Contains("do not match"));
}

TEST_CASE("monoid relations read off a table present the monoid") {
  for (const FiniteMonoid& fm : {two_element_monoid(), cyclic3_monoid(), left_zero_monoid()}) {
    std::vector<std::pair<Word, Word>> rels = monoid_relations_from_table(fm);
    for (const auto& [lhs, rhs] : rels) {
      CHECK(fm.eval(lhs) == fm.eval(rhs));
      CHECK(lhs != rhs);
    }
    // every length-(canon+1) word is reduced by some relation, so the set
    // rewrites any word to its canonical form
    for (int e = 0; e < fm.size(); ++e)
      for (LetterId z = 0; z < static_cast<LetterId>(fm.letters().size()); ++z) {
        Word w = fm.canonical_word(e).concat(Word{{z}});
        if (w == fm.canonical_word(fm.eval(w))) continue;
        bool covered = false;
        for (const auto& [lhs, rhs] : rels) covered = covered || lhs == w;
        CHECK(covered);
      }
  }
}

TEST_CASE("monoid relations from a rule system instantiate families up to the bound") {
  std::vector<std::pair<Word, Word>> rels = monoid_relations_from_rules(ex6_10_system(), 4);
  CHECK(rels.size() == 3);  // i = 2, 3, 4
  Alphabet a = ex6_10_system().alphabet;
  CHECK(rels.front().first == parse_word(a, "a b b a"));
  CHECK(rels.front().second == parse_word(a, "a b a"));

  // a family with no declared bound is refused: it stands for infinitely
  // many relations
  CHECK_THROWS_WITH(monoid_relations_from_rules(ex6_10_system(), 1),
                    doctest::Contains("instantiation bound"));

  RewritingSystem plain;
  plain.alphabet = Alphabet({"e"});
  plain.push_rule(RewriteRule{parse_word(plain.alphabet, "e e"), parse_word(plain.alphabet, "e")});
  CHECK(monoid_relations_from_rules(plain, 0).size() == 1);
}

TEST_CASE("point-act relations collapse any presentation to one element") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 4; ++round) {
    Monoid m = sample_monoid(rng);
    std::vector<ActRelation> rels;
    for (const auto& [s, t] : one_element_act_relations(m))
      rels.push_back(ActRelation{FreeActElement{0, s}, FreeActElement{0, t}});
    ActPresentation point(m, Alphabet({"O"}), rels);
    CHECK(act_from_presentation(point).act.size() == 1);
  }
}

TEST_CASE("finite scenes answer equality, membership, and factorization exactly") {
  std::mt19937_64 rng(7);
  Monoid m = Monoid::from_table(cyclic3_monoid());
  FiniteAct act = random_act(m, 5, rng);
  PresentedInstance inst = element_presentation(act);
  std::vector<char> member = random_subact_flags(act, 2, rng);
  ConstructionScene scene =
      ConstructionScene::finite(inst.pres, presented_flags(inst.pres, inst.image, act, member));
  REQUIRE(scene.oracle() != nullptr);
  const FiniteMonoid& fm = m.table();
  for (int a = 0; a < act.size(); ++a)
    for (int n = 0; n < fm.size(); ++n) {
      FreeActElement e{a, fm.canonical_word(n)};
      int target = act.act_element(a, n);
      CHECK(*scene.in_subact(e) == (member[static_cast<std::size_t>(target)] != 0));
      CHECK(*scene.equal(e, FreeActElement{target, Word{}}));
      std::optional<std::pair<int, Word>> f =
          scene.factor({FreeActElement{a, Word{}}}, e);
      REQUIRE(f.has_value());
      CHECK(f->first == 0);
      CHECK(act.act_word(a, f->second) == target);
    }
}

TEST_CASE("ideal scenes ride on monoid word equality") {
  Monoid free2 = Monoid::free_monoid(Alphabet({"a", "b"}));
  ActPresentation pres(free2, Alphabet({"O"}), {});
  ConstructionScene scene = ConstructionScene::right_ideal(
      pres, {Word{}}, {el(0, free2.letters(), "a")}, SearchLimits{});
  CHECK(scene.oracle() == nullptr);
  CHECK(*scene.in_subact(el(0, free2.letters(), "a b")));
  CHECK_FALSE(*scene.in_subact(el(0, free2.letters(), "b")));
  std::optional<std::pair<int, Word>> f =
      scene.factor({el(0, free2.letters(), "a")}, el(0, free2.letters(), "a b b"));
  REQUIRE(f.has_value());
  CHECK(f->first == 0);
  CHECK(print_word(free2.letters(), f->second) == "b b");

  Monoid m610 = Monoid::from_rules(with_checked_confluence(ex6_10_system()));
  ActPresentation pres610(m610, Alphabet({"O"}), {});
  ConstructionScene complement = ConstructionScene::ideal_complement(
      pres610, {Word{}}, {el(0, m610.letters(), ""), el(0, m610.letters(), "a")}, SearchLimits{});
  CHECK_FALSE(*complement.in_subact(el(0, m610.letters(), "a")));
  CHECK(*complement.in_subact(el(0, m610.letters(), "a a")));
  CHECK(*complement.equal(el(0, m610.letters(), "a b b a"), el(0, m610.letters(), "a b a")));
}

TEST_CASE("quotient construction collapses a generated subact to a zero") {
  std::mt19937_64 rng(101);
  for (int round = 0; round < 8; ++round) {
    Monoid m = sample_monoid(rng);
    FiniteAct act = random_act(m, 3 + static_cast<int>(rng() % 5), rng);
    PresentedInstance inst = element_presentation(act);
    std::vector<int> seeds;
    for (int i = 0, k = 1 + static_cast<int>(rng() % 2); i < k; ++i)
      seeds.push_back(static_cast<int>(rng() % static_cast<unsigned>(act.size())));
    Subact b = subact_generated(act, seeds);

    ChoiceMaps choices;
    for (int s : seeds) choices.subact_witnesses.push_back(FreeActElement{s, Word{}});
    ConstructionScene scene =
        ConstructionScene::finite(inst.pres, presented_flags(inst.pres, inst.image, act, b.member));
    ConstructionResult res = rees_quotient_presentation(inst.pres, choices,
                                                        one_element_act_relations(m), scene);
    CHECK(res.complete);
    CHECK(act_from_presentation(res.presentation).act.size() == act.size() - b.count() + 1);
    CHECK(transcript_mentions(res, "zero generator"));
    CHECK(transcript_mentions(res, "verified against the materialized quotient"));
  }
}

TEST_CASE("quotient construction: collapsing everything leaves the point act") {
  Monoid m = Monoid::from_table(left_zero_monoid());
  FiniteAct act(m, {"p", "q", "r"}, {1, 1, 1, 1, 2, 2});
  PresentedInstance inst = element_presentation(act);
  ChoiceMaps choices;
  choices.subact_witnesses = {FreeActElement{0, Word{}}, FreeActElement{1, Word{}},
                              FreeActElement{2, Word{}}};
  ConstructionScene scene = ConstructionScene::finite(
      inst.pres, presented_flags(inst.pres, inst.image, act, {1, 1, 1}));
  ConstructionResult res =
      rees_quotient_presentation(inst.pres, choices, one_element_act_relations(m), scene);
  CHECK(res.presentation.generators().size() == 1);
  CHECK(act_from_presentation(res.presentation).act.size() == 1);
}

TEST_CASE("quotient construction rejects bad witnesses") {
  Monoid m = Monoid::from_table(two_element_monoid());
  FiniteAct act(m, {"p", "q"}, {0, 1});  // identity action, two orbits
  PresentedInstance inst = element_presentation(act);

  ChoiceMaps outside;
  outside.subact_witnesses = {FreeActElement{0, Word{}}};  // p, but B = {q}
  ConstructionScene sceneQ =
      ConstructionScene::finite(inst.pres, presented_flags(inst.pres, inst.image, act, {0, 1}));
  CHECK_THROWS_WITH(
      rees_quotient_presentation(inst.pres, outside, one_element_act_relations(m), sceneQ),
      doctest::Contains("does not lie in the subact"));

  ChoiceMaps partial;
  partial.subact_witnesses = {FreeActElement{0, Word{}}};  // p alone cannot reach q
  ConstructionScene sceneAll =
      ConstructionScene::finite(inst.pres, presented_flags(inst.pres, inst.image, act, {1, 1}));
  CHECK_THROWS_WITH(
      rees_quotient_presentation(inst.pres, partial, one_element_act_relations(m), sceneAll),
      doctest::Contains("do not generate"));
}

TEST_CASE("extension construction rebuilds an act from a subact and its quotient") {
  std::mt19937_64 rng(202);
  int nontrivial = 0;
  for (int round = 0; round < 8; ++round) {
    Monoid m = sample_monoid(rng);
    FiniteAct act = random_act(m, 3 + static_cast<int>(rng() % 5), rng);
    std::vector<char> member = random_subact_flags(act, 1, rng);
    RestrictedAct sub = restrict_act(act, member);
    ReesQuotient q = rees_quotient(act, Subact{member});

    PresentedInstance instB = element_presentation(sub.act);
    ActPresentation presB = prefix_tokens(instB.pres, "B");
    PresentedInstance instQ = element_presentation(q.act);
    ActPresentation presQ = prefix_tokens(instQ.pres, "Q");
    std::string zero_token = presQ.generators().letter(q.zero);

    std::vector<int> image_X;  // presB generator -> element of act
    for (int e = 0; e < act.size(); ++e)
      if (member[static_cast<std::size_t>(e)]) image_X.push_back(e);
    std::vector<int> image_Yprime;  // presQ generator (minus zero) -> element of act
    for (int qe = 0; qe < q.act.size(); ++qe) {
      if (qe == q.zero) continue;
      for (int e = 0; e < act.size(); ++e)
        if (q.projection[static_cast<std::size_t>(e)] == qe) {
          image_Yprime.push_back(e);
          break;
        }
    }

    ExtensionScene scene = ExtensionScene::finite(act, image_X, image_Yprime, member);
    ConstructionResult res = extension_presentation(presB, presQ, zero_token, {}, scene);
    CHECK(res.complete);
    CHECK(act_from_presentation(res.presentation).act.size() == act.size());
    CHECK(transcript_mentions(res, "verified against the materialized act"));
    if (transcript_mentions(res, "designated collapsing word")) ++nontrivial;
  }
  CHECK(nontrivial > 0);  // the sweep must exercise the re-spelling path
}

TEST_CASE("extension construction: a closed complement needs no re-spelling") {
  std::mt19937_64 rng(303);
  Monoid m = Monoid::from_table(cyclic3_monoid());
  FiniteAct left = random_act(m, 2, rng);
  FiniteAct right = random_act(m, 3, rng);
  FiniteAct act = disjoint_union_act(left, right);
  std::vector<char> member(static_cast<std::size_t>(act.size()), 0);
  for (int i = 0; i < left.size(); ++i) member[static_cast<std::size_t>(i)] = 1;

  ReesQuotient q = rees_quotient(act, Subact{member});
  PresentedInstance instB = element_presentation(restrict_act(act, member).act);
  ActPresentation presB = prefix_tokens(instB.pres, "B");
  PresentedInstance instQ = element_presentation(q.act);
  ActPresentation presQ = prefix_tokens(instQ.pres, "Q");

  std::vector<int> image_X = {0, 1};
  std::vector<int> image_Yprime;
  for (int qe = 0; qe < q.act.size(); ++qe) {
    if (qe == q.zero) continue;
    for (int e = 0; e < act.size(); ++e)
      if (q.projection[static_cast<std::size_t>(e)] == qe) {
        image_Yprime.push_back(e);
        break;
      }
  }
  ExtensionScene scene = ExtensionScene::finite(act, image_X, image_Yprime, member);
  ConstructionResult res = extension_presentation(
      presB, presQ, presQ.generators().letter(q.zero), {}, scene);
  CHECK(res.complete);
  CHECK(transcript_mentions(res, "no collapsing words"));
  CHECK_FALSE(transcript_mentions(res, "S2: "));
  CHECK(act_from_presentation(res.presentation).act.size() == act.size());
}

TEST_CASE("extension construction: quotient presented without its zero generator") {
  // p -> q -> r chain under s (with s^3 = s^2): B = {r}, and the quotient
  // {p', q', 0} is generated by p' alone, so its presentation can omit 0
  Monoid m = Monoid::from_table(transformation_monoid(3, {{1, 2, 2}}, {"s"}));
  FiniteAct act(m, {"p", "q", "r"}, {1, 2, 2});
  std::vector<char> member = {0, 0, 1};
  ReesQuotient q = rees_quotient(act, Subact{member});

  ActPresentation presB = prefix_tokens(element_presentation(restrict_act(act, member).act).pres, "B");
  int qp = q.projection[0];
  ActPresentation presQ = prefix_tokens(canonical_presentation(q.act, 2, {qp}), "Q");
  ExtensionScene scene = ExtensionScene::finite(act, {2}, {0}, member);
  ConstructionResult res = extension_presentation(presB, presQ, "", {}, scene);
  CHECK(res.complete);
  CHECK(transcript_mentions(res, "designated collapsing word"));
  CHECK(act_from_presentation(res.presentation).act.size() == 3);

  // with no zero generator, no collapsing information, and no oracle the
  // construction must refuse rather than guess
  ActPresentation presQ2(m, Alphabet({"y"}), {});
  ExtensionScene blind = ExtensionScene::manual(
      [](const FreeActElement&) { return false; },
      [](const FreeActElement&, const FreeActElement&) { return true; });
  CHECK_THROWS_WITH(extension_presentation(presB, presQ2, "", {}, blind),
                    doctest::Contains("no collapsing word"));
}

TEST_CASE("extension construction aborts on undecided zero queries") {
  Monoid m = Monoid::from_table(two_element_monoid());
  const Alphabet& lt = m.letters();
  ActPresentation presB(m, Alphabet({"x"}), {});
  ActPresentation presQ(m, Alphabet({"y"}), {ActRelation{el(0, lt, "e"), el(0, lt, "")}});
  ExtensionScene undecided = ExtensionScene::manual(
      [](const FreeActElement&) { return std::optional<bool>{}; },
      [](const FreeActElement&, const FreeActElement&) { return true; });
  CHECK_THROWS_WITH(extension_presentation(presB, presQ, "", {}, undecided),
                    doctest::Contains("undecided within bounds"));
}

TEST_CASE("union construction glues two subacts along their intersection") {
  std::mt19937_64 rng(404);
  int glued = 0;
  for (int round = 0; round < 8; ++round) {
    Monoid m = sample_monoid(rng);
    FiniteAct big = random_act(m, 4 + static_cast<int>(rng() % 4), rng);
    std::vector<char> inA = random_subact_flags(big, 2, rng);
    std::vector<char> inB = random_subact_flags(big, 2, rng);
    std::vector<char> covered(static_cast<std::size_t>(big.size()));
    for (int e = 0; e < big.size(); ++e)
      covered[static_cast<std::size_t>(e)] =
          (inA[static_cast<std::size_t>(e)] || inB[static_cast<std::size_t>(e)]) ? 1 : 0;
    RestrictedAct cr = restrict_act(big, covered);
    FiniteAct actC = cr.act;
    std::vector<char> memberA(static_cast<std::size_t>(actC.size()), 0);
    std::vector<char> memberB(static_cast<std::size_t>(actC.size()), 0);
    for (int e = 0; e < big.size(); ++e)
      if (covered[static_cast<std::size_t>(e)]) {
        memberA[static_cast<std::size_t>(cr.index[static_cast<std::size_t>(e)])] =
            inA[static_cast<std::size_t>(e)];
        memberB[static_cast<std::size_t>(cr.index[static_cast<std::size_t>(e)])] =
            inB[static_cast<std::size_t>(e)];
      }

    RestrictedAct ra = restrict_act(actC, memberA);
    RestrictedAct rb = restrict_act(actC, memberB);
    ActPresentation presA = prefix_tokens(element_presentation(ra.act).pres, "L");
    ActPresentation presB = prefix_tokens(element_presentation(rb.act).pres, "R");
    std::vector<int> image_X, image_Y;
    for (int e = 0; e < actC.size(); ++e) {
      if (memberA[static_cast<std::size_t>(e)]) image_X.push_back(e);
      if (memberB[static_cast<std::size_t>(e)]) image_Y.push_back(e);
    }

    ChoiceMaps choices;
    for (int e = 0; e < actC.size(); ++e)
      if (memberA[static_cast<std::size_t>(e)] && memberB[static_cast<std::size_t>(e)]) {
        choices.left_representatives.push_back(
            FreeActElement{ra.index[static_cast<std::size_t>(e)], Word{}});
        choices.right_representatives.push_back(
            FreeActElement{rb.index[static_cast<std::size_t>(e)], Word{}});
      }
    if (!choices.left_representatives.empty()) ++glued;

    UnionScene scene = UnionScene::finite(actC, image_X, image_Y);
    ConstructionResult res = union_presentation(presA, presB, choices, scene);
    CHECK(res.complete);
    CHECK(act_from_presentation(res.presentation).act.size() == actC.size());
    CHECK(transcript_mentions(res, "verified against the materialized union"));
  }
  CHECK(glued > 0);
}

TEST_CASE("union construction: disjoint components need no gluing relations") {
  std::mt19937_64 rng(505);
  Monoid m = Monoid::from_table(left_zero_monoid());
  FiniteAct left = random_act(m, 2, rng);
  FiniteAct right = random_act(m, 2, rng);
  FiniteAct act = disjoint_union_act(left, right);
  ActPresentation presA = prefix_tokens(element_presentation(left).pres, "L");
  ActPresentation presB = prefix_tokens(element_presentation(right).pres, "R");
  UnionScene scene = UnionScene::finite(act, {0, 1}, {2, 3});
  ConstructionResult res = union_presentation(presA, presB, {}, scene);
  CHECK(act_from_presentation(res.presentation).act.size() == act.size());
  CHECK_FALSE(transcript_mentions(res, "T:"));
}

TEST_CASE("union construction reproduces the two-ideal join over the three-letter monoid") {
  Monoid m = Monoid::from_rules(with_checked_confluence(ex5_14_system()));
  const Alphabet& lt = m.letters();
  ActPresentation presA(m, Alphabet({"A"}), {ActRelation{el(0, lt, "a"), el(0, lt, "")}});
  ActPresentation presB(m, Alphabet({"C"}), {});

  ChoiceMaps choices;
  choices.left_representatives = {el(0, lt, "b")};
  choices.right_representatives = {el(0, lt, "a b")};
  UnionScene scene = UnionScene::manual(
      [&m, &lt](const FreeActElement& x, const FreeActElement& y) {
        return m.try_equal(parse_word(lt, "a").concat(x.m), parse_word(lt, "c").concat(y.m));
      });
  ConstructionResult res = union_presentation(presA, presB, choices, scene);
  REQUIRE(res.presentation.relations().size() == 2);
  CHECK(res.presentation.print_relation(res.presentation.relations()[0]) == "A . a = A . 1");
  CHECK(res.presentation.print_relation(res.presentation.relations()[1]) == "A . b = C . a b");

  // a lying representative pair is rejected
  ChoiceMaps wrong;
  wrong.left_representatives = {el(0, lt, "a")};
  wrong.right_representatives = {el(0, lt, "a b")};
  CHECK_THROWS_WITH(union_presentation(presA, presB, wrong, scene),
                    doctest::Contains("name different elements"));
}

TEST_CASE("union construction aborts on undecided comparisons") {
  Monoid m = Monoid::from_table(two_element_monoid());
  ActPresentation presA(m, Alphabet({"x"}), {});
  ActPresentation presB(m, Alphabet({"y"}), {});
  ChoiceMaps choices;
  choices.left_representatives = {FreeActElement{0, Word{}}};
  choices.right_representatives = {FreeActElement{0, Word{}}};
  UnionScene undecided = UnionScene::manual(
      [](const FreeActElement&, const FreeActElement&) { return std::optional<bool>{}; });
  CHECK_THROWS_WITH(union_presentation(presA, presB, choices, undecided),
                    doctest::Contains("undecided within bounds"));
}

TEST_CASE("component construction recovers one side of a union presentation") {
  std::mt19937_64 rng(606);
  int with_intersection = 0;
  for (int round = 0; round < 8; ++round) {
    Monoid m = sample_monoid(rng);
    FiniteAct big = random_act(m, 4 + static_cast<int>(rng() % 4), rng);
    std::vector<char> inA = random_subact_flags(big, 2, rng);
    std::vector<char> inB = random_subact_flags(big, 2, rng);
    std::vector<char> covered(static_cast<std::size_t>(big.size()));
    for (int e = 0; e < big.size(); ++e)
      covered[static_cast<std::size_t>(e)] =
          (inA[static_cast<std::size_t>(e)] || inB[static_cast<std::size_t>(e)]) ? 1 : 0;
    RestrictedAct cr = restrict_act(big, covered);
    FiniteAct actC = cr.act;
    std::vector<char> memberA(static_cast<std::size_t>(actC.size()), 0);
    std::vector<char> memberB(static_cast<std::size_t>(actC.size()), 0);
    std::vector<char> inter(static_cast<std::size_t>(actC.size()), 0);
    for (int e = 0; e < big.size(); ++e)
      if (covered[static_cast<std::size_t>(e)]) {
        int c = cr.index[static_cast<std::size_t>(e)];
        memberA[static_cast<std::size_t>(c)] = inA[static_cast<std::size_t>(e)];
        memberB[static_cast<std::size_t>(c)] = inB[static_cast<std::size_t>(e)];
        inter[static_cast<std::size_t>(c)] =
            (inA[static_cast<std::size_t>(e)] && inB[static_cast<std::size_t>(e)]) ? 1 : 0;
      }
    if (std::count(memberA.begin(), memberA.end(), 1) == 0) continue;

    PresentedInstance instC = element_presentation(actC);
    std::vector<char> in_other(memberB.begin(), memberB.end());

    std::optional<ActPresentation> presI;
    std::vector<int> image_U;
    ChoiceMaps choices;
    if (std::count(inter.begin(), inter.end(), 1) > 0) {
      RestrictedAct ri = restrict_act(actC, inter);
      presI = prefix_tokens(element_presentation(ri.act).pres, "U");
      for (int e = 0; e < actC.size(); ++e)
        if (inter[static_cast<std::size_t>(e)]) {
          image_U.push_back(e);
          choices.intersection_witnesses.push_back(FreeActElement{e, Word{}});
        }
      ++with_intersection;
    }

    ComponentScene scene =
        ComponentScene::finite(actC, instC.image, memberA, memberB, image_U);
    ConstructionResult res =
        union_component_presentation(instC.pres, presI, in_other, choices, scene);
    CHECK(res.complete);
    CHECK(act_from_presentation(res.presentation).act.size() ==
          std::count(memberA.begin(), memberA.end(), 1));
    CHECK(transcript_mentions(res, "verified against the materialized component"));
  }
  CHECK(with_intersection > 0);
}

TEST_CASE("component construction: a split with no bridge needs an intersection") {
  Monoid m = Monoid::from_table(two_element_monoid());
  const Alphabet& lt = m.letters();
  ActPresentation presC(m, Alphabet({"x", "y"}), {ActRelation{el(0, lt, "e"), el(1, lt, "e")}});
  ComponentScene scene = ComponentScene::manual(
      [](const FreeActElement&, const FreeActElement&) { return true; },
      [](const FreeActElement&) { return std::optional<std::pair<int, Word>>{}; });
  CHECK_THROWS_WITH(union_component_presentation(presC, std::nullopt, {0, 1}, {}, scene),
                    doctest::Contains("the intersection is empty"));
}

TEST_CASE("intersection generators are read off the split presentation") {
  // the two-ideal join: the only bridge relation contributes one generator
  Monoid m514 = Monoid::from_rules(with_checked_confluence(ex5_14_system()));
  const Alphabet& lt = m514.letters();
  ActPresentation join(
      m514, Alphabet({"A", "C"}),
      {ActRelation{el(0, lt, "a"), el(0, lt, "")}, ActRelation{el(0, lt, "b"), el(1, lt, "a b")}});
  std::vector<FreeActElement> gens = intersection_generators(join, {1, 0});
  REQUIRE(gens.size() == 1);
  CHECK(gens[0].gen == 0);
  CHECK(print_word(lt, gens[0].m) == "b");

  // the overlapping-ideals family: one generator per instantiated relation
  Monoid m513 = Monoid::from_rules(ex5_13_system());
  const Alphabet& lt13 = m513.letters();
  std::vector<ActRelation> rels;
  for (int i = 2; i <= 5; ++i) {
    std::string left = "c", right = "c";
    for (int k = 1; k < i; ++k) left += " c";
    for (int k = 2; k < i; ++k) right += " c";
    rels.push_back(ActRelation{el(0, lt13, left + " a"), el(1, lt13, (i > 2 ? right + " b" : "c b"))});
  }
  ActPresentation split(m513, Alphabet({"P", "Q"}), rels);
  std::vector<FreeActElement> gens13 = intersection_generators(split, {1, 0});
  REQUIRE(gens13.size() == 4);
  for (std::size_t i = 0; i < gens13.size(); ++i) {
    CHECK(gens13[i].gen == 0);
    CHECK(gens13[i].m.size() == i + 3);  // c^(i+2) a
  }

  // no bridges, no generators
  ActPresentation apart(m514, Alphabet({"A", "C"}),
                        {ActRelation{el(0, lt, "a"), el(0, lt, "")}});
  CHECK(intersection_generators(apart, {1, 0}).empty());
}

TEST_CASE("subact construction over finite scenes materializes the full relation grid") {
  std::mt19937_64 rng(707);
  for (int round = 0; round < 8; ++round) {
    Monoid m = sample_monoid(rng);
    FiniteAct act = random_act(m, 3 + static_cast<int>(rng() % 5), rng);
    PresentedInstance inst = element_presentation(act);
    std::vector<int> seeds;
    for (int i = 0, k = 1 + static_cast<int>(rng() % 2); i < k; ++i)
      seeds.push_back(static_cast<int>(rng() % static_cast<unsigned>(act.size())));
    Subact b = subact_generated(act, seeds);

    ChoiceMaps choices;
    for (int s : seeds) choices.subact_witnesses.push_back(FreeActElement{s, Word{}});
    ConstructionScene scene =
        ConstructionScene::finite(inst.pres, presented_flags(inst.pres, inst.image, act, b.member));
    ConstructionResult res = subact_presentation_general(inst.pres, choices, 0, scene);
    CHECK(res.complete);
    CHECK(act_from_presentation(res.presentation).act.size() == b.count());
    CHECK(transcript_mentions(res, "verified against the materialized subact"));
  }
}

TEST_CASE("subact construction reports factorization gaps instead of guessing") {
  Monoid m = Monoid::from_table(two_element_monoid());
  FiniteAct act(m, {"p", "q"}, {0, 1});  // two fixed points
  PresentedInstance inst = element_presentation(act);
  ChoiceMaps choices;
  choices.subact_witnesses = {FreeActElement{0, Word{}}};  // p alone, but B = {p, q}
  ConstructionScene scene =
      ConstructionScene::finite(inst.pres, presented_flags(inst.pres, inst.image, act, {1, 1}));
  ConstructionResult res = subact_presentation_general(inst.pres, choices, 0, scene);
  CHECK_FALSE(res.complete);
  CHECK(transcript_mentions(res, "gap"));
}

TEST_CASE("subact construction streams relations for a right ideal") {
  Monoid m = Monoid::from_rules(with_checked_confluence(ex6_10_system()));
  const Alphabet& lt = m.letters();
  ActPresentation ambient(m, Alphabet({"O"}), {});

  // the ideal generated by (a b): relations y . (b^i a) = y . a stream out
  ConstructionScene scene = ConstructionScene::right_ideal(
      ambient, {parse_word(lt, "a b")}, {el(0, lt, "")}, SearchLimits{});
  ChoiceMaps choices;
  choices.subact_witnesses = {el(0, lt, "")};
  choices.tokens = {"y"};
  ConstructionResult res = subact_presentation_general(ambient, choices, 3, scene);
  CHECK(res.complete);
  CHECK(transcript_mentions(res, "stream radius: 3"));
  CHECK(has_relation(res.presentation, el(0, lt, "a"), el(0, lt, "b a")));
  CHECK(has_relation(res.presentation, el(0, lt, "a"), el(0, lt, "b b a")));

  // one instance of the family does not imply the next: the candidate is
  // rejected, and the streamed set stays
  SearchBounds bounds;
  bounds.max_steps = 8;
  bounds.max_orbit = 400;
  SimplificationReport narrow = check_simplification(
      res.presentation, {ActRelation{el(0, lt, "a"), el(0, lt, "b a")}}, bounds);
  CHECK_FALSE(narrow.accepted);

  // the ideal generated by b is free: nothing streams out, and the empty
  // candidate is accepted
  ConstructionScene free_scene = ConstructionScene::right_ideal(
      ambient, {parse_word(lt, "b")}, {el(0, lt, "")}, SearchLimits{});
  ConstructionResult free_res = subact_presentation_general(ambient, choices, 3, free_scene);
  CHECK(free_res.complete);
  CHECK(free_res.presentation.relations().empty());
  SimplificationReport empty_ok = check_simplification(free_res.presentation, {}, bounds);
  CHECK(empty_ok.accepted);
  REQUIRE(empty_ok.presentation.has_value());
  CHECK(empty_ok.presentation->relations().empty());
}

TEST_CASE("simplification check replaces a streamed set only when both directions hold") {
  // 1, s, s^2 with s^3 = s^2: unlike a group, collapsing s onto s^2 says
  // nothing about the identity
  Monoid m = Monoid::from_table(transformation_monoid(3, {{1, 2, 2}}, {"s"}));
  const Alphabet& lt = m.letters();
  ActPresentation streamed(
      m, Alphabet({"y"}),
      {ActRelation{el(0, lt, "s"), el(0, lt, "")}, ActRelation{el(0, lt, "s s"), el(0, lt, "")}});

  SimplificationReport first = check_simplification(
      streamed, {ActRelation{el(0, lt, "s"), el(0, lt, "")}});
  CHECK(first.accepted);
  REQUIRE(first.presentation.has_value());
  CHECK(first.presentation->relations().size() == 1);
  CHECK(verify_presentation(*first.presentation,
                            act_from_presentation(streamed).act, {0}));

  SimplificationReport second = check_simplification(
      streamed, {ActRelation{el(0, lt, "s s"), el(0, lt, "")}});
  CHECK(second.accepted);

  // s = s s follows from the streamed set, but it does not recover it
  SimplificationReport lossy = check_simplification(
      streamed, {ActRelation{el(0, lt, "s"), el(0, lt, "s s")}});
  CHECK_FALSE(lossy.accepted);
  bool explained = false;
  for (const std::string& line : lossy.lines)
    explained = explained || line.find("not recovered") != std::string::npos;
  CHECK(explained);
}

TEST_CASE("large-subact context validation") {
  Monoid m = Monoid::from_table(left_zero_monoid());
  FiniteAct act(m, {"p", "q", "r"}, {1, 1, 1, 1, 2, 2});  // p,q -> q; r fixed
  PresentedInstance inst = element_presentation(act);
  std::vector<std::pair<Word, Word>> P = monoid_relations_from_table(m.table());
  auto scene_for = [&](std::vector<char> member) {
    return ConstructionScene::finite(inst.pres,
                                     presented_flags(inst.pres, inst.image, act, member));
  };

  // B = {r}: the roster {p} is not closed (p.z1 = q is neither in B nor listed)
  CHECK_THROWS_WITH(make_large_subact_context(inst.pres, {FreeActElement{0, Word{}}}, P, 0,
                                              scene_for({0, 0, 1})),
                    doctest::Contains("not closed"));
  // the roster {q} is closed but misses p
  CHECK_THROWS_WITH(make_large_subact_context(inst.pres, {FreeActElement{1, Word{}}}, P, 0,
                                              scene_for({0, 0, 1})),
                    doctest::Contains("roster size does not match"));
  // r lies in the subact
  CHECK_THROWS_WITH(make_large_subact_context(inst.pres, {FreeActElement{2, Word{}}}, P, 0,
                                              scene_for({0, 0, 1})),
                    doctest::Contains("lies in the subact"));
  // duplicates
  CHECK_THROWS_WITH(
      make_large_subact_context(inst.pres, {FreeActElement{0, Word{}}, FreeActElement{0, Word{}}},
                                P, 0, scene_for({0, 0, 1})),
      doctest::Contains("coincide"));
  // the full complement works
  CHECK_NOTHROW(make_large_subact_context(
      inst.pres, {FreeActElement{0, Word{}}, FreeActElement{1, Word{}}}, P, 0,
      scene_for({0, 0, 1})));
}

TEST_CASE("large-subact construction over finite scenes") {
  std::mt19937_64 rng(808);
  for (int round = 0; round < 8; ++round) {
    Monoid m = sample_monoid(rng);
    FiniteAct act = random_act(m, 3 + static_cast<int>(rng() % 5), rng);
    PresentedInstance inst = element_presentation(act);
    std::vector<char> member = random_subact_flags(act, 1 + static_cast<int>(rng() % 2), rng);
    std::vector<FreeActElement> roster;
    for (int e = 0; e < act.size(); ++e)
      if (!member[static_cast<std::size_t>(e)]) roster.push_back(FreeActElement{e, Word{}});

    ConstructionScene scene =
        ConstructionScene::finite(inst.pres, presented_flags(inst.pres, inst.image, act, member));
    LargeSubactContext ctx = make_large_subact_context(
        inst.pres, roster, monoid_relations_from_table(m.table()), 0, scene);
    std::vector<FreeActElement> gens = large_subact_generators(ctx);
    CHECK(!gens.empty());
    ConstructionResult res = large_subact_presentation(ctx);
    CHECK(res.complete);
    CHECK(act_from_presentation(res.presentation).act.size() ==
          std::count(member.begin(), member.end(), 1));
    CHECK(transcript_mentions(res, "verified against the materialized subact"));
  }
}

TEST_CASE("large-subact construction with an empty roster returns the whole act") {
  std::mt19937_64 rng(909);
  Monoid m = Monoid::from_table(two_element_monoid());
  FiniteAct act = random_act(m, 4, rng);
  PresentedInstance inst = element_presentation(act);
  ConstructionScene scene = ConstructionScene::finite(
      inst.pres, std::vector<char>(static_cast<std::size_t>(act.size()), 1));
  LargeSubactContext ctx =
      make_large_subact_context(inst.pres, {}, monoid_relations_from_table(m.table()), 0, scene);
  ConstructionResult res = large_subact_presentation(ctx);
  CHECK(act_from_presentation(res.presentation).act.size() == act.size());
}

TEST_CASE("large-subact boundary walk lists the ideal generators in discovery order") {
  Monoid m = Monoid::from_rules(with_checked_confluence(ex6_10_system()));
  const Alphabet& lt = m.letters();
  ActPresentation ambient(m, Alphabet({"O"}), {});
  ConstructionScene scene = ConstructionScene::ideal_complement(
      ambient, {Word{}}, {el(0, lt, ""), el(0, lt, "a")}, SearchLimits{});
  LargeSubactContext ctx = make_large_subact_context(
      ambient, {el(0, lt, ""), el(0, lt, "a")}, monoid_relations_from_rules(ex6_10_system(), 4), 4,
      scene);

  std::vector<FreeActElement> gens = large_subact_generators(ctx);
  REQUIRE(gens.size() == 3);
  CHECK(print_word(lt, gens[0].m) == "b");
  CHECK(print_word(lt, gens[1].m) == "a a");
  CHECK(print_word(lt, gens[2].m) == "a b");

  ConstructionResult res = large_subact_presentation(ctx);
  CHECK(res.complete);
  CHECK(transcript_mentions(res, "instantiated up to exponent 4"));
  // the third generator carries the non-finitely-based family y . b^i a = y . a
  CHECK(has_relation(res.presentation, FreeActElement{2, parse_word(lt, "b a")},
                     FreeActElement{2, parse_word(lt, "a")}));
  CHECK(has_relation(res.presentation, FreeActElement{2, parse_word(lt, "b b a")},
                     FreeActElement{2, parse_word(lt, "a")}));
  // every relation holds in the ambient act
  for (const ActRelation& r : res.presentation.relations()) {
    Word lhs = gens[static_cast<std::size_t>(r.lhs.gen)].m.concat(r.lhs.m);
    Word rhs = gens[static_cast<std::size_t>(r.rhs.gen)].m.concat(r.rhs.m);
    CHECK(m.canon(lhs) == m.canon(rhs));
  }
}

TEST_CASE("large-subact construction over a free monoid yields a free presentation") {
  Monoid free2 = Monoid::free_monoid(Alphabet({"a", "b"}));
  ActPresentation ambient(free2, Alphabet({"O"}), {});
  ConstructionScene scene = ConstructionScene::ideal_complement(
      ambient, {Word{}}, {FreeActElement{0, Word{}}}, SearchLimits{});
  LargeSubactContext ctx =
      make_large_subact_context(ambient, {FreeActElement{0, Word{}}}, {}, 0, scene);
  std::vector<FreeActElement> gens = large_subact_generators(ctx);
  REQUIRE(gens.size() == 2);
  ConstructionResult res = large_subact_presentation(ctx);
  CHECK(res.presentation.generators().size() == 2);
  CHECK(res.presentation.generators().letter(0) == "y0");
  CHECK(res.presentation.relations().empty());
}

