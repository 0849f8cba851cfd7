#include "actpres/harness.hpp"

#include <algorithm>
#include <optional>
#include <random>

#include "actpres/constructions.hpp"
#include "actpres/sampling.hpp"

namespace actpres::harness {

namespace {

using sampling::PresentedInstance;
using sampling::element_presentation;
using sampling::prefix_tokens;
using sampling::random_act;
using sampling::random_subact_flags;
using sampling::sample_monoid;

// Member flags translated into the numbering of the presented act, which is
// what finite construction scenes index by.
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

// Generator images for a construction output whose tokens are drawn from up
// to two input alphabets; unknown tokens (minted ones) map to `minted`.
std::vector<int> map_tokens(const Alphabet& out_gens, const Alphabet& a,
                            const std::vector<int>& image_a, const Alphabet& b,
                            const std::vector<int>& image_b, int minted) {
  std::vector<int> image;
  for (const std::string& tok : out_gens.letters()) {
    if (std::optional<LetterId> i = a.index_of(tok))
      image.push_back(image_a[static_cast<std::size_t>(*i)]);
    else if (std::optional<LetterId> j = b.index_of(tok))
      image.push_back(image_b[static_cast<std::size_t>(*j)]);
    else
      image.push_back(minted);
  }
  return image;
}

struct Outcome {
  bool ok = true;
  std::string detail;
};

// The six construction drivers. Each builds its instance from the shared
// random data, runs the construction, and checks the output presentation
// against the independently materialized target act.

Outcome check(const ConstructionResult& res, const FiniteAct& target,
              const std::vector<int>& image) {
  if (!res.complete) return {false, "construction reported gaps"};
  std::string why;
  if (!verify_presentation(res.presentation, target, image, &why))
    return {false, "kernel mismatch: " + why};
  return {true, {}};
}

Outcome drive_rees(const Monoid& m, const FiniteAct& act, std::mt19937_64& rng) {
  PresentedInstance inst = element_presentation(act);
  std::vector<int> seeds;
  for (int i = 0, k = 1 + static_cast<int>(rng() % 2); i < k; ++i)
    seeds.push_back(static_cast<int>(rng() % static_cast<unsigned>(act.size())));
  Subact b = subact_generated(act, seeds);
  ReesQuotient q = rees_quotient(act, b);

  ChoiceMaps choices;
  for (int s : seeds) choices.subact_witnesses.push_back(FreeActElement{s, Word{}});
  ConstructionScene scene =
      ConstructionScene::finite(inst.pres, presented_flags(inst.pres, inst.image, act, b.member));
  ConstructionResult res =
      rees_quotient_presentation(inst.pres, choices, one_element_act_relations(m), scene);

  std::vector<int> proj;
  for (int e = 0; e < act.size(); ++e) proj.push_back(q.projection[static_cast<std::size_t>(e)]);
  std::vector<int> image = map_tokens(res.presentation.generators(), inst.pres.generators(), proj,
                                      Alphabet(), {}, q.zero);
  return check(res, q.act, image);
}

Outcome drive_extension(const Monoid& m, const FiniteAct& act, std::mt19937_64& rng) {
  std::vector<char> member = random_subact_flags(act, 1, rng);
  RestrictedAct sub = restrict_act(act, member);
  ReesQuotient q = rees_quotient(act, Subact{member});

  ActPresentation presB = prefix_tokens(element_presentation(sub.act).pres, "B");
  ActPresentation presQ = prefix_tokens(element_presentation(q.act).pres, "Q");
  std::string zero_token = presQ.generators().letter(q.zero);

  std::vector<int> image_X;
  for (int e = 0; e < act.size(); ++e)
    if (member[static_cast<std::size_t>(e)]) image_X.push_back(e);
  std::vector<int> image_Yprime;
  std::vector<int> image_Q_full(static_cast<std::size_t>(q.act.size()), -1);
  for (int qe = 0; qe < q.act.size(); ++qe) {
    if (qe == q.zero) continue;
    for (int e = 0; e < act.size(); ++e)
      if (q.projection[static_cast<std::size_t>(e)] == qe) {
        image_Yprime.push_back(e);
        image_Q_full[static_cast<std::size_t>(qe)] = e;
        break;
      }
  }

  ExtensionScene scene = ExtensionScene::finite(act, image_X, image_Yprime, member);
  ConstructionResult res = extension_presentation(presB, presQ, zero_token, {}, scene);

  std::vector<int> image = map_tokens(res.presentation.generators(), presB.generators(), image_X,
                                      presQ.generators(), image_Q_full, -1);
  if (std::find(image.begin(), image.end(), -1) != image.end())
    return {false, "output kept the zero generator"};
  return check(res, act, image);
}

Outcome drive_union(const Monoid& m, const FiniteAct& big, std::mt19937_64& rng) {
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

  UnionScene scene = UnionScene::finite(actC, image_X, image_Y);
  ConstructionResult res = union_presentation(presA, presB, choices, scene);

  std::vector<int> image = map_tokens(res.presentation.generators(), presA.generators(), image_X,
                                      presB.generators(), image_Y, -1);
  return check(res, actC, image);
}

Outcome drive_component(const Monoid& m, const FiniteAct& big, std::mt19937_64& rng) {
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
  if (std::count(memberA.begin(), memberA.end(), 1) == 0) return {true, "skipped: empty component"};

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
  }

  ComponentScene scene = ComponentScene::finite(actC, instC.image, memberA, memberB, image_U);
  ConstructionResult res = union_component_presentation(instC.pres, presI, in_other, choices, scene);

  RestrictedAct ra = restrict_act(actC, memberA);
  std::vector<int> instC_to_A;
  for (int e = 0; e < actC.size(); ++e) instC_to_A.push_back(ra.index[static_cast<std::size_t>(e)]);
  std::vector<int> image_U_in_A;
  for (int e : image_U) image_U_in_A.push_back(ra.index[static_cast<std::size_t>(e)]);
  std::vector<int> image =
      map_tokens(res.presentation.generators(), instC.pres.generators(), instC_to_A,
                 presI ? presI->generators() : Alphabet(), image_U_in_A, -1);
  if (std::find(image.begin(), image.end(), -1) != image.end())
    return {false, "output kept a generator of the other component"};
  return check(res, ra.act, image);
}

Outcome drive_subact(const Monoid& m, const FiniteAct& act, std::mt19937_64& rng) {
  PresentedInstance inst = element_presentation(act);
  std::vector<int> seeds;
  for (int i = 0, k = 1 + static_cast<int>(rng() % 2); i < k; ++i)
    seeds.push_back(static_cast<int>(rng() % static_cast<unsigned>(act.size())));
  Subact b = subact_generated(act, seeds);
  RestrictedAct rb = restrict_act(act, b.member);

  ChoiceMaps choices;
  for (int s : seeds) choices.subact_witnesses.push_back(FreeActElement{s, Word{}});
  ConstructionScene scene =
      ConstructionScene::finite(inst.pres, presented_flags(inst.pres, inst.image, act, b.member));
  ConstructionResult res = subact_presentation_general(inst.pres, choices, 0, scene);

  // Output generators follow the witness order.
  if (res.presentation.generators().size() != seeds.size())
    return {false, "output generator count does not match the witnesses"};
  std::vector<int> image;
  for (int s : seeds) image.push_back(rb.index[static_cast<std::size_t>(s)]);
  return check(res, rb.act, image);
}

Outcome drive_large_subact(const Monoid& m, const FiniteAct& act, std::mt19937_64& rng) {
  PresentedInstance inst = element_presentation(act);
  std::vector<char> member = random_subact_flags(act, 1 + static_cast<int>(rng() % 2), rng);
  std::vector<FreeActElement> roster;
  for (int e = 0; e < act.size(); ++e)
    if (!member[static_cast<std::size_t>(e)]) roster.push_back(FreeActElement{e, Word{}});
  RestrictedAct rsub = restrict_act(act, member);

  ConstructionScene scene =
      ConstructionScene::finite(inst.pres, presented_flags(inst.pres, inst.image, act, member));
  LargeSubactContext ctx = make_large_subact_context(inst.pres, roster,
                                                     monoid_relations_from_table(m.table()), 0, scene);
  std::vector<FreeActElement> gens = large_subact_generators(ctx);
  ConstructionResult res = large_subact_presentation(ctx);

  if (res.presentation.generators().size() != gens.size())
    return {false, "output generator count does not match the boundary walk"};
  const FiniteMonoid& fm = m.table();
  std::vector<int> image;
  for (const FreeActElement& g : gens) {
    int orig = act.act_element(inst.image[static_cast<std::size_t>(g.gen)], fm.eval(g.m));
    image.push_back(rsub.index[static_cast<std::size_t>(orig)]);
  }
  return check(res, rsub.act, image);
}

}  // namespace

FuzzReport fuzz_constructions(std::uint64_t base_seed, int seeds, int max_monoid, int max_act) {
  FuzzReport report;
  report.base_seed = base_seed;
  report.seeds = seeds;
  struct Driver {
    const char* name;
    Outcome (*run)(const Monoid&, const FiniteAct&, std::mt19937_64&);
    int min_act;
  };
  const Driver drivers[] = {
      {"rees-quotient", drive_rees, 3},   {"extension", drive_extension, 3},
      {"union", drive_union, 4},          {"union-component", drive_component, 4},
      {"subact", drive_subact, 3},        {"large-subact", drive_large_subact, 3},
  };
  for (int s = 0; s < seeds; ++s) {
    for (const Driver& d : drivers) {
      std::mt19937_64 rng(base_seed + static_cast<std::uint64_t>(s) * 131 +
                          static_cast<std::uint64_t>(&d - drivers));
      Monoid m = sample_monoid(rng, max_monoid);
      int span = std::max(1, max_act - d.min_act + 1);
      FiniteAct act = random_act(m, d.min_act + static_cast<int>(rng() % static_cast<unsigned>(span)),
                                 rng);
      FuzzLine line;
      line.key = "seed-" + std::to_string(s) + "." + d.name;
      try {
        Outcome out = d.run(m, act, rng);
        line.ok = out.ok;
        line.value = out.ok ? (out.detail.empty() ? "ok |M|=" + std::to_string(m.table().size()) +
                                                        " |A|=" + std::to_string(act.size())
                                                  : out.detail)
                            : "FAIL " + out.detail;
      } catch (const Error& e) {
        line.ok = false;
        line.value = std::string("FAIL exception: ") + e.what();
      }
      if (!line.ok) ++report.failures;
      report.lines.push_back(std::move(line));
    }
  }
  return report;
}

}  // namespace actpres::harness
