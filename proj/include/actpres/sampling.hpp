#pragma once

// Seeded finite instances for randomized verification harnesses: a catalog
// of small monoids, random transformation monoids, random compatible acts,
// and the stock per-element presentations with their element images. The
// CLI fuzz commands, the integration checks, and the test suite all draw
// from this header so they exercise identical distributions.

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "actpres/act.hpp"
#include "actpres/monoid.hpp"
#include "actpres/presentation.hpp"

namespace actpres::sampling {

// {1, e} with e idempotent.
inline FiniteMonoid two_element_monoid() {
  return FiniteMonoid(2, {0, 1, 1, 1}, 0, {"1", "e"}, Alphabet({"e"}), {1});
}

// Identity adjoined to a two-element left-zero band: zi * x = zi.
inline FiniteMonoid left_zero_monoid() {
  return FiniteMonoid(3, {0, 1, 2, 1, 1, 1, 2, 2, 2}, 0, {"1", "z1", "z2"},
                      Alphabet({"z1", "z2"}), {1, 2});
}

// Cyclic group of order three.
inline FiniteMonoid cyclic3_monoid() {
  return FiniteMonoid(3, {0, 1, 2, 1, 2, 0, 2, 0, 1}, 0, {"1", "g", "gg"}, Alphabet({"g"}), {1});
}

// Monoid of self-maps of {0..points-1} generated by the given maps, with the
// identity adjoined. Letters name the generators in order.
inline FiniteMonoid transformation_monoid(int points, const std::vector<std::vector<int>>& gens,
                                          const std::vector<std::string>& letter_names) {
  std::vector<std::vector<int>> elems;
  std::vector<int> id(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) id[static_cast<std::size_t>(i)] = i;
  elems.push_back(id);
  auto find = [&](const std::vector<int>& f) {
    for (std::size_t i = 0; i < elems.size(); ++i)
      if (elems[i] == f) return static_cast<int>(i);
    return -1;
  };
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const std::vector<int>& g : gens) {
      std::vector<int> h(static_cast<std::size_t>(points));
      for (int p = 0; p < points; ++p) h[static_cast<std::size_t>(p)] = g[static_cast<std::size_t>(elems[i][static_cast<std::size_t>(p)])];
      if (find(h) < 0) elems.push_back(std::move(h));
    }
  }
  int n = static_cast<int>(elems.size());
  std::vector<int> table(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<int> h(static_cast<std::size_t>(points));
      for (int p = 0; p < points; ++p)
        h[static_cast<std::size_t>(p)] = elems[static_cast<std::size_t>(b)][static_cast<std::size_t>(elems[static_cast<std::size_t>(a)][static_cast<std::size_t>(p)])];
      table[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b)] = find(h);
    }
  std::vector<std::string> names(static_cast<std::size_t>(n));
  names[0] = "1";
  for (int i = 1; i < n; ++i) names[static_cast<std::size_t>(i)] = "m" + std::to_string(i);
  std::vector<int> letter_elements;
  for (const std::vector<int>& g : gens) letter_elements.push_back(find(g));
  return FiniteMonoid(n, std::move(table), 0, std::move(names), Alphabet(letter_names),
                      std::move(letter_elements));
}

// Random action table over the monoid's letters, retrying until compatible;
// falls back to the everything-fixed table, which every monoid accepts.
inline FiniteAct random_act(const Monoid& m, int n, std::mt19937_64& rng) {
  std::size_t letters = m.letters().size();
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("q" + std::to_string(i));
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int tries = 0; tries < 200; ++tries) {
    std::vector<int> table(static_cast<std::size_t>(n) * letters);
    for (int& v : table) v = pick(rng);
    if (!action_incompatibility(m, n, table)) return FiniteAct(m, names, table);
  }
  std::vector<int> fixed(static_cast<std::size_t>(n) * letters);
  for (int a = 0; a < n; ++a)
    for (std::size_t l = 0; l < letters; ++l) fixed[static_cast<std::size_t>(a) * letters + l] = a;
  return FiniteAct(m, names, fixed);
}

// Random transformation monoid on up to 3 points, retried until it has at
// most max_size elements.
inline Monoid random_transformation_monoid(std::mt19937_64& rng, int max_size = 6) {
  for (;;) {
    int points = 2 + static_cast<int>(rng() % 2);
    std::vector<std::vector<int>> gens;
    int ngens = 1 + static_cast<int>(rng() % 2);
    for (int g = 0; g < ngens; ++g) {
      std::vector<int> f(static_cast<std::size_t>(points));
      for (int& v : f) v = static_cast<int>(rng() % static_cast<unsigned>(points));
      gens.push_back(std::move(f));
    }
    std::vector<std::string> letters;
    for (int g = 0; g < ngens; ++g) letters.push_back("t" + std::to_string(g));
    FiniteMonoid fm = transformation_monoid(points, gens, letters);
    if (fm.size() <= max_size) return Monoid::from_table(fm);
  }
}

// The catalog plus one random transformation monoid per call.
inline Monoid sample_monoid(std::mt19937_64& rng, int max_size = 6) {
  switch (rng() % 4) {
    case 0: return Monoid::from_table(two_element_monoid());
    case 1: return Monoid::from_table(left_zero_monoid());
    case 2: return Monoid::from_table(cyclic3_monoid());
    default: return random_transformation_monoid(rng, max_size);
  }
}

// A presentation with one generator per element (style 1) together with the
// identity element images, the shape every finite construction scene wants.
struct PresentedInstance {
  FiniteAct act;
  ActPresentation pres;
  std::vector<int> image;  // generator index -> act element
};

inline PresentedInstance element_presentation(const FiniteAct& act) {
  std::vector<int> image(static_cast<std::size_t>(act.size()));
  for (int i = 0; i < act.size(); ++i) image[static_cast<std::size_t>(i)] = i;
  return PresentedInstance{act, canonical_presentation(act, 1), std::move(image)};
}

// Same presentation with every generator token prefixed, for constructions
// that must combine two alphabets without collisions.
inline ActPresentation prefix_tokens(const ActPresentation& pres, const std::string& prefix) {
  std::vector<std::string> tokens;
  for (const std::string& t : pres.generators().letters()) tokens.push_back(prefix + t);
  return ActPresentation(pres.monoid(), Alphabet(tokens), pres.relations());
}

// Member flags of the subact generated by `count` random seeds.
inline std::vector<char> random_subact_flags(const FiniteAct& act, int count, std::mt19937_64& rng) {
  std::vector<int> seeds;
  for (int i = 0; i < count; ++i)
    seeds.push_back(static_cast<int>(rng() % static_cast<unsigned>(act.size())));
  return subact_generated(act, seeds).member;
}

// Disjoint union of two acts over the same monoid handle.
inline FiniteAct disjoint_union_act(const FiniteAct& a, const FiniteAct& b) {
  std::vector<std::string> names;
  for (int i = 0; i < a.size(); ++i) names.push_back("L" + a.name(i));
  for (int i = 0; i < b.size(); ++i) names.push_back("R" + b.name(i));
  std::size_t letters = a.monoid().letters().size();
  std::vector<int> table((static_cast<std::size_t>(a.size()) + static_cast<std::size_t>(b.size())) *
                         letters);
  for (int e = 0; e < a.size(); ++e)
    for (std::size_t l = 0; l < letters; ++l)
      table[static_cast<std::size_t>(e) * letters + l] = a.act_letter(e, static_cast<LetterId>(l));
  for (int e = 0; e < b.size(); ++e)
    for (std::size_t l = 0; l < letters; ++l)
      table[(static_cast<std::size_t>(a.size()) + static_cast<std::size_t>(e)) * letters + l] =
          a.size() + b.act_letter(e, static_cast<LetterId>(l));
  return FiniteAct(a.monoid(), std::move(names), std::move(table));
}

}  // namespace actpres::sampling
