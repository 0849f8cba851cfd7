#pragma once

#include <optional>
#include <string>
#include <vector>

#include "actpres/monoid.hpp"
#include "actpres/word.hpp"

namespace actpres {

// Finite act over a monoid handle, given by an action table over the
// monoid's letters. Construction verifies the letter actions are compatible
// with the monoid: exhaustively for finite backends, by checking every rule
// and rule family as a transformation identity for rewriting backends (rule
// families are checked for all exponents via power-cycle detection).
class FiniteAct {
 public:
  FiniteAct(Monoid monoid, std::vector<std::string> names, std::vector<int> letter_table);

  int size() const { return n_; }
  const Monoid& monoid() const { return monoid_; }
  const std::string& name(int a) const { return names_[static_cast<std::size_t>(a)]; }
  std::optional<int> element_by_name(const std::string& s) const;

  int act_letter(int a, LetterId l) const {
    return letter_table_[static_cast<std::size_t>(a) * num_letters_ + static_cast<std::size_t>(l)];
  }
  int act_word(int a, const Word& w) const;
  // Finite monoid backends only: action by a monoid element.
  int act_element(int a, int m) const;

 private:
  Monoid monoid_;
  int n_;
  std::size_t num_letters_;
  std::vector<std::string> names_;
  std::vector<int> letter_table_;
  std::vector<int> element_table_;  // n x |M| for finite backends
};

// The self-map of act elements induced by a word.
std::vector<int> word_transformation(const FiniteAct& act, const Word& w);

struct Subact {
  std::vector<char> member;  // indexed by parent elements

  bool contains(int a) const { return member[static_cast<std::size_t>(a)] != 0; }
  int count() const;
};

// Smallest subact containing the seeds (breadth-first over letter actions).
// Seeds must be non-empty: acts are non-empty by definition.
Subact subact_generated(const FiniteAct& act, const std::vector<int>& seeds);

// Verifies closure of a member set under every letter action.
bool is_subact(const FiniteAct& act, const Subact& b);

class ActCongruence {
 public:
  ActCongruence(int n, std::vector<int> class_of);

  int size() const { return static_cast<int>(class_of_.size()); }
  int classes() const { return num_classes_; }
  int class_of(int a) const { return class_of_[static_cast<std::size_t>(a)]; }
  bool related(int a, int b) const { return class_of(a) == class_of(b); }
  // Class labels renumbered in first-occurrence order, for comparisons.
  const std::vector<int>& normalized() const { return class_of_; }

 private:
  std::vector<int> class_of_;
  int num_classes_;
};

// Smallest act congruence containing the seed pairs: union-find seeded with
// the pairs, then a worklist closes merged pairs under every letter action.
ActCongruence congruence_closure(const FiniteAct& act, const std::vector<std::pair<int, int>>& seed);

struct ReesQuotient {
  FiniteAct act;
  int zero;
  std::vector<int> projection;  // parent element -> quotient element
};

// Quotient collapsing exactly the subact b to a zero element.
ReesQuotient rees_quotient(const FiniteAct& act, const Subact& b);

// Partition of the domain indices by equal image values.
ActCongruence kernel_congruence(const std::vector<int>& image);

// Action of a monoid word on a free-act element: (x, m).w = (x, mw).
inline FreeActElement free_action(const Monoid& m, const FreeActElement& e, const Word& w) {
  return FreeActElement{e.gen, m.multiply(e.m, w)};
}

// Reason the letter table cannot carry an action of the monoid, or nullopt
// if it can. Shared by the FiniteAct constructor and act searches that must
// filter candidate tables without exceptions.
std::optional<std::string> action_incompatibility(const Monoid& m, int n,
                                                  const std::vector<int>& letter_table);

}  // namespace actpres
