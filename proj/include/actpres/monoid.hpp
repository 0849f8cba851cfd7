#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "actpres/rewriting.hpp"
#include "actpres/word.hpp"

namespace actpres {

// Finite monoid given by its full multiplication table, with a designated
// generating set named by letters. Every element must be reachable from the
// identity by right multiplication with letters, so each element gets a
// canonical (shortlex-minimal) word.
class FiniteMonoid {
 public:
  FiniteMonoid(int n, std::vector<int> table, int identity, std::vector<std::string> names,
               Alphabet letters, std::vector<int> letter_elements);

  int size() const { return n_; }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[static_cast<std::size_t>(a) * n_ + b]; }
  const std::string& name(int e) const { return names_[static_cast<std::size_t>(e)]; }
  std::optional<int> element_by_name(const std::string& s) const;

  const Alphabet& letters() const { return letters_; }
  int letter_element(LetterId l) const { return letter_elements_[static_cast<std::size_t>(l)]; }

  int eval(const Word& w) const;                 // fold letters from the identity
  const Word& canonical_word(int e) const { return canonical_[static_cast<std::size_t>(e)]; }

 private:
  int n_;
  std::vector<int> table_;
  int identity_;
  std::vector<std::string> names_;
  Alphabet letters_;
  std::vector<int> letter_elements_;
  std::vector<Word> canonical_;
};

// Builds the Cayley presentation of a finite monoid: one letter per element
// (identity included), rules  z_a z_b -> z_(ab)  and  z_identity -> empty.
// This is a complete length-reducing system presenting the monoid.
FiniteMonoid cayley_monoid(int n, const std::vector<int>& table, int identity,
                           const std::vector<std::string>& names);

struct SearchLimits {
  int max_word_len = 12;
  int max_nodes = 20000;
};

struct DivisorResult {
  std::vector<Word> multipliers;  // canonical words, shortlex order
  bool exact = false;             // the list is provably complete
};

// Uniform handle over the three monoid backends. Elements are canonical
// words: normal forms for rewriting systems, the words themselves for free
// monoids, shortlex-minimal generator words for finite tables.
class Monoid {
 public:
  enum class Kind { Free, Rewriting, Finite };

  static Monoid free_monoid(Alphabet letters);
  static Monoid from_rules(RewritingSystem sys);        // termination enforced
  static Monoid from_table(FiniteMonoid m);

  Kind kind() const;
  const Alphabet& letters() const;
  bool finite() const { return kind() == Kind::Finite; }

  Word canon(const Word& w) const;

  // Equality in the presented monoid. Normal-form comparison when that is
  // decisive (free, finite, or confluent systems); otherwise a bounded
  // zigzag class search, which returns nullopt when the bounds ran out.
  // equal() throws on an undecided query.
  std::optional<bool> try_equal(const Word& a, const Word& b, const SearchLimits& lim = {}) const;
  bool equal(const Word& a, const Word& b) const;
  Word multiply(const Word& a, const Word& b) const { return canon(a.concat(b)); }
  bool is_identity(const Word& w) const { return equal(w, Word{}); }

  // Finite backends: all canonical words. Otherwise all irreducible words of
  // length <= max_len.
  std::vector<Word> elements(int max_len) const;

  // Multipliers n with left * n = target (left and target canonical).
  DivisorResult left_divisors(const Word& left, const Word& target, const SearchLimits& lim = {}) const;

  const FiniteMonoid& table() const;            // Kind::Finite only
  const RewritingSystem& rules() const;         // Kind::Rewriting only
  ConfluenceStatus confluence() const;

  bool same_object(const Monoid& o) const { return impl_ == o.impl_; }
  bool same_definition(const Monoid& o) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  explicit Monoid(std::shared_ptr<const Impl> i) : impl_(std::move(i)) {}
};

// Cayley presentation of a finite monoid as a rewriting system over fresh
// element letters; used where a construction needs defining relations for
// the monoid itself. Letter i names element i via name_for.
RewritingSystem cayley_presentation(const FiniteMonoid& m,
                                    const std::vector<std::string>& element_letters);

}  // namespace actpres
