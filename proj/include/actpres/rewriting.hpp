#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "actpres/word.hpp"

namespace actpres {

struct RewriteRule {
  Word lhs;
  Word rhs;
};

// Rule family  u x^i v -> p x'^e(i) q  for i >= min_count, where e(i) is
// either constant or i + shift. A family without a pumped letter on the
// right has rhs_pump unset and rhs_prefix holds the whole right side.
struct RuleSchema {
  Word lhs_prefix;           // u
  LetterId pumped = 0;       // x
  int min_count = 0;         // k in "i >= k"
  Word lhs_suffix;           // v

  Word rhs_prefix;           // p, or the whole rhs when !rhs_pump
  bool rhs_pump = false;
  LetterId rhs_pumped = 0;   // x'
  bool rhs_exp_affine = false;  // e(i) = i + rhs_exp_shift, else e(i) = rhs_exp_shift
  int rhs_exp_shift = 0;
  Word rhs_suffix;           // q

  int exponent(int i) const { return rhs_exp_affine ? i + rhs_exp_shift : rhs_exp_shift; }
  std::size_t lhs_size(int i) const { return lhs_prefix.size() + static_cast<std::size_t>(i) + lhs_suffix.size(); }
  Word lhs_instance(int i) const;
  Word rhs_instance(int i) const;
  RewriteRule instance(int i) const { return RewriteRule{lhs_instance(i), rhs_instance(i)}; }
};

enum class ConfluenceStatus { Unchecked, Asserted, Checked };

struct RewritingSystem {
  Alphabet alphabet;
  std::vector<RewriteRule> rules;
  std::vector<RuleSchema> schemas;
  // Declared order across rules and schemas; entries are (is_schema, index).
  // Leftmost matching breaks position ties by this order.
  std::vector<std::pair<bool, int>> declaration_order;
  ConfluenceStatus confluence = ConfluenceStatus::Unchecked;
  int confluence_bound = 0;

  void push_rule(RewriteRule r);
  void push_schema(RuleSchema s);
};

struct TerminationReport {
  bool ok = true;
  std::string detail;  // empty when ok
};

// Every plain rule and every schema instance must strictly reduce length
// (checked symbolically for schemas), and schema exponents stay nonnegative.
TerminationReport check_termination(const RewritingSystem& sys);

struct CriticalPairFailure {
  Word overlap;   // the word with two distinct one-step reducts
  Word reduct_a;  // a normal form reachable from one reduct
  Word reduct_b;  // a normal form reachable from the other, not joinable
  std::string origin_a;
  std::string origin_b;
};

struct ConfluenceReport {
  bool ok = true;
  int schema_bound = 0;
  int pairs_checked = 0;
  std::vector<CriticalPairFailure> failures;  // capped
  bool complete = true;  // false if a joinability search hit its budget
};

// Checks all critical pairs among plain rules and schema instances with
// pumping count up to schema_bound. Joinability is decided by exhaustive
// rewriting (all strategies), so a reported failure is a genuine one.
ConfluenceReport check_local_confluence(const RewritingSystem& sys, int schema_bound,
                                        int max_failures = 5);

// Deterministic normal form: leftmost match position, declaration order at
// equal positions, maximal pumped run for schema matches.
Word normal_form(const RewritingSystem& sys, const Word& w);
bool is_irreducible(const RewritingSystem& sys, const Word& w);

// All single-step reducts under any rule, any position, any schema instance.
std::vector<Word> one_step_reducts(const RewritingSystem& sys, const Word& w);

// All irreducible words reachable from w by any rewrite order. complete is
// false if the node budget was hit.
struct ReachableNormalForms {
  std::vector<Word> forms;
  bool complete = true;
};
ReachableNormalForms all_normal_forms(const RewritingSystem& sys, const Word& w, int max_nodes = 50000);

// Words that rewrite to w in one step, capped at max_len (truncated is set
// when the cap cut anything off).
std::vector<Word> one_step_ancestors(const RewritingSystem& sys, const Word& w, std::size_t max_len,
                                     bool& truncated);

// The set { v : v ->* target }, explored upward by inverse rewriting.
// closed means the whole set was enumerated: no candidate exceeded max_len,
// no unbounded schema family was truncated, node budget not hit.
struct AncestorBall {
  std::unordered_set<Word, WordHash> words;
  bool closed = true;
};
AncestorBall ancestors(const RewritingSystem& sys, const Word& target, std::size_t max_len,
                       int max_nodes = 20000);

// Congruence class of seed under the symmetric rewrite relation, explored by
// zigzag search. When closed, the set is the exact class, whether or not the
// system is confluent.
struct WordClassBall {
  std::unordered_set<Word, WordHash> words;
  bool closed = true;
};
WordClassBall congruence_class(const RewritingSystem& sys, const Word& seed, std::size_t max_len,
                               int max_nodes = 20000);

// Longest prefix F of normal word u such that every word with literal prefix
// u rewrites only to words with literal prefix F (computed as a fixpoint over
// possible rule/schema straddles, with unknown letters treated as wildcards;
// conservative, may return a shorter prefix than the true invariant).
Word frozen_prefix(const RewritingSystem& sys, const Word& u);

// Irreducible words of length <= max_len in shortlex order.
std::vector<Word> enumerate_irreducible(const RewritingSystem& sys, std::size_t max_len,
                                        std::size_t max_count = 2000000);

}  // namespace actpres
