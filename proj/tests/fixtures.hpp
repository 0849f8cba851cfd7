#pragma once

// Rewriting systems shared across the test suite. They mirror the bundled
// corpus cases, so tests and CLI exercise the same data.

#include <string>
#include <vector>

#include "actpres/monoid.hpp"
#include "actpres/rewriting.hpp"
#include "actpres/sampling.hpp"

namespace actpres::fixtures {

inline Word mkw(const Alphabet& a, const std::string& text) { return parse_word(a, text); }

inline RuleSchema pumped_schema(const Alphabet& a, const std::string& lhs_prefix, const std::string& pumped,
                                int min_count, const std::string& lhs_suffix, const std::string& rhs_fixed) {
  RuleSchema s;
  s.lhs_prefix = mkw(a, lhs_prefix);
  s.pumped = *a.index_of(pumped);
  s.min_count = min_count;
  s.lhs_suffix = mkw(a, lhs_suffix);
  s.rhs_prefix = mkw(a, rhs_fixed);
  s.rhs_pump = false;
  return s;
}

// a b^i a -> a b a,  b a^i b -> b a b  (i >= 2),  s a -> a,  t b -> b
inline RewritingSystem ex5_7_system() {
  RewritingSystem sys;
  sys.alphabet = Alphabet({"a", "b", "s", "t"});
  sys.push_schema(pumped_schema(sys.alphabet, "a", "b", 2, "a", "a b a"));
  sys.push_schema(pumped_schema(sys.alphabet, "b", "a", 2, "b", "b a b"));
  sys.push_rule(RewriteRule{mkw(sys.alphabet, "s a"), mkw(sys.alphabet, "a")});
  sys.push_rule(RewriteRule{mkw(sys.alphabet, "t b"), mkw(sys.alphabet, "b")});
  return sys;
}

// a c^i a -> b c^(i-1) b  (i >= 2)
inline RewritingSystem ex5_13_system() {
  RewritingSystem sys;
  sys.alphabet = Alphabet({"a", "b", "c"});
  RuleSchema s;
  s.lhs_prefix = mkw(sys.alphabet, "a");
  s.pumped = *sys.alphabet.index_of("c");
  s.min_count = 2;
  s.lhs_suffix = mkw(sys.alphabet, "a");
  s.rhs_prefix = mkw(sys.alphabet, "b");
  s.rhs_pump = true;
  s.rhs_pumped = *sys.alphabet.index_of("c");
  s.rhs_exp_affine = true;
  s.rhs_exp_shift = -1;
  s.rhs_suffix = mkw(sys.alphabet, "b");
  sys.push_schema(s);
  return sys;
}

// a a -> a,  c a b -> a b,  a b^i a -> a b a  (i >= 2)
inline RewritingSystem ex5_14_system() {
  RewritingSystem sys;
  sys.alphabet = Alphabet({"a", "b", "c"});
  sys.push_rule(RewriteRule{mkw(sys.alphabet, "a a"), mkw(sys.alphabet, "a")});
  sys.push_rule(RewriteRule{mkw(sys.alphabet, "c a b"), mkw(sys.alphabet, "a b")});
  sys.push_schema(pumped_schema(sys.alphabet, "a", "b", 2, "a", "a b a"));
  return sys;
}

// a b^i a -> a b a  (i >= 2)
inline RewritingSystem ex6_10_system() {
  RewritingSystem sys;
  sys.alphabet = Alphabet({"a", "b"});
  sys.push_schema(pumped_schema(sys.alphabet, "a", "b", 2, "a", "a b a"));
  return sys;
}

// Runs the bounded critical-pair check and records a passing result.
inline RewritingSystem with_checked_confluence(RewritingSystem sys, int bound = 8) {
  if (check_local_confluence(sys, bound).ok) sys.confluence = ConfluenceStatus::Checked;
  return sys;
}

// ----- small finite monoids used across the act and presentation tests -----
// The builders live in actpres/sampling.hpp; re-exported here so fixtures
// remain the single include the tests need.

using sampling::cyclic3_monoid;
using sampling::left_zero_monoid;
using sampling::transformation_monoid;
using sampling::two_element_monoid;

}  // namespace actpres::fixtures
