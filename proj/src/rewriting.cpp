#include "actpres/rewriting.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace actpres {

namespace {

std::string describe(const RewritingSystem& sys, const Word& w) { return print_word(sys.alphabet, w); }

bool matches_at(const Word& w, std::size_t pos, const Word& pat) {
  if (pos + pat.size() > w.size()) return false;
  for (std::size_t i = 0; i < pat.size(); ++i)
    if (w[pos + i] != pat[i]) return false;
  return true;
}

struct Match {
  std::size_t pos = 0;
  std::size_t lhs_len = 0;
  Word replacement;
};

// Maximal pumped run that still leaves room for the suffix.
std::optional<Match> match_schema_at(const Word& w, std::size_t pos, const RuleSchema& s) {
  if (!matches_at(w, pos, s.lhs_prefix)) return std::nullopt;
  std::size_t base = pos + s.lhs_prefix.size();
  std::size_t run = 0;
  while (base + run < w.size() && w[base + run] == s.pumped) ++run;
  for (std::size_t j = run; j + 1 > static_cast<std::size_t>(s.min_count); --j) {
    if (j < static_cast<std::size_t>(s.min_count)) break;
    if (matches_at(w, base + j, s.lhs_suffix)) {
      Match m;
      m.pos = pos;
      m.lhs_len = s.lhs_size(static_cast<int>(j));
      m.replacement = s.rhs_instance(static_cast<int>(j));
      return m;
    }
    if (j == 0) break;
  }
  return std::nullopt;
}

std::optional<Match> leftmost_match(const RewritingSystem& sys, const Word& w) {
  for (std::size_t pos = 0; pos < w.size(); ++pos) {
    for (const auto& [is_schema, idx] : sys.declaration_order) {
      if (!is_schema) {
        const RewriteRule& r = sys.rules[static_cast<std::size_t>(idx)];
        if (!r.lhs.empty() && matches_at(w, pos, r.lhs))
          return Match{pos, r.lhs.size(), r.rhs};
      } else {
        auto m = match_schema_at(w, pos, sys.schemas[static_cast<std::size_t>(idx)]);
        if (m) return m;
      }
    }
  }
  return std::nullopt;
}

Word apply_match(const Word& w, const Match& m) {
  Word out;
  out.ids.reserve(w.size() - m.lhs_len + m.replacement.size());
  out.ids.insert(out.ids.end(), w.ids.begin(), w.ids.begin() + static_cast<std::ptrdiff_t>(m.pos));
  out.ids.insert(out.ids.end(), m.replacement.ids.begin(), m.replacement.ids.end());
  out.ids.insert(out.ids.end(), w.ids.begin() + static_cast<std::ptrdiff_t>(m.pos + m.lhs_len), w.ids.end());
  return out;
}

}  // namespace

Word RuleSchema::lhs_instance(int i) const {
  Word w = lhs_prefix;
  w.ids.insert(w.ids.end(), static_cast<std::size_t>(i), pumped);
  w.ids.insert(w.ids.end(), lhs_suffix.ids.begin(), lhs_suffix.ids.end());
  return w;
}

Word RuleSchema::rhs_instance(int i) const {
  Word w = rhs_prefix;
  if (rhs_pump) {
    int e = exponent(i);
    w.ids.insert(w.ids.end(), static_cast<std::size_t>(e), rhs_pumped);
    w.ids.insert(w.ids.end(), rhs_suffix.ids.begin(), rhs_suffix.ids.end());
  }
  return w;
}

void RewritingSystem::push_rule(RewriteRule r) {
  declaration_order.emplace_back(false, static_cast<int>(rules.size()));
  rules.push_back(std::move(r));
}

void RewritingSystem::push_schema(RuleSchema s) {
  declaration_order.emplace_back(true, static_cast<int>(schemas.size()));
  schemas.push_back(std::move(s));
}

TerminationReport check_termination(const RewritingSystem& sys) {
  for (std::size_t i = 0; i < sys.rules.size(); ++i) {
    const auto& r = sys.rules[i];
    if (r.lhs.size() <= r.rhs.size()) {
      return {false, "rule " + std::to_string(i) + " (" + describe(sys, r.lhs) + " -> " +
                         describe(sys, r.rhs) + ") is not length-reducing"};
    }
  }
  for (std::size_t i = 0; i < sys.schemas.size(); ++i) {
    const auto& s = sys.schemas[i];
    std::string tag = "schema " + std::to_string(i);
    if (s.min_count < 0) return {false, tag + " has negative exponent bound"};
    if (s.rhs_pump && s.exponent(s.min_count) < 0)
      return {false, tag + " has negative right-side exponent at i = " + std::to_string(s.min_count)};
    // Length drop for all i >= min_count: compare at i = min_count when the
    // right side has constant length, otherwise compare the constant parts.
    std::size_t lhs_const = s.lhs_prefix.size() + s.lhs_suffix.size();
    std::size_t rhs_const = s.rhs_prefix.size() + s.rhs_suffix.size();
    bool ok;
    if (s.rhs_pump && s.rhs_exp_affine) {
      ok = static_cast<long>(lhs_const) > static_cast<long>(rhs_const) + s.rhs_exp_shift;
    } else {
      long rhs_len = static_cast<long>(rhs_const) + (s.rhs_pump ? s.exponent(s.min_count) : 0);
      ok = static_cast<long>(s.lhs_size(s.min_count)) > rhs_len;
    }
    if (!ok) return {false, tag + " is not length-reducing for all admissible exponents"};
  }
  return {};
}

Word normal_form(const RewritingSystem& sys, const Word& w) {
  Word cur = w;
  while (auto m = leftmost_match(sys, cur)) cur = apply_match(cur, *m);
  return cur;
}

bool is_irreducible(const RewritingSystem& sys, const Word& w) {
  return !leftmost_match(sys, w).has_value();
}

std::vector<Word> one_step_reducts(const RewritingSystem& sys, const Word& w) {
  std::vector<Word> out;
  for (std::size_t pos = 0; pos < w.size(); ++pos) {
    for (const auto& r : sys.rules) {
      if (!r.lhs.empty() && matches_at(w, pos, r.lhs))
        out.push_back(apply_match(w, Match{pos, r.lhs.size(), r.rhs}));
    }
    for (const auto& s : sys.schemas) {
      if (!matches_at(w, pos, s.lhs_prefix)) continue;
      std::size_t base = pos + s.lhs_prefix.size();
      std::size_t run = 0;
      while (base + run < w.size() && w[base + run] == s.pumped) ++run;
      for (std::size_t j = static_cast<std::size_t>(s.min_count); j <= run; ++j) {
        if (matches_at(w, base + j, s.lhs_suffix))
          out.push_back(apply_match(
              w, Match{pos, s.lhs_size(static_cast<int>(j)), s.rhs_instance(static_cast<int>(j))}));
      }
    }
  }
  return out;
}

ReachableNormalForms all_normal_forms(const RewritingSystem& sys, const Word& w, int max_nodes) {
  ReachableNormalForms res;
  std::unordered_set<Word, WordHash> seen;
  std::deque<Word> queue{w};
  seen.insert(w);
  while (!queue.empty()) {
    if (static_cast<int>(seen.size()) > max_nodes) {
      res.complete = false;
      break;
    }
    Word cur = queue.front();
    queue.pop_front();
    auto next = one_step_reducts(sys, cur);
    if (next.empty()) {
      res.forms.push_back(cur);
      continue;
    }
    for (auto& n : next)
      if (seen.insert(n).second) queue.push_back(std::move(n));
  }
  std::sort(res.forms.begin(), res.forms.end(), shortlex_less);
  res.forms.erase(std::unique(res.forms.begin(), res.forms.end()), res.forms.end());
  return res;
}

namespace {

struct Inst {
  Word lhs;
  Word rhs;
  std::string origin;
  // identity of the source (for skipping the trivial self pair)
  int source_tag;
};

std::vector<Inst> instantiate_all(const RewritingSystem& sys, int schema_bound) {
  std::vector<Inst> out;
  int tag = 0;
  for (std::size_t i = 0; i < sys.rules.size(); ++i)
    out.push_back({sys.rules[i].lhs, sys.rules[i].rhs, "rule " + std::to_string(i), tag++});
  for (std::size_t i = 0; i < sys.schemas.size(); ++i) {
    const auto& s = sys.schemas[i];
    for (int j = s.min_count; j <= schema_bound; ++j) {
      out.push_back({s.lhs_instance(j), s.rhs_instance(j),
                     "schema " + std::to_string(i) + " at i = " + std::to_string(j), tag++});
    }
  }
  return out;
}

bool joinable(const RewritingSystem& sys, const Word& a, const Word& b, bool& complete) {
  auto na = all_normal_forms(sys, a);
  auto nb = all_normal_forms(sys, b);
  if (!na.complete || !nb.complete) complete = false;
  for (const auto& x : na.forms)
    for (const auto& y : nb.forms)
      if (x == y) return true;
  return false;
}

}  // namespace

ConfluenceReport check_local_confluence(const RewritingSystem& sys, int schema_bound, int max_failures) {
  ConfluenceReport rep;
  rep.schema_bound = schema_bound;
  auto insts = instantiate_all(sys, schema_bound);
  std::unordered_set<Word, WordHash> reported;
  auto consider = [&](const Inst& r1, const Inst& r2, const Word& overlap, const Word& u, const Word& v) {
    ++rep.pairs_checked;
    if (u == v) return;
    if (joinable(sys, u, v, rep.complete)) return;
    rep.ok = false;
    if (static_cast<int>(rep.failures.size()) < max_failures && reported.insert(overlap).second) {
      CriticalPairFailure f;
      f.overlap = overlap;
      f.reduct_a = normal_form(sys, u);
      f.reduct_b = normal_form(sys, v);
      f.origin_a = r1.origin;
      f.origin_b = r2.origin;
      rep.failures.push_back(std::move(f));
    }
  };
  for (const auto& r1 : insts) {
    for (const auto& r2 : insts) {
      const Word& l1 = r1.lhs;
      const Word& l2 = r2.lhs;
      // suffix of l1 meets prefix of l2
      for (std::size_t t = 1; t < std::min(l1.size(), l2.size()); ++t) {
        bool match = true;
        for (std::size_t i = 0; i < t && match; ++i)
          if (l1[l1.size() - t + i] != l2[i]) match = false;
        if (!match) continue;
        Word overlap = l1.concat(l2.suffix_from(t));
        Word u = r1.rhs.concat(l2.suffix_from(t));
        Word v = l1.prefix(l1.size() - t).concat(r2.rhs);
        consider(r1, r2, overlap, u, v);
      }
      // l2 contained in l1
      if (l2.size() <= l1.size()) {
        for (std::size_t p = 0; p + l2.size() <= l1.size(); ++p) {
          if (!matches_at(l1, p, l2)) continue;
          if (p == 0 && l1.size() == l2.size() && r1.source_tag == r2.source_tag) continue;
          Word v = l1.prefix(p).concat(r2.rhs).concat(l1.suffix_from(p + l2.size()));
          consider(r1, r2, l1, r1.rhs, v);
        }
      }
    }
  }
  return rep;
}

std::vector<Word> one_step_ancestors(const RewritingSystem& sys, const Word& w, std::size_t max_len,
                                     bool& truncated) {
  std::vector<Word> out;
  auto offer = [&](Word cand) {
    if (cand.size() > max_len) {
      truncated = true;
      return;
    }
    out.push_back(std::move(cand));
  };
  for (const auto& r : sys.rules) {
    for (std::size_t pos = 0; pos + r.rhs.size() <= w.size(); ++pos) {
      if (!matches_at(w, pos, r.rhs)) continue;
      Word cand = w.prefix(pos).concat(r.lhs).concat(w.suffix_from(pos + r.rhs.size()));
      offer(std::move(cand));
    }
  }
  for (const auto& s : sys.schemas) {
    for (std::size_t pos = 0; pos + s.rhs_prefix.size() <= w.size(); ++pos) {
      if (!matches_at(w, pos, s.rhs_prefix)) continue;
      std::size_t base = pos + s.rhs_prefix.size();
      if (s.rhs_pump && s.rhs_exp_affine) {
        std::size_t run = 0;
        while (base + run < w.size() && w[base + run] == s.rhs_pumped) ++run;
        for (std::size_t e = 0; e <= run; ++e) {
          if (!matches_at(w, base + e, s.rhs_suffix)) continue;
          int i = static_cast<int>(e) - s.rhs_exp_shift;
          if (i < s.min_count) continue;
          std::size_t span = s.rhs_prefix.size() + e + s.rhs_suffix.size();
          Word cand = w.prefix(pos).concat(s.lhs_instance(i)).concat(w.suffix_from(pos + span));
          offer(std::move(cand));
        }
      } else {
        // fixed right side, unbounded family of left sides
        Word rhs = s.rhs_instance(s.min_count);
        if (!matches_at(w, pos, rhs)) continue;
        std::size_t span = rhs.size();
        for (int i = s.min_count;; ++i) {
          std::size_t cand_len = w.size() - span + s.lhs_size(i);
          if (cand_len > max_len) {
            truncated = true;
            break;
          }
          Word cand = w.prefix(pos).concat(s.lhs_instance(i)).concat(w.suffix_from(pos + span));
          offer(std::move(cand));
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

AncestorBall ancestors(const RewritingSystem& sys, const Word& target, std::size_t max_len, int max_nodes) {
  AncestorBall ball;
  std::deque<Word> queue{target};
  ball.words.insert(target);
  while (!queue.empty()) {
    if (static_cast<int>(ball.words.size()) > max_nodes) {
      ball.closed = false;
      break;
    }
    Word w = queue.front();
    queue.pop_front();
    bool truncated = false;
    for (Word& cand : one_step_ancestors(sys, w, max_len, truncated))
      if (ball.words.insert(cand).second) queue.push_back(std::move(cand));
    if (truncated) ball.closed = false;
  }
  return ball;
}

WordClassBall congruence_class(const RewritingSystem& sys, const Word& seed, std::size_t max_len,
                               int max_nodes) {
  WordClassBall ball;
  std::deque<Word> queue{seed};
  ball.words.insert(seed);
  if (seed.size() > max_len) ball.closed = false;
  auto offer = [&](Word cand) {
    if (cand.size() > max_len) {
      ball.closed = false;
      return;
    }
    if (ball.words.insert(cand).second) queue.push_back(std::move(cand));
  };
  while (!queue.empty()) {
    if (static_cast<int>(ball.words.size()) > max_nodes) {
      ball.closed = false;
      break;
    }
    Word w = queue.front();
    queue.pop_front();
    for (Word& cand : one_step_reducts(sys, w)) offer(std::move(cand));
    bool truncated = false;
    for (Word& cand : one_step_ancestors(sys, w, max_len, truncated)) offer(std::move(cand));
    if (truncated) ball.closed = false;
  }
  return ball;
}

namespace {

// Can pattern `pat` match at offset `at` of the known prefix F, treating
// positions >= |F| as wildcards?
bool compatible(const Word& F, std::size_t at, const Word& pat) {
  for (std::size_t i = 0; i < pat.size(); ++i) {
    std::size_t pos = at + i;
    if (pos >= F.size()) return true;  // rest is unknown
    if (F[pos] != pat[i]) return false;
  }
  return true;
}

bool is_prefix_of(const Word& a, const Word& b) { return b.starts_with(a); }

}  // namespace

Word frozen_prefix(const RewritingSystem& sys, const Word& u) {
  Word F = is_irreducible(sys, u) ? u : normal_form(sys, u);
  bool shrunk = true;
  while (shrunk && !F.empty()) {
    shrunk = false;
    for (std::size_t s = 0; s < F.size() && !shrunk; ++s) {
      Word tail = F.suffix_from(s);
      for (const auto& r : sys.rules) {
        if (s + r.lhs.size() <= F.size()) continue;  // fully inside a normal prefix: impossible
        if (!compatible(F, s, r.lhs)) continue;
        if (!is_prefix_of(tail, r.rhs)) {
          F = F.prefix(s);
          shrunk = true;
          break;
        }
      }
      if (shrunk) break;
      for (const auto& sc : sys.schemas) {
        if (!compatible(F, s, sc.lhs_prefix)) continue;
        std::size_t base = s + sc.lhs_prefix.size();
        std::size_t known = base < F.size() ? F.size() - base : 0;
        auto survives = [&](int i) { return is_prefix_of(tail, sc.rhs_instance(i)); };
        bool bad = false;
        // concrete pumping counts whose run ends within the known prefix
        for (int i = sc.min_count; static_cast<std::size_t>(i) < known && !bad; ++i) {
          bool comp = true;
          for (std::size_t idx = 0; idx < known && comp; ++idx) {
            LetterId expect;
            if (idx < static_cast<std::size_t>(i)) {
              expect = sc.pumped;
            } else if (idx - static_cast<std::size_t>(i) < sc.lhs_suffix.size()) {
              expect = sc.lhs_suffix[idx - static_cast<std::size_t>(i)];
            } else {
              // whole instance inside the known (normal) prefix: cannot happen
              comp = false;
              break;
            }
            if (F[base + idx] != expect) comp = false;
          }
          if (comp && !survives(i)) bad = true;
        }
        // collective case: the known residue is all pumped letters, any
        // large enough count is consistent
        if (!bad) {
          bool all_pumped = true;
          for (std::size_t idx = 0; idx < known; ++idx)
            if (F[base + idx] != sc.pumped) all_pumped = false;
          if (all_pumped) {
            int i0 = std::max<int>(sc.min_count, static_cast<int>(known));
            if (!sc.rhs_pump || !sc.rhs_exp_affine) {
              if (!survives(i0)) bad = true;
            } else {
              // affine exponent: the residue after p must sit inside the
              // pumped run of the smallest admissible instance
              if (tail.size() <= sc.rhs_prefix.size()) {
                if (!is_prefix_of(tail, sc.rhs_prefix)) bad = true;
              } else if (!tail.starts_with(sc.rhs_prefix)) {
                bad = true;
              } else {
                std::size_t residue = tail.size() - sc.rhs_prefix.size();
                bool all_rp = true;
                for (std::size_t idx = sc.rhs_prefix.size(); idx < tail.size(); ++idx)
                  if (tail[idx] != sc.rhs_pumped) all_rp = false;
                if (!all_rp || static_cast<int>(residue) > sc.exponent(i0)) bad = true;
              }
            }
          }
        }
        if (bad) {
          F = F.prefix(s);
          shrunk = true;
          break;
        }
      }
    }
  }
  return F;
}

std::vector<Word> enumerate_irreducible(const RewritingSystem& sys, std::size_t max_len,
                                        std::size_t max_count) {
  // a fresh redex after appending a letter must end at the last position
  auto suffix_redex = [&](const Word& w) {
    for (const auto& r : sys.rules) {
      if (r.lhs.size() <= w.size() && matches_at(w, w.size() - r.lhs.size(), r.lhs)) return true;
    }
    for (const auto& s : sys.schemas) {
      if (s.lhs_suffix.size() > w.size()) continue;
      std::size_t vpos = w.size() - s.lhs_suffix.size();
      if (!matches_at(w, vpos, s.lhs_suffix)) continue;
      std::size_t run = 0;
      while (run < vpos && w[vpos - 1 - run] == s.pumped) ++run;
      for (std::size_t i = static_cast<std::size_t>(s.min_count); i <= run; ++i) {
        if (s.lhs_prefix.size() + i > vpos) break;
        if (matches_at(w, vpos - i - s.lhs_prefix.size(), s.lhs_prefix)) return true;
      }
    }
    return false;
  };
  std::vector<Word> out;
  std::deque<Word> layer{Word{}};
  out.push_back(Word{});
  while (!layer.empty() && out.size() < max_count) {
    Word w = layer.front();
    layer.pop_front();
    if (w.size() == max_len) continue;
    for (LetterId l = 0; l < static_cast<LetterId>(sys.alphabet.size()); ++l) {
      Word next = w;
      next.ids.push_back(l);
      if (suffix_redex(next)) continue;
      out.push_back(next);
      layer.push_back(std::move(next));
      if (out.size() >= max_count) break;
    }
  }
  return out;
}

}  // namespace actpres
