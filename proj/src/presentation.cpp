#include "actpres/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>

namespace actpres {

namespace {

FreeActElement canon_elem(const Monoid& m, const FreeActElement& e) {
  return FreeActElement{e.gen, m.canon(e.m)};
}

// Equality in the free act over M: same generator and equal monoid parts.
std::optional<bool> elem_equal(const Monoid& m, const FreeActElement& a, const FreeActElement& b,
                               const SearchLimits& lim) {
  if (a.gen != b.gen) return false;
  return m.try_equal(a.m, b.m, lim);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "Proved";
    case Verdict::Disproved: return "Disproved";
    case Verdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- presentation

ActPresentation::ActPresentation(Monoid monoid, Alphabet generators, std::vector<ActRelation> relations)
    : monoid_(std::move(monoid)), generators_(std::move(generators)), relations_(std::move(relations)) {
  if (generators_.size() == 0) throw Error("presentation needs at least one generator");
  if (!generators_.disjoint_from(monoid_.letters()))
    throw Error("generator tokens must not collide with monoid letters");
  for (const ActRelation& r : relations_) {
    for (const FreeActElement* side : {&r.lhs, &r.rhs}) {
      if (side->gen < 0 || static_cast<std::size_t>(side->gen) >= generators_.size())
        throw Error("relation mentions an unknown generator");
      for (LetterId l : side->m.ids)
        if (l < 0 || static_cast<std::size_t>(l) >= monoid_.letters().size())
          throw Error("relation monoid part uses an unknown letter");
    }
  }
}

std::string ActPresentation::print_element(const FreeActElement& e) const {
  return actpres::print_element(generators_, monoid_.letters(), e);
}

std::string ActPresentation::print_relation(const ActRelation& r) const {
  return print_element(r.lhs) + " = " + print_element(r.rhs);
}

bool ActPresentation::same_definition(const ActPresentation& o) const {
  if (!monoid_.same_definition(o.monoid_)) return false;
  if (!(generators_ == o.generators_)) return false;
  if (relations_.size() != o.relations_.size()) return false;
  for (std::size_t i = 0; i < relations_.size(); ++i)
    if (!(relations_[i] == o.relations_[i])) return false;
  return true;
}

// ---------------------------------------------------------------- ground truth

int PresentedAct::element_of(const FreeActElement& e) const {
  const FiniteMonoid& fm = act.monoid().table();
  if (e.gen < 0 || static_cast<std::size_t>(e.gen) * static_cast<std::size_t>(fm.size()) >= grid_image.size())
    throw Error("element outside the presentation's generators");
  return grid_image[static_cast<std::size_t>(e.gen) * static_cast<std::size_t>(fm.size()) +
                    static_cast<std::size_t>(fm.eval(e.m))];
}

PresentedAct act_from_presentation(const ActPresentation& pres) {
  if (!pres.monoid().finite())
    throw Error("materializing a presented act needs a finite monoid backend");
  const FiniteMonoid& fm = pres.monoid().table();
  const int nx = static_cast<int>(pres.generators().size());
  const int nm = fm.size();
  const int n = nx * nm;
  const std::size_t letters = fm.letters().size();
  auto idx = [nm](int x, int e) { return x * nm + e; };

  // The free act X x M with its letter action (x, e) . s = (x, es).
  std::vector<int> table(static_cast<std::size_t>(n) * letters);
  std::vector<std::string> names(static_cast<std::size_t>(n));
  for (int x = 0; x < nx; ++x)
    for (int e = 0; e < nm; ++e) {
      names[static_cast<std::size_t>(idx(x, e))] =
          pres.print_element(FreeActElement{x, fm.canonical_word(e)});
      for (std::size_t l = 0; l < letters; ++l)
        table[static_cast<std::size_t>(idx(x, e)) * letters + l] =
            idx(x, fm.mul(e, fm.letter_element(static_cast<LetterId>(l))));
    }
  FiniteAct grid(pres.monoid(), std::move(names), std::move(table));

  std::vector<std::pair<int, int>> seeds;
  seeds.reserve(pres.relations().size());
  for (const ActRelation& r : pres.relations())
    seeds.emplace_back(idx(r.lhs.gen, fm.eval(r.lhs.m)), idx(r.rhs.gen, fm.eval(r.rhs.m)));
  ActCongruence cong = congruence_closure(grid, seeds);

  const int k = cong.classes();
  std::vector<int> rep(static_cast<std::size_t>(k), -1);
  for (int i = 0; i < n; ++i)
    if (rep[static_cast<std::size_t>(cong.class_of(i))] < 0) rep[static_cast<std::size_t>(cong.class_of(i))] = i;

  std::vector<std::string> qnames(static_cast<std::size_t>(k));
  std::vector<int> qtable(static_cast<std::size_t>(k) * letters);
  for (int c = 0; c < k; ++c) {
    qnames[static_cast<std::size_t>(c)] = grid.name(rep[static_cast<std::size_t>(c)]);
    for (std::size_t l = 0; l < letters; ++l)
      qtable[static_cast<std::size_t>(c) * letters + l] =
          cong.class_of(grid.act_letter(rep[static_cast<std::size_t>(c)], static_cast<LetterId>(l)));
  }

  PresentedAct out{FiniteAct(pres.monoid(), std::move(qnames), std::move(qtable)),
                   std::vector<int>(static_cast<std::size_t>(nx)),
                   std::vector<int>(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) out.grid_image[static_cast<std::size_t>(i)] = cong.class_of(i);
  for (int x = 0; x < nx; ++x)
    out.generator_image[static_cast<std::size_t>(x)] = cong.class_of(idx(x, fm.identity()));
  return out;
}

ActCongruence grid_kernel(const FiniteAct& act, const std::vector<int>& gen_image) {
  if (!act.monoid().finite()) throw Error("grid kernel needs a finite monoid backend");
  const FiniteMonoid& fm = act.monoid().table();
  std::vector<int> image;
  image.reserve(gen_image.size() * static_cast<std::size_t>(fm.size()));
  for (int g : gen_image) {
    if (g < 0 || g >= act.size()) throw Error("generator image out of range");
    for (int e = 0; e < fm.size(); ++e) image.push_back(act.act_element(g, e));
  }
  return kernel_congruence(image);
}

bool satisfies(const ActPresentation& pres, const FiniteAct& act, const std::vector<int>& gen_image,
               std::string* violated) {
  if (!act.monoid().same_definition(pres.monoid()))
    throw Error("act and presentation use different monoids");
  if (gen_image.size() != pres.generators().size())
    throw Error("need one act element per generator");
  for (int g : gen_image)
    if (g < 0 || g >= act.size()) throw Error("generator image out of range");
  for (const ActRelation& r : pres.relations()) {
    int a = act.act_word(gen_image[static_cast<std::size_t>(r.lhs.gen)], r.lhs.m);
    int b = act.act_word(gen_image[static_cast<std::size_t>(r.rhs.gen)], r.rhs.m);
    if (a != b) {
      if (violated)
        *violated = pres.print_relation(r) + " evaluates to " + act.name(a) + " vs " + act.name(b);
      return false;
    }
  }
  return true;
}

bool verify_presentation(const ActPresentation& pres, const FiniteAct& act,
                         const std::vector<int>& gen_image, std::string* why) {
  if (!satisfies(pres, act, gen_image, why)) return false;
  Subact span = subact_generated(act, gen_image);
  if (span.count() != act.size()) {
    if (why) *why = "generator images do not generate the act";
    return false;
  }
  PresentedAct oracle = act_from_presentation(pres);
  ActCongruence presented = kernel_congruence(oracle.grid_image);
  ActCongruence actual = grid_kernel(act, gen_image);
  if (presented.normalized() != actual.normalized()) {
    if (why) {
      *why = "the presented act and the target disagree on the grid kernel";
      const int n = presented.size();
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (presented.related(i, j) != actual.related(i, j)) {
            *why = "grid kernels disagree at cells " + std::to_string(i) + " and " +
                   std::to_string(j) +
                   (presented.related(i, j) ? " (identified by the relations only)"
                                            : " (identified in the target only)");
            i = n;
            break;
          }
    }
    return false;
  }
  return true;
}

InducedHomomorphism induced_homomorphism(const ActPresentation& pres, const FiniteAct& target,
                                         const std::vector<int>& gen_image) {
  std::string why;
  if (!satisfies(pres, target, gen_image, &why))
    throw Error("target does not satisfy the relations: " + why);
  InducedHomomorphism out{act_from_presentation(pres), {}};
  const FiniteMonoid& fm = pres.monoid().table();
  const int nm = fm.size();
  const int k = out.source.act.size();
  out.image.assign(static_cast<std::size_t>(k), -1);
  for (std::size_t i = 0; i < out.source.grid_image.size(); ++i) {
    int c = out.source.grid_image[i];
    if (out.image[static_cast<std::size_t>(c)] >= 0) continue;
    int x = static_cast<int>(i) / nm;
    int e = static_cast<int>(i) % nm;
    out.image[static_cast<std::size_t>(c)] = target.act_element(gen_image[static_cast<std::size_t>(x)], e);
  }
  // The map is well-defined because the relations hold; check it commutes.
  for (int a = 0; a < k; ++a)
    for (std::size_t l = 0; l < pres.monoid().letters().size(); ++l)
      if (out.image[static_cast<std::size_t>(out.source.act.act_letter(a, static_cast<LetterId>(l)))] !=
          target.act_letter(out.image[static_cast<std::size_t>(a)], static_cast<LetterId>(l)))
        throw Error("induced map is not a homomorphism");
  return out;
}

// ---------------------------------------------------------------- certificates

bool replay(const ActPresentation& pres, const RSequence& seq, std::string* detail) {
  const Monoid& M = pres.monoid();
  SearchLimits lim;
  auto fail = [&](const std::string& msg) {
    if (detail) *detail = msg;
    return false;
  };
  FreeActElement cur = canon_elem(M, seq.from);
  for (std::size_t i = 0; i < seq.steps.size(); ++i) {
    const RStep& st = seq.steps[i];
    if (st.relation < 0 || static_cast<std::size_t>(st.relation) >= pres.relations().size())
      return fail("step " + std::to_string(i) + " names an unknown relation");
    const ActRelation& rel = pres.relations()[static_cast<std::size_t>(st.relation)];
    const FreeActElement& p = st.forward ? rel.lhs : rel.rhs;
    const FreeActElement& q = st.forward ? rel.rhs : rel.lhs;
    FreeActElement from = canon_elem(M, free_action(M, p, st.multiplier));
    std::optional<bool> eq = elem_equal(M, cur, from, lim);
    if (!eq.has_value()) return fail("step " + std::to_string(i) + " equality is undecided");
    if (!*eq)
      return fail("step " + std::to_string(i) + " does not match: at " + pres.print_element(cur) +
                  ", step rewrites " + pres.print_element(from));
    cur = canon_elem(M, free_action(M, q, st.multiplier));
  }
  std::optional<bool> eq = elem_equal(M, cur, canon_elem(M, seq.to), lim);
  if (!eq.has_value()) return fail("endpoint equality is undecided");
  if (!*eq)
    return fail("sequence ends at " + pres.print_element(cur) + ", not " + pres.print_element(seq.to));
  return true;
}

std::string print_certificate(const ActPresentation& pres, const RSequence& seq) {
  std::string detail;
  if (!replay(pres, seq, &detail)) throw Error("certificate does not replay: " + detail);
  const Monoid& M = pres.monoid();
  std::ostringstream out;
  out << pres.print_element(canon_elem(M, seq.from)) << "\n";
  FreeActElement cur = canon_elem(M, seq.from);
  for (const RStep& st : seq.steps) {
    const ActRelation& rel = pres.relations()[static_cast<std::size_t>(st.relation)];
    const FreeActElement& q = st.forward ? rel.rhs : rel.lhs;
    cur = canon_elem(M, free_action(M, q, st.multiplier));
    out << "  = " << pres.print_element(cur) << "   [R" << (st.relation + 1) << " "
        << (st.forward ? "forward" : "backward") << " * " << print_word(M.letters(), st.multiplier)
        << "]\n";
  }
  return out.str();
}

// ---------------------------------------------------------------- the prover

namespace {

struct ParentEdge {
  FreeActElement prev;
  RStep step;
  int depth = 0;
  bool seed = false;
};

struct SideState {
  FreeActElement seed;
  std::unordered_map<FreeActElement, ParentEdge, FreeActElementHash> visited;
  std::deque<FreeActElement> frontier;
  bool exact = true;      // every expansion was provably complete
  bool truncated = false; // a node or neighbor was dropped by a bound
};

// All single-step rewrites of e: for each oriented relation (p, q) with the
// same generator, each multiplier t with p.m t = e.m yields q . t.
std::vector<std::pair<FreeActElement, RStep>> expand_node(const ActPresentation& pres,
                                                          const FreeActElement& e,
                                                          const SearchBounds& bounds,
                                                          bool& complete) {
  const Monoid& M = pres.monoid();
  const bool finite = M.finite();
  SearchLimits lim{static_cast<int>(bounds.max_word_len), 20000};
  std::vector<std::pair<FreeActElement, RStep>> out;
  complete = true;
  for (int r = 0; r < static_cast<int>(pres.relations().size()); ++r) {
    for (int ori = 0; ori < 2; ++ori) {
      const bool forward = ori == 0;
      const ActRelation& rel = pres.relations()[static_cast<std::size_t>(r)];
      const FreeActElement& p = forward ? rel.lhs : rel.rhs;
      const FreeActElement& q = forward ? rel.rhs : rel.lhs;
      if (p.gen != e.gen) continue;
      DivisorResult d = M.left_divisors(p.m, e.m, lim);
      if (!d.exact) complete = false;
      for (const Word& t : d.multipliers) {
        Word nm = M.multiply(q.m, t);
        if (!finite && nm.size() > bounds.max_word_len) {
          complete = false;
          continue;
        }
        out.emplace_back(FreeActElement{q.gen, std::move(nm)}, RStep{r, forward, t});
      }
    }
  }
  return out;
}

// Steps along the parent chain from the seed to node, in seed-to-node order.
std::vector<RStep> chain_from_seed(const SideState& side, const FreeActElement& node) {
  std::vector<RStep> steps;
  FreeActElement cur = node;
  for (;;) {
    const ParentEdge& e = side.visited.at(cur);
    if (e.seed) break;
    steps.push_back(e.step);
    cur = e.prev;
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

RSequence stitch_certificate(const FreeActElement& lhs, const FreeActElement& rhs,
                             const SideState& left, const SideState& right,
                             const FreeActElement& meet) {
  RSequence seq;
  seq.from = lhs;
  seq.to = rhs;
  seq.steps = chain_from_seed(left, meet);
  std::vector<RStep> back = chain_from_seed(right, meet);
  for (auto it = back.rbegin(); it != back.rend(); ++it) {
    RStep flipped = *it;
    flipped.forward = !flipped.forward;
    seq.steps.push_back(flipped);
  }
  return seq;
}

std::string describe_table(const Alphabet& letters, int n, const std::vector<int>& table) {
  std::ostringstream os;
  for (int a = 0; a < n; ++a) {
    if (a) os << "; ";
    os << "p" << a << ":";
    for (std::size_t l = 0; l < letters.size(); ++l)
      os << " " << letters.letter(static_cast<LetterId>(l)) << "->p"
         << table[static_cast<std::size_t>(a) * letters.size() + l];
  }
  return os.str();
}

// Searches for a finite act satisfying all relations in which the two sides
// land on different elements. Any hit refutes the consequence outright.
std::optional<std::string> find_separating_act(const ActPresentation& pres, const FreeActElement& lhs,
                                               const FreeActElement& rhs, int max_size) {
  const Monoid& M = pres.monoid();
  const std::size_t L = M.letters().size();
  const int nx = static_cast<int>(pres.generators().size());
  long long budget = 2000000;
  for (int n = 1; n <= max_size; ++n) {
    const std::size_t digits = static_cast<std::size_t>(n) * L;
    // skip sizes whose table space cannot be enumerated within budget
    double space = 1;
    for (std::size_t i = 0; i < digits; ++i) space *= n;
    if (space > static_cast<double>(budget)) break;

    std::vector<int> table(digits, 0);
    for (;;) {
      if (--budget < 0) return std::nullopt;
      if (!action_incompatibility(M, n, table)) {
        auto step = [&](int a, const Word& w) {
          for (LetterId l : w.ids) a = table[static_cast<std::size_t>(a) * L + static_cast<std::size_t>(l)];
          return a;
        };
        std::vector<int> assign(static_cast<std::size_t>(nx), 0);
        for (;;) {
          bool ok = true;
          for (const ActRelation& r : pres.relations()) {
            if (step(assign[static_cast<std::size_t>(r.lhs.gen)], r.lhs.m) !=
                step(assign[static_cast<std::size_t>(r.rhs.gen)], r.rhs.m)) {
              ok = false;
              break;
            }
          }
          if (ok && step(assign[static_cast<std::size_t>(lhs.gen)], lhs.m) !=
                        step(assign[static_cast<std::size_t>(rhs.gen)], rhs.m)) {
            std::ostringstream os;
            os << "a " << n << "-element act satisfying the relations separates the sides (action "
               << describe_table(M.letters(), n, table) << "; generators";
            for (int x = 0; x < nx; ++x)
              os << " " << pres.generators().letter(static_cast<LetterId>(x)) << "->p"
                 << assign[static_cast<std::size_t>(x)];
            os << ")";
            return os.str();
          }
          std::size_t i = assign.size();
          while (i > 0 && assign[i - 1] == n - 1) assign[--i] = 0;
          if (i == 0) break;
          ++assign[i - 1];
        }
      }
      std::size_t i = table.size();
      while (i > 0 && table[i - 1] == n - 1) table[--i] = 0;
      if (i == 0) break;
      ++table[i - 1];
    }
  }
  return std::nullopt;
}

}  // namespace

ConsequenceVerdict is_consequence(const ActPresentation& pres, const FreeActElement& lhs_in,
                                  const FreeActElement& rhs_in, const SearchBounds& bounds) {
  const Monoid& M = pres.monoid();
  for (const FreeActElement* e : {&lhs_in, &rhs_in}) {
    if (e->gen < 0 || static_cast<std::size_t>(e->gen) >= pres.generators().size())
      throw Error("query element uses an unknown generator");
    for (LetterId l : e->m.ids)
      if (l < 0 || static_cast<std::size_t>(l) >= M.letters().size())
        throw Error("query element uses an unknown letter");
  }
  SearchLimits eqlim{static_cast<int>(bounds.max_word_len), 20000};
  FreeActElement lhs = canon_elem(M, lhs_in);
  FreeActElement rhs = canon_elem(M, rhs_in);

  ConsequenceVerdict out;
  std::optional<bool> eq0 = elem_equal(M, lhs, rhs, eqlim);
  if (eq0.has_value() && *eq0) {
    out.verdict = Verdict::Proved;
    out.certificate = RSequence{lhs, rhs, {}};
    out.reason = "the sides are equal in the free act";
    return out;
  }

  SideState sides[2];
  sides[0].seed = lhs;
  sides[1].seed = rhs;
  for (SideState& s : sides) {
    s.visited.emplace(s.seed, ParentEdge{s.seed, RStep{}, 0, true});
    s.frontier.push_back(s.seed);
  }

  auto finish_proved = [&](const FreeActElement& meet) {
    out.verdict = Verdict::Proved;
    out.certificate = stitch_certificate(lhs, rhs, sides[0], sides[1], meet);
    out.reason = "joined after " + std::to_string(out.certificate->steps.size()) + " steps";
    std::string detail;
    if (!replay(pres, *out.certificate, &detail))
      throw Error("internal: certificate does not replay: " + detail);
  };

  while (!sides[0].frontier.empty() || !sides[1].frontier.empty()) {
    int which;
    if (sides[0].frontier.empty())
      which = 1;
    else if (sides[1].frontier.empty())
      which = 0;
    else
      which = sides[0].frontier.size() <= sides[1].frontier.size() ? 0 : 1;
    SideState& side = sides[which];
    SideState& other = sides[1 - which];

    FreeActElement e = side.frontier.front();
    side.frontier.pop_front();
    int depth = side.visited.at(e).depth;
    if (depth >= bounds.max_steps) {
      side.truncated = true;
      continue;
    }
    bool complete = true;
    for (auto& [nb, step] : expand_node(pres, e, bounds, complete)) {
      if (side.visited.count(nb)) continue;
      if (static_cast<int>(side.visited.size()) >= bounds.max_orbit) {
        side.truncated = true;
        break;
      }
      side.visited.emplace(nb, ParentEdge{e, step, depth + 1, false});
      if (other.visited.count(nb)) {
        finish_proved(nb);
        return out;
      }
      side.frontier.push_back(nb);
    }
    if (!complete) side.exact = false;
  }

  // No meet. A side whose whole orbit is enumerated exactly can refute the
  // consequence, provided equality against the other seed is decidable.
  for (int which : {0, 1}) {
    const SideState& side = sides[which];
    const SideState& other = sides[1 - which];
    if (side.truncated || !side.exact) continue;
    bool decisive = true;
    for (const auto& [member, edge] : side.visited) {
      std::optional<bool> eq = elem_equal(M, member, other.seed, eqlim);
      if (!eq.has_value()) {
        decisive = false;
        break;
      }
      if (*eq) {
        // The orbits never met on canonical spellings, but this member is the
        // other seed as a free-act element; stitch the one-sided path.
        RSequence seq;
        if (which == 0) {
          seq.from = lhs;
          seq.to = rhs;
          seq.steps = chain_from_seed(side, member);
        } else {
          seq.from = lhs;
          seq.to = rhs;
          std::vector<RStep> back = chain_from_seed(side, member);
          for (auto it = back.rbegin(); it != back.rend(); ++it) {
            RStep flipped = *it;
            flipped.forward = !flipped.forward;
            seq.steps.push_back(flipped);
          }
        }
        out.verdict = Verdict::Proved;
        out.certificate = std::move(seq);
        out.reason = "joined after " + std::to_string(out.certificate->steps.size()) + " steps";
        std::string detail;
        if (!replay(pres, *out.certificate, &detail))
          throw Error("internal: certificate does not replay: " + detail);
        return out;
      }
    }
    if (decisive) {
      out.verdict = Verdict::Disproved;
      out.reason = std::string("the orbit of the ") + (which == 0 ? "left" : "right") +
                   " side is closed (" + std::to_string(side.visited.size()) +
                   " elements) and never reaches the other side";
      return out;
    }
  }

  if (bounds.max_separator_size > 0) {
    std::optional<std::string> sep = find_separating_act(pres, lhs, rhs, bounds.max_separator_size);
    if (sep.has_value()) {
      out.verdict = Verdict::Disproved;
      out.reason = *sep;
      return out;
    }
  }

  out.verdict = Verdict::Unknown;
  out.reason = "search bounds reached before the orbits closed or met";
  return out;
}

MembershipResult subact_membership(const Monoid& m, const std::vector<FreeActElement>& gens,
                                   const FreeActElement& target, const SearchLimits& lim) {
  MembershipResult out;
  Word t = m.canon(target.m);
  bool all_exact = true;
  for (int i = 0; i < static_cast<int>(gens.size()); ++i) {
    if (gens[static_cast<std::size_t>(i)].gen != target.gen) continue;
    DivisorResult d = m.left_divisors(gens[static_cast<std::size_t>(i)].m, t, lim);
    if (!d.multipliers.empty()) {
      out.verdict = Verdict::Proved;
      out.generator = i;
      out.multiplier = d.multipliers.front();
      out.reason = "target = generator " + std::to_string(i) + " acted on by a multiplier";
      return out;
    }
    if (!d.exact) all_exact = false;
  }
  if (all_exact) {
    out.verdict = Verdict::Disproved;
    out.reason = "no generator left-divides the target";
  } else {
    out.verdict = Verdict::Unknown;
    out.reason = "divisor enumeration was not exhaustive within bounds";
  }
  return out;
}

// ------------------------------------------------------- stock presentations

std::vector<std::string> canonical_generator_tokens(const FiniteAct& act) {
  const Alphabet& letters = act.monoid().letters();
  std::vector<std::string> out;
  std::set<std::string> used;
  for (int a = 0; a < act.size(); ++a) {
    std::string tok;
    for (char c : act.name(a)) {
      if (std::isspace(static_cast<unsigned char>(c)) || c == '.' || c == '^' || c == '(' ||
          c == ')' || c == '=')
        tok += '_';
      else
        tok += c;
    }
    if (!valid_letter_token(tok)) tok = "g" + tok;
    while (!valid_letter_token(tok) || letters.contains(tok) || used.count(tok)) tok = "g" + tok;
    used.insert(tok);
    out.push_back(std::move(tok));
  }
  return out;
}

ActPresentation canonical_presentation(const FiniteAct& act, int style, const std::vector<int>& gens) {
  const Monoid& M = act.monoid();
  std::vector<ActRelation> rels;
  if (style == 1 || style == 2) {
    if (!M.finite()) throw Error("styles 1 and 2 need a finite monoid backend");
    const FiniteMonoid& fm = M.table();
    if (style == 1) {
      Alphabet X(canonical_generator_tokens(act));
      for (int a = 0; a < act.size(); ++a)
        for (int e = 0; e < fm.size(); ++e) {
          ActRelation r{FreeActElement{a, fm.canonical_word(e)},
                        FreeActElement{act.act_element(a, e), Word{}}};
          if (!(r.lhs == r.rhs)) rels.push_back(std::move(r));
        }
      return ActPresentation(M, std::move(X), std::move(rels));
    }
    // style 2: a chosen generating set with every coincidence x . m = y . n
    std::vector<int> chosen = gens;
    if (chosen.empty()) {
      chosen.resize(static_cast<std::size_t>(act.size()));
      for (int a = 0; a < act.size(); ++a) chosen[static_cast<std::size_t>(a)] = a;
    }
    for (int g : chosen)
      if (g < 0 || g >= act.size()) throw Error("generator out of range");
    if (subact_generated(act, chosen).count() != act.size())
      throw Error("chosen elements do not generate the act");
    std::vector<std::string> all_tokens = canonical_generator_tokens(act);
    std::vector<std::string> tokens;
    for (int g : chosen) tokens.push_back(all_tokens[static_cast<std::size_t>(g)]);
    Alphabet X(tokens);
    const int nx = static_cast<int>(chosen.size());
    for (int x = 0; x < nx; ++x)
      for (int e = 0; e < fm.size(); ++e)
        for (int y = x; y < nx; ++y)
          for (int f = (y == x ? e + 1 : 0); f < fm.size(); ++f)
            if (act.act_element(chosen[static_cast<std::size_t>(x)], e) ==
                act.act_element(chosen[static_cast<std::size_t>(y)], f))
              rels.push_back(ActRelation{FreeActElement{x, fm.canonical_word(e)},
                                         FreeActElement{y, fm.canonical_word(f)}});
    return ActPresentation(M, std::move(X), std::move(rels));
  }
  if (style == 3) {
    Alphabet X(canonical_generator_tokens(act));
    for (int a = 0; a < act.size(); ++a)
      for (std::size_t l = 0; l < M.letters().size(); ++l) {
        Word s;
        s.ids.push_back(static_cast<LetterId>(l));
        rels.push_back(ActRelation{FreeActElement{a, std::move(s)},
                                   FreeActElement{act.act_letter(a, static_cast<LetterId>(l)), Word{}}});
      }
    return ActPresentation(M, std::move(X), std::move(rels));
  }
  throw Error("presentation style must be 1, 2 or 3");
}

ActPresentation trivial_act_presentation(const ActPresentation& pres, const std::string& zero) {
  std::optional<LetterId> zi = pres.generators().index_of(zero);
  if (!zi.has_value()) throw Error("zero generator '" + zero + "' is not a generator");
  std::vector<ActRelation> rp;
  std::set<std::pair<Word, Word>> seen;
  for (const ActRelation& r : pres.relations()) {
    ActRelation nr{FreeActElement{0, r.lhs.m}, FreeActElement{0, r.rhs.m}};
    if (nr.lhs == nr.rhs) continue;
    if (seen.emplace(nr.lhs.m, nr.rhs.m).second) rp.push_back(std::move(nr));
  }
  ActPresentation out(pres.monoid(), Alphabet({zero}), std::move(rp));
  if (pres.monoid().finite()) {
    PresentedAct src = act_from_presentation(pres);
    int z = src.generator_image[static_cast<std::size_t>(*zi)];
    for (std::size_t l = 0; l < pres.monoid().letters().size(); ++l)
      if (src.act.act_letter(z, static_cast<LetterId>(l)) != z)
        throw Error("generator '" + zero + "' is not a zero of the presented act");
    if (act_from_presentation(out).act.size() != 1)
      throw Error("internal: collapsed relations do not define the one-element act");
  }
  return out;
}

// ----------------------------------------------------------------- Tietze

namespace {

// Two presentations over the same finite monoid define the same act when
// their shared generators generate both acts and induce equal grid kernels.
void verify_same_presented_act(const ActPresentation& before, const ActPresentation& after) {
  PresentedAct a = act_from_presentation(before);
  PresentedAct b = act_from_presentation(after);
  std::vector<int> ia, ib;
  for (std::size_t x = 0; x < before.generators().size(); ++x) {
    std::optional<LetterId> y = after.generators().index_of(before.generators().letter(static_cast<LetterId>(x)));
    if (!y.has_value()) continue;
    ia.push_back(a.generator_image[x]);
    ib.push_back(b.generator_image[static_cast<std::size_t>(*y)]);
  }
  if (a.act.size() != b.act.size())
    throw Error("internal: transformation changed the size of the presented act");
  if (ia.empty()) return;  // no shared generators left to compare through
  if (subact_generated(a.act, ia).count() != a.act.size() ||
      subact_generated(b.act, ib).count() != b.act.size())
    throw Error("internal: shared generators no longer generate the presented act");
  if (grid_kernel(a.act, ia).normalized() != grid_kernel(b.act, ib).normalized())
    throw Error("internal: transformation changed the presented act");
}

}  // namespace

ActPresentation tietze_apply(const ActPresentation& pres, const TietzeMove& move,
                             const SearchBounds& bounds) {
  std::optional<ActPresentation> result;
  switch (move.kind) {
    case TietzeMove::Kind::AddRelations: {
      std::vector<ActRelation> rels = pres.relations();
      for (const ActRelation& r : move.add_relations) {
        ConsequenceVerdict v = is_consequence(pres, r.lhs, r.rhs, bounds);
        if (v.verdict != Verdict::Proved)
          throw Error("new relation is not a proved consequence (" + std::string(to_string(v.verdict)) +
                      "): " + pres.print_relation(r));
        rels.push_back(r);
      }
      result.emplace(pres.monoid(), pres.generators(), std::move(rels));
      break;
    }
    case TietzeMove::Kind::RemoveRelations: {
      std::vector<int> drop = move.remove_relations;
      std::sort(drop.begin(), drop.end());
      drop.erase(std::unique(drop.begin(), drop.end()), drop.end());
      for (int i : drop)
        if (i < 0 || static_cast<std::size_t>(i) >= pres.relations().size())
          throw Error("relation index out of range");
      std::vector<ActRelation> keep;
      std::size_t next = 0;
      for (std::size_t i = 0; i < pres.relations().size(); ++i) {
        if (next < drop.size() && static_cast<std::size_t>(drop[next]) == i) {
          ++next;
          continue;
        }
        keep.push_back(pres.relations()[i]);
      }
      ActPresentation remainder(pres.monoid(), pres.generators(), keep);
      for (int i : drop) {
        const ActRelation& r = pres.relations()[static_cast<std::size_t>(i)];
        ConsequenceVerdict v = is_consequence(remainder, r.lhs, r.rhs, bounds);
        if (v.verdict != Verdict::Proved)
          throw Error("removed relation does not follow from the remainder (" +
                      std::string(to_string(v.verdict)) + "): " + pres.print_relation(r));
      }
      result = std::move(remainder);
      break;
    }
    case TietzeMove::Kind::AddGenerators: {
      std::vector<std::string> extra;
      for (const auto& [name, w] : move.new_generators) {
        if (w.gen < 0 || static_cast<std::size_t>(w.gen) >= pres.generators().size())
          throw Error("defining word for '" + name + "' uses an unknown generator");
        extra.push_back(name);
      }
      Alphabet X = pres.generators().extended(extra);
      std::vector<ActRelation> rels = pres.relations();
      int next_id = static_cast<int>(pres.generators().size());
      for (const auto& [name, w] : move.new_generators)
        rels.push_back(ActRelation{FreeActElement{next_id++, Word{}}, w});
      result.emplace(pres.monoid(), std::move(X), std::move(rels));
      break;
    }
    case TietzeMove::Kind::RemoveGenerators: {
      std::vector<char> dropped(pres.generators().size(), 0);
      for (const std::string& name : move.drop_generators) {
        std::optional<LetterId> id = pres.generators().index_of(name);
        if (!id.has_value()) throw Error("cannot remove unknown generator '" + name + "'");
        dropped[static_cast<std::size_t>(*id)] = 1;
      }
      // pick a defining relation x . 1 = w (either orientation) per generator
      std::vector<FreeActElement> def(pres.generators().size());
      std::vector<char> consumed(pres.relations().size(), 0);
      for (std::size_t x = 0; x < dropped.size(); ++x) {
        if (!dropped[x]) continue;
        bool found = false;
        for (std::size_t i = 0; i < pres.relations().size() && !found; ++i) {
          if (consumed[i]) continue;
          const ActRelation& r = pres.relations()[i];
          for (const auto& [side, others] :
               {std::pair(r.lhs, r.rhs), std::pair(r.rhs, r.lhs)}) {
            if (side.gen == static_cast<int>(x) && side.m.size() == 0 &&
                !dropped[static_cast<std::size_t>(others.gen)]) {
              def[x] = others;
              consumed[i] = 1;
              found = true;
              break;
            }
          }
        }
        if (!found)
          throw Error("no defining relation " + pres.generators().letter(static_cast<LetterId>(x)) +
                      " . 1 = w over the remaining generators");
      }
      std::vector<std::string> keep_tokens;
      std::vector<int> remap(pres.generators().size(), -1);
      for (std::size_t x = 0; x < dropped.size(); ++x) {
        if (dropped[x]) continue;
        remap[x] = static_cast<int>(keep_tokens.size());
        keep_tokens.push_back(pres.generators().letter(static_cast<LetterId>(x)));
      }
      if (keep_tokens.empty()) throw Error("cannot remove every generator");
      auto substitute = [&](const FreeActElement& e) {
        FreeActElement base = dropped[static_cast<std::size_t>(e.gen)]
                                  ? FreeActElement{def[static_cast<std::size_t>(e.gen)].gen,
                                                   def[static_cast<std::size_t>(e.gen)].m.concat(e.m)}
                                  : e;
        base.gen = remap[static_cast<std::size_t>(base.gen)];
        return base;
      };
      std::vector<ActRelation> rels;
      for (std::size_t i = 0; i < pres.relations().size(); ++i) {
        if (consumed[i]) continue;
        const ActRelation& r = pres.relations()[i];
        rels.push_back(ActRelation{substitute(r.lhs), substitute(r.rhs)});
      }
      result.emplace(pres.monoid(), Alphabet(keep_tokens), std::move(rels));
      break;
    }
  }
  if (pres.monoid().finite()) verify_same_presented_act(pres, *result);
  return *result;
}

}  // namespace actpres
