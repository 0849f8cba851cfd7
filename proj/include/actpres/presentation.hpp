#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "actpres/act.hpp"
#include "actpres/monoid.hpp"
#include "actpres/word.hpp"

namespace actpres {

// One defining relation u = v between elements of the free act X x M.
struct ActRelation {
  FreeActElement lhs;
  FreeActElement rhs;

  bool operator==(const ActRelation& o) const { return lhs == o.lhs && rhs == o.rhs; }
};

// An act presentation <X | R> over a fixed monoid. Generator tokens live in
// their own alphabet, disjoint from the monoid letters, so elements print
// unambiguously as "x . w".
class ActPresentation {
 public:
  ActPresentation(Monoid monoid, Alphabet generators, std::vector<ActRelation> relations);

  const Monoid& monoid() const { return monoid_; }
  const Alphabet& generators() const { return generators_; }
  const std::vector<ActRelation>& relations() const { return relations_; }

  std::string print_relation(const ActRelation& r) const;
  std::string print_element(const FreeActElement& e) const;

  // Same monoid definition, generator list, and relation list.
  bool same_definition(const ActPresentation& o) const;

 private:
  Monoid monoid_;
  Alphabet generators_;
  std::vector<ActRelation> relations_;
};

// The act defined by a presentation over a finite monoid, materialized as the
// quotient of the grid X x M by the congruence the relations generate.
struct PresentedAct {
  FiniteAct act;
  std::vector<int> generator_image;  // generator index -> element of act
  std::vector<int> grid_image;       // (x * |M| + m) -> element of act

  int element_of(const FreeActElement& e) const;
};

// Ground-truth construction: only available when the monoid is finite.
PresentedAct act_from_presentation(const ActPresentation& pres);

// Kernel of the grid map (x, m) -> gen_image[x] . m for a finite act over a
// finite monoid; two presentations define the same act on the same generator
// list exactly when these kernels agree.
ActCongruence grid_kernel(const FiniteAct& act, const std::vector<int>& gen_image);

// Does the act satisfy every relation under the given generator assignment?
bool satisfies(const ActPresentation& pres, const FiniteAct& act, const std::vector<int>& gen_image,
               std::string* violated = nullptr);

// Prop-style presentation check for finite data: the assignment satisfies R,
// generates the act, and identifies no more than the relations force.
bool verify_presentation(const ActPresentation& pres, const FiniteAct& act,
                         const std::vector<int>& gen_image, std::string* why = nullptr);

// The homomorphism from the presented act induced by a satisfying generator
// assignment: image[e] is where element e of act_from_presentation(pres) goes.
struct InducedHomomorphism {
  PresentedAct source;
  std::vector<int> image;
};
InducedHomomorphism induced_homomorphism(const ActPresentation& pres, const FiniteAct& target,
                                         const std::vector<int>& gen_image);

// One elementary rewrite in the free act: apply relation `relation` (oriented
// left-to-right when `forward`) under right multiplier t, sending p.t to q.t.
struct RStep {
  int relation = 0;
  bool forward = true;
  Word multiplier;
};

// A certificate that `from` and `to` fall together in the congruence the
// relations generate.
struct RSequence {
  FreeActElement from;
  FreeActElement to;
  std::vector<RStep> steps;
};

// Re-run the certificate against the presentation; detail explains failures.
bool replay(const ActPresentation& pres, const RSequence& seq, std::string* detail = nullptr);

// Human-readable text block for a certificate: the starting element followed
// by one line per step giving the element reached and the relation, direction
// and multiplier used. Replays the sequence first and throws on any step that
// does not match.
std::string print_certificate(const ActPresentation& pres, const RSequence& seq);

struct SearchBounds {
  int max_steps = 64;           // certificate length budget
  std::size_t max_word_len = 12;  // monoid-part length cap during search
  int max_orbit = 4000;         // per-side visited cap
  int max_separator_size = 3;   // separating-act search; 0 disables
};

enum class Verdict { Proved, Disproved, Unknown };

const char* to_string(Verdict v);

struct ConsequenceVerdict {
  Verdict verdict = Verdict::Unknown;
  std::optional<RSequence> certificate;  // present exactly when Proved
  std::string reason;
};

// Is lhs = rhs a consequence of the presentation's relations? Proved comes
// with a replayable certificate; Disproved only from exhaustive evidence
// (a fully closed orbit with exact divisor queries, or a finite act that
// satisfies R and separates the two sides).
ConsequenceVerdict is_consequence(const ActPresentation& pres, const FreeActElement& lhs,
                                  const FreeActElement& rhs, const SearchBounds& bounds = {});

// Membership of target in the subact of the free act generated by gens.
struct MembershipResult {
  Verdict verdict = Verdict::Unknown;
  int generator = -1;  // witness index when Proved
  Word multiplier;     // witness multiplier when Proved
  std::string reason;
};
MembershipResult subact_membership(const Monoid& m, const std::vector<FreeActElement>& gens,
                                   const FreeActElement& target, const SearchLimits& lim = {});

// The three stock presentations of a finite act over a finite monoid:
//   1: one generator per element, relations a . m = (am) . 1 for all m;
//   2: caller-chosen generating set, all coincidences x . m = y . n;
//   3: one generator per element, relations a . s = (as) . 1 per letter s.
// Styles 1 and 3 ignore `gens`; style 2 requires a generating set.
ActPresentation canonical_presentation(const FiniteAct& act, int style,
                                       const std::vector<int>& gens = {});

// The generator tokens canonical_presentation picked for the given elements
// (deterministic renaming keeping tokens disjoint from monoid letters).
std::vector<std::string> canonical_generator_tokens(const FiniteAct& act);

// Presentation of the one-element act obtained by collapsing every generator
// of `pres` onto its designated zero generator: output is <zero | R'> with
// R' = {zero . m = zero . n : (x . m, y . n) in R}. The caller asserts that
// `zero` names a generator whose class is a zero of the presented act; both
// the zero property and the collapse are checked on finite backends.
ActPresentation trivial_act_presentation(const ActPresentation& pres, const std::string& zero);

// Tietze moves. Each move is checked before it is applied: added relations
// must be proved consequences, removed relations must follow from what is
// left, and a generator may only be eliminated through a defining relation
// x . 1 = w whose right side avoids every generator being removed.
struct TietzeMove {
  enum class Kind { AddRelations, RemoveRelations, AddGenerators, RemoveGenerators };
  Kind kind = Kind::AddRelations;
  std::vector<ActRelation> add_relations;                            // AddRelations
  std::vector<int> remove_relations;                                 // RemoveRelations (indices)
  std::vector<std::pair<std::string, FreeActElement>> new_generators;  // AddGenerators
  std::vector<std::string> drop_generators;                          // RemoveGenerators
};

ActPresentation tietze_apply(const ActPresentation& pres, const TietzeMove& move,
                             const SearchBounds& bounds = {});

}  // namespace actpres
