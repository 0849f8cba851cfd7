#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "actpres/act.hpp"
#include "actpres/monoid.hpp"
#include "actpres/presentation.hpp"
#include "actpres/word.hpp"

namespace actpres {

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

// The sub-act of a finite act induced on a closed member set, with the
// element renumbering (parent index -> restricted index, -1 outside).
struct RestrictedAct {
  FiniteAct act;
  std::vector<int> index;
};
RestrictedAct restrict_act(const FiniteAct& act, const std::vector<char>& member);

// Defining relations for a finite monoid over its own letters: for every
// element m and letter z, the pair (w_m z, w_{mz}) of canonical words. Any
// word rewrites to its canonical form left-to-right under these, so they
// present the monoid.
std::vector<std::pair<Word, Word>> monoid_relations_from_table(const FiniteMonoid& m);

// Defining relations read off a rewriting system: the plain rules plus every
// schema instance with exponent up to schema_bound. A system with schemas
// and no positive bound is refused — those present infinitely many
// relations, and the finite-complement constructions need all of them.
std::vector<std::pair<Word, Word>> monoid_relations_from_rules(const RewritingSystem& sys,
                                                               int schema_bound);

// Relations S with <0 | S> presenting the one-element act: 0 . z = 0 per
// letter z. Works over any backend with finitely many letters.
std::vector<std::pair<Word, Word>> one_element_act_relations(const Monoid& m);

// The representative choices the constructions consume. Each construction
// reads only the fields it documents; fields left empty are filled by
// deterministic bounded search (shortlex-minimal, first generator) when the
// scene can evaluate candidates, and every supplied entry is validated.
struct ChoiceMaps {
  // ambient spellings of subact / intersection generators
  std::vector<FreeActElement> subact_witnesses;        // quotient + subact ops
  std::vector<FreeActElement> intersection_witnesses;  // component split
  // amalgamated-union representatives, one pair per intersection generator
  std::vector<FreeActElement> left_representatives;
  std::vector<FreeActElement> right_representatives;
  // words over the quotient's non-zero generators that collapse to the zero
  // class, each with its chosen spelling over the subact's generators
  std::vector<std::pair<FreeActElement, FreeActElement>> zero_spellings;
  std::optional<FreeActElement> fixed_zero;  // the designated collapsing word
  // component split: rewriting of ambient words into intersection words
  std::vector<std::pair<FreeActElement, FreeActElement>> intersection_rewrites;
  // generator tokens for constructions that mint their own output alphabet
  std::vector<std::string> tokens;
};

// What a construction hands back: the presentation, a line-per-fact account
// of the relation sets and choices, and whether any bounded search left gaps.
struct ConstructionResult {
  ActPresentation presentation;
  std::vector<std::string> transcript;
  bool complete = true;

  std::string transcript_text() const;
};

// Semantic oracle for one act A with a distinguished subact B, presented by
// pres over its monoid. Finite scenes answer every query exactly through the
// materialized act; ideal scenes treat generators as monoid words (the act
// embeds in M), so equality and membership ride on monoid equality and
// bounded divisor search. Queries may come back nullopt (undecided) only on
// non-finite backends; constructions abort on undecided queries, naming the
// culprit.
class ConstructionScene {
 public:
  // A materialized: pres must be over a finite monoid; member flags B.
  static ConstructionScene finite(const ActPresentation& pres, std::vector<char> member);
  // A = union of the right ideals generated by the generator words (the act
  // generator x stands for the monoid element of generator_words[x]); B is
  // the subact generated by the given elements of A.
  static ConstructionScene right_ideal(const ActPresentation& pres, std::vector<Word> generator_words,
                                       std::vector<FreeActElement> subact_generators,
                                       SearchLimits limits = {});
  // Same embedding, but B given by its finite complement roster instead.
  static ConstructionScene ideal_complement(const ActPresentation& pres,
                                            std::vector<Word> generator_words,
                                            std::vector<FreeActElement> complement,
                                            SearchLimits limits = {});

  const ActPresentation& presentation() const;
  const Monoid& monoid() const;

  std::optional<bool> equal(const FreeActElement& a, const FreeActElement& b) const;
  std::optional<bool> in_subact(const FreeActElement& e) const;
  // First root (in order) and shortlex-least multiplier with root . n = target
  // in A; nullopt when the bounded search cannot decide.
  std::optional<std::pair<int, Word>> factor(const std::vector<FreeActElement>& roots,
                                             const FreeActElement& target) const;

  // Exact finite data, when this scene has it.
  const PresentedAct* oracle() const;
  const std::vector<char>* member() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  explicit ConstructionScene(std::shared_ptr<const Impl> i) : impl_(std::move(i)) {}
};

// ---------------------------------------------------------------------------
// Quotient collapsing a subact to a fresh zero generator
// ---------------------------------------------------------------------------
// Input: <X | R> presenting A over the scene's monoid, the subact B described
// by choices.subact_witnesses (ambient spellings w_y of a generating set of
// B), and relations S with <0 | S> presenting the one-element act. Output:
// the presentation <X \ B, 0 | R1, R2, S> of the quotient, where R1 keeps the
// relations whose sides lie outside B and R2 sends every boundary side
// (spelled over X \ B but landing in B) to zero. On finite scenes the result
// is verified against the directly constructed quotient act.
ConstructionResult rees_quotient_presentation(const ActPresentation& presA,
                                              const ChoiceMaps& choices,
                                              const std::vector<std::pair<Word, Word>>& trivial_relations,
                                              const ConstructionScene& scene);

// ---------------------------------------------------------------------------
// Rebuilding an act from a subact and the quotient that collapsed it
// ---------------------------------------------------------------------------
// Semantic context: zero-ness of words over the quotient's non-zero
// generators, and equality in the rebuilt act A over X then Y' (nullable when
// no spelling choices are needed). The finite factory wires both up from the
// materialized A.
class ExtensionScene {
 public:
  // actA with images for presB's generators and for presQ's non-zero
  // generators (aligned with presQ's alphabet minus the zero token).
  static ExtensionScene finite(const FiniteAct& actA, std::vector<int> image_X,
                               std::vector<int> image_Yprime, std::vector<char> memberB);
  // Manual wiring for non-finite backends.
  static ExtensionScene manual(
      std::function<std::optional<bool>(const FreeActElement&)> represents_zero,
      std::function<std::optional<bool>(const FreeActElement&, const FreeActElement&)> ambient_equal);

  std::optional<bool> represents_zero(const FreeActElement& over_Yprime) const;
  // lhs over Y', rhs over X
  std::optional<bool> ambient_equal(const FreeActElement& lhs, const FreeActElement& rhs) const;
  const FiniteAct* act() const;
  const std::vector<int>* image_X() const;
  const std::vector<int>* image_Yprime() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  explicit ExtensionScene(std::shared_ptr<const Impl> i) : impl_(std::move(i)) {}
};

// Input: <X | R> presenting the subact B, <Y | S> presenting the quotient A/B
// (zero_token names the zero generator when it has one, "" otherwise), and
// the chosen ambient spellings for collapsing words (choices.zero_spellings,
// choices.fixed_zero), completed by search where the scene permits. Output:
// <X, Y' | R, S1, S2> presenting A. Finite scenes verify the result against
// the original act.
ConstructionResult extension_presentation(const ActPresentation& presB, const ActPresentation& presQ,
                                          const std::string& zero_token, const ChoiceMaps& choices,
                                          const ExtensionScene& scene);

// ---------------------------------------------------------------------------
// Amalgamated union of two subacts
// ---------------------------------------------------------------------------
class UnionScene {
 public:
  // actC with images for both input presentations' generators.
  static UnionScene finite(const FiniteAct& actC, std::vector<int> image_X, std::vector<int> image_Y);
  // lhs spelled over X, rhs over Y; nullable when no witnesses are given.
  static UnionScene manual(
      std::function<std::optional<bool>(const FreeActElement&, const FreeActElement&)> same_element);

  std::optional<bool> same_element(const FreeActElement& over_X, const FreeActElement& over_Y) const;
  const FiniteAct* act() const;
  const std::vector<int>* image_X() const;
  const std::vector<int>* image_Y() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  explicit UnionScene(std::shared_ptr<const Impl> i) : impl_(std::move(i)) {}
};

// Input: presentations <X | R> and <Y | S> of the two subacts and one witness
// pair per generator of the intersection (choices.left_representatives /
// right_representatives spelling the same element over X and over Y; both
// empty for disjoint unions). Output: <X, Y | R, S, T> with T equating the
// witness pairs. Finite scenes verify against the union act.
ConstructionResult union_presentation(const ActPresentation& presA, const ActPresentation& presB,
                                      const ChoiceMaps& choices, const UnionScene& scene);

// ---------------------------------------------------------------------------
// One component of a finitely presented union
// ---------------------------------------------------------------------------
class ComponentScene {
 public:
  // actC with images for presC's generators; member_B flags the other
  // component; member_A flags this component (the verification target);
  // image_U places the intersection presentation's generators.
  static ComponentScene finite(const FiniteAct& actC, std::vector<int> image_Z,
                               std::vector<char> member_A, std::vector<char> member_B,
                               std::vector<int> image_U);
  static ComponentScene manual(
      std::function<std::optional<bool>(const FreeActElement&, const FreeActElement&)> same_element,
      std::function<std::optional<std::pair<int, Word>>(const FreeActElement&)> factor_intersection);

  // lhs over Z, rhs over U
  std::optional<bool> same_element(const FreeActElement& over_Z, const FreeActElement& over_U) const;
  // express an ambient element as u . n over the intersection generators
  std::optional<std::pair<int, Word>> factor_intersection(const FreeActElement& over_Z) const;
  const FiniteAct* act() const;
  const std::vector<int>* image_Z() const;
  const std::vector<char>* member_A() const;
  const std::vector<int>* image_U() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  explicit ComponentScene(std::shared_ptr<const Impl> i) : impl_(std::move(i)) {}
};

// Input: <Z | R> presenting the union C = A u B, in_other flagging which
// generators lie in the other component B, an optional presentation <U | S>
// of the intersection, and the witnesses w_u (choices.intersection_witnesses,
// ambient spellings of the intersection generators). Output: the presentation
// <(Z \ B) u U | R1, R2, R3, S> of A. Relations R3 rewrite boundary sides
// into the intersection via choices.intersection_rewrites, completed through
// the scene. Finite scenes verify against the component act.
ConstructionResult union_component_presentation(const ActPresentation& presC,
                                                const std::optional<ActPresentation>& presI,
                                                const std::vector<char>& in_other,
                                                const ChoiceMaps& choices,
                                                const ComponentScene& scene);

// ---------------------------------------------------------------------------
// Generators of the intersection, read off a split presentation
// ---------------------------------------------------------------------------
// For <X u Y | R> with left_alphabet flagging the X generators: the elements
// of relation sides spelled over X whose opposite side is spelled over Y.
// Every element of the intersection is reachable from one of them.
std::vector<FreeActElement> intersection_generators(const ActPresentation& presC,
                                                    const std::vector<char>& left_alphabet);

// ---------------------------------------------------------------------------
// Subact presentation through a rewriting map
// ---------------------------------------------------------------------------
// Input: <X | R> presenting A, the subact B generated by the elements
// choices.subact_witnesses (output tokens from choices.tokens or minted),
// and a stream radius for infinite monoids (ignored on finite backends,
// which materialize the full relation sets). The rewriting map factors each
// member of B through the generators by bounded search; failures are
// reported in the transcript and flip `complete`. Finite scenes verify the
// output against the subact.
ConstructionResult subact_presentation_general(const ActPresentation& presA, const ChoiceMaps& choices,
                                               int depth, const ConstructionScene& scene);

// Checks that a candidate finite relation set can replace a streamed one:
// every candidate relation must be a proved consequence of the streamed
// presentation and vice versa. On success the returned presentation is
// <same generators | candidate>.
struct SimplificationReport {
  bool accepted = false;
  std::optional<ActPresentation> presentation;
  std::vector<std::string> lines;
};
SimplificationReport check_simplification(const ActPresentation& streamed,
                                          const std::vector<ActRelation>& candidate,
                                          const SearchBounds& bounds = {});

// ---------------------------------------------------------------------------
// Large subacts (finite complement)
// ---------------------------------------------------------------------------
// Everything the finite-complement constructions need: the ambient
// presentation, the complement roster, defining relations for the monoid
// over its own letters (schemas must be instantiated up to a declared bound
// beforehand; the bound is recorded), and the semantic scene for B.
struct LargeSubactContext {
  ActPresentation pres;                                // <X | R> for A
  std::vector<FreeActElement> complement;              // roster of A \ B
  std::vector<std::pair<Word, Word>> monoid_relations; // P over the monoid letters
  int schema_bound = 0;                                // recorded in transcripts
  ConstructionScene scene;
};

// Builds and validates a context: roster elements must be pairwise distinct,
// outside B, and every roster-element-times-letter step must land either
// back in the roster or in B (decided by the scene).
LargeSubactContext make_large_subact_context(const ActPresentation& pres,
                                             std::vector<FreeActElement> complement,
                                             std::vector<std::pair<Word, Word>> monoid_relations,
                                             int schema_bound, ConstructionScene scene);

// The generating set (X n B) u S, where S collects the boundary steps
// roster-element . letter that land in B (deduplicated by act equality,
// first-occurrence order). Returned as elements of the free act over X.
std::vector<FreeActElement> large_subact_generators(const LargeSubactContext& ctx);

// The finite presentation <Y | S1, S2> of B: S1 rewrites the ambient
// relations that land in B through the boundary walk, S2 instantiates the
// monoid relations on suffix pairs at boundary generators, filtered by act
// equality. Finite scenes verify the output against the subact.
ConstructionResult large_subact_presentation(const LargeSubactContext& ctx,
                                             const ChoiceMaps& choices = {});

}  // namespace actpres
