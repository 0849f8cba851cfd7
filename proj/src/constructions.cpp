#include "actpres/constructions.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

namespace actpres {

namespace {

FreeActElement canon_elem(const Monoid& m, const FreeActElement& e) {
  return FreeActElement{e.gen, m.canon(e.m)};
}

FreeActElement remap_gen(const FreeActElement& e, const std::vector<int>& genmap) {
  int g = genmap[static_cast<std::size_t>(e.gen)];
  if (g < 0) throw Error("internal: element remapped onto a dropped generator");
  return FreeActElement{g, e.m};
}

// Element indices of a finite monoid in shortlex order of canonical words,
// so searched witnesses come out deterministic and minimal.
std::vector<int> shortlex_elements(const FiniteMonoid& fm) {
  std::vector<int> order(static_cast<std::size_t>(fm.size()));
  for (int i = 0; i < fm.size(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return shortlex_less(fm.canonical_word(a), fm.canonical_word(b));
  });
  return order;
}

bool decide(const std::optional<bool>& v, const std::string& what) {
  if (!v) throw Error("undecided within bounds: " + what);
  return *v;
}

// A token distinct from everything in taken and from the monoid letters.
std::string fresh_token(std::string base, const std::vector<std::string>& taken, const Alphabet& letters) {
  auto used = [&](const std::string& t) {
    if (letters.contains(t) || !valid_letter_token(t)) return true;
    return std::find(taken.begin(), taken.end(), t) != taken.end();
  };
  while (used(base)) base = "z" + base;
  return base;
}

std::vector<std::string> mint_tokens(const std::string& prefix, std::size_t n,
                                     const std::vector<std::string>& supplied, const Alphabet& letters) {
  if (!supplied.empty()) {
    if (supplied.size() != n) throw Error("wrong number of generator tokens supplied");
    return supplied;
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(fresh_token(prefix + std::to_string(i), out, letters));
  return out;
}

void verify_against_oracle(const ActPresentation& out, const FiniteAct& target,
                           const std::vector<int>& images, const char* what) {
  std::string why;
  if (!verify_presentation(out, target, images, &why))
    throw Error(std::string("internal: ") + what + " failed oracle verification: " + why);
}

// Relation accumulator with syntactic deduplication and transcript lines.
struct RelationSink {
  const Monoid& m;
  std::vector<ActRelation> relations;
  std::vector<std::string>* transcript;
  std::set<std::pair<FreeActElement, FreeActElement>> seen;

  void emit(const std::string& tag, FreeActElement lhs, FreeActElement rhs,
            const ActPresentation* printer = nullptr) {
    lhs = canon_elem(m, lhs);
    rhs = canon_elem(m, rhs);
    if (lhs == rhs) return;
    if (!seen.insert({std::min(lhs, rhs), std::max(lhs, rhs)}).second) return;
    relations.push_back(ActRelation{lhs, rhs});
    if (transcript && printer)
      transcript->push_back(tag + ": " + printer->print_relation(relations.back()));
    else if (transcript)
      transcript->push_back(tag + ": (relation)");
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

RestrictedAct restrict_act(const FiniteAct& act, const std::vector<char>& member) {
  if (static_cast<int>(member.size()) != act.size()) throw Error("member flags do not match the act");
  Subact b{member};
  if (b.count() == 0) throw Error("cannot restrict to an empty member set");
  if (!is_subact(act, b)) throw Error("member set is not closed under the action");
  std::vector<int> index(member.size(), -1);
  std::vector<std::string> names;
  int next = 0;
  for (int a = 0; a < act.size(); ++a)
    if (member[static_cast<std::size_t>(a)]) {
      index[static_cast<std::size_t>(a)] = next++;
      names.push_back(act.name(a));
    }
  std::size_t letters = act.monoid().letters().size();
  std::vector<int> table(static_cast<std::size_t>(next) * letters);
  for (int a = 0; a < act.size(); ++a) {
    if (!member[static_cast<std::size_t>(a)]) continue;
    for (std::size_t l = 0; l < letters; ++l)
      table[static_cast<std::size_t>(index[static_cast<std::size_t>(a)]) * letters + l] =
          index[static_cast<std::size_t>(act.act_letter(a, static_cast<LetterId>(l)))];
  }
  return RestrictedAct{FiniteAct(act.monoid(), std::move(names), std::move(table)), std::move(index)};
}

std::vector<std::pair<Word, Word>> monoid_relations_from_table(const FiniteMonoid& m) {
  std::vector<std::pair<Word, Word>> out;
  for (int e = 0; e < m.size(); ++e)
    for (LetterId z = 0; z < static_cast<LetterId>(m.letters().size()); ++z) {
      Word lhs = m.canonical_word(e).concat(Word{{z}});
      Word rhs = m.canonical_word(m.mul(e, m.letter_element(z)));
      if (lhs == rhs) continue;
      out.emplace_back(std::move(lhs), std::move(rhs));
    }
  return out;
}

std::vector<std::pair<Word, Word>> monoid_relations_from_rules(const RewritingSystem& sys,
                                                               int schema_bound) {
  std::vector<std::pair<Word, Word>> out;
  for (const RewriteRule& r : sys.rules) out.emplace_back(r.lhs, r.rhs);
  for (const RuleSchema& s : sys.schemas) {
    if (schema_bound < s.min_count)
      throw Error(
          "the monoid is presented with a rule family; declare an instantiation bound of at "
          "least " +
          std::to_string(s.min_count) + " to use it here");
    for (int i = s.min_count; i <= schema_bound; ++i) {
      RewriteRule r = s.instance(i);
      out.emplace_back(std::move(r.lhs), std::move(r.rhs));
    }
  }
  return out;
}

std::vector<std::pair<Word, Word>> one_element_act_relations(const Monoid& m) {
  std::vector<std::pair<Word, Word>> out;
  for (LetterId z = 0; z < static_cast<LetterId>(m.letters().size()); ++z)
    out.emplace_back(Word{{z}}, Word{});
  return out;
}

std::string ConstructionResult::transcript_text() const {
  std::ostringstream os;
  for (const std::string& line : transcript) os << line << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// ConstructionScene
// ---------------------------------------------------------------------------

struct ConstructionScene::Impl {
  enum class Mode { Finite, Ideal, IdealComplement };
  Mode mode = Mode::Finite;
  ActPresentation pres;
  // finite
  std::optional<PresentedAct> oracle;
  std::vector<char> member;
  std::vector<int> element_order;  // shortlex
  // ideal
  std::vector<Word> generator_words;
  std::vector<FreeActElement> subact_gens;   // flattened to the monoid below
  std::vector<FreeActElement> complement;
  std::vector<Word> flat_subact_gens;
  std::vector<Word> flat_complement;
  SearchLimits limits;

  explicit Impl(ActPresentation p) : pres(std::move(p)) {}

  Word flatten(const FreeActElement& e) const {
    return pres.monoid().multiply(generator_words[static_cast<std::size_t>(e.gen)], e.m);
  }
};

ConstructionScene ConstructionScene::finite(const ActPresentation& pres, std::vector<char> member) {
  auto impl = std::make_shared<Impl>(pres);
  impl->mode = Impl::Mode::Finite;
  impl->oracle = act_from_presentation(pres);
  if (static_cast<int>(member.size()) != impl->oracle->act.size())
    throw Error("member flags do not match the presented act");
  Subact b{member};
  if (b.count() > 0 && !is_subact(impl->oracle->act, b))
    throw Error("member set is not closed under the action");
  impl->member = std::move(member);
  impl->element_order = shortlex_elements(pres.monoid().table());
  return ConstructionScene(std::move(impl));
}

ConstructionScene ConstructionScene::right_ideal(const ActPresentation& pres,
                                                 std::vector<Word> generator_words,
                                                 std::vector<FreeActElement> subact_generators,
                                                 SearchLimits limits) {
  if (generator_words.size() != pres.generators().size())
    throw Error("one embedding word per act generator is required");
  auto impl = std::make_shared<Impl>(pres);
  impl->mode = Impl::Mode::Ideal;
  impl->limits = limits;
  for (Word& w : generator_words) w = pres.monoid().canon(w);
  impl->generator_words = std::move(generator_words);
  impl->subact_gens = std::move(subact_generators);
  for (const FreeActElement& g : impl->subact_gens)
    impl->flat_subact_gens.push_back(impl->flatten(g));
  return ConstructionScene(std::move(impl));
}

ConstructionScene ConstructionScene::ideal_complement(const ActPresentation& pres,
                                                      std::vector<Word> generator_words,
                                                      std::vector<FreeActElement> complement,
                                                      SearchLimits limits) {
  if (generator_words.size() != pres.generators().size())
    throw Error("one embedding word per act generator is required");
  auto impl = std::make_shared<Impl>(pres);
  impl->mode = Impl::Mode::IdealComplement;
  impl->limits = limits;
  for (Word& w : generator_words) w = pres.monoid().canon(w);
  impl->generator_words = std::move(generator_words);
  impl->complement = std::move(complement);
  for (const FreeActElement& c : impl->complement)
    impl->flat_complement.push_back(impl->flatten(c));
  return ConstructionScene(std::move(impl));
}

const ActPresentation& ConstructionScene::presentation() const { return impl_->pres; }
const Monoid& ConstructionScene::monoid() const { return impl_->pres.monoid(); }

std::optional<bool> ConstructionScene::equal(const FreeActElement& a, const FreeActElement& b) const {
  if (impl_->mode == Impl::Mode::Finite)
    return impl_->oracle->element_of(a) == impl_->oracle->element_of(b);
  return monoid().try_equal(impl_->flatten(a), impl_->flatten(b), impl_->limits);
}

std::optional<bool> ConstructionScene::in_subact(const FreeActElement& e) const {
  switch (impl_->mode) {
    case Impl::Mode::Finite:
      return impl_->member[static_cast<std::size_t>(impl_->oracle->element_of(e))] != 0;
    case Impl::Mode::Ideal: {
      std::vector<FreeActElement> gens;
      for (const Word& g : impl_->flat_subact_gens) gens.push_back(FreeActElement{0, g});
      MembershipResult r =
          subact_membership(monoid(), gens, FreeActElement{0, impl_->flatten(e)}, impl_->limits);
      if (r.verdict == Verdict::Proved) return true;
      if (r.verdict == Verdict::Disproved) return false;
      return std::nullopt;
    }
    case Impl::Mode::IdealComplement: {
      Word flat = impl_->flatten(e);
      bool all_decided = true;
      for (const Word& c : impl_->flat_complement) {
        std::optional<bool> eq = monoid().try_equal(flat, c, impl_->limits);
        if (!eq)
          all_decided = false;
        else if (*eq)
          return false;
      }
      if (all_decided) return true;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::optional<std::pair<int, Word>> ConstructionScene::factor(
    const std::vector<FreeActElement>& roots, const FreeActElement& target) const {
  if (impl_->mode == Impl::Mode::Finite) {
    const PresentedAct& o = *impl_->oracle;
    const FiniteMonoid& fm = monoid().table();
    int t = o.element_of(target);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      int r = o.element_of(roots[i]);
      for (int n : impl_->element_order)
        if (o.act.act_element(r, n) == t) return std::make_pair(static_cast<int>(i), fm.canonical_word(n));
    }
    return std::nullopt;
  }
  Word flat = impl_->flatten(target);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    DivisorResult d = monoid().left_divisors(impl_->flatten(roots[i]), flat, impl_->limits);
    if (!d.multipliers.empty()) return std::make_pair(static_cast<int>(i), d.multipliers.front());
  }
  return std::nullopt;
}

const PresentedAct* ConstructionScene::oracle() const {
  return impl_->oracle ? &*impl_->oracle : nullptr;
}

const std::vector<char>* ConstructionScene::member() const {
  return impl_->mode == Impl::Mode::Finite ? &impl_->member : nullptr;
}

// ---------------------------------------------------------------------------
// Rees quotient presentation
// ---------------------------------------------------------------------------

ConstructionResult rees_quotient_presentation(const ActPresentation& presA, const ChoiceMaps& choices,
                                              const std::vector<std::pair<Word, Word>>& trivial_relations,
                                              const ConstructionScene& scene) {
  const Monoid& m = presA.monoid();
  const Alphabet& X = presA.generators();
  if (choices.subact_witnesses.empty())
    throw Error("the subact needs at least one generator witness");

  std::vector<std::string> transcript;

  std::vector<FreeActElement> witnesses;
  for (const FreeActElement& w : choices.subact_witnesses) {
    if (w.gen < 0 || w.gen >= static_cast<LetterId>(X.size()))
      throw Error("subact witness uses an unknown generator");
    FreeActElement cw = canon_elem(m, w);
    if (!decide(scene.in_subact(cw), "membership of witness " + presA.print_element(cw)))
      throw Error("witness " + presA.print_element(cw) + " does not lie in the subact");
    witnesses.push_back(cw);
    transcript.push_back("witness: " + presA.print_element(cw));
  }

  if (scene.oracle()) {
    // the witnesses must generate exactly the flagged subact
    std::vector<int> seeds;
    for (const FreeActElement& w : witnesses) seeds.push_back(scene.oracle()->element_of(w));
    Subact gen = subact_generated(scene.oracle()->act, seeds);
    for (int a = 0; a < scene.oracle()->act.size(); ++a)
      if (gen.contains(a) != (scene.member()->at(static_cast<std::size_t>(a)) != 0))
        throw Error("witnesses do not generate the subact (element " +
                    scene.oracle()->act.name(a) + " differs)");
  } else {
    transcript.push_back("note: witness generation of the subact not verified on this backend");
  }

  // classify generators
  std::vector<char> gen_in_b(X.size(), 0);
  for (LetterId x = 0; x < static_cast<LetterId>(X.size()); ++x)
    gen_in_b[static_cast<std::size_t>(x)] =
        decide(scene.in_subact(FreeActElement{x, Word{}}),
               "membership of generator " + X.letter(x))
            ? 1
            : 0;

  std::vector<std::string> tokens;
  std::vector<int> genmap(X.size(), -1);
  for (LetterId x = 0; x < static_cast<LetterId>(X.size()); ++x)
    if (!gen_in_b[static_cast<std::size_t>(x)]) {
      genmap[static_cast<std::size_t>(x)] = static_cast<int>(tokens.size());
      tokens.push_back(X.letter(x));
    }
  std::string zero = fresh_token("0", tokens, m.letters());
  int zero_gen = static_cast<int>(tokens.size());
  tokens.push_back(zero);
  transcript.push_back("zero generator: " + zero);

  RelationSink sink{m, {}, &transcript, {}};
  ActPresentation printer(m, Alphabet(tokens), {});

  // relations whose sides stay outside the subact
  for (const ActRelation& r : presA.relations()) {
    bool lu = decide(scene.in_subact(r.lhs), "membership of " + presA.print_element(r.lhs));
    bool lv = decide(scene.in_subact(r.rhs), "membership of " + presA.print_element(r.rhs));
    if (lu != lv)
      throw Error("relation sides disagree about subact membership: " + presA.print_relation(r));
    if (lu) continue;
    if (gen_in_b[static_cast<std::size_t>(r.lhs.gen)] || gen_in_b[static_cast<std::size_t>(r.rhs.gen)])
      throw Error("a relation side outside the subact is spelled with a collapsed generator: " +
                  presA.print_relation(r));
    sink.emit("R1", remap_gen(r.lhs, genmap), remap_gen(r.rhs, genmap), &printer);
  }

  // boundary sides: spelled over the kept generators but landing in the subact
  std::vector<FreeActElement> candidates;
  for (const ActRelation& r : presA.relations()) {
    candidates.push_back(r.lhs);
    candidates.push_back(r.rhs);
  }
  for (const FreeActElement& w : witnesses) candidates.push_back(w);
  for (const FreeActElement& c : candidates) {
    if (gen_in_b[static_cast<std::size_t>(c.gen)]) continue;
    if (!decide(scene.in_subact(c), "membership of " + presA.print_element(c))) continue;
    sink.emit("R2", remap_gen(c, genmap), FreeActElement{zero_gen, Word{}}, &printer);
  }

  for (const auto& [s, t] : trivial_relations)
    sink.emit("S", FreeActElement{zero_gen, s}, FreeActElement{zero_gen, t}, &printer);

  ActPresentation out(m, Alphabet(tokens), std::move(sink.relations));

  if (scene.oracle()) {
    Subact b{*scene.member()};
    ReesQuotient q = rees_quotient(scene.oracle()->act, b);
    std::vector<int> images(tokens.size());
    for (LetterId x = 0; x < static_cast<LetterId>(X.size()); ++x)
      if (genmap[static_cast<std::size_t>(x)] >= 0)
        images[static_cast<std::size_t>(genmap[static_cast<std::size_t>(x)])] =
            q.projection[static_cast<std::size_t>(scene.oracle()->generator_image[static_cast<std::size_t>(x)])];
    images[static_cast<std::size_t>(zero_gen)] = q.zero;
    verify_against_oracle(out, q.act, images, "quotient presentation");
    transcript.push_back("verified against the materialized quotient");
  }

  return ConstructionResult{std::move(out), std::move(transcript), true};
}

// ---------------------------------------------------------------------------
// ExtensionScene
// ---------------------------------------------------------------------------

struct ExtensionScene::Impl {
  std::function<std::optional<bool>(const FreeActElement&)> zero_fn;
  std::function<std::optional<bool>(const FreeActElement&, const FreeActElement&)> amb_fn;
  std::optional<FiniteAct> act;
  std::vector<int> image_X;
  std::vector<int> image_Yp;
};

ExtensionScene ExtensionScene::finite(const FiniteAct& actA, std::vector<int> image_X,
                                      std::vector<int> image_Yprime, std::vector<char> memberB) {
  if (static_cast<int>(memberB.size()) != actA.size()) throw Error("member flags do not match the act");
  auto impl = std::make_shared<Impl>();
  impl->act = actA;
  impl->image_X = std::move(image_X);
  impl->image_Yp = std::move(image_Yprime);
  std::vector<char> member = std::move(memberB);
  const FiniteAct* act = &*impl->act;
  const std::vector<int>* yp = &impl->image_Yp;
  const std::vector<int>* xs = &impl->image_X;
  impl->zero_fn = [act, yp, member](const FreeActElement& e) -> std::optional<bool> {
    return member[static_cast<std::size_t>(
               act->act_word((*yp)[static_cast<std::size_t>(e.gen)], e.m))] != 0;
  };
  impl->amb_fn = [act, yp, xs](const FreeActElement& l, const FreeActElement& r) -> std::optional<bool> {
    return act->act_word((*yp)[static_cast<std::size_t>(l.gen)], l.m) ==
           act->act_word((*xs)[static_cast<std::size_t>(r.gen)], r.m);
  };
  return ExtensionScene(std::move(impl));
}

ExtensionScene ExtensionScene::manual(
    std::function<std::optional<bool>(const FreeActElement&)> represents_zero,
    std::function<std::optional<bool>(const FreeActElement&, const FreeActElement&)> ambient_equal) {
  auto impl = std::make_shared<Impl>();
  impl->zero_fn = std::move(represents_zero);
  impl->amb_fn = std::move(ambient_equal);
  return ExtensionScene(std::move(impl));
}

std::optional<bool> ExtensionScene::represents_zero(const FreeActElement& e) const {
  if (!impl_->zero_fn) throw Error("this extension scene cannot decide zero-ness");
  return impl_->zero_fn(e);
}

std::optional<bool> ExtensionScene::ambient_equal(const FreeActElement& l, const FreeActElement& r) const {
  if (!impl_->amb_fn) throw Error("this extension scene cannot compare ambient elements");
  return impl_->amb_fn(l, r);
}

const FiniteAct* ExtensionScene::act() const { return impl_->act ? &*impl_->act : nullptr; }
const std::vector<int>* ExtensionScene::image_X() const { return impl_->act ? &impl_->image_X : nullptr; }
const std::vector<int>* ExtensionScene::image_Yprime() const {
  return impl_->act ? &impl_->image_Yp : nullptr;
}

// ---------------------------------------------------------------------------
// Extension presentation
// ---------------------------------------------------------------------------

ConstructionResult extension_presentation(const ActPresentation& presB, const ActPresentation& presQ,
                                          const std::string& zero_token, const ChoiceMaps& choices,
                                          const ExtensionScene& scene) {
  const Monoid& m = presB.monoid();
  if (!m.same_definition(presQ.monoid()))
    throw Error("the subact and quotient presentations use different monoids");
  const Alphabet& X = presB.generators();
  const Alphabet& Y = presQ.generators();

  LetterId zid = -1;
  if (!zero_token.empty()) {
    std::optional<LetterId> z = Y.index_of(zero_token);
    if (!z) throw Error("zero token '" + zero_token + "' is not a quotient generator");
    zid = *z;
  }

  std::vector<std::string> transcript;

  // output alphabet X then Y' (the quotient generators minus the zero)
  std::vector<std::string> tokens(X.letters());
  std::vector<int> xmap(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) xmap[i] = static_cast<int>(i);
  std::vector<int> ymap(Y.size(), -1);      // Y index -> output index
  std::vector<int> yprime_of(Y.size(), -1);  // Y index -> Y' index (scene addressing)
  int next_yp = 0;
  for (LetterId y = 0; y < static_cast<LetterId>(Y.size()); ++y) {
    if (y == zid) continue;
    if (std::find(tokens.begin(), tokens.end(), Y.letter(y)) != tokens.end())
      throw Error("generator token '" + Y.letter(y) + "' appears in both presentations");
    ymap[static_cast<std::size_t>(y)] = static_cast<int>(tokens.size());
    yprime_of[static_cast<std::size_t>(y)] = next_yp++;
    tokens.push_back(Y.letter(y));
  }

  auto zero_side = [&](const FreeActElement& e) -> bool {
    if (e.gen == zid) return true;
    FreeActElement over_yp{yprime_of[static_cast<std::size_t>(e.gen)], e.m};
    return decide(scene.represents_zero(over_yp),
                  "zero-ness of " + presQ.print_element(e) + " in the quotient");
  };

  RelationSink sink{m, {}, &transcript, {}};
  ActPresentation printer(m, Alphabet(tokens), {});

  for (const ActRelation& r : presB.relations())
    sink.emit("R", remap_gen(r.lhs, xmap), remap_gen(r.rhs, xmap), &printer);

  // quotient relations whose sides stay off the zero class
  std::vector<FreeActElement> collapsing;  // sides over Y' that fall onto the zero
  std::set<std::pair<LetterId, Word>> collapsing_seen;
  auto note_collapsing = [&](const FreeActElement& e) {
    FreeActElement c = canon_elem(m, e);
    if (collapsing_seen.insert({c.gen, c.m}).second) collapsing.push_back(c);
  };
  for (const ActRelation& r : presQ.relations()) {
    bool zu = zero_side(r.lhs);
    bool zv = zero_side(r.rhs);
    if (zu != zv)
      throw Error("quotient relation sides disagree about the zero class: " + presQ.print_relation(r));
    if (!zu) {
      sink.emit("S1", remap_gen(r.lhs, ymap), remap_gen(r.rhs, ymap), &printer);
      continue;
    }
    if (r.lhs.gen != zid) note_collapsing(r.lhs);
    if (r.rhs.gen != zid) note_collapsing(r.rhs);
  }

  // the designated collapsing word z
  std::optional<FreeActElement> fixed;  // over Y
  if (choices.fixed_zero) {
    FreeActElement z = canon_elem(m, *choices.fixed_zero);
    if (z.gen == zid) throw Error("the designated collapsing word must avoid the zero generator");
    if (!zero_side(z))
      throw Error("the designated collapsing word " + presQ.print_element(z) +
                  " does not represent the zero class");
    fixed = z;
  } else if (!collapsing.empty()) {
    fixed = collapsing.front();
  } else if (scene.act() && m.finite()) {
    // exhaustive scan: does any word over Y' collapse at all?
    const FiniteMonoid& fm = m.table();
    for (LetterId y = 0; y < static_cast<LetterId>(Y.size()) && !fixed; ++y) {
      if (y == zid) continue;
      for (int n = 0; n < fm.size() && !fixed; ++n) {
        FreeActElement cand{y, fm.canonical_word(n)};
        if (zero_side(cand)) fixed = cand;
      }
    }
  }
  if (fixed) {
    note_collapsing(*fixed);
    transcript.push_back("designated collapsing word: " + presQ.print_element(*fixed));
  } else {
    if (zid < 0)
      throw Error(
          "the quotient presentation has no zero generator and no collapsing word was found");
    transcript.push_back("no collapsing words: the complement behaves as a subact, S2 is empty");
  }

  // ambient spellings for every collapsing word
  auto alpha_for = [&](const FreeActElement& w) -> FreeActElement {
    for (const auto& [cw, spelling] : choices.zero_spellings)
      if (canon_elem(m, cw) == w) {
        FreeActElement a = canon_elem(m, spelling);
        FreeActElement over_yp{yprime_of[static_cast<std::size_t>(w.gen)], w.m};
        if (!decide(scene.ambient_equal(over_yp, a),
                    "ambient comparison of " + presQ.print_element(w)))
          throw Error("ambient spelling for " + presQ.print_element(w) + " does not match");
        return a;
      }
    if (scene.act() && m.finite()) {
      const FiniteMonoid& fm = m.table();
      FreeActElement over_yp{yprime_of[static_cast<std::size_t>(w.gen)], w.m};
      for (LetterId x = 0; x < static_cast<LetterId>(X.size()); ++x)
        for (int n : shortlex_elements(fm)) {
          FreeActElement cand{x, fm.canonical_word(n)};
          if (decide(scene.ambient_equal(over_yp, cand), "ambient scan") ) return cand;
        }
    }
    throw Error("missing ambient spelling (alpha) for " + presQ.print_element(w));
  };

  for (const FreeActElement& w : collapsing) {
    FreeActElement a = alpha_for(w);
    sink.emit("S2", remap_gen(w, ymap), remap_gen(a, xmap), &printer);
  }

  ActPresentation out(m, Alphabet(tokens), std::move(sink.relations));

  if (scene.act()) {
    std::vector<int> images;
    for (std::size_t i = 0; i < X.size(); ++i)
      images.push_back((*scene.image_X())[i]);
    for (LetterId y = 0; y < static_cast<LetterId>(Y.size()); ++y)
      if (y != zid)
        images.push_back(
            (*scene.image_Yprime())[static_cast<std::size_t>(yprime_of[static_cast<std::size_t>(y)])]);
    verify_against_oracle(out, *scene.act(), images, "extension presentation");
    transcript.push_back("verified against the materialized act");
  }

  return ConstructionResult{std::move(out), std::move(transcript), true};
}

// ---------------------------------------------------------------------------
// UnionScene
// ---------------------------------------------------------------------------

struct UnionScene::Impl {
  std::function<std::optional<bool>(const FreeActElement&, const FreeActElement&)> same;
  std::optional<FiniteAct> act;
  std::vector<int> image_X;
  std::vector<int> image_Y;
};

UnionScene UnionScene::finite(const FiniteAct& actC, std::vector<int> image_X,
                              std::vector<int> image_Y) {
  auto impl = std::make_shared<Impl>();
  impl->act = actC;
  impl->image_X = std::move(image_X);
  impl->image_Y = std::move(image_Y);
  const FiniteAct* act = &*impl->act;
  const std::vector<int>* xs = &impl->image_X;
  const std::vector<int>* ys = &impl->image_Y;
  impl->same = [act, xs, ys](const FreeActElement& a, const FreeActElement& b) -> std::optional<bool> {
    return act->act_word((*xs)[static_cast<std::size_t>(a.gen)], a.m) ==
           act->act_word((*ys)[static_cast<std::size_t>(b.gen)], b.m);
  };
  return UnionScene(std::move(impl));
}

UnionScene UnionScene::manual(
    std::function<std::optional<bool>(const FreeActElement&, const FreeActElement&)> same_element) {
  auto impl = std::make_shared<Impl>();
  impl->same = std::move(same_element);
  return UnionScene(std::move(impl));
}

std::optional<bool> UnionScene::same_element(const FreeActElement& a, const FreeActElement& b) const {
  if (!impl_->same) throw Error("this union scene cannot compare elements");
  return impl_->same(a, b);
}

const FiniteAct* UnionScene::act() const { return impl_->act ? &*impl_->act : nullptr; }
const std::vector<int>* UnionScene::image_X() const { return impl_->act ? &impl_->image_X : nullptr; }
const std::vector<int>* UnionScene::image_Y() const { return impl_->act ? &impl_->image_Y : nullptr; }

// ---------------------------------------------------------------------------
// Union presentation
// ---------------------------------------------------------------------------

ConstructionResult union_presentation(const ActPresentation& presA, const ActPresentation& presB,
                                      const ChoiceMaps& choices, const UnionScene& scene) {
  const Monoid& m = presA.monoid();
  if (!m.same_definition(presB.monoid()))
    throw Error("the component presentations use different monoids");
  if (choices.left_representatives.size() != choices.right_representatives.size())
    throw Error("each intersection generator needs one representative per side");

  const Alphabet& X = presA.generators();
  const Alphabet& Y = presB.generators();
  std::vector<std::string> tokens(X.letters());
  std::vector<int> xmap(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) xmap[i] = static_cast<int>(i);
  std::vector<int> ymap(Y.size());
  for (LetterId y = 0; y < static_cast<LetterId>(Y.size()); ++y) {
    if (std::find(tokens.begin(), tokens.end(), Y.letter(y)) != tokens.end())
      throw Error("generator token '" + Y.letter(y) + "' appears in both presentations");
    ymap[static_cast<std::size_t>(y)] = static_cast<int>(tokens.size());
    tokens.push_back(Y.letter(y));
  }

  std::vector<std::string> transcript;
  RelationSink sink{m, {}, &transcript, {}};
  ActPresentation printer(m, Alphabet(tokens), {});

  for (const ActRelation& r : presA.relations())
    sink.emit("R", remap_gen(r.lhs, xmap), remap_gen(r.rhs, xmap), &printer);
  for (const ActRelation& r : presB.relations())
    sink.emit("S", remap_gen(r.lhs, ymap), remap_gen(r.rhs, ymap), &printer);

  for (std::size_t u = 0; u < choices.left_representatives.size(); ++u) {
    FreeActElement lx = canon_elem(m, choices.left_representatives[u]);
    FreeActElement ry = canon_elem(m, choices.right_representatives[u]);
    if (!decide(scene.same_element(lx, ry),
                "comparison of the representatives of intersection generator " + std::to_string(u)))
      throw Error("representatives of intersection generator " + std::to_string(u) +
                  " name different elements: " + presA.print_element(lx) + " vs " +
                  presB.print_element(ry));
    sink.emit("T", remap_gen(lx, xmap), remap_gen(ry, ymap), &printer);
  }

  ActPresentation out(m, Alphabet(tokens), std::move(sink.relations));

  if (scene.act()) {
    std::vector<int> images(*scene.image_X());
    images.insert(images.end(), scene.image_Y()->begin(), scene.image_Y()->end());
    verify_against_oracle(out, *scene.act(), images, "union presentation");
    transcript.push_back("verified against the materialized union");
  }

  return ConstructionResult{std::move(out), std::move(transcript), true};
}

// ---------------------------------------------------------------------------
// ComponentScene
// ---------------------------------------------------------------------------

struct ComponentScene::Impl {
  std::function<std::optional<bool>(const FreeActElement&, const FreeActElement&)> same;
  std::function<std::optional<std::pair<int, Word>>(const FreeActElement&)> factor;
  std::optional<FiniteAct> act;
  std::vector<int> image_Z;
  std::vector<char> member_A;
  std::vector<int> image_U;
};

ComponentScene ComponentScene::finite(const FiniteAct& actC, std::vector<int> image_Z,
                                      std::vector<char> member_A, std::vector<char> member_B,
                                      std::vector<int> image_U) {
  auto impl = std::make_shared<Impl>();
  impl->act = actC;
  impl->image_Z = std::move(image_Z);
  impl->member_A = std::move(member_A);
  impl->image_U = std::move(image_U);
  const FiniteAct* act = &*impl->act;
  const std::vector<int>* zs = &impl->image_Z;
  const std::vector<int>* us = &impl->image_U;
  impl->same = [act, zs, us](const FreeActElement& a, const FreeActElement& b) -> std::optional<bool> {
    return act->act_word((*zs)[static_cast<std::size_t>(a.gen)], a.m) ==
           act->act_word((*us)[static_cast<std::size_t>(b.gen)], b.m);
  };
  std::vector<int> order = shortlex_elements(actC.monoid().table());
  impl->factor = [act, zs, us, order](const FreeActElement& e)
      -> std::optional<std::pair<int, Word>> {
    int t = act->act_word((*zs)[static_cast<std::size_t>(e.gen)], e.m);
    for (std::size_t u = 0; u < us->size(); ++u)
      for (int n : order)
        if (act->act_element((*us)[u], n) == t)
          return std::make_pair(static_cast<int>(u), act->monoid().table().canonical_word(n));
    return std::nullopt;
  };
  return ComponentScene(std::move(impl));
}

ComponentScene ComponentScene::manual(
    std::function<std::optional<bool>(const FreeActElement&, const FreeActElement&)> same_element,
    std::function<std::optional<std::pair<int, Word>>(const FreeActElement&)> factor_intersection) {
  auto impl = std::make_shared<Impl>();
  impl->same = std::move(same_element);
  impl->factor = std::move(factor_intersection);
  return ComponentScene(std::move(impl));
}

std::optional<bool> ComponentScene::same_element(const FreeActElement& a, const FreeActElement& b) const {
  if (!impl_->same) throw Error("this component scene cannot compare elements");
  return impl_->same(a, b);
}

std::optional<std::pair<int, Word>> ComponentScene::factor_intersection(const FreeActElement& e) const {
  if (!impl_->factor) throw Error("this component scene cannot factor through the intersection");
  return impl_->factor(e);
}

const FiniteAct* ComponentScene::act() const { return impl_->act ? &*impl_->act : nullptr; }
const std::vector<int>* ComponentScene::image_Z() const { return impl_->act ? &impl_->image_Z : nullptr; }
const std::vector<char>* ComponentScene::member_A() const {
  return impl_->act ? &impl_->member_A : nullptr;
}
const std::vector<int>* ComponentScene::image_U() const { return impl_->act ? &impl_->image_U : nullptr; }

// ---------------------------------------------------------------------------
// Union component presentation
// ---------------------------------------------------------------------------

ConstructionResult union_component_presentation(const ActPresentation& presC,
                                                const std::optional<ActPresentation>& presI,
                                                const std::vector<char>& in_other,
                                                const ChoiceMaps& choices,
                                                const ComponentScene& scene) {
  const Monoid& m = presC.monoid();
  const Alphabet& Z = presC.generators();
  if (in_other.size() != Z.size()) throw Error("one membership flag per generator is required");
  if (presI && !m.same_definition(presI->monoid()))
    throw Error("the intersection presentation uses a different monoid");
  std::size_t usize = presI ? presI->generators().size() : 0;
  if (choices.intersection_witnesses.size() != usize)
    throw Error("each intersection generator needs one ambient witness");

  std::vector<std::string> transcript;

  // output alphabet: the generators outside B, then the intersection tokens
  std::vector<std::string> tokens;
  std::vector<int> zmap(Z.size(), -1);
  for (LetterId z = 0; z < static_cast<LetterId>(Z.size()); ++z)
    if (!in_other[static_cast<std::size_t>(z)]) {
      zmap[static_cast<std::size_t>(z)] = static_cast<int>(tokens.size());
      tokens.push_back(Z.letter(z));
    }
  std::vector<int> umap(usize, -1);
  for (std::size_t u = 0; u < usize; ++u) {
    const std::string& tok = presI->generators().letter(static_cast<LetterId>(u));
    if (std::find(tokens.begin(), tokens.end(), tok) != tokens.end())
      throw Error("generator token '" + tok + "' appears in both presentations");
    umap[u] = static_cast<int>(tokens.size());
    tokens.push_back(tok);
  }
  if (tokens.empty()) throw Error("the component has no generators");

  auto in_Y = [&](const FreeActElement& e) { return !in_other[static_cast<std::size_t>(e.gen)]; };

  // validate the ambient witnesses
  for (std::size_t u = 0; u < usize; ++u) {
    FreeActElement w = canon_elem(m, choices.intersection_witnesses[u]);
    if (!decide(scene.same_element(w, FreeActElement{static_cast<LetterId>(u), Word{}}),
                "comparison of witness for intersection generator " + std::to_string(u)))
      throw Error("witness " + presC.print_element(w) + " does not represent intersection generator " +
                  presI->generators().letter(static_cast<LetterId>(u)));
  }

  RelationSink sink{m, {}, &transcript, {}};
  ActPresentation printer(m, Alphabet(tokens), {});

  // relations entirely inside this component
  for (const ActRelation& r : presC.relations())
    if (in_Y(r.lhs) && in_Y(r.rhs))
      sink.emit("R1", remap_gen(r.lhs, zmap), remap_gen(r.rhs, zmap), &printer);

  // intersection generators that were chosen with spellings inside the component
  for (std::size_t u = 0; u < usize; ++u) {
    FreeActElement w = canon_elem(m, choices.intersection_witnesses[u]);
    if (!in_Y(w)) continue;
    sink.emit("R2", FreeActElement{umap[u], Word{}}, remap_gen(w, zmap), &printer);
  }

  // boundary sides rewritten into the intersection
  auto rho = [&](const FreeActElement& p) -> FreeActElement {
    for (const auto& [from, to] : choices.intersection_rewrites)
      if (canon_elem(m, from) == p) {
        FreeActElement r = canon_elem(m, to);
        if (!decide(scene.same_element(p, r), "comparison of the supplied rewrite of " +
                                                  presC.print_element(p)))
          throw Error("supplied rewrite of " + presC.print_element(p) +
                      " names a different element");
        return r;
      }
    std::optional<std::pair<int, Word>> f = scene.factor_intersection(p);
    if (!f)
      throw Error("no rewriting of " + presC.print_element(p) +
                  " into the intersection was found" +
                  (usize == 0 ? " (the intersection is empty)" : ""));
    return FreeActElement{f->first, f->second};
  };
  for (const ActRelation& r : presC.relations()) {
    for (const auto& [p, q] : {std::pair(r.lhs, r.rhs), std::pair(r.rhs, r.lhs)}) {
      if (!in_Y(p) || in_Y(q)) continue;
      FreeActElement target = rho(canon_elem(m, p));
      FreeActElement lhs = remap_gen(p, zmap);
      FreeActElement rhs{umap[static_cast<std::size_t>(target.gen)], target.m};
      sink.emit("R3", lhs, rhs, &printer);
    }
  }

  if (presI)
    for (const ActRelation& r : presI->relations())
      sink.emit("S", remap_gen(r.lhs, umap), remap_gen(r.rhs, umap), &printer);

  ActPresentation out(m, Alphabet(tokens), std::move(sink.relations));

  if (scene.act()) {
    RestrictedAct target = restrict_act(*scene.act(), *scene.member_A());
    std::vector<int> images(tokens.size());
    for (LetterId z = 0; z < static_cast<LetterId>(Z.size()); ++z)
      if (zmap[static_cast<std::size_t>(z)] >= 0)
        images[static_cast<std::size_t>(zmap[static_cast<std::size_t>(z)])] =
            target.index[static_cast<std::size_t>((*scene.image_Z())[static_cast<std::size_t>(z)])];
    for (std::size_t u = 0; u < usize; ++u)
      images[static_cast<std::size_t>(umap[u])] =
          target.index[static_cast<std::size_t>((*scene.image_U())[u])];
    for (int img : images)
      if (img < 0) throw Error("internal: a component generator maps outside the component");
    verify_against_oracle(out, target.act, images, "component presentation");
    transcript.push_back("verified against the materialized component");
  }

  return ConstructionResult{std::move(out), std::move(transcript), true};
}

// ---------------------------------------------------------------------------
// Intersection generators
// ---------------------------------------------------------------------------

std::vector<FreeActElement> intersection_generators(const ActPresentation& presC,
                                                    const std::vector<char>& left_alphabet) {
  if (left_alphabet.size() != presC.generators().size())
    throw Error("one side flag per generator is required");
  const Monoid& m = presC.monoid();
  std::vector<FreeActElement> out;
  std::set<std::pair<LetterId, Word>> seen;
  auto is_left = [&](const FreeActElement& e) {
    return left_alphabet[static_cast<std::size_t>(e.gen)] != 0;
  };
  for (const ActRelation& r : presC.relations())
    for (const auto& [u, v] : {std::pair(r.lhs, r.rhs), std::pair(r.rhs, r.lhs)}) {
      if (!is_left(u) || is_left(v)) continue;
      FreeActElement c = canon_elem(m, u);
      if (seen.insert({c.gen, c.m}).second) out.push_back(c);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Subact presentation through a rewriting map
// ---------------------------------------------------------------------------

ConstructionResult subact_presentation_general(const ActPresentation& presA, const ChoiceMaps& choices,
                                               int depth, const ConstructionScene& scene) {
  const Monoid& m = presA.monoid();
  const Alphabet& X = presA.generators();
  const std::vector<FreeActElement>& raw = choices.subact_witnesses;
  if (raw.empty()) throw Error("the subact needs at least one generator witness");

  std::vector<FreeActElement> roots;
  for (const FreeActElement& w : raw) {
    if (w.gen < 0 || w.gen >= static_cast<LetterId>(X.size()))
      throw Error("subact witness uses an unknown generator");
    FreeActElement c = canon_elem(m, w);
    if (!decide(scene.in_subact(c), "membership of witness " + presA.print_element(c)))
      throw Error("witness " + presA.print_element(c) + " does not lie in the subact");
    roots.push_back(c);
  }

  std::vector<std::string> tokens = mint_tokens("y", roots.size(), choices.tokens, m.letters());
  std::vector<std::string> transcript;
  bool complete = true;
  for (std::size_t i = 0; i < roots.size(); ++i)
    transcript.push_back("generator " + tokens[i] + " stands for " + presA.print_element(roots[i]));

  RelationSink sink{m, {}, &transcript, {}};
  ActPresentation printer(m, Alphabet(tokens), {});

  auto phi = [&](const FreeActElement& e) -> std::optional<FreeActElement> {
    std::optional<std::pair<int, Word>> f = scene.factor(roots, e);
    if (!f) {
      transcript.push_back("gap: no factorization of " + presA.print_element(e) +
                           " through the generators within bounds");
      complete = false;
      return std::nullopt;
    }
    return FreeActElement{f->first, f->second};
  };

  // members of the subact reachable as (x, w): all of them on finite
  // backends, a radius-limited stream otherwise
  std::vector<Word> monoid_ball;
  if (m.finite()) {
    const FiniteMonoid& fm = m.table();
    for (int n : shortlex_elements(fm)) monoid_ball.push_back(fm.canonical_word(n));
  } else {
    monoid_ball = m.elements(depth);
    transcript.push_back("stream radius: " + std::to_string(depth));
  }

  std::vector<FreeActElement> members;
  for (LetterId x = 0; x < static_cast<LetterId>(X.size()); ++x)
    for (const Word& w : monoid_ball) {
      FreeActElement e{x, w};
      if (decide(scene.in_subact(e), "membership of " + presA.print_element(e))) members.push_back(e);
    }

  // each generator names its own spelling
  for (std::size_t y = 0; y < roots.size(); ++y)
    if (std::optional<FreeActElement> img = phi(roots[y]))
      sink.emit("R1", FreeActElement{static_cast<int>(y), Word{}}, *img, &printer);

  // the rewriting map commutes with the action
  for (const FreeActElement& w : members) {
    std::optional<FreeActElement> base = phi(w);
    if (!base) continue;
    for (const Word& n : monoid_ball) {
      FreeActElement moved = canon_elem(m, FreeActElement{w.gen, w.m.concat(n)});
      std::optional<FreeActElement> lhs = phi(moved);
      if (!lhs) continue;
      sink.emit("R2", *lhs, FreeActElement{base->gen, m.multiply(base->m, n)}, &printer);
    }
  }

  // the ambient relations, pushed into the subact
  for (const ActRelation& r : presA.relations())
    for (const Word& n : monoid_ball) {
      FreeActElement un = canon_elem(m, FreeActElement{r.lhs.gen, r.lhs.m.concat(n)});
      if (!decide(scene.in_subact(un), "membership of " + presA.print_element(un))) continue;
      FreeActElement vn = canon_elem(m, FreeActElement{r.rhs.gen, r.rhs.m.concat(n)});
      std::optional<FreeActElement> lhs = phi(un);
      std::optional<FreeActElement> rhs = phi(vn);
      if (!lhs || !rhs) continue;
      sink.emit("R3", *lhs, *rhs, &printer);
    }

  ActPresentation out(m, Alphabet(tokens), std::move(sink.relations));

  if (scene.oracle() && complete) {
    RestrictedAct target = restrict_act(scene.oracle()->act, *scene.member());
    std::vector<int> images;
    for (const FreeActElement& rt : roots)
      images.push_back(target.index[static_cast<std::size_t>(scene.oracle()->element_of(rt))]);
    verify_against_oracle(out, target.act, images, "subact presentation");
    transcript.push_back("verified against the materialized subact");
  }

  return ConstructionResult{std::move(out), std::move(transcript), complete};
}

SimplificationReport check_simplification(const ActPresentation& streamed,
                                          const std::vector<ActRelation>& candidate,
                                          const SearchBounds& bounds) {
  SimplificationReport report;
  ActPresentation replacement(streamed.monoid(), streamed.generators(), candidate);
  bool ok = true;
  for (const ActRelation& r : candidate) {
    ConsequenceVerdict v = is_consequence(streamed, r.lhs, r.rhs, bounds);
    if (v.verdict == Verdict::Proved) {
      report.lines.push_back("candidate " + streamed.print_relation(r) + ": follows in " +
                             std::to_string(v.certificate->steps.size()) + " steps");
    } else {
      report.lines.push_back("candidate " + streamed.print_relation(r) +
                             ": not established (" + to_string(v.verdict) + ")");
      ok = false;
    }
  }
  for (const ActRelation& r : streamed.relations()) {
    ConsequenceVerdict v = is_consequence(replacement, r.lhs, r.rhs, bounds);
    if (v.verdict == Verdict::Proved) {
      report.lines.push_back("streamed " + streamed.print_relation(r) + ": recovered in " +
                             std::to_string(v.certificate->steps.size()) + " steps");
    } else {
      report.lines.push_back("streamed " + streamed.print_relation(r) + ": not recovered (" +
                             to_string(v.verdict) + ")");
      ok = false;
    }
  }
  report.accepted = ok;
  if (ok) report.presentation = std::move(replacement);
  return report;
}

// ---------------------------------------------------------------------------
// Large subacts
// ---------------------------------------------------------------------------

LargeSubactContext make_large_subact_context(const ActPresentation& pres,
                                             std::vector<FreeActElement> complement,
                                             std::vector<std::pair<Word, Word>> monoid_relations,
                                             int schema_bound, ConstructionScene scene) {
  const Monoid& m = pres.monoid();
  for (FreeActElement& c : complement) c = canon_elem(m, c);
  for (std::size_t i = 0; i < complement.size(); ++i) {
    if (decide(scene.in_subact(complement[i]),
               "membership of roster element " + pres.print_element(complement[i])))
      throw Error("roster element " + pres.print_element(complement[i]) + " lies in the subact");
    for (std::size_t j = i + 1; j < complement.size(); ++j)
      if (decide(scene.equal(complement[i], complement[j]), "comparison of roster elements"))
        throw Error("roster elements " + pres.print_element(complement[i]) + " and " +
                    pres.print_element(complement[j]) + " coincide");
  }
  // every roster step lands in the roster or in the subact
  for (const FreeActElement& c : complement)
    for (LetterId z = 0; z < static_cast<LetterId>(m.letters().size()); ++z) {
      FreeActElement e = canon_elem(m, free_action(m, c, Word{{z}}));
      if (decide(scene.in_subact(e), "membership of " + pres.print_element(e))) continue;
      bool found = false;
      for (const FreeActElement& r : complement)
        if (decide(scene.equal(e, r), "roster lookup of " + pres.print_element(e))) {
          found = true;
          break;
        }
      if (!found)
        throw Error("complement is not closed: " + pres.print_element(e) +
                    " is neither in the subact nor in the roster");
    }
  if (const PresentedAct* o = scene.oracle()) {
    int outside = 0;
    for (char f : *scene.member())
      if (!f) ++outside;
    if (outside != static_cast<int>(complement.size()))
      throw Error("roster size does not match the complement of the member set");
    (void)o;
  }
  return LargeSubactContext{pres, std::move(complement), std::move(monoid_relations), schema_bound,
                            std::move(scene)};
}

namespace {

// The boundary walk behind the large-subact operations: the generating set
// (X n B) u S with the roster decomposition of every boundary element.
struct BoundaryWalk {
  std::vector<FreeActElement> generators;  // Y, as elements over X
  struct Edge {
    int roster;
    LetterId letter;
  };
  std::vector<std::optional<Edge>> edges;  // aligned with generators
};

BoundaryWalk boundary_walk(const LargeSubactContext& ctx) {
  const Monoid& m = ctx.pres.monoid();
  const Alphabet& X = ctx.pres.generators();
  BoundaryWalk walk;
  auto push_unique = [&](const FreeActElement& e, std::optional<BoundaryWalk::Edge> edge) {
    for (const FreeActElement& g : walk.generators)
      if (decide(ctx.scene.equal(g, e), "comparison of generators")) return;
    walk.generators.push_back(e);
    walk.edges.push_back(edge);
  };
  for (LetterId x = 0; x < static_cast<LetterId>(X.size()); ++x) {
    FreeActElement e{x, Word{}};
    if (decide(ctx.scene.in_subact(e), "membership of generator " + X.letter(x)))
      push_unique(e, std::nullopt);
  }
  for (std::size_t r = 0; r < ctx.complement.size(); ++r)
    for (LetterId z = 0; z < static_cast<LetterId>(m.letters().size()); ++z) {
      FreeActElement e = canon_elem(m, free_action(m, ctx.complement[r], Word{{z}}));
      if (!decide(ctx.scene.in_subact(e), "membership of " + ctx.pres.print_element(e))) continue;
      push_unique(e, BoundaryWalk::Edge{static_cast<int>(r), z});
    }
  return walk;
}

}  // namespace

std::vector<FreeActElement> large_subact_generators(const LargeSubactContext& ctx) {
  return boundary_walk(ctx).generators;
}

ConstructionResult large_subact_presentation(const LargeSubactContext& ctx, const ChoiceMaps& choices) {
  const Monoid& m = ctx.pres.monoid();
  const ActPresentation& presA = ctx.pres;
  BoundaryWalk walk = boundary_walk(ctx);
  if (walk.generators.empty()) throw Error("the subact has no generators");

  std::vector<std::string> tokens = mint_tokens("y", walk.generators.size(), choices.tokens, m.letters());
  std::vector<std::string> transcript;
  for (std::size_t i = 0; i < walk.generators.size(); ++i) {
    std::string line = "generator " + tokens[i] + " stands for " +
                       presA.print_element(walk.generators[i]);
    if (walk.edges[i])
      line += " (roster element " + presA.print_element(ctx.complement[static_cast<std::size_t>(
                  walk.edges[i]->roster)]) +
              " moved by " + m.letters().letter(walk.edges[i]->letter) + ")";
    transcript.push_back(line);
  }
  if (ctx.schema_bound > 0)
    transcript.push_back("monoid rule families instantiated up to exponent " +
                         std::to_string(ctx.schema_bound));

  // index of the generator equal to a given subact element
  auto generator_index = [&](const FreeActElement& e) -> std::optional<int> {
    for (std::size_t i = 0; i < walk.generators.size(); ++i)
      if (decide(ctx.scene.equal(walk.generators[i], e),
                 "generator lookup of " + presA.print_element(e)))
        return static_cast<int>(i);
    return std::nullopt;
  };

  // scan x . w for the first prefix inside the subact, then re-root there
  auto theta = [&](LetterId x, const Word& w) -> FreeActElement {
    FreeActElement root{x, Word{}};
    if (decide(ctx.scene.in_subact(root), "membership of generator " + presA.generators().letter(x))) {
      std::optional<int> y = generator_index(root);
      if (!y) throw Error("internal: a subact generator of the ambient act is missing from Y");
      return FreeActElement{*y, m.canon(w)};
    }
    for (std::size_t s = 1; s <= w.size(); ++s) {
      FreeActElement head = canon_elem(m, FreeActElement{x, w.prefix(s)});
      if (!decide(ctx.scene.in_subact(head), "membership of " + presA.print_element(head))) continue;
      std::optional<int> y = generator_index(head);
      if (!y)
        throw Error("internal: boundary element " + presA.print_element(head) +
                    " is missing from the generating set");
      return FreeActElement{*y, m.canon(w.suffix_from(s))};
    }
    throw Error("element " + presA.print_element(FreeActElement{x, w}) +
                " never enters the subact along its word");
  };

  RelationSink sink{m, {}, &transcript, {}};
  ActPresentation printer(m, Alphabet(tokens), {});

  // ambient relations that land in the subact, rewritten through the walk
  for (const ActRelation& r : presA.relations()) {
    bool inu = decide(ctx.scene.in_subact(r.lhs), "membership of " + presA.print_element(r.lhs));
    bool inv = decide(ctx.scene.in_subact(r.rhs), "membership of " + presA.print_element(r.rhs));
    if (inu != inv)
      throw Error("relation sides disagree about subact membership: " + presA.print_relation(r));
    if (!inu) continue;
    sink.emit("S1", theta(r.lhs.gen, m.canon(r.lhs.m)), theta(r.rhs.gen, m.canon(r.rhs.m)), &printer);
  }

  // monoid relations instantiated on suffix pairs at boundary generators
  std::vector<int> boundary;
  for (std::size_t i = 0; i < walk.generators.size(); ++i)
    if (walk.edges[i]) boundary.push_back(static_cast<int>(i));
  for (const auto& [p, q] : ctx.monoid_relations) {
    for (std::size_t sp = 0; sp <= p.size(); ++sp)
      for (std::size_t sq = 0; sq <= q.size(); ++sq) {
        Word w = p.suffix_from(sp);
        Word v = q.suffix_from(sq);
        for (int b : boundary)
          for (int c : boundary) {
            FreeActElement lhs{b, m.canon(w)};
            FreeActElement rhs{c, m.canon(v)};
            if (lhs == rhs) continue;
            FreeActElement le = free_action(m, walk.generators[static_cast<std::size_t>(b)], w);
            FreeActElement re = free_action(m, walk.generators[static_cast<std::size_t>(c)], v);
            if (!decide(ctx.scene.equal(le, re), "comparison of " + presA.print_element(le) +
                                                     " and " + presA.print_element(re)))
              continue;
            sink.emit("S2", lhs, rhs, &printer);
          }
      }
  }

  ActPresentation out(m, Alphabet(tokens), std::move(sink.relations));

  if (ctx.scene.oracle()) {
    RestrictedAct target = restrict_act(ctx.scene.oracle()->act, *ctx.scene.member());
    std::vector<int> images;
    for (const FreeActElement& g : walk.generators)
      images.push_back(target.index[static_cast<std::size_t>(ctx.scene.oracle()->element_of(g))]);
    verify_against_oracle(out, target.act, images, "large-subact presentation");
    transcript.push_back("verified against the materialized subact");
  }

  return ConstructionResult{std::move(out), std::move(transcript), true};
}

}  // namespace actpres
