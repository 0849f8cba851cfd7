#include "actpres/cli.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "actpres/constructions.hpp"
#include "actpres/harness.hpp"
#include "actpres/textio.hpp"

#ifndef ACTPRES_CORPUS_DIR
#define ACTPRES_CORPUS_DIR "corpus"
#endif

namespace actpres::cli {

namespace {

using textio::InputDocument;
using textio::MonoidSection;
using textio::RawElem;
using textio::TietzeLine;

constexpr int kProved = 0;
constexpr int kDisproved = 1;
constexpr int kUnknown = 2;
constexpr int kFailure = 3;

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Proved: return kProved;
    case Verdict::Disproved: return kDisproved;
    case Verdict::Unknown: return kUnknown;
  }
  return kFailure;
}

const char* kUsage =
    "usage: actpres <command> ...\n"
    "commands:\n"
    "  nf <monoid-file> <word>\n"
    "  eq <monoid-file> <word> <word>\n"
    "  consequence <pres-file> <elem> <elem> [--max-steps N] [--max-word-len L]\n"
    "  construct rees-quotient <file>\n"
    "  construct extension <subact-file> <quotient-file>\n"
    "  construct union <file-a> <file-b>\n"
    "  construct union-component <file> [<intersection-file>]\n"
    "  construct subact <file> [--depth D]\n"
    "  construct large-subact <file> [--schema-bound B]\n"
    "  tietze <pres-file> <moves-file>\n"
    "  verify <pres-file> <act-file>\n"
    "  corpus run [case] [--dir D]\n"
    "  fuzz-oracle --seeds N [--max-monoid M] [--max-act K] [--base-seed S]\n"
    "words are whitespace-separated letters; the word \"1\" is the identity;\n"
    "elements are written \"gen . word\"\n";

// ------------------------------------------------------------ argument prep

struct Args {
  std::vector<std::string> positional;
  std::map<std::string, std::string> flags;
};

Args split_args(const std::vector<std::string>& raw, std::size_t from) {
  Args out;
  for (std::size_t i = from; i < raw.size(); ++i) {
    if (raw[i].rfind("--", 0) == 0) {
      if (i + 1 >= raw.size()) throw Error("flag " + raw[i] + " needs a value");
      out.flags[raw[i].substr(2)] = raw[i + 1];
      ++i;
    } else {
      out.positional.push_back(raw[i]);
    }
  }
  return out;
}

int flag_int(const Args& args, const std::string& name, int fallback) {
  auto it = args.flags.find(name);
  if (it == args.flags.end()) return fallback;
  try {
    std::size_t used = 0;
    int v = std::stoi(it->second, &used);
    if (used != it->second.size()) throw Error("");
    return v;
  } catch (...) {
    throw Error("flag --" + name + " needs a number, got '" + it->second + "'");
  }
}

void reject_unknown_flags(const Args& args, const std::vector<std::string>& known) {
  for (const auto& [name, value] : args.flags)
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw Error("unknown flag --" + name);
}

SearchBounds bounds_from(const Args& args) {
  SearchBounds b;
  b.max_steps = flag_int(args, "max-steps", b.max_steps);
  b.max_word_len = static_cast<std::size_t>(
      flag_int(args, "max-word-len", static_cast<int>(b.max_word_len)));
  return b;
}

// --------------------------------------------------------- document loading

struct Loaded {
  std::string path;
  InputDocument doc;
  Monoid monoid;
};

Loaded load(const std::string& path) {
  InputDocument doc = textio::parse_document_file(path);
  if (!doc.monoid) throw Error(path + ": no [monoid] section");
  Monoid m = doc.monoid->build();
  return Loaded{path, std::move(doc), std::move(m)};
}

const textio::PresentationSection& pres_section(const Loaded& l) {
  if (!l.doc.presentation) throw Error(l.path + ": no [act-presentation] section");
  return *l.doc.presentation;
}

ActPresentation build_pres(const Loaded& l) { return pres_section(l).build(l.monoid); }

std::string comma_list(const std::vector<std::string>& items) {
  std::string out;
  for (const std::string& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

// Word argument from the command line, lexed against the monoid letters.
Word word_arg(const Monoid& m, const std::string& text) {
  std::vector<std::string> toks = split_tokens(text);
  if (toks.empty()) throw Error("empty word argument; the identity is written \"1\"");
  for (const std::string& tok : toks)
    if (tok != "1" && !m.letters().contains(tok))
      throw Error("unknown letter '" + tok + "' in word argument; letters: " +
                  comma_list(m.letters().letters()));
  return parse_word(m.letters(), toks);
}

// Element argument "gen . word" against a presentation's alphabets.
FreeActElement elem_arg(const ActPresentation& pres, const std::string& text) {
  std::vector<std::string> toks = split_tokens(text);
  if (toks.size() < 3 || toks[1] != ".")
    throw Error("element argument must be written \"gen . word\", got '" + text + "'");
  std::optional<LetterId> g = pres.generators().index_of(toks[0]);
  if (!g)
    throw Error("unknown generator '" + toks[0] +
                "'; generators: " + comma_list(pres.generators().letters()));
  const Monoid& m = pres.monoid();
  for (std::size_t i = 2; i < toks.size(); ++i)
    if (toks[i] != "1" && !m.letters().contains(toks[i]))
      throw Error("unknown letter '" + toks[i] + "' in element argument; letters: " +
                  comma_list(m.letters().letters()));
  return FreeActElement{*g, parse_word(m.letters(), std::vector<std::string>(toks.begin() + 2,
                                                                             toks.end()))};
}

// Raw "gen . word" reference resolved against a generator alphabet, keeping
// the source position in errors.
FreeActElement resolve_raw(const Alphabet& gens, const RawElem& e, const std::string& role) {
  std::optional<LetterId> g = gens.index_of(e.gen);
  if (!g) throw textio::ParseError(e.pos, "unknown " + role + " generator '" + e.gen + "'",
                                   gens.letters());
  return FreeActElement{*g, e.m};
}

// ------------------------------------------------------------ scene helpers

std::vector<Word> embedding_words(const Loaded& l) {
  const textio::PresentationSection& sec = pres_section(l);
  std::vector<Word> words;
  for (std::size_t g = 0; g < sec.generators.size(); ++g) {
    if (!sec.embeddings[g])
      throw Error(l.path + ": over a non-finite monoid every generator needs an 'embedding' line (" +
                  sec.generators[g] + " has none)");
    words.push_back(*sec.embeddings[g]);
  }
  return words;
}

// Scene for one presentation with a subact described by witnesses (mode
// false) or a complement roster (mode true).
ConstructionScene derive_scene(const Loaded& l, const ActPresentation& pres,
                               const std::vector<FreeActElement>& witnesses,
                               const std::vector<FreeActElement>& roster, bool complement_mode) {
  if (l.monoid.finite()) {
    PresentedAct p = act_from_presentation(pres);
    std::vector<char> member;
    if (complement_mode) {
      member.assign(static_cast<std::size_t>(p.act.size()), 1);
      for (const FreeActElement& r : roster)
        member[static_cast<std::size_t>(p.element_of(r))] = 0;
    } else {
      std::vector<int> seeds;
      for (const FreeActElement& w : witnesses) seeds.push_back(p.element_of(w));
      member = subact_generated(p.act, seeds).member;
    }
    return ConstructionScene::finite(pres, std::move(member));
  }
  std::vector<Word> words = embedding_words(l);
  return complement_mode ? ConstructionScene::ideal_complement(pres, std::move(words), roster)
                         : ConstructionScene::right_ideal(pres, std::move(words), witnesses);
}

std::vector<FreeActElement> subact_witnesses(const Loaded& l) {
  if (!l.doc.subact || l.doc.subact->witnesses.empty())
    throw Error(l.path + ": needs a [subact] section with 'witness' lines");
  return l.doc.subact->witnesses;
}

std::vector<std::string> choice_tokens(const InputDocument& doc) {
  return doc.choices ? doc.choices->tokens : std::vector<std::string>{};
}

// Ambient element image lookup for finite scenes: every generator must carry
// an 'image' line naming an element of `act`.
std::vector<int> image_of(const textio::PresentationSection& sec, const FiniteAct& act,
                          const std::string& path, const std::vector<std::string>& skip = {}) {
  std::vector<int> image;
  for (std::size_t g = 0; g < sec.generators.size(); ++g) {
    if (std::find(skip.begin(), skip.end(), sec.generators[g]) != skip.end()) continue;
    if (sec.images[g].empty())
      throw Error(path + ": generator " + sec.generators[g] + " needs an 'image' line");
    std::optional<int> e = act.element_by_name(sec.images[g]);
    if (!e)
      throw Error(path + ": image '" + sec.images[g] + "' of " + sec.generators[g] +
                  " is not an element of the ambient act");
    image.push_back(*e);
  }
  return image;
}

bool fully_embedded(const textio::PresentationSection& sec) {
  return std::all_of(sec.embeddings.begin(), sec.embeddings.end(),
                     [](const std::optional<Word>& w) { return w.has_value(); });
}

Word flat(const std::vector<std::optional<Word>>& emb, const FreeActElement& e) {
  return emb[static_cast<std::size_t>(e.gen)]->concat(e.m);
}

// ----------------------------------------------------------------- emission

void kv(std::ostream& out, const std::string& key, const std::string& value) {
  out << key << '\t' << value << '\n';
}

int emit_result(std::ostream& out, const ConstructionResult& res,
                const std::vector<std::string>& extra_keys = {},
                const std::vector<std::string>& extra_values = {}) {
  for (const std::string& tok : res.presentation.generators().letters())
    kv(out, "generator", tok);
  for (std::size_t i = 0; i < extra_keys.size(); ++i) kv(out, extra_keys[i], extra_values[i]);
  for (const ActRelation& r : res.presentation.relations())
    kv(out, "relation", res.presentation.print_relation(r));
  kv(out, "complete", res.complete ? "true" : "false");
  for (const std::string& line : res.transcript) kv(out, "transcript", line);
  return res.complete ? kProved : kUnknown;
}

void emit_presentation(std::ostream& out, const ActPresentation& pres) {
  for (const std::string& tok : pres.generators().letters()) kv(out, "generator", tok);
  for (const ActRelation& r : pres.relations()) kv(out, "relation", pres.print_relation(r));
}

// ------------------------------------------------------------- subcommands

int cmd_nf(const Args& args, std::ostream& out) {
  if (args.positional.size() != 2) throw Error("nf takes a monoid file and one word");
  Loaded l = load(args.positional[0]);
  Word w = word_arg(l.monoid, args.positional[1]);
  kv(out, "nf", print_word(l.monoid.letters(), l.monoid.canon(w)));
  return kProved;
}

int cmd_eq(const Args& args, std::ostream& out) {
  if (args.positional.size() != 3) throw Error("eq takes a monoid file and two words");
  Loaded l = load(args.positional[0]);
  Word a = word_arg(l.monoid, args.positional[1]);
  Word b = word_arg(l.monoid, args.positional[2]);
  std::optional<bool> eq = l.monoid.try_equal(a, b);
  Verdict v = !eq.has_value() ? Verdict::Unknown : (*eq ? Verdict::Proved : Verdict::Disproved);
  kv(out, "verdict", to_string(v));
  return verdict_exit(v);
}

int cmd_consequence(const Args& args, std::ostream& out) {
  if (args.positional.size() != 3)
    throw Error("consequence takes a presentation file and two elements");
  Loaded l = load(args.positional[0]);
  ActPresentation pres = build_pres(l);
  FreeActElement lhs = elem_arg(pres, args.positional[1]);
  FreeActElement rhs = elem_arg(pres, args.positional[2]);
  ConsequenceVerdict v = is_consequence(pres, lhs, rhs, bounds_from(args));
  kv(out, "verdict", to_string(v.verdict));
  if (v.verdict == Verdict::Proved) {
    kv(out, "certificate-steps", std::to_string(v.certificate->steps.size()));
    std::istringstream block(print_certificate(pres, *v.certificate));
    std::string line;
    while (std::getline(block, line)) kv(out, "certificate", line);
  } else {
    kv(out, "reason", v.reason);
  }
  return verdict_exit(v.verdict);
}

int cmd_verify(const Args& args, std::ostream& out, std::ostream& err) {
  if (args.positional.size() != 2)
    throw Error("verify takes a presentation file and an act file");
  Loaded lp = load(args.positional[0]);
  Loaded la = load(args.positional[1]);
  if (!(*lp.doc.monoid == *la.doc.monoid))
    throw Error("the two files define different monoids");
  if (!la.doc.act) throw Error(la.path + ": no [act] section");
  const textio::PresentationSection& sp = pres_section(lp);
  const textio::PresentationSection& sa = pres_section(la);
  if (sp.generators != sa.generators)
    throw Error("the two files list different generators");
  FiniteAct act = la.doc.act->build(la.monoid);
  ActPresentation pres = ActPresentation(la.monoid, Alphabet(sp.generators), sp.relations);
  std::vector<int> image = image_of(sa, act, la.path);
  std::string why;
  bool ok = verify_presentation(pres, act, image, &why);
  kv(out, "verified", ok ? "true" : "false");
  if (!ok) err << "verify: " << why << "\n";
  return ok ? kProved : kDisproved;
}

ActPresentation apply_tietze_section(ActPresentation pres, const textio::TietzeSection& sec,
                                     const SearchBounds& bounds) {
  for (const TietzeLine& line : sec.moves) {
    TietzeMove mv;
    switch (line.kind) {
      case TietzeLine::Kind::AddRelation:
        mv.kind = TietzeMove::Kind::AddRelations;
        mv.add_relations.push_back(
            ActRelation{resolve_raw(pres.generators(), line.lhs, "presentation"),
                        resolve_raw(pres.generators(), line.rhs, "presentation")});
        break;
      case TietzeLine::Kind::DropRelation:
        mv.kind = TietzeMove::Kind::RemoveRelations;
        if (line.index < 1 || static_cast<std::size_t>(line.index) > pres.relations().size())
          throw Error("drop-relation " + std::to_string(line.index) + ": the presentation has " +
                      std::to_string(pres.relations().size()) + " relations");
        mv.remove_relations.push_back(line.index - 1);
        break;
      case TietzeLine::Kind::AddGenerator:
        mv.kind = TietzeMove::Kind::AddGenerators;
        mv.new_generators.emplace_back(line.token,
                                       resolve_raw(pres.generators(), line.rhs, "presentation"));
        break;
      case TietzeLine::Kind::DropGenerator:
        mv.kind = TietzeMove::Kind::RemoveGenerators;
        mv.drop_generators.push_back(line.token);
        break;
    }
    pres = tietze_apply(pres, mv, bounds);
  }
  return pres;
}

int cmd_tietze(const Args& args, std::ostream& out) {
  if (args.positional.size() != 2)
    throw Error("tietze takes a presentation file and a moves file");
  Loaded lp = load(args.positional[0]);
  Loaded lm = load(args.positional[1]);
  if (!(*lp.doc.monoid == *lm.doc.monoid))
    throw Error("the moves file declares a different monoid than the presentation file");
  if (!lm.doc.tietze) throw Error(lm.path + ": no [tietze] section");
  ActPresentation pres =
      apply_tietze_section(build_pres(lp), *lm.doc.tietze, bounds_from(args));
  emit_presentation(out, pres);
  return kProved;
}

// ------------------------------------------------------------ constructions

int cmd_construct_rees(const Loaded& l, std::ostream& out) {
  ActPresentation pres = build_pres(l);
  std::vector<FreeActElement> witnesses = subact_witnesses(l);
  ChoiceMaps choices;
  choices.subact_witnesses = witnesses;
  choices.tokens = choice_tokens(l.doc);
  ConstructionScene scene = derive_scene(l, pres, witnesses, {}, false);
  ConstructionResult res =
      rees_quotient_presentation(pres, choices, one_element_act_relations(l.monoid), scene);
  return emit_result(out, res);
}

int cmd_construct_subact(const Loaded& l, int depth, std::ostream& out) {
  ActPresentation pres = build_pres(l);
  std::vector<FreeActElement> witnesses = subact_witnesses(l);
  ChoiceMaps choices;
  choices.subact_witnesses = witnesses;
  choices.tokens = choice_tokens(l.doc);
  ConstructionScene scene = derive_scene(l, pres, witnesses, {}, false);
  ConstructionResult res = subact_presentation_general(pres, choices, depth, scene);
  return emit_result(out, res);
}

int cmd_construct_large_subact(const Loaded& l, int schema_bound, std::ostream& out) {
  ActPresentation pres = build_pres(l);
  std::vector<FreeActElement> roster;
  if (l.doc.subact) roster = l.doc.subact->complement;
  std::vector<std::pair<Word, Word>> monoid_relations;
  int recorded_bound = 0;
  if (l.monoid.finite()) {
    monoid_relations = monoid_relations_from_table(l.monoid.table());
  } else if (l.doc.monoid->kind == MonoidSection::Kind::Rules) {
    monoid_relations = monoid_relations_from_rules(l.monoid.rules(), schema_bound);
    recorded_bound = schema_bound;
  }  // a free monoid presents itself with no relations
  ConstructionScene scene = derive_scene(l, pres, {}, roster, true);
  LargeSubactContext ctx = make_large_subact_context(pres, roster, std::move(monoid_relations),
                                                     recorded_bound, scene);
  std::vector<FreeActElement> gens = large_subact_generators(ctx);
  ChoiceMaps choices;
  choices.tokens = choice_tokens(l.doc);
  ConstructionResult res = large_subact_presentation(ctx, choices);
  std::vector<std::string> keys(gens.size(), "boundary"), values;
  for (const FreeActElement& g : gens) values.push_back(pres.print_element(g));
  return emit_result(out, res, keys, values);
}

int cmd_construct_extension(const Loaded& lb, const Loaded& lq, std::ostream& out) {
  if (!(*lb.doc.monoid == *lq.doc.monoid))
    throw Error("the two files define different monoids");
  if (!lb.monoid.finite() || !lb.doc.act)
    throw Error("construct extension needs a finite scene: [monoid] kind = finite and an [act] "
                "section (the ambient act) in the subact file");
  const textio::PresentationSection& sb = pres_section(lb);
  const textio::PresentationSection& sq = pres_section(lq);
  ActPresentation presB = sb.build(lb.monoid);
  ActPresentation presQ = sq.build(lb.monoid);
  std::string zero_token = sq.zero;

  FiniteAct actA = lb.doc.act->build(lb.monoid);
  std::vector<int> image_X = image_of(sb, actA, lb.path);
  std::vector<int> image_Yprime =
      image_of(sq, actA, lq.path,
               zero_token.empty() ? std::vector<std::string>{} : std::vector<std::string>{zero_token});
  std::vector<char> memberB = subact_generated(actA, image_X).member;

  ChoiceMaps choices;
  for (const Loaded* l : {&lb, &lq}) {
    if (!l->doc.choices) continue;
    const textio::ChoicesSection& c = *l->doc.choices;
    for (const std::string& t : c.tokens) choices.tokens.push_back(t);
    for (const auto& [q, b] : c.zero_spellings)
      choices.zero_spellings.emplace_back(resolve_raw(presQ.generators(), q, "quotient"),
                                          resolve_raw(presB.generators(), b, "subact"));
    if (c.fixed_zero) {
      if (choices.fixed_zero) throw Error("two fixed-zero lines across the input files");
      choices.fixed_zero = resolve_raw(presQ.generators(), *c.fixed_zero, "quotient");
    }
  }

  ExtensionScene scene = ExtensionScene::finite(actA, image_X, image_Yprime, memberB);
  ConstructionResult res = extension_presentation(presB, presQ, zero_token, choices, scene);
  return emit_result(out, res);
}

ConstructionResult run_union(const Loaded& la, const Loaded& lb) {
  if (!(*la.doc.monoid == *lb.doc.monoid))
    throw Error("the two files define different monoids");
  const textio::PresentationSection& sa = pres_section(la);
  const textio::PresentationSection& sb = pres_section(lb);
  ActPresentation presA = sa.build(la.monoid);
  ActPresentation presB = sb.build(la.monoid);

  ChoiceMaps choices;
  for (const Loaded* l : {&la, &lb}) {
    if (!l->doc.choices) continue;
    const textio::ChoicesSection& c = *l->doc.choices;
    for (const std::string& t : c.tokens) choices.tokens.push_back(t);
    for (const auto& [left, right] : c.glue) {
      choices.left_representatives.push_back(resolve_raw(presA.generators(), left, "left"));
      choices.right_representatives.push_back(resolve_raw(presB.generators(), right, "right"));
    }
  }

  UnionScene scene = [&] {
    if (la.monoid.finite() && la.doc.act) {
      FiniteAct actC = la.doc.act->build(la.monoid);
      std::vector<int> image_X = image_of(sa, actC, la.path);
      std::vector<int> image_Y = image_of(sb, actC, lb.path);
      return UnionScene::finite(actC, image_X, image_Y);
    }
    if (fully_embedded(sa) && fully_embedded(sb)) {
      Monoid m = la.monoid;
      auto embA = sa.embeddings;
      auto embB = sb.embeddings;
      return UnionScene::manual([m, embA, embB](const FreeActElement& l, const FreeActElement& r) {
        return m.try_equal(flat(embA, l), flat(embB, r));
      });
    }
    return UnionScene::manual([](const FreeActElement&, const FreeActElement&) {
      return std::optional<bool>{};
    });
  }();
  return union_presentation(presA, presB, choices, scene);
}

int cmd_construct_union(const Loaded& la, const Loaded& lb, std::ostream& out) {
  return emit_result(out, run_union(la, lb));
}

int cmd_construct_component(const Loaded& lc, const std::optional<Loaded>& li, std::ostream& out) {
  const textio::PresentationSection& sc = pres_section(lc);
  ActPresentation presC = sc.build(lc.monoid);
  if (li && !(*lc.doc.monoid == *li->doc.monoid))
    throw Error("the intersection file declares a different monoid");
  std::optional<ActPresentation> presI;
  if (li) presI = pres_section(*li).build(lc.monoid);

  std::vector<char> in_other(sc.generators.size(), 0);
  if (lc.doc.subact)
    for (const std::string& tok : lc.doc.subact->other_generators) {
      std::optional<LetterId> g = presC.generators().index_of(tok);
      if (!g) throw Error(lc.path + ": other-generators token '" + tok +
                          "' is not a generator of the presentation");
      in_other[static_cast<std::size_t>(*g)] = 1;
    }

  ChoiceMaps choices;
  choices.tokens = choice_tokens(lc.doc);
  std::vector<FreeActElement> witnesses;
  if (lc.doc.choices) {
    const Alphabet right = presI ? presI->generators() : Alphabet(choices.tokens);
    for (const RawElem& w : lc.doc.choices->intersection_witnesses)
      witnesses.push_back(resolve_raw(presC.generators(), w, "ambient"));
    for (const auto& [left, r] : lc.doc.choices->rewrites)
      choices.intersection_rewrites.emplace_back(resolve_raw(presC.generators(), left, "ambient"),
                                                 resolve_raw(right, r, "intersection"));
  }
  choices.intersection_witnesses = witnesses;

  ComponentScene scene = [&] {
    if (lc.monoid.finite() && lc.doc.act) {
      FiniteAct actC = lc.doc.act->build(lc.monoid);
      std::vector<int> image_Z = image_of(sc, actC, lc.path);
      std::vector<int> seedsA, seedsB;
      for (std::size_t g = 0; g < image_Z.size(); ++g)
        (in_other[g] ? seedsB : seedsA).push_back(image_Z[g]);
      if (seedsA.empty()) throw Error("every generator lies in the other component");
      std::vector<char> memberA = subact_generated(actC, seedsA).member;
      std::vector<char> memberB =
          seedsB.empty() ? std::vector<char>(static_cast<std::size_t>(actC.size()), 0)
                         : subact_generated(actC, seedsB).member;
      std::vector<int> image_U;
      if (li) image_U = image_of(pres_section(*li), actC, li->path);
      return ComponentScene::finite(actC, image_Z, memberA, memberB, image_U);
    }
    if (!fully_embedded(sc))
      throw Error(lc.path +
                  ": construct union-component needs a finite scene or embedding lines for every "
                  "generator");
    Monoid m = lc.monoid;
    auto emb = sc.embeddings;
    std::vector<Word> witness_words;
    for (const FreeActElement& w : witnesses) witness_words.push_back(flat(emb, w));
    auto same = [m, emb, witness_words](const FreeActElement& over_Z, const FreeActElement& over_U)
        -> std::optional<bool> {
      if (static_cast<std::size_t>(over_U.gen) >= witness_words.size()) return std::nullopt;
      return m.try_equal(flat(emb, over_Z),
                         witness_words[static_cast<std::size_t>(over_U.gen)].concat(over_U.m));
    };
    auto factor = [m, emb, witness_words](const FreeActElement& over_Z)
        -> std::optional<std::pair<int, Word>> {
      Word target = flat(emb, over_Z);
      for (std::size_t u = 0; u < witness_words.size(); ++u) {
        DivisorResult d = m.left_divisors(witness_words[u], target);
        if (!d.multipliers.empty()) return std::make_pair(static_cast<int>(u), d.multipliers.front());
      }
      return std::nullopt;
    };
    return ComponentScene::manual(same, factor);
  }();
  ConstructionResult res = union_component_presentation(presC, presI, in_other, choices, scene);
  return emit_result(out, res);
}

int cmd_construct(const Args& args, std::ostream& out) {
  if (args.positional.empty()) throw Error("construct needs a construction name");
  const std::string& what = args.positional[0];
  std::vector<std::string> files(args.positional.begin() + 1, args.positional.end());
  if (what == "rees-quotient") {
    if (files.size() != 1) throw Error("construct rees-quotient takes one file");
    return cmd_construct_rees(load(files[0]), out);
  }
  if (what == "subact") {
    if (files.size() != 1) throw Error("construct subact takes one file");
    return cmd_construct_subact(load(files[0]), flag_int(args, "depth", 3), out);
  }
  if (what == "large-subact") {
    if (files.size() != 1) throw Error("construct large-subact takes one file");
    return cmd_construct_large_subact(load(files[0]), flag_int(args, "schema-bound", 4), out);
  }
  if (what == "extension") {
    if (files.size() != 2) throw Error("construct extension takes a subact file and a quotient file");
    return cmd_construct_extension(load(files[0]), load(files[1]), out);
  }
  if (what == "union") {
    if (files.size() != 2) throw Error("construct union takes two files");
    return cmd_construct_union(load(files[0]), load(files[1]), out);
  }
  if (what == "union-component") {
    if (files.empty() || files.size() > 2)
      throw Error("construct union-component takes a union file and an optional intersection file");
    std::optional<Loaded> li;
    if (files.size() == 2) li = load(files[1]);
    return cmd_construct_component(load(files[0]), li, out);
  }
  throw Error("unknown construction '" + what +
              "'; one of: rees-quotient, extension, union, union-component, subact, large-subact");
}

// ------------------------------------------------------------------- corpus

struct Report {
  std::ostream& out;
  int failures = 0;

  void check(const std::string& key, bool ok, const std::string& value,
             const std::string& detail = "") {
    kv(out, key, ok ? value : "FAIL " + (detail.empty() ? value : detail));
    if (!ok) ++failures;
  }
};

std::string nf_text(const Monoid& m, const std::string& w) {
  return print_word(m.letters(), m.canon(parse_word(m.letters(), w)));
}

FreeActElement pres_elem(const ActPresentation& pres, const std::string& text) {
  return elem_arg(pres, text);
}

std::string rep_word(const std::string& letter, int count, const std::string& suffix) {
  std::string out;
  for (int k = 0; k < count; ++k) out += (out.empty() ? "" : " ") + letter;
  if (!suffix.empty()) out += (out.empty() ? "" : " ") + suffix;
  return out;
}

void corpus_ex5_7(const std::string& dir, Report& rep) {
  Loaded l = load(dir + "/ex5_7.txt");
  const Monoid& m = l.monoid;
  rep.check("ex5_7.nf-pumped", nf_text(m, "a b b a") == "a b a", "a b b a = a b a",
            "normal form of a b b a is " + nf_text(m, "a b b a"));
  rep.check("ex5_7.nf-mirrored", nf_text(m, "b a a a b") == "b a b", "b a a a b = b a b",
            "normal form of b a a a b is " + nf_text(m, "b a a a b"));
  rep.check("ex5_7.nf-stabilizer-s", nf_text(m, "s a") == "a", "s a = a",
            "normal form of s a is " + nf_text(m, "s a"));
  rep.check("ex5_7.nf-stabilizer-t", nf_text(m, "t b") == "b", "t b = b",
            "normal form of t b is " + nf_text(m, "t b"));

  ActPresentation pres = build_pres(l);  // truncation i <= 4
  ConsequenceVerdict inside =
      is_consequence(pres, pres_elem(pres, "A . " + rep_word("b", 4, "a")), pres_elem(pres, "A . b a"));
  rep.check("ex5_7.truncation-inside", inside.verdict == Verdict::Proved,
            "Proved (" + std::to_string(inside.certificate ? inside.certificate->steps.size() : 0) +
                " steps)",
            std::string("verdict ") + to_string(inside.verdict));
  ConsequenceVerdict beyond =
      is_consequence(pres, pres_elem(pres, "A . " + rep_word("b", 5, "a")), pres_elem(pres, "A . b a"));
  rep.check("ex5_7.truncation-beyond", beyond.verdict == Verdict::Disproved, "Disproved",
            std::string("verdict ") + to_string(beyond.verdict) + " (want Disproved)");
}

void corpus_ex5_13(const std::string& dir, Report& rep) {
  Loaded l = load(dir + "/ex5_13.txt");
  const Monoid& m = l.monoid;
  rep.check("ex5_13.nf", nf_text(m, "a c c a") == "b c b", "a c c a = b c b",
            "normal form of a c c a is " + nf_text(m, "a c c a"));

  ActPresentation pres = build_pres(l);
  std::vector<FreeActElement> gens = intersection_generators(pres, {1, 0});
  bool shape = gens.size() == 7;
  for (std::size_t k = 0; shape && k < gens.size(); ++k) {
    std::string want = "P . " + rep_word("c", static_cast<int>(k) + 2, "a");
    shape = pres.print_element(gens[k]) == want;
  }
  rep.check("ex5_13.intersection-generators", shape, "a c^i a for i = 2..8",
            "got " + std::to_string(gens.size()) + " generators");

  auto acia = [&](int i) {
    return FreeActElement{0, parse_word(m.letters(), "a " + rep_word("c", i, "a"))};
  };
  bool independent = true;
  std::string why;
  for (int j = 2; j <= 6 && independent; ++j) {
    std::vector<FreeActElement> family;
    for (int i = 2; i <= 6; ++i)
      if (i != j) family.push_back(acia(i));
    MembershipResult without = subact_membership(m, family, acia(j));
    if (without.verdict != Verdict::Disproved) {
      independent = false;
      why = "a c^" + std::to_string(j) + " a against the others: " +
            std::string(to_string(without.verdict));
      break;
    }
    family.push_back(acia(j));
    if (subact_membership(m, family, acia(j)).verdict != Verdict::Proved) {
      independent = false;
      why = "a c^" + std::to_string(j) + " a not recovered from itself";
    }
  }
  rep.check("ex5_13.minimal-generating-set", independent,
            "no a c^i a is generated by the others", why);
}

void corpus_ex5_14(const std::string& dir, Report& rep) {
  Loaded l = load(dir + "/ex5_14.txt");
  ActPresentation pres = build_pres(l);
  bool proofs = true;
  std::size_t longest = 0;
  std::string why;
  for (int i = 2; i <= 10 && proofs; ++i) {
    ConsequenceVerdict v = is_consequence(pres, pres_elem(pres, "A . " + rep_word("b", i, "a")),
                                          pres_elem(pres, "A . b a"));
    if (v.verdict != Verdict::Proved) {
      proofs = false;
      why = "i = " + std::to_string(i) + ": " + to_string(v.verdict);
      break;
    }
    longest = std::max(longest, v.certificate->steps.size());
    if (v.certificate->steps.size() > 5) {
      proofs = false;
      why = "i = " + std::to_string(i) + " needed " + std::to_string(v.certificate->steps.size()) +
            " steps";
    }
  }
  rep.check("ex5_14.family-consequences", proofs,
            "Proved for i = 2..10, longest certificate " + std::to_string(longest) + " steps", why);

  Loaded lt = load(dir + "/ex5_14_moves.txt");
  if (!lt.doc.tietze) throw Error(lt.path + ": no [tietze] section");
  ActPresentation reduced = apply_tietze_section(build_pres(lt), *lt.doc.tietze, {});
  rep.check("ex5_14.tietze-reduction", reduced.same_definition(pres),
            "drop-relation 2 reduces the padded presentation to the corpus one",
            "reduced presentation has " + std::to_string(reduced.relations().size()) + " relations");

  Loaded lb = load(dir + "/ex5_14_b.txt");
  ActPresentation joined = run_union(l, lb).presentation;
  std::vector<std::string> printed;
  for (const ActRelation& r : joined.relations()) printed.push_back(joined.print_relation(r));
  rep.check("ex5_14.union-join",
            printed == std::vector<std::string>{"A . a = A . 1", "A . b = C . a b"},
            "join of the two ideals is presented by A . a = A . 1, A . b = C . a b",
            "output relations: " + comma_list(printed));
}

void corpus_ex3_12(const std::string& dir, Report& rep) {
  Loaded l = load(dir + "/ex3_12.txt");
  ActPresentation pres = build_pres(l);
  ConsequenceVerdict inside =
      is_consequence(pres, pres_elem(pres, "O . x1"), pres_elem(pres, "O . 1"));
  rep.check("ex3_12.inside", inside.verdict == Verdict::Proved, "O . x1 = O collapses",
            std::string("verdict ") + to_string(inside.verdict));
  ConsequenceVerdict outside =
      is_consequence(pres, pres_elem(pres, "O . x3"), pres_elem(pres, "O . 1"));
  rep.check("ex3_12.outside", outside.verdict == Verdict::Disproved,
            "O . x3 = O refuted (x3 outside the truncation)",
            std::string("verdict ") + to_string(outside.verdict) + " (want Disproved)");
}

void corpus_ex5_2(const std::string& dir, Report& rep) {
  Loaded l = load(dir + "/ex5_2.txt");
  ActPresentation pres = build_pres(l);
  std::vector<FreeActElement> witnesses = subact_witnesses(l);
  ChoiceMaps choices;
  choices.subact_witnesses = witnesses;
  choices.tokens = choice_tokens(l.doc);
  ConstructionScene scene = derive_scene(l, pres, witnesses, {}, false);
  ConstructionResult res = subact_presentation_general(pres, choices, 3, scene);
  rep.check("ex5_2.free-union", res.complete && res.presentation.relations().empty(),
            "the union of the two ideals is free on its two generators",
            "got " + std::to_string(res.presentation.relations().size()) + " relations, complete=" +
                (res.complete ? "true" : "false"));

  // No two short elements of the free output coincide.
  const ActPresentation& free_pres = res.presentation;
  bool separated = true;
  std::vector<FreeActElement> elems;
  const Alphabet& letters = l.monoid.letters();
  for (LetterId g = 0; g < static_cast<LetterId>(free_pres.generators().size()); ++g)
    for (const std::string& w : {"1", "a", "b", "a a", "a b", "b a", "b b"})
      elems.push_back(FreeActElement{g, parse_word(letters, w)});
  for (std::size_t i = 0; i < elems.size() && separated; ++i)
    for (std::size_t j = i + 1; j < elems.size() && separated; ++j)
      separated = is_consequence(free_pres, elems[i], elems[j]).verdict == Verdict::Disproved;
  rep.check("ex5_2.freeness", separated, "distinct short elements stay distinct",
            "two distinct elements were not separated");
}

void corpus_ex6_10(const std::string& dir, Report& rep) {
  Loaded l = load(dir + "/ex6_10.txt");
  ActPresentation pres = build_pres(l);
  std::vector<FreeActElement> roster = l.doc.subact->complement;
  ConstructionScene scene = derive_scene(l, pres, {}, roster, true);
  LargeSubactContext ctx = make_large_subact_context(
      pres, roster, monoid_relations_from_rules(l.monoid.rules(), 4), 4, scene);
  std::vector<FreeActElement> gens = large_subact_generators(ctx);
  std::vector<std::string> got;
  for (const FreeActElement& g : gens) got.push_back(pres.print_element(g));
  std::vector<std::string> want = {"O . b", "O . a a", "O . a b"};
  std::string got_text;
  for (const std::string& s : got) got_text += (got_text.empty() ? "" : ", ") + s;
  rep.check("ex6_10.ideal-generators", got == want, "complement {1, a} leaves b, a a, a b",
            "boundary walk found: " + got_text);

  Loaded ls = load(dir + "/ex6_10_ab.txt");
  ActPresentation presS = build_pres(ls);
  ChoiceMaps choices;
  choices.subact_witnesses = subact_witnesses(ls);
  choices.tokens = choice_tokens(ls.doc);
  ConstructionScene sceneS = derive_scene(ls, presS, choices.subact_witnesses, {}, false);
  ConstructionResult res = subact_presentation_general(presS, choices, 3, sceneS);
  const ActPresentation& streamed = res.presentation;
  auto has = [&](const std::string& lhs, const std::string& rhs) {
    FreeActElement a = pres_elem(streamed, lhs), b = pres_elem(streamed, rhs);
    for (const ActRelation& r : streamed.relations())
      if ((r.lhs == a && r.rhs == b) || (r.lhs == b && r.rhs == a)) return true;
    return false;
  };
  rep.check("ex6_10.stream",
            res.complete && has("y . a", "y . b a") && has("y . a", "y . b b a"),
            "radius 3 streams y . b^i a = y . a for i = 1, 2",
            "streamed " + std::to_string(streamed.relations().size()) + " relations, complete=" +
                (res.complete ? "true" : "false"));

  ActPresentation truncated(ls.monoid, Alphabet({"y"}),
                            {ActRelation{pres_elem(streamed, "y . b a"), pres_elem(streamed, "y . a")}});
  ConsequenceVerdict next = is_consequence(truncated, pres_elem(truncated, "y . b b a"),
                                           pres_elem(truncated, "y . a"));
  rep.check("ex6_10.family-not-truncatable", next.verdict == Verdict::Disproved,
            "y . b b a = y . a is not a consequence of the i = 1 truncation",
            std::string("verdict ") + to_string(next.verdict) + " (want Disproved)");
}

struct CorpusCase {
  const char* name;
  void (*run)(const std::string&, Report&);
};

const CorpusCase kCorpus[] = {
    {"ex3_12", corpus_ex3_12}, {"ex5_2", corpus_ex5_2},   {"ex5_7", corpus_ex5_7},
    {"ex5_13", corpus_ex5_13}, {"ex5_14", corpus_ex5_14}, {"ex6_10", corpus_ex6_10},
};

int cmd_corpus(const Args& args, std::ostream& out, std::ostream& err) {
  if (args.positional.empty() || args.positional[0] != "run")
    throw Error("corpus supports: corpus run [case] [--dir D]");
  std::string dir = ACTPRES_CORPUS_DIR;
  if (auto it = args.flags.find("dir"); it != args.flags.end()) dir = it->second;
  std::string only = args.positional.size() > 1 ? args.positional[1] : "";
  if (!only.empty() &&
      std::none_of(std::begin(kCorpus), std::end(kCorpus),
                   [&](const CorpusCase& c) { return only == c.name; })) {
    std::string names;
    for (const CorpusCase& c : kCorpus) names += std::string(names.empty() ? "" : ", ") + c.name;
    throw Error("unknown corpus case '" + only + "'; cases: " + names);
  }
  int failures = 0;
  for (const CorpusCase& c : kCorpus) {
    if (!only.empty() && only != c.name) continue;
    Report rep{out};
    try {
      c.run(dir, rep);
    } catch (const Error& e) {
      rep.check(std::string(c.name) + ".run", false, "", e.what());
    }
    kv(out, c.name, rep.failures == 0 ? "pass" : "FAIL");
    if (rep.failures) {
      err << "corpus: " << c.name << ": " << rep.failures << " check(s) diverged\n";
      failures += rep.failures;
    }
  }
  kv(out, "corpus", failures == 0 ? "pass" : "FAIL");
  return failures == 0 ? kProved : kFailure;
}

int cmd_fuzz(const Args& args, std::ostream& out, std::ostream& err) {
  int seeds = flag_int(args, "seeds", 20);
  int max_monoid = flag_int(args, "max-monoid", 6);
  int max_act = flag_int(args, "max-act", 12);
  std::uint64_t base = static_cast<std::uint64_t>(flag_int(args, "base-seed", 20260814));
  if (seeds < 1 || max_monoid < 2 || max_act < 4)
    throw Error("fuzz-oracle needs --seeds >= 1, --max-monoid >= 2, --max-act >= 4");
  harness::FuzzReport rep = harness::fuzz_constructions(base, seeds, max_monoid, max_act);
  kv(out, "base-seed", std::to_string(rep.base_seed));
  for (const harness::FuzzLine& line : rep.lines) kv(out, line.key, line.value);
  kv(out, "fuzz-oracle",
     rep.failures == 0 ? "pass seeds=" + std::to_string(rep.seeds)
                       : "FAIL " + std::to_string(rep.failures) + " of " +
                             std::to_string(rep.lines.size()) + " runs");
  if (rep.failures) err << "fuzz-oracle: " << rep.failures << " run(s) failed\n";
  return rep.failures == 0 ? kProved : kFailure;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << kUsage;
    return kFailure;
  }
  const std::string& cmd = args[0];
  try {
    Args rest = split_args(args, 1);
    if (cmd == "nf") {
      reject_unknown_flags(rest, {});
      return cmd_nf(rest, out);
    }
    if (cmd == "eq") {
      reject_unknown_flags(rest, {});
      return cmd_eq(rest, out);
    }
    if (cmd == "consequence") {
      reject_unknown_flags(rest, {"max-steps", "max-word-len"});
      return cmd_consequence(rest, out);
    }
    if (cmd == "construct") {
      reject_unknown_flags(rest, {"depth", "schema-bound"});
      return cmd_construct(rest, out);
    }
    if (cmd == "tietze") {
      reject_unknown_flags(rest, {"max-steps", "max-word-len"});
      return cmd_tietze(rest, out);
    }
    if (cmd == "verify") {
      reject_unknown_flags(rest, {});
      return cmd_verify(rest, out, err);
    }
    if (cmd == "corpus") {
      reject_unknown_flags(rest, {"dir"});
      return cmd_corpus(rest, out, err);
    }
    if (cmd == "fuzz-oracle") {
      reject_unknown_flags(rest, {"seeds", "max-monoid", "max-act", "base-seed"});
      return cmd_fuzz(rest, out, err);
    }
    err << "unknown command '" << cmd << "'\n" << kUsage;
    return kFailure;
  } catch (const Error& e) {
    err << cmd << ": " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace actpres::cli
