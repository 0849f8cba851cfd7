#pragma once

// The sectioned text format the command-line tool reads and writes. A
// document carries up to six sections — [monoid], [act], [act-presentation],
// [subact], [choices], [tietze] — each line-oriented with `key = tokens`
// assignments and `key: payload` directives. Parsing resolves every word
// against the declared alphabets and reports failures with line/column
// positions and the set of tokens that would have been accepted.
//
// serialize_document emits a canonical spelling; parse(serialize(doc)) == doc
// for every parsed document, and serialize(parse(text)) == text whenever the
// input is already in canonical form.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "actpres/act.hpp"
#include "actpres/monoid.hpp"
#include "actpres/presentation.hpp"
#include "actpres/rewriting.hpp"

namespace actpres::textio {

// 1-based position of a token in the source text.
struct SourcePos {
  int line = 0;
  int col = 0;
};

// Parse failure carrying its position and the acceptable tokens at it.
class ParseError : public Error {
 public:
  ParseError(SourcePos pos, const std::string& message, std::vector<std::string> expected = {});
  SourcePos pos;
  std::vector<std::string> expected;
};

// ----------------------------------------------------------------- sections

struct MonoidSection {
  enum class Kind { Free, Rules, Finite };
  Kind kind = Kind::Free;

  // Free and Rules: the alphabet lives in system.alphabet; Rules adds the
  // rewrite rules and rule schemas in declaration order.
  RewritingSystem system;

  // Finite: element names, the identity's name, the letter tokens with the
  // element each names, and one row of products per element in names order.
  std::vector<std::string> names;
  std::string identity;
  std::vector<std::string> letter_targets;             // element name per letter
  std::vector<std::vector<std::string>> rows;          // products, names order

  // Builds the monoid handle. Structural errors (associativity, identity,
  // non-terminating rules) surface as plain Error; a Rules monoid gets the
  // bounded local-confluence check and records a passing result.
  Monoid build() const;

  bool operator==(const MonoidSection& o) const;
};

struct ActSection {
  std::vector<std::string> elements;
  std::vector<std::string> table;  // element-major by monoid letter; element names

  FiniteAct build(const Monoid& m) const;
  bool operator==(const ActSection&) const = default;
};

struct PresentationSection {
  std::vector<std::string> generators;
  std::string zero;                             // designated zero token, "" = none
  std::vector<std::optional<Word>> embeddings;  // per generator, monoid word
  std::vector<std::string> images;              // per generator, act element name or ""
  std::vector<ActRelation> relations;

  ActPresentation build(const Monoid& m) const;
  bool operator==(const PresentationSection&) const = default;
};

struct SubactSection {
  std::vector<FreeActElement> witnesses;       // generators of the subact
  std::vector<FreeActElement> complement;      // roster of the complement
  std::vector<std::string> members;            // explicit member set, [act] names
  std::vector<std::string> other_generators;   // generators lying in the other component

  bool operator==(const SubactSection&) const = default;
};

// A "token . word" reference whose generator token resolves only once the
// command using it knows which presentation it belongs to. The word is
// already lexed against the document's monoid letters.
struct RawElem {
  std::string gen;
  Word m;
  SourcePos pos;  // ignored by equality

  bool operator==(const RawElem& o) const { return gen == o.gen && m == o.m; }
};

struct ChoicesSection {
  std::vector<std::string> tokens;                          // minted generator tokens
  std::vector<std::pair<RawElem, RawElem>> glue;            // left rep = right rep
  std::vector<std::pair<RawElem, RawElem>> zero_spellings;  // quotient word = subact word
  std::optional<RawElem> fixed_zero;
  std::vector<std::pair<RawElem, RawElem>> rewrites;
  std::vector<RawElem> intersection_witnesses;

  bool operator==(const ChoicesSection&) const = default;
};

struct TietzeLine {
  enum class Kind { AddRelation, DropRelation, AddGenerator, DropGenerator };
  Kind kind = Kind::AddRelation;
  RawElem lhs, rhs;   // add-relation; add-generator uses token = rhs
  int index = 0;      // drop-relation, 1-based as printed in transcripts
  std::string token;  // add-generator / drop-generator

  bool operator==(const TietzeLine&) const = default;
};

struct TietzeSection {
  std::vector<TietzeLine> moves;
  bool operator==(const TietzeSection&) const = default;
};

struct InputDocument {
  std::optional<MonoidSection> monoid;
  std::optional<ActSection> act;
  std::optional<PresentationSection> presentation;
  std::optional<SubactSection> subact;
  std::optional<ChoicesSection> choices;
  std::optional<TietzeSection> tietze;

  bool operator==(const InputDocument&) const = default;
};

InputDocument parse_document(const std::string& text);
InputDocument parse_document_file(const std::string& path);
std::string serialize_document(const InputDocument& doc);

}  // namespace actpres::textio
