#include "actpres/textio.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace actpres::textio {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out;
}

std::string format_error(SourcePos pos, const std::string& message,
                         const std::vector<std::string>& expected) {
  std::string out = "line " + std::to_string(pos.line) + ", col " + std::to_string(pos.col) + ": " +
                    message;
  if (!expected.empty()) out += "; expected one of: " + join(expected);
  return out;
}

}  // namespace

ParseError::ParseError(SourcePos p, const std::string& message, std::vector<std::string> exp)
    : Error(format_error(p, message, exp)), pos(p), expected(std::move(exp)) {}

namespace {

[[noreturn]] void fail(SourcePos pos, const std::string& message,
                       std::vector<std::string> expected = {}) {
  throw ParseError(pos, message, std::move(expected));
}

// ------------------------------------------------------------------- lexing

struct Tok {
  std::string text;
  SourcePos pos;
};

struct Entry {
  std::string key;
  bool assign = false;  // `key = args` rather than `key: args`
  std::vector<Tok> args;
  SourcePos pos;  // position of the key token
};

struct SectionLines {
  bool present = false;
  SourcePos header;
  std::vector<Entry> entries;
};

struct Grouped {
  SectionLines monoid, act, presentation, subact, choices, tietze;
};

const std::vector<std::string> kSectionNames = {"[monoid]",  "[act]",     "[act-presentation]",
                                                "[subact]",  "[choices]", "[tietze]"};

std::vector<std::vector<Tok>> tokenize(const std::string& text) {
  std::vector<std::vector<Tok>> lines;
  std::vector<Tok> cur;
  int line = 1, col = 1;
  std::string tok;
  int tok_col = 0;
  auto flush_tok = [&] {
    if (!tok.empty()) {
      cur.push_back(Tok{tok, SourcePos{line, tok_col}});
      tok.clear();
    }
  };
  auto flush_line = [&] {
    flush_tok();
    if (!cur.empty() && cur.front().text[0] != '#') lines.push_back(cur);
    cur.clear();
  };
  for (char c : text) {
    if (c == '\n') {
      flush_line();
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      flush_tok();
    } else {
      if (tok.empty()) tok_col = col;
      tok += c;
    }
    ++col;
  }
  flush_line();
  return lines;
}

Grouped group_sections(const std::vector<std::vector<Tok>>& lines) {
  Grouped g;
  SectionLines* cur = nullptr;
  for (const std::vector<Tok>& toks : lines) {
    const Tok& first = toks.front();
    if (first.text.front() == '[') {
      SectionLines* next = nullptr;
      if (first.text == "[monoid]") next = &g.monoid;
      else if (first.text == "[act]") next = &g.act;
      else if (first.text == "[act-presentation]") next = &g.presentation;
      else if (first.text == "[subact]") next = &g.subact;
      else if (first.text == "[choices]") next = &g.choices;
      else if (first.text == "[tietze]") next = &g.tietze;
      if (!next) fail(first.pos, "unknown section '" + first.text + "'", kSectionNames);
      if (next->present) fail(first.pos, "duplicate section " + first.text);
      if (toks.size() > 1)
        fail(toks[1].pos, "unexpected token after section header " + first.text);
      next->present = true;
      next->header = first.pos;
      cur = next;
      continue;
    }
    if (!cur) fail(first.pos, "expected a section header before '" + first.text + "'", kSectionNames);
    Entry e;
    e.pos = first.pos;
    if (!first.text.empty() && first.text.back() == ':') {
      e.key = first.text.substr(0, first.text.size() - 1);
      e.assign = false;
      e.args.assign(toks.begin() + 1, toks.end());
    } else if (toks.size() >= 2 && toks[1].text == "=") {
      e.key = first.text;
      e.assign = true;
      e.args.assign(toks.begin() + 2, toks.end());
    } else {
      fail(first.pos, "malformed line: want `key = tokens` or `key: payload`");
    }
    cur->entries.push_back(e);
  }
  return g;
}

// ------------------------------------------------------------- entry access

// Checks an entry's key against the section's vocabulary, reporting directive
// keys with a trailing colon in the expected set.
void check_key(const Entry& e, const std::string& section,
               const std::vector<std::string>& assign_keys,
               const std::vector<std::string>& directive_keys) {
  const auto& good = e.assign ? assign_keys : directive_keys;
  const auto& other = e.assign ? directive_keys : assign_keys;
  if (std::find(good.begin(), good.end(), e.key) != good.end()) return;
  std::vector<std::string> expected;
  for (const std::string& k : assign_keys) expected.push_back(k);
  for (const std::string& k : directive_keys) expected.push_back(k + ":");
  if (std::find(other.begin(), other.end(), e.key) != other.end()) {
    fail(e.pos, std::string("'") + e.key + "' is written `" + e.key +
                    (e.assign ? ": payload` not `" + e.key + " = ...`"
                              : " = ...` not `" + e.key + ": ...`"),
         expected);
  }
  fail(e.pos, "unknown entry '" + e.key + "' in " + section, expected);
}

std::vector<std::string> tok_texts(const std::vector<Tok>& toks) {
  std::vector<std::string> out;
  out.reserve(toks.size());
  for (const Tok& t : toks) out.push_back(t.text);
  return out;
}

void require_args(const Entry& e, const std::string& what) {
  if (e.args.empty()) fail(e.pos, "'" + e.key + "' needs " + what);
}

// Validates word tokens against an alphabet ("1" is the empty word and may
// appear among letters) and returns the lexed word.
Word lex_word(const Alphabet& a, const std::vector<Tok>& toks, std::size_t from, std::size_t to,
              SourcePos at) {
  if (from >= to) {
    std::vector<std::string> expected = a.letters();
    expected.push_back("1");
    fail(at, "missing word", expected);
  }
  std::vector<std::string> parts;
  for (std::size_t i = from; i < to; ++i) {
    const Tok& t = toks[i];
    if (t.text != "1" && !a.contains(t.text)) {
      std::vector<std::string> expected = a.letters();
      expected.push_back("1");
      fail(t.pos, "unknown letter '" + t.text + "'", expected);
    }
    parts.push_back(t.text);
  }
  return parse_word(a, parts);
}

// Splits `args` at its single top-level "=" token.
std::size_t find_equals(const Entry& e) {
  std::size_t at = e.args.size();
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    if (e.args[i].text == "=") {
      if (at != e.args.size()) fail(e.args[i].pos, "more than one '=' in '" + e.key + "' line");
      at = i;
    }
  }
  if (at == e.args.size()) fail(e.pos, "'" + e.key + "' line needs '='", {"="});
  return at;
}

// `gen . word` with the generator resolved against the given alphabet.
FreeActElement lex_elem(const Alphabet& gens, const Alphabet& letters, const Entry& e,
                        std::size_t from, std::size_t to) {
  if (from >= to) fail(e.pos, "'" + e.key + "' needs `generator . word`", gens.letters());
  const Tok& g = e.args[from];
  std::optional<LetterId> gi = gens.index_of(g.text);
  if (!gi) fail(g.pos, "unknown generator '" + g.text + "'", gens.letters());
  if (from + 1 >= to || e.args[from + 1].text != ".")
    fail(from + 1 < to ? e.args[from + 1].pos : g.pos, "generator and word are separated by '.'",
         {"."});
  Word w = lex_word(letters, e.args, from + 2, to, g.pos);
  return FreeActElement{*gi, std::move(w)};
}

// `token . word` with the generator token kept for later resolution.
RawElem lex_raw(const Alphabet& letters, const Entry& e, std::size_t from, std::size_t to) {
  if (from >= to) fail(e.pos, "'" + e.key + "' needs `token . word`");
  const Tok& g = e.args[from];
  if (!valid_letter_token(g.text)) fail(g.pos, "invalid generator token '" + g.text + "'");
  if (from + 1 >= to || e.args[from + 1].text != ".")
    fail(from + 1 < to ? e.args[from + 1].pos : g.pos, "token and word are separated by '.'", {"."});
  Word w = lex_word(letters, e.args, from + 2, to, g.pos);
  return RawElem{g.text, std::move(w), g.pos};
}

int lex_int(const Tok& t, const std::string& what) {
  for (char c : t.text)
    if (!std::isdigit(static_cast<unsigned char>(c))) fail(t.pos, what + " must be a number");
  if (t.text.empty() || t.text.size() > 6) fail(t.pos, what + " must be a number");
  return std::stoi(t.text);
}

// ----------------------------------------------------------- schema grammar

// A pumped token: letter, '^', exponent text. Returns letter/exponent parts.
std::optional<std::pair<std::string, std::string>> split_caret(const std::string& text) {
  std::size_t at = text.find('^');
  if (at == std::string::npos) return std::nullopt;
  return std::make_pair(text.substr(0, at), text.substr(at + 1));
}

struct SchemaSide {
  Word prefix;
  bool pump = false;
  LetterId pumped = 0;
  std::string exponent;  // raw text after '^'
  SourcePos exponent_pos{};
  Word suffix;
};

SchemaSide lex_schema_side(const Alphabet& a, const Entry& e, std::size_t from, std::size_t to,
                           const char* side) {
  SchemaSide out;
  std::size_t pump_at = to;
  for (std::size_t i = from; i < to; ++i) {
    if (split_caret(e.args[i].text)) {
      if (pump_at != to)
        fail(e.args[i].pos, std::string(side) + " of a schema has at most one pumped letter");
      pump_at = i;
    }
  }
  if (pump_at == to) {
    out.prefix = lex_word(a, e.args, from, to, e.pos);
    return out;
  }
  auto [letter, expo] = *split_caret(e.args[pump_at].text);
  std::optional<LetterId> id = a.index_of(letter);
  if (!id) fail(e.args[pump_at].pos, "unknown letter '" + letter + "' under '^'", a.letters());
  out.pump = true;
  out.pumped = *id;
  out.exponent = expo;
  out.exponent_pos = e.args[pump_at].pos;
  if (pump_at > from) out.prefix = lex_word(a, e.args, from, pump_at, e.pos);
  if (pump_at + 1 < to) out.suffix = lex_word(a, e.args, pump_at + 1, to, e.pos);
  return out;
}

RuleSchema lex_schema(const Alphabet& a, const Entry& e) {
  // layout: LHS -> RHS (i >= K); the condition is the final three tokens.
  if (e.args.size() < 3 || e.args[e.args.size() - 3].text != "(i" ||
      e.args[e.args.size() - 2].text != ">=" || e.args.back().text.back() != ')')
    fail(e.pos, "schema line ends with its exponent condition", {"(i >= K)"});
  Tok bound = e.args.back();
  bound.text.pop_back();  // strip ')'
  int min_count = lex_int(bound, "schema bound");
  std::size_t cond = e.args.size() - 3;
  std::size_t arrow = cond;
  for (std::size_t i = 0; i < cond; ++i)
    if (e.args[i].text == "->") {
      if (arrow != cond) fail(e.args[i].pos, "more than one '->' in schema");
      arrow = i;
    }
  if (arrow == cond) fail(e.pos, "schema needs '->'", {"->"});

  SchemaSide lhs = lex_schema_side(a, e, 0, arrow, "left side");
  if (!lhs.pump) fail(e.pos, "left side of a schema needs a pumped letter like b^i");
  if (lhs.exponent != "i")
    fail(lhs.exponent_pos, "left-side exponent is the schema variable", {"i"});
  SchemaSide rhs = lex_schema_side(a, e, arrow + 1, cond, "right side");

  RuleSchema s;
  s.lhs_prefix = lhs.prefix;
  s.pumped = lhs.pumped;
  s.min_count = min_count;
  s.lhs_suffix = lhs.suffix;
  if (!rhs.pump) {
    s.rhs_prefix = rhs.prefix;
    s.rhs_pump = false;
  } else {
    s.rhs_prefix = rhs.prefix;
    s.rhs_pump = true;
    s.rhs_pumped = rhs.pumped;
    s.rhs_suffix = rhs.suffix;
    const std::string& x = rhs.exponent;
    if (x == "i") {
      s.rhs_exp_affine = true;
      s.rhs_exp_shift = 0;
    } else if (x.size() >= 5 && x.front() == '(' && x.back() == ')' && x[1] == 'i' &&
               (x[2] == '-' || x[2] == '+')) {
      Tok num{x.substr(3, x.size() - 4), rhs.exponent_pos};
      int k = lex_int(num, "exponent shift");
      s.rhs_exp_affine = true;
      s.rhs_exp_shift = x[2] == '-' ? -k : k;
    } else {
      Tok num{x, rhs.exponent_pos};
      s.rhs_exp_affine = false;
      s.rhs_exp_shift = lex_int(num, "exponent");
    }
    if (s.rhs_exp_affine && s.min_count + s.rhs_exp_shift < 0)
      fail(rhs.exponent_pos, "exponent " + x + " goes negative at i = " +
                                 std::to_string(s.min_count));
  }
  return s;
}

std::string exponent_text(const RuleSchema& s) {
  if (!s.rhs_exp_affine) return std::to_string(s.rhs_exp_shift);
  if (s.rhs_exp_shift == 0) return "i";
  if (s.rhs_exp_shift < 0) return "(i-" + std::to_string(-s.rhs_exp_shift) + ")";
  return "(i+" + std::to_string(s.rhs_exp_shift) + ")";
}

void append_word(std::vector<std::string>& parts, const Alphabet& a, const Word& w) {
  for (std::size_t i = 0; i < w.size(); ++i) parts.push_back(a.letter(w[i]));
}

std::string schema_text(const Alphabet& a, const RuleSchema& s) {
  std::vector<std::string> parts;
  append_word(parts, a, s.lhs_prefix);
  parts.push_back(a.letter(s.pumped) + "^i");
  append_word(parts, a, s.lhs_suffix);
  parts.push_back("->");
  if (!s.rhs_pump) {
    if (s.rhs_prefix.empty()) parts.push_back("1");
    else append_word(parts, a, s.rhs_prefix);
  } else {
    append_word(parts, a, s.rhs_prefix);
    parts.push_back(a.letter(s.rhs_pumped) + "^" + exponent_text(s));
    append_word(parts, a, s.rhs_suffix);
  }
  parts.push_back("(i");
  parts.push_back(">=");
  parts.push_back(std::to_string(s.min_count) + ")");
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ' ';
    out += parts[i];
  }
  return out;
}

// ---------------------------------------------------------- section parsing

std::vector<std::string> lex_token_list(const Entry& e, const std::string& what) {
  require_args(e, what);
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const Tok& t : e.args) {
    if (!valid_letter_token(t.text)) fail(t.pos, "invalid token '" + t.text + "' in " + what);
    if (!seen.insert(t.text).second) fail(t.pos, "duplicate token '" + t.text + "' in " + what);
    out.push_back(t.text);
  }
  return out;
}

MonoidSection parse_monoid(const SectionLines& sec) {
  MonoidSection out;
  const std::vector<std::string> assign_keys = {"kind", "letters", "names", "identity"};
  const std::vector<std::string> directive_keys = {"rule", "schema", "letter", "row"};
  if (sec.entries.empty()) fail(sec.header, "[monoid] is empty", {"kind"});
  const Entry& first = sec.entries.front();
  if (!(first.assign && first.key == "kind"))
    fail(first.pos, "[monoid] starts with its kind", {"kind"});
  if (first.args.size() != 1 ||
      (first.args[0].text != "free" && first.args[0].text != "rules" &&
       first.args[0].text != "finite"))
    fail(first.args.empty() ? first.pos : first.args[0].pos, "unknown monoid kind",
         {"free", "rules", "finite"});
  const std::string kind_text = first.args[0].text;
  out.kind = kind_text == "free" ? MonoidSection::Kind::Free
             : kind_text == "rules" ? MonoidSection::Kind::Rules
                                    : MonoidSection::Kind::Finite;

  bool have_letters = false, have_names = false, have_identity = false;
  std::vector<std::string> letter_tokens;
  std::vector<bool> letter_bound;
  std::unordered_map<std::string, int> name_index;
  std::vector<bool> row_bound;

  for (std::size_t i = 1; i < sec.entries.size(); ++i) {
    const Entry& e = sec.entries[i];
    check_key(e, "[monoid]", assign_keys, directive_keys);
    if (e.key == "kind") fail(e.pos, "duplicate 'kind'");
    if (e.key == "letters") {
      if (have_letters) fail(e.pos, "duplicate 'letters'");
      letter_tokens = lex_token_list(e, "letters");
      out.system.alphabet = Alphabet(letter_tokens);
      letter_bound.assign(letter_tokens.size(), false);
      have_letters = true;
    } else if (e.key == "names") {
      if (out.kind != MonoidSection::Kind::Finite)
        fail(e.pos, "'names' applies to kind = finite only");
      if (have_names) fail(e.pos, "duplicate 'names'");
      for (const Tok& t : e.args) {
        if (t.text.empty() || !name_index.emplace(t.text, static_cast<int>(out.names.size())).second)
          fail(t.pos, "duplicate element name '" + t.text + "'");
        out.names.push_back(t.text);
      }
      if (out.names.empty()) fail(e.pos, "'names' needs at least one element");
      row_bound.assign(out.names.size(), false);
      out.rows.assign(out.names.size(), {});
      have_names = true;
    } else if (e.key == "identity") {
      if (out.kind != MonoidSection::Kind::Finite)
        fail(e.pos, "'identity' applies to kind = finite only");
      if (have_identity) fail(e.pos, "duplicate 'identity'");
      if (!have_names) fail(e.pos, "'identity' comes after 'names'");
      if (e.args.size() != 1 || !name_index.count(e.args[0].text))
        fail(e.args.empty() ? e.pos : e.args[0].pos, "identity names an element", out.names);
      out.identity = e.args[0].text;
      have_identity = true;
    } else if (e.key == "rule" || e.key == "schema") {
      if (out.kind != MonoidSection::Kind::Rules)
        fail(e.pos, "'" + e.key + "' applies to kind = rules only");
      if (!have_letters) fail(e.pos, "'" + e.key + "' comes after 'letters'");
      if (e.key == "rule") {
        std::size_t arrow = e.args.size();
        for (std::size_t j = 0; j < e.args.size(); ++j)
          if (e.args[j].text == "->") {
            if (arrow != e.args.size()) fail(e.args[j].pos, "more than one '->' in rule");
            arrow = j;
          }
        if (arrow == e.args.size()) fail(e.pos, "rule needs '->'", {"->"});
        Word lhs = lex_word(out.system.alphabet, e.args, 0, arrow, e.pos);
        Word rhs = lex_word(out.system.alphabet, e.args, arrow + 1, e.args.size(), e.pos);
        if (lhs.empty()) fail(e.pos, "rule left side cannot be the empty word");
        out.system.push_rule(RewriteRule{std::move(lhs), std::move(rhs)});
      } else {
        out.system.push_schema(lex_schema(out.system.alphabet, e));
      }
    } else if (e.key == "letter") {
      if (out.kind != MonoidSection::Kind::Finite)
        fail(e.pos, "'letter' applies to kind = finite only");
      if (!have_letters || !have_names) fail(e.pos, "'letter' comes after 'letters' and 'names'");
      std::size_t eq = find_equals(e);
      if (eq != 1 || e.args.size() != 3)
        fail(e.pos, "'letter' is written `letter: token = element`");
      std::optional<LetterId> li = out.system.alphabet.index_of(e.args[0].text);
      if (!li) fail(e.args[0].pos, "unknown letter '" + e.args[0].text + "'", letter_tokens);
      if (letter_bound[static_cast<std::size_t>(*li)])
        fail(e.args[0].pos, "duplicate 'letter' for '" + e.args[0].text + "'");
      if (!name_index.count(e.args[2].text))
        fail(e.args[2].pos, "unknown element '" + e.args[2].text + "'", out.names);
      letter_bound[static_cast<std::size_t>(*li)] = true;
      if (out.letter_targets.size() < letter_tokens.size())
        out.letter_targets.resize(letter_tokens.size());
      out.letter_targets[static_cast<std::size_t>(*li)] = e.args[2].text;
    } else {  // row
      if (out.kind != MonoidSection::Kind::Finite)
        fail(e.pos, "'row' applies to kind = finite only");
      if (!have_names) fail(e.pos, "'row' comes after 'names'");
      std::size_t eq = find_equals(e);
      if (eq != 1) fail(e.pos, "'row' is written `row: element = products...`");
      auto it = name_index.find(e.args[0].text);
      if (it == name_index.end())
        fail(e.args[0].pos, "unknown element '" + e.args[0].text + "'", out.names);
      if (row_bound[static_cast<std::size_t>(it->second)])
        fail(e.args[0].pos, "duplicate 'row' for '" + e.args[0].text + "'");
      if (e.args.size() - 2 != out.names.size())
        fail(e.pos, "'row' needs one product per element (" + std::to_string(out.names.size()) +
                        " of them, in names order)");
      std::vector<std::string> products;
      for (std::size_t j = 2; j < e.args.size(); ++j) {
        if (!name_index.count(e.args[j].text))
          fail(e.args[j].pos, "unknown element '" + e.args[j].text + "'", out.names);
        products.push_back(e.args[j].text);
      }
      row_bound[static_cast<std::size_t>(it->second)] = true;
      out.rows[static_cast<std::size_t>(it->second)] = std::move(products);
    }
  }

  if (!have_letters) fail(sec.header, "[monoid] needs a 'letters' line");
  if (out.kind == MonoidSection::Kind::Finite) {
    if (!have_names) fail(sec.header, "[monoid] kind = finite needs a 'names' line");
    if (!have_identity) fail(sec.header, "[monoid] kind = finite needs an 'identity' line");
    for (std::size_t l = 0; l < letter_tokens.size(); ++l)
      if (!letter_bound[l])
        fail(sec.header, "missing 'letter' line for '" + letter_tokens[l] + "'");
    for (std::size_t n = 0; n < out.names.size(); ++n)
      if (!row_bound[n]) fail(sec.header, "missing 'row' line for '" + out.names[n] + "'");
  }
  return out;
}

ActSection parse_act(const SectionLines& sec, const MonoidSection& monoid) {
  ActSection out;
  const std::vector<std::string> assign_keys = {"elements"};
  const std::vector<std::string> directive_keys = {"act"};
  const Alphabet& letters = monoid.system.alphabet;
  std::unordered_map<std::string, int> elem_index;
  std::vector<bool> bound;
  bool have_elements = false;
  for (const Entry& e : sec.entries) {
    check_key(e, "[act]", assign_keys, directive_keys);
    if (e.key == "elements") {
      if (have_elements) fail(e.pos, "duplicate 'elements'");
      for (const Tok& t : e.args) {
        if (t.text.empty() || !elem_index.emplace(t.text, static_cast<int>(out.elements.size())).second)
          fail(t.pos, "duplicate element '" + t.text + "'");
        out.elements.push_back(t.text);
      }
      if (out.elements.empty()) fail(e.pos, "'elements' needs at least one element");
      out.table.assign(out.elements.size() * letters.size(), "");
      bound.assign(out.table.size(), false);
      have_elements = true;
    } else {
      if (!have_elements) fail(e.pos, "'act' comes after 'elements'");
      // act: p . s = q
      if (e.args.size() != 5 || e.args[1].text != "." || e.args[3].text != "=")
        fail(e.pos, "'act' is written `act: element . letter = element`");
      auto src = elem_index.find(e.args[0].text);
      if (src == elem_index.end())
        fail(e.args[0].pos, "unknown element '" + e.args[0].text + "'", out.elements);
      std::optional<LetterId> li = letters.index_of(e.args[2].text);
      if (!li) fail(e.args[2].pos, "unknown letter '" + e.args[2].text + "'", letters.letters());
      auto dst = elem_index.find(e.args[4].text);
      if (dst == elem_index.end())
        fail(e.args[4].pos, "unknown element '" + e.args[4].text + "'", out.elements);
      std::size_t slot = static_cast<std::size_t>(src->second) * letters.size() +
                         static_cast<std::size_t>(*li);
      if (bound[slot])
        fail(e.args[0].pos, "duplicate 'act' line for " + e.args[0].text + " . " + e.args[2].text);
      bound[slot] = true;
      out.table[slot] = e.args[4].text;
    }
  }
  if (!have_elements) fail(sec.header, "[act] needs an 'elements' line");
  for (std::size_t s = 0; s < bound.size(); ++s)
    if (!bound[s])
      fail(sec.header, "missing 'act' line for " + out.elements[s / letters.size()] + " . " +
                           letters.letter(static_cast<LetterId>(s % letters.size())));
  return out;
}

PresentationSection parse_presentation(const SectionLines& sec, const MonoidSection& monoid,
                                       const std::optional<ActSection>& act) {
  PresentationSection out;
  const std::vector<std::string> assign_keys = {"generators", "zero"};
  const std::vector<std::string> directive_keys = {"embedding", "image", "relation"};
  const Alphabet& letters = monoid.system.alphabet;
  bool have_generators = false;
  std::optional<Alphabet> gens;
  for (const Entry& e : sec.entries) {
    check_key(e, "[act-presentation]", assign_keys, directive_keys);
    if (e.key == "generators") {
      if (have_generators) fail(e.pos, "duplicate 'generators'");
      out.generators = lex_token_list(e, "generators");
      for (std::size_t i = 0; i < e.args.size(); ++i)
        if (letters.contains(e.args[i].text))
          fail(e.args[i].pos, "generator '" + e.args[i].text + "' collides with a monoid letter");
      gens = Alphabet(out.generators);
      out.embeddings.assign(out.generators.size(), std::nullopt);
      out.images.assign(out.generators.size(), "");
      have_generators = true;
      continue;
    }
    if (!have_generators) fail(e.pos, "'" + e.key + "' comes after 'generators'");
    if (e.key == "zero") {
      if (!out.zero.empty()) fail(e.pos, "duplicate 'zero'");
      if (e.args.size() != 1 || !gens->contains(e.args[0].text))
        fail(e.args.empty() ? e.pos : e.args[0].pos, "zero names a generator", out.generators);
      out.zero = e.args[0].text;
    } else if (e.key == "embedding") {
      std::size_t eq = find_equals(e);
      if (eq != 1) fail(e.pos, "'embedding' is written `embedding: generator = word`");
      std::optional<LetterId> gi = gens->index_of(e.args[0].text);
      if (!gi) fail(e.args[0].pos, "unknown generator '" + e.args[0].text + "'", out.generators);
      if (out.embeddings[static_cast<std::size_t>(*gi)])
        fail(e.args[0].pos, "duplicate 'embedding' for '" + e.args[0].text + "'");
      out.embeddings[static_cast<std::size_t>(*gi)] =
          lex_word(letters, e.args, 2, e.args.size(), e.pos);
    } else if (e.key == "image") {
      std::size_t eq = find_equals(e);
      if (eq != 1 || e.args.size() != 3)
        fail(e.pos, "'image' is written `image: generator = element`");
      std::optional<LetterId> gi = gens->index_of(e.args[0].text);
      if (!gi) fail(e.args[0].pos, "unknown generator '" + e.args[0].text + "'", out.generators);
      if (!out.images[static_cast<std::size_t>(*gi)].empty())
        fail(e.args[0].pos, "duplicate 'image' for '" + e.args[0].text + "'");
      // With no [act] in this document the image names an element of some
      // other file's act; the consuming command checks it there.
      if (act && std::find(act->elements.begin(), act->elements.end(), e.args[2].text) ==
                     act->elements.end())
        fail(e.args[2].pos, "unknown element '" + e.args[2].text + "'", act->elements);
      out.images[static_cast<std::size_t>(*gi)] = e.args[2].text;
    } else {  // relation
      std::size_t eq = find_equals(e);
      FreeActElement lhs = lex_elem(*gens, letters, e, 0, eq);
      FreeActElement rhs = lex_elem(*gens, letters, e, eq + 1, e.args.size());
      out.relations.push_back(ActRelation{std::move(lhs), std::move(rhs)});
    }
  }
  if (!have_generators) fail(sec.header, "[act-presentation] needs a 'generators' line");
  return out;
}

SubactSection parse_subact(const SectionLines& sec, const MonoidSection& monoid,
                           const std::optional<PresentationSection>& pres,
                           const std::optional<ActSection>& act) {
  SubactSection out;
  const std::vector<std::string> assign_keys = {"members", "other-generators"};
  const std::vector<std::string> directive_keys = {"witness", "complement"};
  const Alphabet& letters = monoid.system.alphabet;
  std::optional<Alphabet> gens;
  if (pres) gens = Alphabet(pres->generators);
  for (const Entry& e : sec.entries) {
    check_key(e, "[subact]", assign_keys, directive_keys);
    if (e.key == "members") {
      if (!act) fail(e.pos, "'members' lines need an [act] section");
      for (const Tok& t : e.args) {
        if (std::find(act->elements.begin(), act->elements.end(), t.text) == act->elements.end())
          fail(t.pos, "unknown element '" + t.text + "'", act->elements);
        out.members.push_back(t.text);
      }
    } else if (e.key == "other-generators") {
      out.other_generators = lex_token_list(e, "other-generators");
    } else {
      if (!gens) fail(e.pos, "'" + e.key + "' lines need an [act-presentation] section");
      FreeActElement el = lex_elem(*gens, letters, e, 0, e.args.size());
      (e.key == "witness" ? out.witnesses : out.complement).push_back(std::move(el));
    }
  }
  return out;
}

ChoicesSection parse_choices(const SectionLines& sec, const MonoidSection& monoid) {
  ChoicesSection out;
  const std::vector<std::string> assign_keys = {"tokens"};
  const std::vector<std::string> directive_keys = {"glue", "zero-spelling", "fixed-zero", "rewrite",
                                                   "intersection-witness"};
  const Alphabet& letters = monoid.system.alphabet;
  for (const Entry& e : sec.entries) {
    check_key(e, "[choices]", assign_keys, directive_keys);
    if (e.key == "tokens") {
      if (!out.tokens.empty()) fail(e.pos, "duplicate 'tokens'");
      out.tokens = lex_token_list(e, "tokens");
    } else if (e.key == "fixed-zero") {
      if (out.fixed_zero) fail(e.pos, "duplicate 'fixed-zero'");
      out.fixed_zero = lex_raw(letters, e, 0, e.args.size());
    } else if (e.key == "intersection-witness") {
      out.intersection_witnesses.push_back(lex_raw(letters, e, 0, e.args.size()));
    } else {
      std::size_t eq = find_equals(e);
      RawElem lhs = lex_raw(letters, e, 0, eq);
      RawElem rhs = lex_raw(letters, e, eq + 1, e.args.size());
      auto& list = e.key == "glue" ? out.glue
                   : e.key == "zero-spelling" ? out.zero_spellings
                                              : out.rewrites;
      list.emplace_back(std::move(lhs), std::move(rhs));
    }
  }
  return out;
}

TietzeSection parse_tietze(const SectionLines& sec, const MonoidSection& monoid) {
  TietzeSection out;
  const std::vector<std::string> assign_keys = {};
  const std::vector<std::string> directive_keys = {"add-relation", "drop-relation", "add-generator",
                                                   "drop-generator"};
  const Alphabet& letters = monoid.system.alphabet;
  for (const Entry& e : sec.entries) {
    check_key(e, "[tietze]", assign_keys, directive_keys);
    TietzeLine line;
    if (e.key == "add-relation") {
      line.kind = TietzeLine::Kind::AddRelation;
      std::size_t eq = find_equals(e);
      line.lhs = lex_raw(letters, e, 0, eq);
      line.rhs = lex_raw(letters, e, eq + 1, e.args.size());
    } else if (e.key == "drop-relation") {
      line.kind = TietzeLine::Kind::DropRelation;
      if (e.args.size() != 1) fail(e.pos, "'drop-relation' takes one relation number");
      line.index = lex_int(e.args[0], "relation number");
      if (line.index < 1) fail(e.args[0].pos, "relation numbers start at 1");
    } else if (e.key == "add-generator") {
      line.kind = TietzeLine::Kind::AddGenerator;
      std::size_t eq = find_equals(e);
      if (eq != 1) fail(e.pos, "'add-generator' is written `add-generator: token = gen . word`");
      if (!valid_letter_token(e.args[0].text))
        fail(e.args[0].pos, "invalid generator token '" + e.args[0].text + "'");
      line.token = e.args[0].text;
      line.rhs = lex_raw(letters, e, 2, e.args.size());
    } else {
      line.kind = TietzeLine::Kind::DropGenerator;
      if (e.args.size() != 1 || !valid_letter_token(e.args[0].text))
        fail(e.pos, "'drop-generator' takes one generator token");
      line.token = e.args[0].text;
    }
    out.moves.push_back(std::move(line));
  }
  return out;
}

}  // namespace

// ------------------------------------------------------------------ parsing

InputDocument parse_document(const std::string& text) {
  Grouped g = group_sections(tokenize(text));
  InputDocument doc;
  if (g.monoid.present) doc.monoid = parse_monoid(g.monoid);

  auto need_monoid = [&](const SectionLines& sec, const char* what) -> const MonoidSection& {
    if (!doc.monoid) fail(sec.header, std::string(what) + " needs a [monoid] section");
    return *doc.monoid;
  };
  if (g.act.present) {
    const MonoidSection& m = need_monoid(g.act, "[act]");
    if (m.kind != MonoidSection::Kind::Finite)
      fail(g.act.header, "[act] needs a finite monoid (kind = finite)");
    doc.act = parse_act(g.act, m);
  }
  if (g.presentation.present)
    doc.presentation =
        parse_presentation(g.presentation, need_monoid(g.presentation, "[act-presentation]"), doc.act);
  if (g.subact.present)
    doc.subact = parse_subact(g.subact, need_monoid(g.subact, "[subact]"), doc.presentation, doc.act);
  if (g.choices.present) doc.choices = parse_choices(g.choices, need_monoid(g.choices, "[choices]"));
  if (g.tietze.present) doc.tietze = parse_tietze(g.tietze, need_monoid(g.tietze, "[tietze]"));
  return doc;
}

InputDocument parse_document_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

// ------------------------------------------------------------ serialization

namespace {

std::string elem_text(const Alphabet& gens, const Alphabet& letters, const FreeActElement& e) {
  return gens.letter(e.gen) + " . " + print_word(letters, e.m);
}

std::string raw_text(const Alphabet& letters, const RawElem& e) {
  return e.gen + " . " + print_word(letters, e.m);
}

void emit_tokens(std::ostream& out, const std::string& key, const std::vector<std::string>& toks) {
  out << key << " =";
  for (const std::string& t : toks) out << ' ' << t;
  out << '\n';
}

}  // namespace

std::string serialize_document(const InputDocument& doc) {
  std::ostringstream out;
  bool first = true;
  auto section = [&](const char* name) {
    if (!first) out << '\n';
    first = false;
    out << name << '\n';
  };

  if (doc.monoid) {
    const MonoidSection& m = *doc.monoid;
    const Alphabet& letters = m.system.alphabet;
    section("[monoid]");
    out << "kind = "
        << (m.kind == MonoidSection::Kind::Free ? "free"
            : m.kind == MonoidSection::Kind::Rules ? "rules"
                                                   : "finite")
        << '\n';
    if (m.kind == MonoidSection::Kind::Finite) {
      emit_tokens(out, "names", m.names);
      out << "identity = " << m.identity << '\n';
      emit_tokens(out, "letters", letters.letters());
      for (std::size_t l = 0; l < letters.size(); ++l)
        out << "letter: " << letters.letter(static_cast<LetterId>(l)) << " = "
            << m.letter_targets[l] << '\n';
      for (std::size_t n = 0; n < m.names.size(); ++n) {
        out << "row: " << m.names[n] << " =";
        for (const std::string& p : m.rows[n]) out << ' ' << p;
        out << '\n';
      }
    } else {
      emit_tokens(out, "letters", letters.letters());
      for (const auto& [is_schema, idx] : m.system.declaration_order) {
        if (is_schema) {
          out << "schema: " << schema_text(letters, m.system.schemas[static_cast<std::size_t>(idx)])
              << '\n';
        } else {
          const RewriteRule& r = m.system.rules[static_cast<std::size_t>(idx)];
          out << "rule: " << print_word(letters, r.lhs) << " -> " << print_word(letters, r.rhs)
              << '\n';
        }
      }
    }
  }

  if (doc.act) {
    const Alphabet& letters = doc.monoid->system.alphabet;
    section("[act]");
    emit_tokens(out, "elements", doc.act->elements);
    for (std::size_t e = 0; e < doc.act->elements.size(); ++e)
      for (std::size_t l = 0; l < letters.size(); ++l)
        out << "act: " << doc.act->elements[e] << " . " << letters.letter(static_cast<LetterId>(l))
            << " = " << doc.act->table[e * letters.size() + l] << '\n';
  }

  if (doc.presentation) {
    const PresentationSection& p = *doc.presentation;
    const Alphabet& letters = doc.monoid->system.alphabet;
    Alphabet gens(p.generators);
    section("[act-presentation]");
    emit_tokens(out, "generators", p.generators);
    if (!p.zero.empty()) out << "zero = " << p.zero << '\n';
    for (std::size_t g = 0; g < p.generators.size(); ++g)
      if (p.embeddings[g])
        out << "embedding: " << p.generators[g] << " = " << print_word(letters, *p.embeddings[g])
            << '\n';
    for (std::size_t g = 0; g < p.generators.size(); ++g)
      if (!p.images[g].empty())
        out << "image: " << p.generators[g] << " = " << p.images[g] << '\n';
    for (const ActRelation& r : p.relations)
      out << "relation: " << elem_text(gens, letters, r.lhs) << " = "
          << elem_text(gens, letters, r.rhs) << '\n';
  }

  if (doc.subact) {
    const SubactSection& s = *doc.subact;
    const Alphabet& letters = doc.monoid->system.alphabet;
    Alphabet gens(doc.presentation ? doc.presentation->generators : std::vector<std::string>{});
    section("[subact]");
    for (const FreeActElement& w : s.witnesses)
      out << "witness: " << elem_text(gens, letters, w) << '\n';
    for (const FreeActElement& c : s.complement)
      out << "complement: " << elem_text(gens, letters, c) << '\n';
    if (!s.members.empty()) emit_tokens(out, "members", s.members);
    if (!s.other_generators.empty()) emit_tokens(out, "other-generators", s.other_generators);
  }

  if (doc.choices) {
    const ChoicesSection& c = *doc.choices;
    const Alphabet& letters = doc.monoid->system.alphabet;
    section("[choices]");
    if (!c.tokens.empty()) emit_tokens(out, "tokens", c.tokens);
    for (const auto& [l, r] : c.glue)
      out << "glue: " << raw_text(letters, l) << " = " << raw_text(letters, r) << '\n';
    for (const auto& [l, r] : c.zero_spellings)
      out << "zero-spelling: " << raw_text(letters, l) << " = " << raw_text(letters, r) << '\n';
    if (c.fixed_zero) out << "fixed-zero: " << raw_text(letters, *c.fixed_zero) << '\n';
    for (const auto& [l, r] : c.rewrites)
      out << "rewrite: " << raw_text(letters, l) << " = " << raw_text(letters, r) << '\n';
    for (const RawElem& w : c.intersection_witnesses)
      out << "intersection-witness: " << raw_text(letters, w) << '\n';
  }

  if (doc.tietze) {
    const Alphabet& letters = doc.monoid->system.alphabet;
    section("[tietze]");
    for (const TietzeLine& t : doc.tietze->moves) {
      switch (t.kind) {
        case TietzeLine::Kind::AddRelation:
          out << "add-relation: " << raw_text(letters, t.lhs) << " = " << raw_text(letters, t.rhs)
              << '\n';
          break;
        case TietzeLine::Kind::DropRelation:
          out << "drop-relation: " << t.index << '\n';
          break;
        case TietzeLine::Kind::AddGenerator:
          out << "add-generator: " << t.token << " = " << raw_text(letters, t.rhs) << '\n';
          break;
        case TietzeLine::Kind::DropGenerator:
          out << "drop-generator: " << t.token << '\n';
          break;
      }
    }
  }
  return out.str();
}

// ------------------------------------------------------------------ builders

namespace {

bool same_schema(const RuleSchema& a, const RuleSchema& b) {
  return a.lhs_prefix == b.lhs_prefix && a.pumped == b.pumped && a.min_count == b.min_count &&
         a.lhs_suffix == b.lhs_suffix && a.rhs_prefix == b.rhs_prefix && a.rhs_pump == b.rhs_pump &&
         (!a.rhs_pump || (a.rhs_pumped == b.rhs_pumped && a.rhs_exp_affine == b.rhs_exp_affine &&
                          a.rhs_exp_shift == b.rhs_exp_shift && a.rhs_suffix == b.rhs_suffix));
}

bool same_system(const RewritingSystem& a, const RewritingSystem& b) {
  if (!(a.alphabet == b.alphabet) || a.declaration_order != b.declaration_order) return false;
  if (a.rules.size() != b.rules.size() || a.schemas.size() != b.schemas.size()) return false;
  for (std::size_t i = 0; i < a.rules.size(); ++i)
    if (a.rules[i].lhs != b.rules[i].lhs || a.rules[i].rhs != b.rules[i].rhs) return false;
  for (std::size_t i = 0; i < a.schemas.size(); ++i)
    if (!same_schema(a.schemas[i], b.schemas[i])) return false;
  return true;
}

}  // namespace

bool MonoidSection::operator==(const MonoidSection& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Free: return system.alphabet == o.system.alphabet;
    case Kind::Rules: return same_system(system, o.system);
    case Kind::Finite:
      return system.alphabet == o.system.alphabet && names == o.names && identity == o.identity &&
             letter_targets == o.letter_targets && rows == o.rows;
  }
  return false;
}

Monoid MonoidSection::build() const {
  switch (kind) {
    case Kind::Free: return Monoid::free_monoid(system.alphabet);
    case Kind::Rules: {
      RewritingSystem sys = system;
      ConfluenceReport rep = check_local_confluence(sys, 8);
      if (rep.ok && rep.complete) {
        sys.confluence = ConfluenceStatus::Checked;
        sys.confluence_bound = 8;
      }
      return Monoid::from_rules(sys);
    }
    case Kind::Finite: {
      std::unordered_map<std::string, int> index;
      for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = static_cast<int>(i);
      int n = static_cast<int>(names.size());
      std::vector<int> table(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          table[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(b)] =
              index.at(rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
      std::vector<int> letter_elements;
      for (const std::string& target : letter_targets) letter_elements.push_back(index.at(target));
      return Monoid::from_table(FiniteMonoid(n, std::move(table), index.at(identity), names,
                                             system.alphabet, std::move(letter_elements)));
    }
  }
  throw Error("unreachable monoid kind");
}

FiniteAct ActSection::build(const Monoid& m) const {
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < elements.size(); ++i) index[elements[i]] = static_cast<int>(i);
  std::vector<int> ids;
  ids.reserve(table.size());
  for (const std::string& name : table) ids.push_back(index.at(name));
  return FiniteAct(m, elements, std::move(ids));
}

ActPresentation PresentationSection::build(const Monoid& m) const {
  return ActPresentation(m, Alphabet(generators), relations);
}

}  // namespace actpres::textio
