#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace actpres {

using LetterId = std::int32_t;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A letter token: non-empty, no whitespace, none of . ^ ( ) =, no "->",
// and not "1" (reserved for the empty word).
bool valid_letter_token(const std::string& tok);

// Ordered set of distinct letter tokens. Letter ids are declaration indices,
// which is also the order used by shortlex comparisons.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> letters);

  std::size_t size() const { return letters_.size(); }
  const std::string& letter(LetterId id) const { return letters_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& letters() const { return letters_; }
  std::optional<LetterId> index_of(const std::string& tok) const;
  bool contains(const std::string& tok) const { return index_of(tok).has_value(); }
  bool disjoint_from(const Alphabet& other) const;

  // New alphabet with extra letters appended; throws on duplicates.
  Alphabet extended(const std::vector<std::string>& extra) const;

  bool operator==(const Alphabet& other) const { return letters_ == other.letters_; }

 private:
  std::vector<std::string> letters_;
  std::unordered_map<std::string, LetterId> index_;
};

// A word over some alphabet, stored as letter ids. The owning alphabet is
// supplied by context (rewriting system, monoid handle, presentation).
struct Word {
  std::vector<LetterId> ids;

  Word() = default;
  explicit Word(std::vector<LetterId> v) : ids(std::move(v)) {}

  std::size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }
  LetterId operator[](std::size_t i) const { return ids[i]; }

  bool operator==(const Word& o) const { return ids == o.ids; }
  bool operator!=(const Word& o) const { return ids != o.ids; }
  bool operator<(const Word& o) const { return ids < o.ids; }  // lex on ids, for ordered containers

  Word concat(const Word& o) const;
  Word subword(std::size_t pos, std::size_t len) const;
  Word prefix(std::size_t len) const { return subword(0, len); }
  Word suffix_from(std::size_t pos) const { return subword(pos, ids.size() - pos); }
  bool starts_with(const Word& p) const;
};

bool shortlex_less(const Word& a, const Word& b);

struct WordHash {
  std::size_t operator()(const Word& w) const;
};

// Parsing and printing need the alphabet. The token "1" denotes the empty
// word and may appear alone or among letters (it contributes nothing).
Word parse_word(const Alphabet& a, const std::vector<std::string>& tokens);
Word parse_word(const Alphabet& a, const std::string& text);  // split on whitespace
std::string print_word(const Alphabet& a, const Word& w);

std::vector<std::string> split_tokens(const std::string& text);

// Element of a free act F_X: a generator paired with a monoid word.
struct FreeActElement {
  LetterId gen = 0;
  Word m;

  bool operator==(const FreeActElement& o) const { return gen == o.gen && m == o.m; }
  bool operator!=(const FreeActElement& o) const { return !(*this == o); }
  bool operator<(const FreeActElement& o) const {
    if (gen != o.gen) return gen < o.gen;
    return m < o.m;
  }
};

struct FreeActElementHash {
  std::size_t operator()(const FreeActElement& e) const {
    return WordHash{}(e.m) * 1315423911u ^ static_cast<std::size_t>(e.gen);
  }
};

// Prints as "x . a b" / "x . 1"; parses the same shape.
std::string print_element(const Alphabet& gens, const Alphabet& monoid_letters, const FreeActElement& e);
FreeActElement parse_element(const Alphabet& gens, const Alphabet& monoid_letters,
                             const std::vector<std::string>& tokens);
FreeActElement parse_element(const Alphabet& gens, const Alphabet& monoid_letters, const std::string& text);

}  // namespace actpres
