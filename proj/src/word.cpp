#include "actpres/word.hpp"

#include <cctype>
#include <sstream>

namespace actpres {

bool valid_letter_token(const std::string& tok) {
  if (tok.empty() || tok == "1" || tok == "->") return false;
  for (char c : tok) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
    if (c == '.' || c == '^' || c == '(' || c == ')' || c == '=') return false;
  }
  if (tok.find("->") != std::string::npos) return false;
  return true;
}

Alphabet::Alphabet(std::vector<std::string> letters) : letters_(std::move(letters)) {
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (!valid_letter_token(letters_[i])) throw Error("invalid letter token: '" + letters_[i] + "'");
    auto [it, fresh] = index_.emplace(letters_[i], static_cast<LetterId>(i));
    if (!fresh) throw Error("duplicate letter: '" + letters_[i] + "'");
  }
}

std::optional<LetterId> Alphabet::index_of(const std::string& tok) const {
  auto it = index_.find(tok);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Alphabet::disjoint_from(const Alphabet& other) const {
  for (const auto& l : letters_)
    if (other.contains(l)) return false;
  return true;
}

Alphabet Alphabet::extended(const std::vector<std::string>& extra) const {
  std::vector<std::string> all = letters_;
  all.insert(all.end(), extra.begin(), extra.end());
  return Alphabet(std::move(all));
}

Word Word::concat(const Word& o) const {
  Word r;
  r.ids.reserve(ids.size() + o.ids.size());
  r.ids.insert(r.ids.end(), ids.begin(), ids.end());
  r.ids.insert(r.ids.end(), o.ids.begin(), o.ids.end());
  return r;
}

Word Word::subword(std::size_t pos, std::size_t len) const {
  Word r;
  r.ids.assign(ids.begin() + static_cast<std::ptrdiff_t>(pos),
               ids.begin() + static_cast<std::ptrdiff_t>(pos + len));
  return r;
}

bool Word::starts_with(const Word& p) const {
  if (p.ids.size() > ids.size()) return false;
  for (std::size_t i = 0; i < p.ids.size(); ++i)
    if (ids[i] != p.ids[i]) return false;
  return true;
}

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.ids < b.ids;
}

std::size_t WordHash::operator()(const Word& w) const {
  std::size_t h = 1469598103934665603ull;
  for (LetterId id : w.ids) {
    h ^= static_cast<std::size_t>(id) + 0x9e3779b9;
    h *= 1099511628211ull;
  }
  return h;
}

Word parse_word(const Alphabet& a, const std::vector<std::string>& tokens) {
  Word w;
  for (const auto& t : tokens) {
    if (t == "1") continue;
    auto id = a.index_of(t);
    if (!id) throw Error("unknown letter '" + t + "'");
    w.ids.push_back(*id);
  }
  return w;
}

Word parse_word(const Alphabet& a, const std::string& text) {
  return parse_word(a, split_tokens(text));
}

std::string print_word(const Alphabet& a, const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += a.letter(w[i]);
  }
  return out;
}

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string print_element(const Alphabet& gens, const Alphabet& monoid_letters, const FreeActElement& e) {
  return gens.letter(e.gen) + " . " + print_word(monoid_letters, e.m);
}

FreeActElement parse_element(const Alphabet& gens, const Alphabet& monoid_letters,
                             const std::vector<std::string>& tokens) {
  if (tokens.size() < 3 || tokens[1] != ".")
    throw Error("expected act element of the form '<generator> . <word>'");
  auto g = gens.index_of(tokens[0]);
  if (!g) throw Error("unknown generator '" + tokens[0] + "'");
  std::vector<std::string> rest(tokens.begin() + 2, tokens.end());
  return FreeActElement{*g, parse_word(monoid_letters, rest)};
}

FreeActElement parse_element(const Alphabet& gens, const Alphabet& monoid_letters, const std::string& text) {
  return parse_element(gens, monoid_letters, split_tokens(text));
}

}  // namespace actpres
