#include "actpres/monoid.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace actpres {

FiniteMonoid::FiniteMonoid(int n, std::vector<int> table, int identity, std::vector<std::string> names,
                           Alphabet letters, std::vector<int> letter_elements)
    : n_(n),
      table_(std::move(table)),
      identity_(identity),
      names_(std::move(names)),
      letters_(std::move(letters)),
      letter_elements_(std::move(letter_elements)) {
  if (n_ <= 0) throw Error("monoid needs at least one element");
  if (table_.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_))
    throw Error("multiplication table has wrong size");
  for (int v : table_)
    if (v < 0 || v >= n_) throw Error("multiplication table entry out of range");
  if (identity_ < 0 || identity_ >= n_) throw Error("identity out of range");
  if (names_.size() != static_cast<std::size_t>(n_)) throw Error("need one name per element");
  {
    std::vector<std::string> sorted = names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error("duplicate element name");
  }
  for (int a = 0; a < n_; ++a)
    if (mul(identity_, a) != a || mul(a, identity_) != a)
      throw Error("identity law fails at " + names_[static_cast<std::size_t>(a)]);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
          throw Error("associativity fails at (" + names_[static_cast<std::size_t>(a)] + ", " +
                      names_[static_cast<std::size_t>(b)] + ", " + names_[static_cast<std::size_t>(c)] + ")");
  if (letter_elements_.size() != static_cast<std::size_t>(letters_.size()))
    throw Error("need one element per letter");
  for (int v : letter_elements_)
    if (v < 0 || v >= n_) throw Error("letter element out of range");

  // Breadth-first walk from the identity, letters in declared order, so the
  // first word reaching an element is its shortlex-minimal name.
  canonical_.assign(static_cast<std::size_t>(n_), Word{});
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::deque<int> queue{identity_};
  seen[static_cast<std::size_t>(identity_)] = 1;
  while (!queue.empty()) {
    int e = queue.front();
    queue.pop_front();
    for (int l = 0; l < static_cast<int>(letters_.size()); ++l) {
      int f = mul(e, letter_elements_[static_cast<std::size_t>(l)]);
      if (seen[static_cast<std::size_t>(f)]) continue;
      seen[static_cast<std::size_t>(f)] = 1;
      Word w = canonical_[static_cast<std::size_t>(e)];
      w.ids.push_back(l);
      canonical_[static_cast<std::size_t>(f)] = std::move(w);
      queue.push_back(f);
    }
  }
  for (int e = 0; e < n_; ++e)
    if (!seen[static_cast<std::size_t>(e)])
      throw Error("element " + names_[static_cast<std::size_t>(e)] + " is not generated by the letters");
}

std::optional<int> FiniteMonoid::element_by_name(const std::string& s) const {
  for (int e = 0; e < n_; ++e)
    if (names_[static_cast<std::size_t>(e)] == s) return e;
  return std::nullopt;
}

int FiniteMonoid::eval(const Word& w) const {
  int e = identity_;
  for (LetterId l : w.ids) {
    if (l < 0 || l >= static_cast<int>(letters_.size())) throw Error("letter out of range in eval");
    e = mul(e, letter_elements_[static_cast<std::size_t>(l)]);
  }
  return e;
}

FiniteMonoid cayley_monoid(int n, const std::vector<int>& table, int identity,
                           const std::vector<std::string>& names) {
  std::vector<int> letter_elements(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) letter_elements[static_cast<std::size_t>(i)] = i;
  return FiniteMonoid(n, table, identity, names, Alphabet(names), letter_elements);
}

RewritingSystem cayley_presentation(const FiniteMonoid& m, const std::vector<std::string>& element_letters) {
  if (element_letters.size() != static_cast<std::size_t>(m.size()))
    throw Error("need one letter per element");
  RewritingSystem sys;
  sys.alphabet = Alphabet(element_letters);
  for (int a = 0; a < m.size(); ++a)
    for (int b = 0; b < m.size(); ++b) {
      Word lhs;
      lhs.ids = {a, b};
      Word rhs;
      rhs.ids = {m.mul(a, b)};
      sys.push_rule(RewriteRule{std::move(lhs), std::move(rhs)});
    }
  Word ident;
  ident.ids = {m.identity()};
  sys.push_rule(RewriteRule{std::move(ident), Word{}});
  // Length-reducing, and every overlap joins by associativity; trusted here,
  // exercised by the test suite.
  sys.confluence = ConfluenceStatus::Asserted;
  return sys;
}

struct Monoid::Impl {
  Kind kind;
  Alphabet letters;
  std::optional<RewritingSystem> sys;
  std::optional<FiniteMonoid> fin;
};

Monoid Monoid::free_monoid(Alphabet letters) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Free;
  impl->letters = std::move(letters);
  return Monoid(std::move(impl));
}

Monoid Monoid::from_rules(RewritingSystem sys) {
  TerminationReport t = check_termination(sys);
  if (!t.ok) throw Error("rewriting system does not terminate: " + t.detail);
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Rewriting;
  impl->letters = sys.alphabet;
  impl->sys = std::move(sys);
  return Monoid(std::move(impl));
}

Monoid Monoid::from_table(FiniteMonoid m) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Finite;
  impl->letters = m.letters();
  impl->fin = std::move(m);
  return Monoid(std::move(impl));
}

Monoid::Kind Monoid::kind() const { return impl_->kind; }
const Alphabet& Monoid::letters() const { return impl_->letters; }

const FiniteMonoid& Monoid::table() const {
  if (impl_->kind != Kind::Finite) throw Error("monoid has no multiplication table");
  return *impl_->fin;
}

const RewritingSystem& Monoid::rules() const {
  if (impl_->kind != Kind::Rewriting) throw Error("monoid has no rewriting system");
  return *impl_->sys;
}

ConfluenceStatus Monoid::confluence() const {
  return impl_->kind == Kind::Rewriting ? impl_->sys->confluence : ConfluenceStatus::Checked;
}

Word Monoid::canon(const Word& w) const {
  for (LetterId l : w.ids)
    if (l < 0 || l >= static_cast<int>(impl_->letters.size())) throw Error("letter out of range");
  switch (impl_->kind) {
    case Kind::Free: return w;
    case Kind::Rewriting: return normal_form(*impl_->sys, w);
    case Kind::Finite: return impl_->fin->canonical_word(impl_->fin->eval(w));
  }
  throw Error("unreachable");
}

std::optional<bool> Monoid::try_equal(const Word& a, const Word& b, const SearchLimits& lim) const {
  switch (impl_->kind) {
    case Kind::Free: return a == b;
    case Kind::Finite: return impl_->fin->eval(a) == impl_->fin->eval(b);
    case Kind::Rewriting: break;
  }
  const RewritingSystem& sys = *impl_->sys;
  Word na = normal_form(sys, a);
  Word nb = normal_form(sys, b);
  if (na == nb) return true;
  if (sys.confluence != ConfluenceStatus::Unchecked) return false;
  // Zigzag from the smaller normal form first: its class is the one more
  // likely to close (the class of the empty word often does instantly).
  const Word* small = &na;
  const Word* big = &nb;
  if (big->size() < small->size()) std::swap(small, big);
  std::size_t cap = std::max({static_cast<std::size_t>(lim.max_word_len), na.size(), nb.size()});
  WordClassBall ball = congruence_class(sys, *small, cap, lim.max_nodes);
  if (ball.words.count(*big)) return true;
  if (ball.closed) return false;
  WordClassBall other = congruence_class(sys, *big, cap, lim.max_nodes);
  if (other.words.count(*small)) return true;
  if (other.closed) return false;
  return std::nullopt;
}

bool Monoid::equal(const Word& a, const Word& b) const {
  auto r = try_equal(a, b);
  if (!r) throw Error("equality undecided within search bounds");
  return *r;
}

std::vector<Word> Monoid::elements(int max_len) const {
  std::vector<Word> out;
  switch (impl_->kind) {
    case Kind::Finite:
      for (int e = 0; e < impl_->fin->size(); ++e) out.push_back(impl_->fin->canonical_word(e));
      std::sort(out.begin(), out.end(), shortlex_less);
      return out;
    case Kind::Free: {
      std::deque<Word> queue{Word{}};
      while (!queue.empty()) {
        Word w = queue.front();
        queue.pop_front();
        out.push_back(w);
        if (w.size() == static_cast<std::size_t>(max_len)) continue;
        for (int l = 0; l < static_cast<int>(impl_->letters.size()); ++l) {
          Word next = w;
          next.ids.push_back(l);
          queue.push_back(std::move(next));
        }
      }
      return out;
    }
    case Kind::Rewriting:
      return enumerate_irreducible(*impl_->sys, static_cast<std::size_t>(max_len));
  }
  throw Error("unreachable");
}

DivisorResult Monoid::left_divisors(const Word& left, const Word& target, const SearchLimits& lim) const {
  DivisorResult out;
  Word L = canon(left);
  Word T = canon(target);
  switch (impl_->kind) {
    case Kind::Free:
      if (T.starts_with(L)) out.multipliers.push_back(T.suffix_from(L.size()));
      out.exact = true;
      return out;
    case Kind::Finite: {
      int l = impl_->fin->eval(L);
      int t = impl_->fin->eval(T);
      for (int e = 0; e < impl_->fin->size(); ++e)
        if (impl_->fin->mul(l, e) == t) out.multipliers.push_back(impl_->fin->canonical_word(e));
      std::sort(out.multipliers.begin(), out.multipliers.end(), shortlex_less);
      out.exact = true;
      return out;
    }
    case Kind::Rewriting: break;
  }
  const RewritingSystem& sys = *impl_->sys;
  if (L.size() == 0) {  // 1 . t = target forces t = target as an element
    out.multipliers.push_back(T);
    out.exact = true;
    return out;
  }
  std::size_t cap = std::max(static_cast<std::size_t>(lim.max_word_len), std::max(L.size(), T.size()));
  WordClassBall ball = congruence_class(sys, T, cap, lim.max_nodes);
  std::set<Word> found;
  for (const Word& w : ball.words)
    if (w.starts_with(L)) found.insert(canon(w.suffix_from(L.size())));
  out.multipliers.assign(found.begin(), found.end());
  std::sort(out.multipliers.begin(), out.multipliers.end(), shortlex_less);
  out.exact = ball.closed;
  if (!out.exact && out.multipliers.empty() && sys.confluence != ConfluenceStatus::Unchecked) {
    // Every word with literal prefix L keeps the frozen prefix of L under
    // rewriting, so with a confluent system the normal form of L.t does too.
    Word frozen = frozen_prefix(sys, L);
    if (!T.starts_with(frozen)) out.exact = true;
  }
  return out;
}

bool Monoid::same_definition(const Monoid& o) const {
  if (impl_ == o.impl_) return true;
  if (impl_->kind != o.impl_->kind) return false;
  if (!(impl_->letters == o.impl_->letters)) return false;
  switch (impl_->kind) {
    case Kind::Free: return true;
    case Kind::Finite: {
      const FiniteMonoid& a = *impl_->fin;
      const FiniteMonoid& b = *o.impl_->fin;
      if (a.size() != b.size() || a.identity() != b.identity()) return false;
      for (int x = 0; x < a.size(); ++x) {
        if (a.name(x) != b.name(x)) return false;
        for (int y = 0; y < a.size(); ++y)
          if (a.mul(x, y) != b.mul(x, y)) return false;
      }
      for (int l = 0; l < static_cast<int>(a.letters().size()); ++l)
        if (a.letter_element(l) != b.letter_element(l)) return false;
      return true;
    }
    case Kind::Rewriting: {
      const RewritingSystem& a = *impl_->sys;
      const RewritingSystem& b = *o.impl_->sys;
      if (a.rules.size() != b.rules.size() || a.schemas.size() != b.schemas.size()) return false;
      for (std::size_t i = 0; i < a.rules.size(); ++i)
        if (!(a.rules[i].lhs == b.rules[i].lhs && a.rules[i].rhs == b.rules[i].rhs)) return false;
      for (std::size_t i = 0; i < a.schemas.size(); ++i) {
        const RuleSchema& s = a.schemas[i];
        const RuleSchema& t = b.schemas[i];
        if (!(s.lhs_prefix == t.lhs_prefix && s.pumped == t.pumped && s.min_count == t.min_count &&
              s.lhs_suffix == t.lhs_suffix && s.rhs_prefix == t.rhs_prefix && s.rhs_pump == t.rhs_pump &&
              s.rhs_pumped == t.rhs_pumped && s.rhs_exp_affine == t.rhs_exp_affine &&
              s.rhs_exp_shift == t.rhs_exp_shift && s.rhs_suffix == t.rhs_suffix))
          return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace actpres
