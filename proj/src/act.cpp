#include "actpres/act.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

namespace actpres {

namespace {

std::vector<int> compose(const std::vector<int>& first, const std::vector<int>& then) {
  std::vector<int> out(first.size());
  for (std::size_t i = 0; i < first.size(); ++i)
    out[i] = then[static_cast<std::size_t>(first[i])];
  return out;
}

std::vector<int> identity_map(int n) {
  std::vector<int> out(static_cast<std::size_t>(n));
  std::iota(out.begin(), out.end(), 0);
  return out;
}

struct RawAction {
  int n;
  std::size_t letters;
  const std::vector<int>* table;

  std::vector<int> letter_map(LetterId l) const {
    std::vector<int> out(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a)
      out[static_cast<std::size_t>(a)] = (*table)[static_cast<std::size_t>(a) * letters + static_cast<std::size_t>(l)];
    return out;
  }
  std::vector<int> word_map(const Word& w) const {
    std::vector<int> cur = identity_map(n);
    for (LetterId l : w.ids) cur = compose(cur, letter_map(l));
    return cur;
  }
};

// Checks u x^i v = p x'^e(i) q as transformations for every i >= min_count.
// The pair (x-power, x'-power) evolves deterministically with i, so once a
// pair of power maps repeats, all later instances replay earlier ones.
bool schema_holds(const RawAction& act, const RuleSchema& s) {
  std::vector<int> u = act.word_map(s.lhs_prefix);
  std::vector<int> v = act.word_map(s.lhs_suffix);
  std::vector<int> p = act.word_map(s.rhs_prefix);
  std::vector<int> q = act.word_map(s.rhs_suffix);
  std::vector<int> x = act.letter_map(s.pumped);
  std::vector<int> xp = s.rhs_pump ? act.letter_map(s.rhs_pumped) : identity_map(act.n);

  auto pow = [&](const std::vector<int>& f, int e) {
    std::vector<int> out = identity_map(act.n);
    for (int i = 0; i < e; ++i) out = compose(out, f);
    return out;
  };

  std::vector<int> xi = pow(x, s.min_count);
  std::vector<int> xe = s.rhs_pump ? pow(xp, s.exponent(s.min_count)) : identity_map(act.n);
  std::map<std::pair<std::vector<int>, std::vector<int>>, int> seen;
  for (int i = s.min_count;; ++i) {
    std::vector<int> lhs = compose(compose(u, xi), v);
    std::vector<int> rhs = compose(compose(p, xe), q);
    if (lhs != rhs) return false;
    if (!seen.emplace(std::make_pair(xi, xe), i).second) return true;
    xi = compose(xi, x);
    if (s.rhs_pump && s.rhs_exp_affine) xe = compose(xe, xp);
    if (i - s.min_count > 100000) throw Error("rule family power cycle did not close");
  }
}

std::vector<int> word_map(const FiniteAct& act, const Word& w) {
  int cap = act.size();
  std::vector<int> out(static_cast<std::size_t>(cap));
  for (int a = 0; a < cap; ++a) out[static_cast<std::size_t>(a)] = act.act_word(a, w);
  return out;
}

}  // namespace

std::optional<std::string> action_incompatibility(const Monoid& m, int n,
                                                  const std::vector<int>& letter_table) {
  std::size_t letters = m.letters().size();
  if (n <= 0) return "act needs at least one element";
  if (letter_table.size() != static_cast<std::size_t>(n) * letters) return "action table has wrong size";
  for (int v : letter_table)
    if (v < 0 || v >= n) return "action table entry out of range";
  RawAction act{n, letters, &letter_table};

  switch (m.kind()) {
    case Monoid::Kind::Free:
      return std::nullopt;  // no relations to respect
    case Monoid::Kind::Rewriting: {
      const RewritingSystem& sys = m.rules();
      for (const RewriteRule& r : sys.rules)
        if (act.word_map(r.lhs) != act.word_map(r.rhs))
          return "action does not respect the rule " + print_word(sys.alphabet, r.lhs) + " -> " +
                 print_word(sys.alphabet, r.rhs);
      for (const RuleSchema& s : sys.schemas)
        if (!schema_holds(act, s)) return "action does not respect a rule family";
      return std::nullopt;
    }
    case Monoid::Kind::Finite: {
      const FiniteMonoid& fm = m.table();
      std::vector<std::vector<int>> elem(static_cast<std::size_t>(fm.size()));
      for (int e = 0; e < fm.size(); ++e) elem[static_cast<std::size_t>(e)] = act.word_map(fm.canonical_word(e));
      if (elem[static_cast<std::size_t>(fm.identity())] != identity_map(n))
        return "identity does not act trivially";
      for (int a = 0; a < fm.size(); ++a)
        for (int b = 0; b < fm.size(); ++b)
          if (elem[static_cast<std::size_t>(fm.mul(a, b))] !=
              compose(elem[static_cast<std::size_t>(a)], elem[static_cast<std::size_t>(b)]))
            return "action is not compatible with the multiplication table";
      return std::nullopt;
    }
  }
  return std::nullopt;
}

FiniteAct::FiniteAct(Monoid monoid, std::vector<std::string> names, std::vector<int> letter_table)
    : monoid_(std::move(monoid)),
      n_(static_cast<int>(names.size())),
      num_letters_(monoid_.letters().size()),
      names_(std::move(names)),
      letter_table_(std::move(letter_table)) {
  if (n_ <= 0) throw Error("act needs at least one element");
  {
    std::vector<std::string> sorted = names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error("duplicate act element name");
  }
  if (auto why = action_incompatibility(monoid_, n_, letter_table_)) throw Error(*why);

  if (monoid_.kind() == Monoid::Kind::Finite) {
    const FiniteMonoid& fm = monoid_.table();
    element_table_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(fm.size()), 0);
    for (int a = 0; a < n_; ++a)
      for (int e = 0; e < fm.size(); ++e)
        element_table_[static_cast<std::size_t>(a) * fm.size() + e] = act_word(a, fm.canonical_word(e));
  }
}

std::optional<int> FiniteAct::element_by_name(const std::string& s) const {
  for (int a = 0; a < n_; ++a)
    if (names_[static_cast<std::size_t>(a)] == s) return a;
  return std::nullopt;
}

int FiniteAct::act_word(int a, const Word& w) const {
  int cur = a;
  for (LetterId l : w.ids) {
    if (l < 0 || static_cast<std::size_t>(l) >= num_letters_) throw Error("letter out of range");
    cur = act_letter(cur, l);
  }
  return cur;
}

int FiniteAct::act_element(int a, int m) const {
  if (element_table_.empty()) throw Error("element action needs a finite monoid backend");
  return element_table_[static_cast<std::size_t>(a) * monoid_.table().size() + static_cast<std::size_t>(m)];
}

std::vector<int> word_transformation(const FiniteAct& act, const Word& w) { return word_map(act, w); }

int Subact::count() const {
  int c = 0;
  for (char m : member) c += m != 0;
  return c;
}

Subact subact_generated(const FiniteAct& act, const std::vector<int>& seeds) {
  if (seeds.empty()) throw Error("subact needs at least one generator");
  Subact b;
  b.member.assign(static_cast<std::size_t>(act.size()), 0);
  std::deque<int> queue;
  for (int s : seeds) {
    if (s < 0 || s >= act.size()) throw Error("subact seed out of range");
    if (!b.member[static_cast<std::size_t>(s)]) {
      b.member[static_cast<std::size_t>(s)] = 1;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    int a = queue.front();
    queue.pop_front();
    for (int l = 0; l < static_cast<int>(act.monoid().letters().size()); ++l) {
      int next = act.act_letter(a, l);
      if (!b.member[static_cast<std::size_t>(next)]) {
        b.member[static_cast<std::size_t>(next)] = 1;
        queue.push_back(next);
      }
    }
  }
  return b;
}

bool is_subact(const FiniteAct& act, const Subact& b) {
  if (b.member.size() != static_cast<std::size_t>(act.size())) return false;
  for (int a = 0; a < act.size(); ++a) {
    if (!b.contains(a)) continue;
    for (int l = 0; l < static_cast<int>(act.monoid().letters().size()); ++l)
      if (!b.contains(act.act_letter(a, l))) return false;
  }
  return true;
}

ActCongruence::ActCongruence(int n, std::vector<int> class_of) : class_of_(std::move(class_of)) {
  if (class_of_.size() != static_cast<std::size_t>(n)) throw Error("congruence size mismatch");
  // renumber classes in first-occurrence order
  std::vector<int> rename(class_of_.size(), -1);
  int next = 0;
  for (int& c : class_of_) {
    if (c < 0 || c >= n) throw Error("congruence class out of range");
    if (rename[static_cast<std::size_t>(c)] < 0) rename[static_cast<std::size_t>(c)] = next++;
    c = rename[static_cast<std::size_t>(c)];
  }
  num_classes_ = next;
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  std::vector<int> rank;

  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)), rank(static_cast<std::size_t>(n), 0) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  bool merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)]) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    if (rank[static_cast<std::size_t>(a)] == rank[static_cast<std::size_t>(b)]) ++rank[static_cast<std::size_t>(a)];
    return true;
  }
};

}  // namespace

ActCongruence congruence_closure(const FiniteAct& act, const std::vector<std::pair<int, int>>& seed) {
  DisjointSets sets(act.size());
  std::deque<std::pair<int, int>> work;
  for (auto [a, b] : seed) {
    if (a < 0 || a >= act.size() || b < 0 || b >= act.size()) throw Error("congruence seed out of range");
    if (sets.merge(a, b)) work.emplace_back(a, b);
  }
  int letters = static_cast<int>(act.monoid().letters().size());
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.pop_front();
    for (int l = 0; l < letters; ++l) {
      int as = act.act_letter(a, l);
      int bs = act.act_letter(b, l);
      if (sets.merge(as, bs)) work.emplace_back(as, bs);
    }
  }
  std::vector<int> class_of(static_cast<std::size_t>(act.size()));
  for (int a = 0; a < act.size(); ++a) class_of[static_cast<std::size_t>(a)] = sets.find(a);
  return ActCongruence(act.size(), std::move(class_of));
}

ReesQuotient rees_quotient(const FiniteAct& act, const Subact& b) {
  if (!is_subact(act, b)) throw Error("member set is not closed under the action");
  if (b.count() == 0) throw Error("subact is empty");
  std::vector<int> projection(static_cast<std::size_t>(act.size()), -1);
  std::vector<std::string> names;
  int zero = 0;
  names.push_back("0");
  for (int a = 0; a < act.size(); ++a) {
    if (b.contains(a)) {
      projection[static_cast<std::size_t>(a)] = zero;
    } else {
      projection[static_cast<std::size_t>(a)] = static_cast<int>(names.size());
      names.push_back(act.name(a));
    }
  }
  std::size_t letters = act.monoid().letters().size();
  std::vector<int> table(names.size() * letters, zero);
  for (int a = 0; a < act.size(); ++a) {
    if (b.contains(a)) continue;
    for (std::size_t l = 0; l < letters; ++l)
      table[static_cast<std::size_t>(projection[static_cast<std::size_t>(a)]) * letters + l] =
          projection[static_cast<std::size_t>(act.act_letter(a, static_cast<LetterId>(l)))];
  }
  ReesQuotient q{FiniteAct(act.monoid(), std::move(names), std::move(table)), zero, std::move(projection)};
  return q;
}

ActCongruence kernel_congruence(const std::vector<int>& image) {
  std::map<int, int> first_index;
  std::vector<int> class_of(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    auto it = first_index.emplace(image[i], static_cast<int>(i)).first;
    class_of[i] = it->second;
  }
  return ActCongruence(static_cast<int>(image.size()), std::move(class_of));
}

}  // namespace actpres
