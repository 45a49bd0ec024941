#include "subshift/automaton.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "subshift/errors.hpp"
#include "subshift/kernels.hpp"

namespace subshift {

ShiftAutomaton::ShiftAutomaton(AlphabetPtr alphabet, std::size_t num_states,
                               std::vector<StateId> next, std::string name)
    : alphabet_(std::move(alphabet)), num_states_(num_states), next_(std::move(next)),
      name_(std::move(name)) {
  if (!alphabet_) throw InputError("automaton without alphabet");
  const std::size_t k = alphabet_->size();
  if (next_.size() != num_states_ * k) throw InputError("transition table has the wrong size");
  for (StateId t : next_)
    if (t != kNoState && t >= num_states_) throw InputError("transition to an unknown state");

  in_offset_.assign(num_states_ + 1, 0);
  for (StateId t : next_)
    if (t != kNoState) ++in_offset_[t + 1];
  for (std::size_t s = 0; s < num_states_; ++s) in_offset_[s + 1] += in_offset_[s];
  in_from_.resize(in_offset_.back());
  in_symbol_.resize(in_offset_.back());
  std::vector<std::size_t> fill(in_offset_.begin(), in_offset_.end() - 1);
  for (std::size_t s = 0; s < num_states_; ++s) {
    for (std::size_t c = 0; c < k; ++c) {
      const StateId t = next_[s * k + c];
      if (t == kNoState) continue;
      in_from_[fill[t]] = static_cast<StateId>(s);
      in_symbol_[fill[t]] = static_cast<Symbol>(c);
      ++fill[t];
    }
  }
}

ShiftAutomaton ShiftAutomaton::from_edges(AlphabetPtr alphabet, std::size_t num_states,
                                          std::span<const Edge> edges, std::string name) {
  const std::size_t k = alphabet->size();
  std::vector<StateId> next(num_states * k, kNoState);
  for (const Edge& e : edges) {
    if (e.from >= num_states || e.to >= num_states) throw InputError("edge names an unknown state");
    if (e.symbol >= k) throw InputError("edge symbol outside the alphabet");
    StateId& slot = next[e.from * k + e.symbol];
    if (slot != kNoState && slot != e.to)
      throw InputError("automaton is not deterministic: state " + std::to_string(e.from) +
                       " has two edges labeled '" + alphabet->name(e.symbol) + "'");
    slot = e.to;
  }
  return ShiftAutomaton(std::move(alphabet), num_states, std::move(next), std::move(name));
}

std::vector<Edge> ShiftAutomaton::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  const std::size_t k = alphabet_size();
  for (std::size_t s = 0; s < num_states_; ++s)
    for (std::size_t c = 0; c < k; ++c)
      if (StateId t = next_[s * k + c]; t != kNoState)
        out.push_back({static_cast<StateId>(s), static_cast<Symbol>(c), t});
  return out;
}

std::size_t ShiftAutomaton::out_degree(StateId s) const {
  std::size_t d = 0;
  for (std::size_t c = 0; c < alphabet_size(); ++c)
    if (next(s, static_cast<Symbol>(c)) != kNoState) ++d;
  return d;
}

StateSet ShiftAutomaton::all_states() const {
  StateSet out(num_states_);
  std::iota(out.begin(), out.end(), StateId{0});
  return out;
}

bool operator==(const ShiftAutomaton& a, const ShiftAutomaton& b) {
  return same_alphabet(a.alphabet_, b.alphabet_) && a.num_states_ == b.num_states_ &&
         a.next_ == b.next_;
}

ShiftAutomaton full_shift(AlphabetPtr alphabet) {
  const std::size_t k = alphabet->size();
  return ShiftAutomaton(std::move(alphabet), 1, std::vector<StateId>(k, 0), "full");
}

// ---------------------------------------------------------------------------

namespace {

// Aho-Corasick goto function over a complete alphabet, with "contains a
// forbidden word as a suffix" propagated along failure links.
struct AhoCorasick {
  std::size_t k;
  std::vector<StateId> go;  // node x symbol
  std::vector<bool> terminal;

  AhoCorasick(std::size_t alphabet_size, std::span<const Word> patterns) : k(alphabet_size) {
    go.assign(k, kNoState);
    terminal.assign(1, false);
    for (const Word& p : patterns) {
      StateId node = 0;
      for (Symbol c : p.symbols()) {
        if (go[node * k + c] == kNoState) {
          go[node * k + c] = static_cast<StateId>(terminal.size());
          terminal.push_back(false);
          go.resize(terminal.size() * k, kNoState);
        }
        node = go[node * k + c];
      }
      terminal[node] = true;
    }
    std::vector<StateId> fail(terminal.size(), 0);
    std::queue<StateId> q;
    for (std::size_t c = 0; c < k; ++c) {
      StateId& child = go[c];
      if (child == kNoState) {
        child = 0;
      } else {
        fail[child] = 0;
        q.push(child);
      }
    }
    while (!q.empty()) {
      const StateId u = q.front();
      q.pop();
      if (terminal[fail[u]]) terminal[u] = true;
      for (std::size_t c = 0; c < k; ++c) {
        StateId& child = go[u * k + c];
        if (child == kNoState) {
          child = go[fail[u] * k + c];
        } else {
          fail[child] = go[fail[u] * k + c];
          q.push(child);
        }
      }
    }
  }
};

}  // namespace

ShiftAutomaton from_forbidden_words(AlphabetPtr alphabet, std::span<const Word> forbidden) {
  for (const Word& w : forbidden) {
    if (w.empty()) throw InputError("forbidden words must be nonempty");
    if (!same_alphabet(w.alphabet(), alphabet)) throw InputError("forbidden word alphabet mismatch");
  }
  const std::size_t k = alphabet->size();
  AhoCorasick ac(k, forbidden);
  // Keep the nodes that do not signal a forbidden suffix.
  std::vector<StateId> remap(ac.terminal.size(), kNoState);
  std::size_t kept = 0;
  for (std::size_t u = 0; u < ac.terminal.size(); ++u)
    if (!ac.terminal[u]) remap[u] = static_cast<StateId>(kept++);
  std::vector<StateId> next(kept * k, kNoState);
  for (std::size_t u = 0; u < ac.terminal.size(); ++u) {
    if (remap[u] == kNoState) continue;
    for (std::size_t c = 0; c < k; ++c) {
      const StateId t = ac.go[u * k + c];
      next[remap[u] * k + c] = remap[t];
    }
  }
  ShiftAutomaton raw(alphabet, kept, std::move(next));
  ShiftAutomaton out = essentialize(raw);
  if (out.empty()) throw EmptySubshiftError("the forbidden words leave no bi-infinite sequence");
  out.set_name(forbidden.empty() ? "full" : "sft");
  return out;
}

ShiftAutomaton essentialize(const ShiftAutomaton& a) {
  const std::size_t n = a.num_states();
  const std::size_t k = a.alphabet_size();
  std::vector<std::size_t> indeg(n, 0), outdeg(n, 0);
  for (StateId s = 0; s < n; ++s) {
    outdeg[s] = a.out_degree(s);
    indeg[s] = a.in_degree(s);
  }
  std::vector<bool> alive(n, true);
  std::vector<StateId> work;
  for (StateId s = 0; s < n; ++s)
    if (indeg[s] == 0 || outdeg[s] == 0) work.push_back(s);
  while (!work.empty()) {
    const StateId s = work.back();
    work.pop_back();
    if (!alive[s]) continue;
    alive[s] = false;
    for (std::size_t c = 0; c < k; ++c) {
      const StateId t = a.next(s, static_cast<Symbol>(c));
      if (t != kNoState && alive[t] && --indeg[t] == 0) work.push_back(t);
    }
    for (StateId p : a.in_sources(s))
      if (alive[p] && --outdeg[p] == 0) work.push_back(p);
  }
  std::vector<StateId> remap(n, kNoState);
  std::size_t kept = 0;
  for (StateId s = 0; s < n; ++s)
    if (alive[s]) remap[s] = static_cast<StateId>(kept++);
  if (kept == n) return a;
  std::vector<StateId> next(kept * k, kNoState);
  for (StateId s = 0; s < n; ++s) {
    if (!alive[s]) continue;
    for (std::size_t c = 0; c < k; ++c) {
      const StateId t = a.next(s, static_cast<Symbol>(c));
      if (t != kNoState && alive[t]) next[remap[s] * k + c] = remap[t];
    }
  }
  return ShiftAutomaton(a.alphabet(), kept, std::move(next), a.name());
}

// ---------------------------------------------------------------------------

namespace {

// Deduplicating collector for state sets.
class SetBuilder {
 public:
  explicit SetBuilder(std::size_t n) : mark_(n, 0) {}
  void begin() {
    ++stamp_;
    items_.clear();
  }
  void add(StateId s) {
    if (mark_[s] != stamp_) {
      mark_[s] = stamp_;
      items_.push_back(s);
    }
  }
  StateSet finish() {
    std::sort(items_.begin(), items_.end());
    return items_;
  }

 private:
  std::vector<std::uint32_t> mark_;
  std::uint32_t stamp_ = 0;
  StateSet items_;
};

void check_alphabet(const ShiftAutomaton& a, const Word& w) {
  if (!same_alphabet(a.alphabet(), w.alphabet())) throw InputError("word and automaton alphabets differ");
}

}  // namespace

StateSet advance(const ShiftAutomaton& a, const StateSet& from, std::span<const Symbol> w) {
  SetBuilder b(a.num_states());
  StateSet cur = from;
  for (Symbol c : w) {
    b.begin();
    for (StateId s : cur)
      if (StateId t = a.next(s, c); t != kNoState) b.add(t);
    cur = b.finish();
    if (cur.empty()) break;
  }
  return cur;
}

StateSet retreat(const ShiftAutomaton& a, const StateSet& to, std::span<const Symbol> w) {
  SetBuilder b(a.num_states());
  StateSet cur = to;
  for (std::size_t i = w.size(); i-- > 0;) {
    const Symbol c = w[i];
    b.begin();
    for (StateId t : cur) {
      const auto src = a.in_sources(t);
      const auto sym = a.in_symbols(t);
      for (std::size_t e = 0; e < src.size(); ++e)
        if (sym[e] == c) b.add(src[e]);
    }
    cur = b.finish();
    if (cur.empty()) break;
  }
  return cur;
}

StateSet exit_states(const ShiftAutomaton& a, const Word& w) {
  check_alphabet(a, w);
  return advance(a, a.all_states(), w.symbols());
}

StateSet entry_states(const ShiftAutomaton& a, const Word& w) {
  check_alphabet(a, w);
  return retreat(a, a.all_states(), w.symbols());
}

bool is_allowable(const ShiftAutomaton& a, const Word& w) {
  check_alphabet(a, w);
  if (a.empty()) return false;
  return !exit_states(a, w).empty();
}

namespace {

std::vector<bool> reach_from(const ShiftAutomaton& a, StateId root, bool backward) {
  std::vector<bool> seen(a.num_states(), false);
  std::vector<StateId> stack{root};
  seen[root] = true;
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    auto visit = [&](StateId t) {
      if (t != kNoState && !seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    };
    if (backward) {
      for (StateId p : a.in_sources(s)) visit(p);
    } else {
      for (std::size_t c = 0; c < a.alphabet_size(); ++c) visit(a.next(s, static_cast<Symbol>(c)));
    }
  }
  return seen;
}

bool strongly_connected(const ShiftAutomaton& a) {
  const auto fwd = reach_from(a, 0, false);
  const auto bwd = reach_from(a, 0, true);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

}  // namespace

bool is_mixing(const ShiftAutomaton& a) {
  if (a.empty()) throw InputError("is_mixing on an empty automaton");
  if (!strongly_connected(a)) return false;
  // Period = gcd over edges u -> v of level(u) + 1 - level(v), BFS levels.
  const std::size_t n = a.num_states();
  std::vector<std::int64_t> level(n, -1);
  std::deque<StateId> q{0};
  level[0] = 0;
  while (!q.empty()) {
    const StateId s = q.front();
    q.pop_front();
    for (std::size_t c = 0; c < a.alphabet_size(); ++c) {
      const StateId t = a.next(s, static_cast<Symbol>(c));
      if (t != kNoState && level[t] < 0) {
        level[t] = level[s] + 1;
        q.push_back(t);
      }
    }
  }
  std::int64_t g = 0;
  for (StateId s = 0; s < n; ++s) {
    for (std::size_t c = 0; c < a.alphabet_size(); ++c) {
      const StateId t = a.next(s, static_cast<Symbol>(c));
      if (t == kNoState) continue;
      g = std::gcd(g, std::abs(level[s] + 1 - level[t]));
      if (g == 1) return true;
    }
  }
  return g == 1;
}

// ---------------------------------------------------------------------------
// Gap constant.

namespace {

using Bits = std::vector<std::uint64_t>;

struct BitsHash {
  std::size_t operator()(const Bits& b) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::uint64_t w : b) {
      h ^= w;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

constexpr std::size_t kContextFamilyCap = 1u << 15;
constexpr std::size_t kContextWordBudget = 1u << 24;

// Closure of the full state set under symbol-wise image (forward) or
// preimage (backward). Returns nullopt when the family grows past the cap.
std::optional<std::vector<Bits>> context_family(const ShiftAutomaton& a, bool backward) {
  const std::size_t n = a.num_states();
  const std::size_t words = (n + 63) / 64;
  const std::size_t k = a.alphabet_size();
  const std::size_t cap = std::min(kContextFamilyCap, kContextWordBudget / words);
  Bits full(words, 0);
  for (std::size_t s = 0; s < n; ++s) full[s / 64] |= std::uint64_t{1} << (s % 64);
  std::unordered_set<Bits, BitsHash> seen{full};
  std::vector<Bits> family{full};
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      Bits img(words, 0);
      bool any = false;
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t word = family[i][w];
        while (word) {
          const StateId s = static_cast<StateId>(w * 64 + std::countr_zero(word));
          word &= word - 1;
          if (backward) {
            const auto src = a.in_sources(s);
            const auto sym = a.in_symbols(s);
            for (std::size_t e = 0; e < src.size(); ++e) {
              if (sym[e] == c) {
                img[src[e] / 64] |= std::uint64_t{1} << (src[e] % 64);
                any = true;
              }
            }
          } else if (StateId t = a.next(s, static_cast<Symbol>(c)); t != kNoState) {
            img[t / 64] |= std::uint64_t{1} << (t % 64);
            any = true;
          }
        }
      }
      if (!any) continue;
      if (seen.insert(img).second) {
        family.push_back(std::move(img));
        if (family.size() > cap) return std::nullopt;
      }
    }
  }
  return family;
}

std::size_t popcount(const Bits& b) {
  std::size_t n = 0;
  for (std::uint64_t w : b) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool subset_of(const Bits& a, const Bits& b) {
  for (std::size_t w = 0; w < a.size(); ++w)
    if (a[w] & ~b[w]) return false;
  return true;
}

// Inclusion-minimal members, in a deterministic order (size, then bits).
std::vector<Bits> minimal_sets(std::vector<Bits> family) {
  std::sort(family.begin(), family.end(), [](const Bits& x, const Bits& y) {
    const auto px = popcount(x), py = popcount(y);
    if (px != py) return px < py;
    return x < y;
  });
  std::vector<Bits> out;
  for (auto& f : family) {
    const bool dominated =
        std::any_of(out.begin(), out.end(), [&](const Bits& m) { return subset_of(m, f); });
    if (!dominated) out.push_back(std::move(f));
  }
  return out;
}

std::vector<Bits> singletons(std::size_t n) {
  const std::size_t words = (n + 63) / 64;
  std::vector<Bits> out;
  for (std::size_t s = 0; s < n; ++s) {
    Bits b(words, 0);
    b[s / 64] |= std::uint64_t{1} << (s % 64);
    out.push_back(std::move(b));
  }
  return out;
}

// Product of an automaton with the W-matcher and a "W seen" flag. Once W has
// been seen the matcher state is dropped, so the seen layer is a copy of the
// automaton.
struct SeenProduct {
  const ShiftAutomaton& a;
  PatternMatcher pm;
  std::size_t m;
  bool trivial;

  SeenProduct(const ShiftAutomaton& automaton, const Word& W)
      : a(automaton), pm(W.symbols(), automaton.alphabet_size()), m(pm.num_states()),
        trivial(W.empty()) {}

  std::size_t size() const { return a.num_states() * m * 2; }
  StateId encode(StateId base, std::uint32_t j, bool seen) const {
    return static_cast<StateId>((base * m + (seen ? 0 : j)) * 2 + (seen ? 1 : 0));
  }
  StateId start(StateId base) const { return encode(base, 0, trivial); }
  StateId base(StateId p) const { return static_cast<StateId>(p / 2 / m); }
  bool seen(StateId p) const { return p & 1u; }
  std::uint32_t matcher(StateId p) const { return static_cast<std::uint32_t>((p / 2) % m); }

  StateId step(StateId p, Symbol c) const {
    const StateId t = a.next(base(p), c);
    if (t == kNoState) return kNoState;
    if (seen(p)) return encode(t, 0, true);
    const auto st = pm.step(matcher(p), c);
    return st.completed ? encode(t, 0, true) : encode(t, st.state, false);
  }
};

}  // namespace

std::size_t default_gap_bound(const ShiftAutomaton& a, const Word& W) {
  return 10 * a.num_states() * std::max<std::size_t>(W.size(), 1);
}

GapCertificate gap_constant(const ShiftAutomaton& a, const Word& W, std::size_t bound,
                            Execution exec) {
  if (a.empty()) throw InputError("gap_constant on an empty automaton");
  check_alphabet(a, W);
  if (!is_allowable(a, W)) throw InputError("gap_constant: W is not allowable");
  if (!is_mixing(a)) throw InputError("gap_constant: automaton is not mixing");

  GapCertificate cert;
  cert.W = W;
  auto sources = context_family(a, false);
  auto targets = context_family(a, true);
  std::vector<Bits> src_sets, dst_sets;
  if (sources && targets) {
    src_sets = minimal_sets(std::move(*sources));
    dst_sets = minimal_sets(std::move(*targets));
  } else {
    cert.state_pair_fallback = true;
    src_sets = singletons(a.num_states());
    dst_sets = singletons(a.num_states());
  }
  cert.source_contexts = src_sets.size();
  cert.target_contexts = dst_sets.size();

  SeenProduct prod(a, W);
  const std::size_t ps = prod.size();
  const std::size_t k = a.alphabet_size();
  std::vector<StateId> table(ps * k, kNoState);
  std::vector<StateId> project(ps, kNoState);
  for (StateId p = 0; p < ps; ++p) {
    if (prod.seen(p) && prod.matcher(p) != 0) continue;  // unused encodings
    for (std::size_t c = 0; c < k; ++c) table[p * k + c] = prod.step(p, static_cast<Symbol>(c));
    if (prod.seen(p)) project[p] = prod.base(p);
  }

  kernels::GapScanInput in;
  in.product_states = ps;
  in.alphabet_size = k;
  in.product_next = table;
  in.project = project;
  in.base_states = a.num_states();
  for (const Bits& s : src_sets) {
    std::vector<StateId> start;
    for (std::size_t w = 0; w < s.size(); ++w) {
      std::uint64_t word = s[w];
      while (word) {
        start.push_back(prod.start(static_cast<StateId>(w * 64 + std::countr_zero(word))));
        word &= word - 1;
      }
    }
    in.sources.push_back(std::move(start));
  }
  in.targets = std::move(dst_sets);
  in.bound = bound;
  const std::size_t n = a.num_states();
  in.scan_limit = bound + std::min<std::size_t>((n - 1) * (n - 1) + 1, std::size_t{1} << 22) +
                  n * std::max<std::size_t>(W.size(), 1);

  const auto results = kernels::gap_scan(in, exec);
  for (const auto& r : results) {
    if (r.exceeded)
      throw BoundExceededError("no gap constant <= " + std::to_string(bound) + " for W = '" +
                               W.to_string() + "'");
    cert.K = std::max(cert.K, r.K);
    cert.verified_bound = std::max(cert.verified_bound, r.saturation);
    cert.saturation.push_back(r.saturation);
  }
  cert.verified_bound = std::max(cert.verified_bound, cert.K);
  return cert;
}

// ---------------------------------------------------------------------------
// Fills.

namespace {

template <class Choose>
Word search_fill(const ShiftAutomaton& a, const StateSet& from, const StateSet& to, std::size_t l,
                 const Word& W, Choose&& choose) {
  check_alphabet(a, W);
  const SeenProduct prod(a, W);
  const std::size_t k = a.alphabet_size();

  // Forward layers of product states reachable from the left context.
  std::vector<StateSet> layers(l + 1);
  {
    SetBuilder b(prod.size());
    b.begin();
    for (StateId s : from) b.add(prod.start(s));
    layers[0] = b.finish();
    for (std::size_t i = 0; i < l; ++i) {
      b.begin();
      for (StateId p : layers[i])
        for (std::size_t c = 0; c < k; ++c)
          if (StateId t = prod.step(p, static_cast<Symbol>(c)); t != kNoState) b.add(t);
      layers[i + 1] = b.finish();
      if (layers[i + 1].empty()) throw FillError("no fill: left context has no continuation");
    }
  }

  // Prune backward to the states that still reach the right context with W seen.
  std::vector<bool> target(a.num_states(), false);
  for (StateId s : to) target[s] = true;
  std::vector<StateSet> good(l + 1);
  for (StateId p : layers[l])
    if (prod.seen(p) && target[prod.base(p)]) good[l].push_back(p);
  for (std::size_t i = l; i-- > 0;) {
    for (StateId p : layers[i]) {
      for (std::size_t c = 0; c < k; ++c) {
        const StateId t = prod.step(p, static_cast<Symbol>(c));
        if (t != kNoState && std::binary_search(good[i + 1].begin(), good[i + 1].end(), t)) {
          good[i].push_back(p);
          break;
        }
      }
    }
  }
  if (good[0].empty())
    throw FillError("no fill of length " + std::to_string(l) + " containing '" + W.to_string() +
                    "' joins the given contexts");

  std::vector<Symbol> out;
  out.reserve(l);
  StateSet cur = good[0];
  SetBuilder b(prod.size());
  for (std::size_t i = 0; i < l; ++i) {
    std::vector<std::pair<Symbol, StateSet>> options;
    for (std::size_t c = 0; c < k; ++c) {
      b.begin();
      for (StateId p : cur) {
        const StateId t = prod.step(p, static_cast<Symbol>(c));
        if (t != kNoState && std::binary_search(good[i + 1].begin(), good[i + 1].end(), t)) b.add(t);
      }
      StateSet nxt = b.finish();
      if (!nxt.empty()) options.emplace_back(static_cast<Symbol>(c), std::move(nxt));
    }
    auto& pick = options[choose(options.size())];
    out.push_back(pick.first);
    cur = std::move(pick.second);
  }
  return Word(a.alphabet(), std::move(out));
}

}  // namespace

Word fill_between(const ShiftAutomaton& a, const StateSet& from, const StateSet& to,
                  std::size_t l, const Word& W) {
  return search_fill(a, from, to, l, W, [](std::size_t) { return std::size_t{0}; });
}

Word random_fill_between(const ShiftAutomaton& a, const StateSet& from, const StateSet& to,
                         std::size_t l, const Word& W, Rng& rng) {
  return search_fill(a, from, to, l, W, [&](std::size_t n) { return uniform_below(rng, n); });
}

Word find_fill(const ShiftAutomaton& a, const Word& left, const Word& right, std::size_t l,
               const Word& W) {
  check_alphabet(a, left);
  check_alphabet(a, right);
  const StateSet from = exit_states(a, left);
  const StateSet to = entry_states(a, right);
  if (from.empty()) throw FillError("left context is not allowable");
  if (to.empty()) throw FillError("right context is not allowable");
  return fill_between(a, from, to, l, W);
}

// ---------------------------------------------------------------------------

ShiftAutomaton window_restriction(const ShiftAutomaton& a, const Word& W, std::size_t M) {
  check_alphabet(a, W);
  if (a.empty()) throw InputError("window_restriction of an empty automaton");
  if (W.empty()) return essentialize(a);
  if (M < W.size()) throw InputError("window length shorter than W");
  if (!is_allowable(a, W)) throw InputError("window_restriction: W is not allowable");

  const PatternMatcher pm(W.symbols(), a.alphabet_size());
  const std::uint64_t m = pm.num_states();
  const std::uint64_t max_gap = M - W.size();  // symbols since the last occurrence ended
  const std::size_t k = a.alphabet_size();
  auto key = [&](std::uint64_t base, std::uint64_t j, std::uint64_t d) {
    return (base * m + j) * (max_gap + 1) + d;
  };

  std::unordered_map<std::uint64_t, StateId> index;
  std::vector<std::array<std::uint64_t, 3>> states;
  std::vector<StateId> next;
  auto intern = [&](std::uint64_t base, std::uint64_t j, std::uint64_t d) {
    auto [it, inserted] = index.try_emplace(key(base, j, d), static_cast<StateId>(states.size()));
    if (inserted) {
      states.push_back({base, j, d});
      next.resize(states.size() * k, kNoState);
    }
    return it->second;
  };
  // Every state on a bi-infinite path is reached from the moment an
  // occurrence of W completed.
  for (StateId s = 0; s < a.num_states(); ++s) intern(s, pm.after_match(), 0);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto [base, j, d] = states[i];
    for (std::size_t c = 0; c < k; ++c) {
      const StateId t = a.next(static_cast<StateId>(base), static_cast<Symbol>(c));
      if (t == kNoState) continue;
      const auto st = pm.step(static_cast<std::uint32_t>(j), static_cast<Symbol>(c));
      const std::uint64_t nd = st.completed ? 0 : d + 1;
      if (nd > max_gap) continue;
      const StateId target = intern(t, st.state, nd);
      next[i * k + c] = target;
    }
  }
  ShiftAutomaton raw(a.alphabet(), states.size(), std::move(next));
  ShiftAutomaton out = essentialize(raw);
  if (out.empty())
    throw EmptySubshiftError("no point has '" + W.to_string() + "' in every window of length " +
                             std::to_string(M));
  out.set_name("window(" + std::to_string(M) + ")");
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Strongly connected components (iterative Tarjan); comp[s] is the index of
// the component holding s.
std::vector<std::uint32_t> components(const ShiftAutomaton& a, std::size_t& count) {
  const std::size_t n = a.num_states();
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<StateId> stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::pair<StateId, std::size_t>> call;  // (state, next symbol)
  std::uint32_t counter = 0;
  count = 0;
  for (StateId root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [s, c] = call.back();
      if (c < a.alphabet_size()) {
        const StateId t = a.next(s, static_cast<Symbol>(c++));
        if (t == kNoState) continue;
        if (index[t] == kUnset) {
          index[t] = low[t] = counter++;
          stack.push_back(t);
          on_stack[t] = true;
          call.push_back({t, 0});
        } else if (on_stack[t]) {
          low[s] = std::min(low[s], index[t]);
        }
        continue;
      }
      const StateId done = s;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        StateId t;
        do {
          t = stack.back();
          stack.pop_back();
          on_stack[t] = false;
          comp[t] = static_cast<std::uint32_t>(count);
        } while (t != done);
        ++count;
      }
    }
  }
  return comp;
}

// Perron root of an irreducible automaton by power iteration, stopped when
// the Collatz-Wielandt bracket closes to a relative 1e-12.
double perron_root(const ShiftAutomaton& a, Execution exec, EntropyResult& stats) {
  constexpr double kTol = 1e-12;
  constexpr std::size_t kMaxIter = 1'000'000;
  const std::size_t n = a.num_states();
  // The +I shift makes a periodic component aperiodic and moves the root by
  // exactly one.
  const double shift = is_mixing(a) ? 0.0 : 1.0;
  std::vector<double> v(n, 1.0 / static_cast<double>(n)), y(n, 0.0);
  double root = 0.0;
  for (std::size_t it = 1; it <= kMaxIter; ++it) {
    const auto step = kernels::perron_step(a.in_offsets(), a.in_sources_all(), v, y, shift, exec);
    ++stats.iterations;
    root = 0.5 * (step.max_ratio + step.min_ratio) - shift;
    for (std::size_t i = 0; i < n; ++i) v[i] = y[i] / step.sum;
    if (step.max_ratio - step.min_ratio <= kTol * step.max_ratio) return root;
  }
  stats.converged = false;
  return root;
}

}  // namespace

EntropyResult entropy_detail(const ShiftAutomaton& a, Execution exec) {
  if (a.empty()) throw InputError("entropy of an empty automaton");
  EntropyResult r;
  r.converged = true;
  std::size_t count = 0;
  const auto comp = components(a, count);
  if (count == 1) {
    r.spectral_radius = a.num_edges() ? perron_root(a, exec, r) : 0.0;
  } else {
    // The root of a reducible graph is the largest root among its
    // strongly connected components.
    std::vector<StateId> local(a.num_states());
    std::vector<std::size_t> size(count, 0);
    for (StateId s = 0; s < a.num_states(); ++s) local[s] = static_cast<StateId>(size[comp[s]]++);
    std::vector<std::vector<StateId>> next(count);
    std::vector<bool> has_edge(count, false);
    for (std::size_t c = 0; c < count; ++c) next[c].assign(size[c] * a.alphabet_size(), kNoState);
    for (StateId s = 0; s < a.num_states(); ++s)
      for (std::size_t c = 0; c < a.alphabet_size(); ++c) {
        const StateId t = a.next(s, static_cast<Symbol>(c));
        if (t == kNoState || comp[t] != comp[s]) continue;
        next[comp[s]][local[s] * a.alphabet_size() + c] = local[t];
        has_edge[comp[s]] = true;
      }
    for (std::size_t c = 0; c < count; ++c) {
      if (!has_edge[c]) continue;
      const ShiftAutomaton part(a.alphabet(), size[c], std::move(next[c]));
      r.spectral_radius = std::max(r.spectral_radius, perron_root(part, exec, r));
    }
  }
  r.entropy = r.spectral_radius > 0.0 ? std::log(r.spectral_radius)
                                      : -std::numeric_limits<double>::infinity();
  return r;
}

double entropy(const ShiftAutomaton& a) { return entropy_detail(a).entropy; }

Word sample_point(const ShiftAutomaton& a, std::size_t length, std::uint64_t seed) {
  if (a.empty()) throw InputError("sample_point on an empty automaton");
  Rng rng(seed);
  std::vector<Symbol> out;
  out.reserve(length);
  if (length == 0) return Word(a.alphabet());
  StateId s = static_cast<StateId>(uniform_below(rng, a.num_states()));
  std::vector<Symbol> options;
  for (std::size_t i = 0; i < length; ++i) {
    options.clear();
    for (std::size_t c = 0; c < a.alphabet_size(); ++c)
      if (a.next(s, static_cast<Symbol>(c)) != kNoState) options.push_back(static_cast<Symbol>(c));
    if (options.empty()) throw InputError("sample_point: automaton is not essential");
    const Symbol c = options[uniform_below(rng, options.size())];
    out.push_back(c);
    s = a.next(s, c);
  }
  return Word(a.alphabet(), std::move(out));
}

std::vector<Word> allowable_words(const ShiftAutomaton& a, std::size_t n) {
  std::vector<Word> out;
  if (a.empty()) return out;
  std::vector<Symbol> prefix;
  std::vector<StateSet> stack{a.all_states()};
  // Iterative DFS in symbol order.
  std::vector<std::size_t> next_symbol{0};
  if (n == 0) {
    out.emplace_back(a.alphabet());
    return out;
  }
  while (!next_symbol.empty()) {
    const std::size_t depth = next_symbol.size() - 1;
    if (next_symbol.back() >= a.alphabet_size()) {
      next_symbol.pop_back();
      stack.pop_back();
      if (!prefix.empty()) prefix.pop_back();
      continue;
    }
    const Symbol c = static_cast<Symbol>(next_symbol.back()++);
    const Symbol sym[1] = {c};
    StateSet nxt = advance(a, stack.back(), sym);
    if (nxt.empty()) continue;
    prefix.push_back(c);
    if (depth + 1 == n) {
      out.emplace_back(a.alphabet(), prefix);
      prefix.pop_back();
      continue;
    }
    stack.push_back(std::move(nxt));
    next_symbol.push_back(0);
  }
  return out;
}

}  // namespace subshift
