#pragma once

// Subshifts presented as deterministic labeled graphs. A bi-infinite label
// sequence belongs to the presented subshift iff it is read along some
// bi-infinite path; after essentialization every state lies on such a path.
//
// State sets passed between the helpers below are sorted, duplicate-free
// vectors of state ids.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subshift/rng.hpp"
#include "subshift/words.hpp"

namespace subshift {

using StateId = std::uint32_t;
inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();

using StateSet = std::vector<StateId>;

struct Edge {
  StateId from;
  Symbol symbol;
  StateId to;
  friend bool operator==(const Edge&, const Edge&) = default;
};

class ShiftAutomaton {
 public:
  ShiftAutomaton() = default;

  // `next` is a row-major (state, symbol) table holding kNoState for missing
  // edges.
  ShiftAutomaton(AlphabetPtr alphabet, std::size_t num_states, std::vector<StateId> next,
                 std::string name = {});

  // Rejects non-deterministic edge lists (two edges on one (state, symbol)).
  static ShiftAutomaton from_edges(AlphabetPtr alphabet, std::size_t num_states,
                                   std::span<const Edge> edges, std::string name = {});

  const AlphabetPtr& alphabet() const { return alphabet_; }
  std::size_t alphabet_size() const { return alphabet_->size(); }
  std::size_t num_states() const { return num_states_; }
  bool empty() const { return num_states_ == 0; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  StateId next(StateId s, Symbol c) const { return next_[s * alphabet_size() + c]; }
  std::span<const StateId> table() const { return next_; }

  std::size_t num_edges() const { return in_from_.size(); }
  std::vector<Edge> edges() const;

  // Incoming edges of `s` as parallel spans (source state, symbol).
  std::span<const StateId> in_sources(StateId s) const {
    return {in_from_.data() + in_offset_[s], in_offset_[s + 1] - in_offset_[s]};
  }
  std::span<const Symbol> in_symbols(StateId s) const {
    return {in_symbol_.data() + in_offset_[s], in_offset_[s + 1] - in_offset_[s]};
  }

  // CSR view of all incoming lists.
  std::span<const std::size_t> in_offsets() const { return in_offset_; }
  std::span<const StateId> in_sources_all() const { return in_from_; }

  std::size_t out_degree(StateId s) const;
  std::size_t in_degree(StateId s) const { return in_offset_[s + 1] - in_offset_[s]; }

  StateSet all_states() const;

  friend bool operator==(const ShiftAutomaton& a, const ShiftAutomaton& b);

 private:
  AlphabetPtr alphabet_;
  std::size_t num_states_ = 0;
  std::vector<StateId> next_;
  std::vector<std::size_t> in_offset_{0};
  std::vector<StateId> in_from_;
  std::vector<Symbol> in_symbol_;
  std::string name_;
};

// Full shift on the given alphabet: one state, one loop per symbol.
ShiftAutomaton full_shift(AlphabetPtr alphabet);

// Sequences avoiding every forbidden word. Built as the product of the full
// shift with the Aho-Corasick automaton of the forbidden set, keeping only
// non-matching trie nodes, then essentialized. Throws EmptySubshiftError when
// nothing survives.
ShiftAutomaton from_forbidden_words(AlphabetPtr alphabet, std::span<const Word> forbidden);

// Repeatedly drops states with no incoming or no outgoing edge. The result
// may be empty; callers that need a nonempty subshift check empty().
ShiftAutomaton essentialize(const ShiftAutomaton& a);

// States reached after reading `w` from any state of `from`.
StateSet advance(const ShiftAutomaton& a, const StateSet& from, std::span<const Symbol> w);
// States from which `w` can be read ending inside `to`.
StateSet retreat(const ShiftAutomaton& a, const StateSet& to, std::span<const Symbol> w);

// End states of paths labeled w (all states for the empty word).
StateSet exit_states(const ShiftAutomaton& a, const Word& w);
// Start states of paths labeled w.
StateSet entry_states(const ShiftAutomaton& a, const Word& w);

bool is_allowable(const ShiftAutomaton& a, const Word& w);

// Primitivity of the state graph, via strong connectivity plus period one.
// Throws InputError on an empty automaton.
bool is_mixing(const ShiftAutomaton& a);

// Word-context gap certificate: for every pair of allowable context words
// (alpha, beta) and every l >= K there is a word w of length l containing W
// with alpha w beta allowable.
struct GapCertificate {
  Word W;
  std::size_t K = 0;
  // Every length in [K, verified_bound] was checked explicitly; beyond it
  // each source context reaches every state (an absorbing condition), which
  // certifies all larger lengths.
  std::size_t verified_bound = 0;
  // Minimal exit sets of left contexts / entry sets of right contexts.
  std::size_t source_contexts = 0;
  std::size_t target_contexts = 0;
  // True when the context families were too large to enumerate and single
  // states were used instead (a stronger, still sound requirement).
  bool state_pair_fallback = false;
  // Per source context: first length at which all states are reachable.
  std::vector<std::size_t> saturation;
};

// Default search cap: 10 * states * max(|W|, 1).
std::size_t default_gap_bound(const ShiftAutomaton& a, const Word& W);

enum class Execution { kSerial, kParallel };

// Least certified K <= bound. Requires `a` essential and mixing and W
// allowable. An empty W asks for plain gluing (K may then be 0). Throws
// BoundExceededError when no K <= bound exists.
GapCertificate gap_constant(const ShiftAutomaton& a, const Word& W, std::size_t bound,
                            Execution exec = Execution::kParallel);

// Lexicographically least word w of length l containing W such that some
// path runs from a state of `from` to a state of `to` reading w. Throws
// FillError when no such word exists.
Word fill_between(const ShiftAutomaton& a, const StateSet& from, const StateSet& to,
                  std::size_t l, const Word& W);

// Same search with each symbol chosen uniformly among those that can still
// complete a fill.
Word random_fill_between(const ShiftAutomaton& a, const StateSet& from, const StateSet& to,
                         std::size_t l, const Word& W, Rng& rng);

// Word-context form: left w right is allowable.
Word find_fill(const ShiftAutomaton& a, const Word& left, const Word& right, std::size_t l,
               const Word& W);

// Points of `a` in which every window of length M contains W. Product of
// `a`, the W-matcher, and a counter of symbols since the last completed
// occurrence; essentialized. Throws EmptySubshiftError when empty.
ShiftAutomaton window_restriction(const ShiftAutomaton& a, const Word& W, std::size_t M);

struct EntropyResult {
  double entropy = 0.0;
  double spectral_radius = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// ln of the Perron root of the state adjacency count matrix by power
// iteration from the all-ones vector (relative tolerance 1e-12, at most 1e6
// iterations).
EntropyResult entropy_detail(const ShiftAutomaton& a, Execution exec = Execution::kParallel);
double entropy(const ShiftAutomaton& a);

// Label of a seeded random path of the given length.
Word sample_point(const ShiftAutomaton& a, std::size_t length, std::uint64_t seed);

// Every word of length n that is allowable, in lexicographic order.
std::vector<Word> allowable_words(const ShiftAutomaton& a, std::size_t n);

}  // namespace subshift
