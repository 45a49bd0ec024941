#pragma once

// Specification-based correlators. Two allowable words alpha, beta of length
// l with all overlaps below l/3, separated by gaps of exactly u >= 0 symbols
// with l >= 3u, parse uniquely; coding the signs of a signal into such a
// concatenation gives a point whose block-start observable correlates with
// the signal.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subshift/automaton.hpp"
#include "subshift/witness.hpp"
#include "subshift/words.hpp"

namespace subshift {

struct OverlapReport {
  std::size_t between = 0;     // overlap(alpha, beta)
  std::size_t alpha_self = 0;  // self_overlap(alpha)
  std::size_t beta_self = 0;   // self_overlap(beta)
};

OverlapReport measure_overlaps(const Word& alpha, const Word& beta);

class CorrelatorPlan {
 public:
  // Validates every plan invariant against the essentialized automaton and
  // throws InputError naming the first violated one.
  CorrelatorPlan(const ShiftAutomaton& automaton, Word alpha, Word beta, std::size_t u,
                 std::string origin = {});

  const ShiftAutomaton& automaton() const { return automaton_; }
  const Word& alpha() const { return alpha_; }
  const Word& beta() const { return beta_; }
  const Word& block(std::uint8_t code) const { return code ? beta_ : alpha_; }
  std::size_t l() const { return alpha_.size(); }
  std::size_t u() const { return u_; }
  std::size_t period() const { return alpha_.size() + u_; }
  const OverlapReport& overlaps() const { return overlaps_; }
  const std::string& origin() const { return origin_; }

 private:
  ShiftAutomaton automaton_;
  Word alpha_;
  Word beta_;
  std::size_t u_;
  OverlapReport overlaps_;
  std::string origin_;
};

// Gap constant for plain gluing (empty marker word).
std::size_t specification_gap(const ShiftAutomaton& a);

struct PairSearchOptions {
  double r = 1.0 / 3.0;
  std::uint64_t seed = 0;
  std::size_t budget = 4096;
  Execution exec = Execution::kParallel;
};

struct PairSearchResult {
  std::optional<std::pair<Word, Word>> pair;  // nullopt: none at this length
  std::string origin;
  std::size_t attempts = 0;
};

// Samples paths of length 3l + floor(r l); candidate alpha = x[0, l),
// beta = x[l, 2l). Candidates whose first-return times R_{floor(r l)} at
// offsets 0, l - floor(r l) and l all exceed 2l are preferred; otherwise the
// first sample meeting the overlap bounds wins. Attempt order (not thread
// timing) decides the winner.
PairSearchResult find_low_overlap_pair(const ShiftAutomaton& a, std::size_t l,
                                       const PairSearchOptions& opts = {});

struct ParsedBlock {
  std::size_t index;  // start position of a full block
  std::uint8_t code;  // 0 = alpha, 1 = beta
  friend bool operator==(const ParsedBlock&, const ParsedBlock&) = default;
};

// Full blocks of the unique (l+u)-periodic alpha/beta schedule consistent
// with w; partial blocks at either end must match a suffix / prefix of alpha
// or beta. nullopt when w is not in the coded subshift (no consistent
// schedule with at least one full block).
std::optional<std::vector<ParsedBlock>> unique_parse(const CorrelatorPlan& plan, const Word& w);

struct CodedPoint {
  std::size_t t = 0;                       // phase of the first block
  Word point;                              // lead, then blocks separated by gaps
  std::vector<std::uint8_t> block_symbols;  // 0 = alpha, 1 = beta
  std::vector<Word> fills;                 // fills[0] is the lead of length t
  double phase_mean = 0.0;                 // (1/M) sum_m |a_{(l+u)m+t}|
  std::size_t horizon = 0;

  std::size_t block_start(std::size_t m, std::size_t period) const { return t + m * period; }
};

enum class FillMode { kLexicographic, kRandom };

// Concatenates lead, blocks and gaps with fills from the plan's automaton.
CodedPoint assemble_blocks(const CorrelatorPlan& plan, std::size_t t,
                           const std::vector<std::uint8_t>& blocks, FillMode mode = FillMode::kLexicographic,
                           std::uint64_t seed = 0);

// Picks the phase t maximizing the mean |a| at block starts below the
// horizon, codes sign(a) at block starts (a >= 0 -> beta), and assembles.
CodedPoint build_coded_point(const CorrelatorPlan& plan, const SignalSeries& signal,
                             std::size_t horizon);

// f(sigma^n z): +1 where a beta block starts, -1 where an alpha block starts,
// 0 elsewhere, read off the parse of the whole point.
std::vector<int> block_observable(const CorrelatorPlan& plan, const Word& z);

// The same value computed from the window z[n - l - u, n + 2l + 2u) alone.
int local_observable(const CorrelatorPlan& plan, const Word& z, std::size_t n);

struct CorrelationRow {
  std::size_t N = 0;
  double corr = 0.0;     // (1/N) sum a_n f(sigma^n z)
  double abs_avg = 0.0;  // (1/N) sum |a_n|
  double bound = 0.0;    // (1/N) sum over block starts < N of |a_start|
};

std::vector<CorrelationRow> evaluate_correlation(const CorrelatorPlan& plan, const CodedPoint& coded,
                                                 const SignalSeries& signal,
                                                 const std::vector<std::size_t>& prefixes);

}  // namespace subshift
