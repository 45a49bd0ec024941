#pragma once

// Nested mixing SFTs X_0 ⊇ X_1 ⊇ ... over {-1, 1}. X_0 is the full shift with
// marker word "-1 1"; X_i keeps the points of X_{i-1} in which every window
// of length L_i * K_i contains the previous marker word, and its own marker
// word contains every allowable word of length i + 1.

#include <cstddef>
#include <optional>
#include <vector>

#include "subshift/automaton.hpp"
#include "subshift/words.hpp"

namespace subshift {

struct TowerLevel {
  std::size_t index = 0;
  ShiftAutomaton automaton;
  std::size_t L = 0;  // 0 at level 0
  std::size_t K = 0;  // gap constant of the parent for W_prev; 0 at level 0
  Word W_prev;        // empty at level 0
  Word W;
  std::optional<double> entropy;

  std::size_t window() const { return L * K; }
  // Length of the blocks the witness construction rewrites one piece of.
  std::size_t block() const { return K * L / 2; }
};

struct TowerSpec {
  std::vector<TowerLevel> levels;
  std::vector<std::size_t> schedule;  // L_1, L_2, ...; may run past the built depth

  std::size_t depth() const { return levels.empty() ? 0 : levels.size() - 1; }
  const TowerLevel& top() const { return levels.back(); }
};

// L_i = 2^(i+5) for i = 1..depth.
std::vector<std::size_t> default_schedule(std::size_t depth);

// Sum of 16 / L_i over the given entries.
double schedule_loss(const std::vector<std::size_t>& schedule, std::size_t upto);

// Checks every L_i is a positive multiple of 8 and the listed terms keep
// sum 16 / L_i < 1. Throws InputError citing the violated constraint.
void validate_schedule(const std::vector<std::size_t>& schedule);

// An allowable word containing every allowable word of length n, built by
// chaining the lexicographically ordered n-words with the shortest feasible
// fills. n = 0 yields the empty word.
Word build_minimality_word(const ShiftAutomaton& a, std::size_t n);

// Level 0 only.
TowerSpec initial_tower(std::vector<std::size_t> schedule);

struct ExtendOptions {
  bool compute_entropy = false;
  Execution exec = Execution::kParallel;
};

// Appends the next level. Errors from gap search or an empty restriction
// propagate unchanged.
TowerSpec extend_tower(const TowerSpec& spec, const ExtendOptions& opts = {});

TowerSpec build_tower(std::vector<std::size_t> schedule, std::size_t depth,
                      const ExtendOptions& opts = {});

}  // namespace subshift
