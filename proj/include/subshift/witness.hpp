#pragma once

// Witness points for the tower: starting from the sign pattern of a bounded
// signal, each level rewrites one sub-block of length K_i in every block of
// length K_i L_i / 2 so the point enters X_i, while the partial correlation
// sums at the checkpoints stay above (1 - sum_{j<=i} 16 / L_j) * sum |a_n|.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "subshift/tower.hpp"
#include "subshift/words.hpp"

namespace subshift {

struct SignalSeries {
  std::vector<double> samples;           // a_0 .. a_{N-1}
  double bound = 0.0;                    // |a_n| <= bound
  std::vector<std::size_t> checkpoints;  // N_1 < N_2 < ... <= N

  std::size_t size() const { return samples.size(); }
};

// Throws InputError unless |a_n| <= bound, checkpoints are ascending within
// [1, N] and each N_k >= 2 N_{k-1}.
void validate_signal(const SignalSeries& s);

// base * 2^k for k = 0, 1, ... while <= n.
std::vector<std::size_t> geometric_checkpoints(std::size_t n, std::size_t base = 3);

SignalSeries make_signal(std::vector<double> samples, std::vector<std::size_t> checkpoints);

// x_n = 1 if a_n >= 0, else -1.
Word initial_point(const SignalSeries& signal);

struct Modification {
  std::size_t level = 0;
  std::size_t block = 0;
  std::size_t v_index = 0;  // 0-based index of the rewritten sub-block
  std::size_t start = 0;    // position of its first symbol
  Word fill;
  bool kept = false;        // the sub-block already contained W_prev
};

struct RefineResult {
  Word point;
  std::vector<Modification> log;
};

// One level of the construction on the working point. Pads x_prev with a
// deterministic legal continuation to a whole number of blocks.
RefineResult refine_level(const Word& x_prev, const SignalSeries& signal, const TowerSpec& spec,
                          std::size_t level);

struct CheckpointSums {
  std::size_t k = 0;
  std::size_t N_k = 0;
  double dot = 0.0;  // sum_{n < N_k} a_n x_n
  double abs = 0.0;  // sum_{n < N_k} |a_n|
};

struct WitnessReport {
  Word point;                 // restricted to [0, N)
  std::size_t working_length = 0;
  std::size_t depth = 0;
  std::vector<std::size_t> schedule;
  std::vector<std::vector<CheckpointSums>> sums;  // [level][checkpoint]
  std::vector<double> factors;                    // 1 - sum_{j<=i} 16/L_j per level
  double bound_factor = 1.0;
  std::vector<Modification> log;
  bool degenerate = false;  // sum |a_n| = 0 at some checkpoint

  std::size_t signal_length = 0;
};

std::vector<CheckpointSums> checkpoint_sums(const SignalSeries& signal, const Word& point);

// Runs every level of `spec` and checks the correlation bound after each;
// a violation raises ContractViolation carrying the level, checkpoint and
// both sums. The final working point is also checked to be allowable in the
// top level.
WitnessReport build_witness(const SignalSeries& signal, const TowerSpec& spec);

}  // namespace subshift
