#pragma once

// Data-parallel inner loops. Every kernel has a serial reference path and an
// OpenMP path selected by Execution; both produce bit-identical results (all
// floating-point reductions run in a fixed order independent of the thread
// count).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "subshift/automaton.hpp"

namespace subshift::kernels {

// Honors SUBSHIFT_FORGE_THREADS if set; called once by the CLI.
void configure_threads_from_env();
int max_threads();

// ---------------------------------------------------------------------------
// Sparse Perron step: y[q] = shift * v[q] + sum over edges p -> q of v[p].
// `in_offset`/`in_from` are the CSR incoming lists. Also reports the
// Collatz-Wielandt ratios min/max y[q]/v[q] (meaningful when v > 0).
struct PerronStep {
  double sum = 0.0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};

PerronStep perron_step(std::span<const std::size_t> in_offset, std::span<const StateId> in_from,
                   std::span<const double> v, std::span<double> y, double shift, Execution exec);

// ---------------------------------------------------------------------------
// Dense boolean matrices with bit-packed rows.
class BoolMatrix {
 public:
  explicit BoolMatrix(std::size_t n = 0);

  std::size_t size() const { return n_; }
  bool get(std::size_t i, std::size_t j) const {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & 1u;
  }
  void set(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64); }
  bool all_positive() const;

  friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;

  static BoolMatrix adjacency(const ShiftAutomaton& a);
  static BoolMatrix multiply(const BoolMatrix& a, const BoolMatrix& b, Execution exec);

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

BoolMatrix bool_power(const BoolMatrix& a, std::uint64_t exponent, Execution exec);

// Wielandt test: A^((S-1)^2+1) is all-positive iff A is primitive. Cost is
// cubic in the state count; intended for small automata and as an oracle.
bool primitive_by_powering(const ShiftAutomaton& a, Execution exec);

// ---------------------------------------------------------------------------
// Exponential sums on the grid of angles j / grid_size (in turns):
// result[p * grid_size + j] = |(1/N_p) sum_{n < N_p} series[n] e^{2 pi i j n / grid_size}|.
// `prefixes` must be ascending and each <= series.size().
std::vector<double> grid_weyl_magnitudes(std::span<const double> series, std::size_t grid_size,
                                         std::span<const std::size_t> prefixes, Execution exec);

// ---------------------------------------------------------------------------
// Layered reachability behind gap_constant. The product graph has states
// (automaton state, matcher state, seen flag) packed by the caller; `project`
// maps a product state to its automaton state, or kNoState while W has not
// been seen yet.
struct GapScanInput {
  std::size_t product_states = 0;
  std::size_t alphabet_size = 0;
  std::span<const StateId> product_next;  // product_states x alphabet_size
  std::span<const StateId> project;       // product_states
  std::size_t base_states = 0;
  std::vector<std::vector<StateId>> sources;           // product start sets
  std::vector<std::vector<std::uint64_t>> targets;     // bitsets over base states
  std::size_t bound = 0;
  std::size_t scan_limit = 0;
};

struct GapScanSource {
  std::size_t K = 0;           // least length after which every target is hit
  std::size_t saturation = 0;  // first length with every base state reached
  bool exceeded = false;
};

std::vector<GapScanSource> gap_scan(const GapScanInput& in, Execution exec);

}  // namespace subshift::kernels
