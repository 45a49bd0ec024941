#pragma once

// Finite-N Weyl averages (1/N) sum f_n e^{2 pi i xi n} and Sturmian
// generators. These are empirical probes; angles are stored in turns.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "subshift/automaton.hpp"
#include "subshift/words.hpp"

namespace subshift {

struct SturmianWord {
  Word word;           // over {0, 1}
  double theta = 0.0;
  double rho = 0.0;
  bool rational = false;  // theta is (numerically) p/q with q <= 10^6
};

// s_n = floor((n+1) theta + rho) - floor(n theta + rho) for n = 1 .. N.
// Starting at n = 1 makes theta = (sqrt 5 - 1)/2 produce the Fibonacci word
// 1011010110...
SturmianWord sturmian_word(double theta, double rho, std::size_t N);

// True when theta equals a fraction with denominator <= 10^6 up to 1e-15.
// Irrationals approach their convergents no closer than ~1/(sqrt(5) q^2),
// which stays far above that tolerance for such q.
bool looks_rational(double theta);

// 2 s_n - 1 for a word over a two-letter alphabet.
std::vector<double> sign_series(const Word& w);

std::complex<double> weyl_average(std::span<const double> series, double xi_angle, std::size_t N);

struct SpectralScan {
  std::vector<double> xi_grid;         // j / grid_size
  std::vector<std::size_t> prefixes;
  std::vector<double> magnitudes;      // [p * grid + j]
  std::string series_id;

  double magnitude(std::size_t p, std::size_t j) const { return magnitudes[p * xi_grid.size() + j]; }
  // Grid index of the largest magnitude at prefix p (lowest index on ties).
  std::size_t peak(std::size_t p) const;
};

SpectralScan spectral_scan(std::span<const double> series, std::size_t grid_size,
                           std::vector<std::size_t> prefixes, std::string series_id = {},
                           Execution exec = Execution::kParallel);

// Number of distinct factors of length n.
std::size_t factor_complexity(const Word& w, std::size_t n);

}  // namespace subshift
