#include "subshift/spectra.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "subshift/errors.hpp"
#include "subshift/kernels.hpp"

namespace subshift {

bool looks_rational(double theta) {
  // Continued-fraction convergents until the denominator passes the cap.
  double x = theta;
  long double p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int i = 0; i < 64; ++i) {
    const double a = std::floor(x);
    const long double p2 = a * p1 + p0;
    const long double q2 = a * q1 + q0;
    if (q2 > 1e6) return false;
    if (std::abs(static_cast<long double>(theta) - p2 / q2) < 1e-15L) return true;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = x - a;
    if (frac < 1e-15) return true;
    x = 1.0 / frac;
  }
  return false;
}

SturmianWord sturmian_word(double theta, double rho, std::size_t N) {
  if (!(theta > 0.0 && theta < 1.0)) throw InputError("sturmian_word needs 0 < theta < 1");
  if (N == 0) throw InputError("sturmian_word needs N >= 1");
  std::vector<Symbol> s(N);
  const long double th = theta;
  const long double r = rho;
  long double prev = std::floor(th + r);
  for (std::size_t i = 0; i < N; ++i) {
    const long double cur = std::floor(static_cast<long double>(i + 2) * th + r);
    s[i] = static_cast<Symbol>(cur - prev);
    prev = cur;
  }
  return {Word(binary_alphabet(), std::move(s)), theta, rho, looks_rational(theta)};
}

std::vector<double> sign_series(const Word& w) {
  if (!w.alphabet() || w.alphabet()->size() != 2)
    throw InputError("sign_series needs a two-letter alphabet");
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] ? 1.0 : -1.0;
  return out;
}

std::complex<double> weyl_average(std::span<const double> series, double xi_angle, std::size_t N) {
  if (N == 0) throw InputError("weyl_average needs N >= 1");
  if (N > series.size()) throw InputError("weyl_average: N exceeds the series length");
  std::complex<double> acc = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    // Reduce the phase in turns first so large n keeps full precision.
    const double turns = std::fmod(xi_angle * static_cast<double>(n), 1.0);
    acc += series[n] * std::polar(1.0, 2.0 * std::numbers::pi * turns);
  }
  return acc / static_cast<double>(N);
}

std::size_t SpectralScan::peak(std::size_t p) const {
  std::size_t best = 0;
  for (std::size_t j = 1; j < xi_grid.size(); ++j)
    if (magnitude(p, j) > magnitude(p, best)) best = j;
  return best;
}

SpectralScan spectral_scan(std::span<const double> series, std::size_t grid_size,
                           std::vector<std::size_t> prefixes, std::string series_id, Execution exec) {
  if (grid_size == 0) throw InputError("spectral scan needs grid_size >= 1");
  if (prefixes.empty()) throw InputError("spectral scan needs at least one prefix");
  SpectralScan out;
  out.xi_grid.resize(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j)
    out.xi_grid[j] = static_cast<double>(j) / static_cast<double>(grid_size);
  out.magnitudes = kernels::grid_weyl_magnitudes(series, grid_size, prefixes, exec);
  out.prefixes = std::move(prefixes);
  out.series_id = std::move(series_id);
  return out;
}

std::size_t factor_complexity(const Word& w, std::size_t n) {
  if (n == 0) return 1;
  if (n > w.size()) return 0;
  std::set<std::vector<Symbol>> seen;
  const auto s = w.symbols();
  for (std::size_t i = 0; i + n <= s.size(); ++i) seen.emplace(s.begin() + i, s.begin() + i + n);
  return seen.size();
}

}  // namespace subshift
