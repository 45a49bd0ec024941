#include "subshift/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include "subshift/errors.hpp"

namespace subshift::kernels {

void configure_threads_from_env() {
  if (const char* env = std::getenv("SUBSHIFT_FORGE_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1)
      throw InputError(std::string("SUBSHIFT_FORGE_THREADS must be a positive integer, got '") +
                       env + "'");
    omp_set_num_threads(static_cast<int>(n));
  }
}

int max_threads() { return omp_get_max_threads(); }

namespace {
constexpr std::size_t kChunk = 4096;
}

PerronStep perron_step(std::span<const std::size_t> in_offset, std::span<const StateId> in_from,
                       std::span<const double> v, std::span<double> y, double shift,
                       Execution exec) {
  const std::size_t n = v.size();
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<PerronStep> partial(chunks);
  auto run_chunk = [&](std::size_t c) {
    const std::size_t lo = c * kChunk;
    const std::size_t hi = std::min(n, lo + kChunk);
    PerronStep acc{0.0, std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t q = lo; q < hi; ++q) {
      double sum = shift * v[q];
      for (std::size_t e = in_offset[q]; e < in_offset[q + 1]; ++e) sum += v[in_from[e]];
      y[q] = sum;
      acc.sum += sum;
      const double ratio = v[q] > 0.0 ? sum / v[q] : (sum > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      acc.min_ratio = std::min(acc.min_ratio, ratio);
      acc.max_ratio = std::max(acc.max_ratio, ratio);
    }
    partial[c] = acc;
  };
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  }
  PerronStep total{0.0, std::numeric_limits<double>::infinity(), 0.0};
  for (const auto& p : partial) {
    total.sum += p.sum;
    total.min_ratio = std::min(total.min_ratio, p.min_ratio);
    total.max_ratio = std::max(total.max_ratio, p.max_ratio);
  }
  return total;
}

BoolMatrix::BoolMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

bool BoolMatrix::all_positive() const {
  if (n_ == 0) return false;
  const std::uint64_t tail = (n_ % 64) ? ((std::uint64_t{1} << (n_ % 64)) - 1) : ~std::uint64_t{0};
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t w = 0; w < words_; ++w) {
      const std::uint64_t want = (w + 1 == words_) ? tail : ~std::uint64_t{0};
      if ((bits_[i * words_ + w] & want) != want) return false;
    }
  }
  return true;
}

BoolMatrix BoolMatrix::adjacency(const ShiftAutomaton& a) {
  BoolMatrix m(a.num_states());
  for (StateId s = 0; s < a.num_states(); ++s)
    for (Symbol c = 0; c < a.alphabet_size(); ++c)
      if (StateId t = a.next(s, c); t != kNoState) m.set(s, t);
  return m;
}

BoolMatrix BoolMatrix::multiply(const BoolMatrix& a, const BoolMatrix& b, Execution exec) {
  if (a.n_ != b.n_) throw InputError("boolean matrix size mismatch");
  BoolMatrix c(a.n_);
  const std::size_t n = a.n_;
  const std::size_t words = a.words_;
  auto row = [&](std::size_t i) {
    std::uint64_t* out = c.bits_.data() + i * words;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t word = a.bits_[i * words + w];
      while (word) {
        const std::size_t k = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
        word &= word - 1;
        const std::uint64_t* src = b.bits_.data() + k * words;
        for (std::size_t x = 0; x < words; ++x) out[x] |= src[x];
      }
    }
  };
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t i = 0; i < n; ++i) row(i);
  } else {
    for (std::size_t i = 0; i < n; ++i) row(i);
  }
  return c;
}

BoolMatrix bool_power(const BoolMatrix& a, std::uint64_t exponent, Execution exec) {
  if (exponent == 0) {
    BoolMatrix id(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) id.set(i, i);
    return id;
  }
  BoolMatrix result = a;
  BoolMatrix base = a;
  std::uint64_t e = exponent - 1;
  while (e) {
    if (e & 1) result = BoolMatrix::multiply(result, base, exec);
    e >>= 1;
    if (e) base = BoolMatrix::multiply(base, base, exec);
  }
  return result;
}

bool primitive_by_powering(const ShiftAutomaton& a, Execution exec) {
  if (a.empty()) throw InputError("primitivity of an empty automaton");
  const std::uint64_t s = a.num_states();
  const std::uint64_t wielandt = (s - 1) * (s - 1) + 1;
  return bool_power(BoolMatrix::adjacency(a), wielandt, exec).all_positive();
}

std::vector<double> grid_weyl_magnitudes(std::span<const double> series, std::size_t grid_size,
                                         std::span<const std::size_t> prefixes, Execution exec) {
  if (grid_size == 0) throw InputError("grid size must be positive");
  for (std::size_t p = 0; p < prefixes.size(); ++p) {
    if (prefixes[p] == 0 || prefixes[p] > series.size())
      throw InputError("scan prefix out of range");
    if (p && prefixes[p] < prefixes[p - 1]) throw InputError("scan prefixes must be ascending");
  }
  std::vector<std::complex<double>> roots(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double turn = static_cast<double>(k) / static_cast<double>(grid_size);
    roots[k] = std::polar(1.0, 2.0 * std::numbers::pi * turn);
  }
  std::vector<double> out(prefixes.size() * grid_size, 0.0);
  const std::size_t horizon = prefixes.empty() ? 0 : prefixes.back();
  auto column = [&](std::size_t j) {
    std::complex<double> acc = 0.0;
    std::size_t phase = 0;
    std::size_t p = 0;
    for (std::size_t n = 0; n < horizon && p < prefixes.size(); ++n) {
      acc += series[n] * roots[phase];
      phase += j;
      if (phase >= grid_size) phase -= grid_size;
      while (p < prefixes.size() && prefixes[p] == n + 1) {
        out[p * grid_size + j] = std::abs(acc) / static_cast<double>(n + 1);
        ++p;
      }
    }
  };
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (std::size_t j = 0; j < grid_size; ++j) column(j);
  } else {
    for (std::size_t j = 0; j < grid_size; ++j) column(j);
  }
  return out;
}

namespace {

using Bits = std::vector<std::uint64_t>;

inline void set_bit(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }

inline bool intersects(const Bits& a, const Bits& b) {
  for (std::size_t w = 0; w < a.size(); ++w)
    if (a[w] & b[w]) return true;
  return false;
}

GapScanSource scan_one(const GapScanInput& in, const std::vector<StateId>& start) {
  const std::size_t pwords = (in.product_states + 63) / 64;
  const std::size_t bwords = (in.base_states + 63) / 64;
  Bits cur(pwords, 0), nxt(pwords, 0), reach(bwords, 0);
  for (StateId s : start) set_bit(cur, s);

  GapScanSource out;
  bool failed_any = false;
  std::size_t last_fail = 0;
  for (std::size_t l = 0;; ++l) {
    std::fill(reach.begin(), reach.end(), 0);
    std::size_t reached = 0;
    for (std::size_t w = 0; w < pwords; ++w) {
      std::uint64_t word = cur[w];
      while (word) {
        const std::size_t s = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
        word &= word - 1;
        const StateId base = in.project[s];
        if (base == kNoState) continue;
        const std::uint64_t mask = std::uint64_t{1} << (base % 64);
        if (!(reach[base / 64] & mask)) {
          reach[base / 64] |= mask;
          ++reached;
        }
      }
    }
    if (reached == in.base_states) {
      // Saturation is absorbing: every state has a predecessor, so all later
      // lengths reach every state too.
      out.saturation = l;
      out.K = failed_any ? last_fail + 1 : 0;
      if (out.K > in.bound) out.exceeded = true;
      return out;
    }
    bool ok = reached > 0;
    if (ok) {
      for (const Bits& t : in.targets) {
        if (!intersects(reach, t)) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) {
      failed_any = true;
      last_fail = l;
      if (last_fail >= in.bound) {
        out.exceeded = true;
        out.K = last_fail + 1;
        return out;
      }
    }
    if (l >= in.scan_limit) {
      out.exceeded = true;
      out.K = failed_any ? last_fail + 1 : 0;
      return out;
    }
    std::fill(nxt.begin(), nxt.end(), 0);
    for (std::size_t w = 0; w < pwords; ++w) {
      std::uint64_t word = cur[w];
      while (word) {
        const std::size_t s = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
        word &= word - 1;
        for (std::size_t c = 0; c < in.alphabet_size; ++c) {
          const StateId t = in.product_next[s * in.alphabet_size + c];
          if (t != kNoState) set_bit(nxt, t);
        }
      }
    }
    cur.swap(nxt);
  }
}

}  // namespace

std::vector<GapScanSource> gap_scan(const GapScanInput& in, Execution exec) {
  std::vector<GapScanSource> out(in.sources.size());
  const std::size_t n = in.sources.size();
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < n; ++i) out[i] = scan_one(in, in.sources[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = scan_one(in, in.sources[i]);
  }
  return out;
}

}  // namespace subshift::kernels
