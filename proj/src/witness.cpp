#include "subshift/witness.hpp"

#include <cmath>
#include <sstream>

#include "subshift/errors.hpp"
#include "subshift/rng.hpp"

namespace subshift {

namespace {

constexpr Symbol kMinus = 0;  // "-1" in sign_alphabet()
constexpr Symbol kPlus = 1;   // "1"

double sign_value(Symbol s) { return s == kPlus ? 1.0 : -1.0; }

}  // namespace

void validate_signal(const SignalSeries& s) {
  if (!(s.bound >= 0.0) || !std::isfinite(s.bound)) throw InputError("signal bound must be finite");
  for (std::size_t n = 0; n < s.samples.size(); ++n) {
    if (!std::isfinite(s.samples[n])) throw InputError("signal sample " + std::to_string(n) + " is not finite");
    if (std::abs(s.samples[n]) > s.bound)
      throw InputError("signal sample " + std::to_string(n) + " exceeds the bound");
  }
  for (std::size_t k = 0; k < s.checkpoints.size(); ++k) {
    const std::size_t nk = s.checkpoints[k];
    if (nk == 0 || nk > s.samples.size()) throw InputError("checkpoint outside [1, N]");
    if (k > 0) {
      const std::size_t prev = s.checkpoints[k - 1];
      if (nk <= prev) throw InputError("checkpoints must be strictly increasing");
      if (nk < 2 * prev)
        throw InputError("checkpoints must satisfy N_k >= 2 N_{k-1} (N_" + std::to_string(k) +
                         " = " + std::to_string(nk) + ")");
    }
  }
}

std::vector<std::size_t> geometric_checkpoints(std::size_t n, std::size_t base) {
  if (base == 0) throw InputError("checkpoint base must be positive");
  std::vector<std::size_t> out;
  for (std::size_t v = base; v <= n; v *= 2) out.push_back(v);
  return out;
}

SignalSeries make_signal(std::vector<double> samples, std::vector<std::size_t> checkpoints) {
  SignalSeries s;
  s.samples = std::move(samples);
  for (double a : s.samples) s.bound = std::max(s.bound, std::abs(a));
  s.checkpoints = std::move(checkpoints);
  return s;
}

Word initial_point(const SignalSeries& signal) {
  std::vector<Symbol> x(signal.size());
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = signal.samples[n] >= 0.0 ? kPlus : kMinus;
  return Word(sign_alphabet(), std::move(x));
}

RefineResult refine_level(const Word& x_prev, const SignalSeries& signal, const TowerSpec& spec,
                          std::size_t i) {
  if (i == 0 || i >= spec.levels.size()) throw InputError("refine_level: level not built");
  const TowerLevel& level = spec.levels[i];
  const ShiftAutomaton& parent = spec.levels[i - 1].automaton;
  const std::size_t K = level.K;
  const std::size_t L = level.L;
  if (L % 8 != 0) throw InputError("L_i must be a multiple of 8");
  const std::size_t B = level.block();
  const std::size_t N = signal.size();
  const Word& W = level.W_prev;

  std::vector<Symbol> x(x_prev.data());
  if (x.size() % B != 0 || x.empty()) {
    const StateSet tail = exit_states(parent, x_prev);
    if (tail.empty()) throw InputError("refine_level: previous point is not allowable in the parent");
    const std::size_t pad = x.empty() ? B : B - x.size() % B;
    Rng rng(derive_seed(0x5eed, i));
    const Word cont =
        random_fill_between(parent, tail, parent.all_states(), pad, Word(parent.alphabet()), rng);
    x.insert(x.end(), cont.data().begin(), cont.data().end());
  }
  const std::size_t len = x.size();
  const std::size_t blocks = len / B;

  // Entry sets of every suffix starting at a multiple of K. Rewrites proceed
  // left to right, so right contexts are always still unmodified.
  std::vector<StateSet> entry(len / K + 1);
  {
    StateSet cur = parent.all_states();
    entry[len / K] = cur;
    for (std::size_t q = len / K; q-- > 0;) {
      cur = retreat(parent, cur, std::span<const Symbol>(x.data() + q * K, K));
      if (cur.empty()) throw InputError("refine_level: previous point is not allowable in the parent");
      entry[q] = cur;
    }
  }

  auto abs_a = [&](std::size_t n) { return n < N ? std::abs(signal.samples[n]) : 0.0; };
  auto cost = [&](std::size_t start) {
    double c = 0.0;
    for (std::size_t n = start; n < start + K; ++n) c += abs_a(n);
    return c;
  };

  RefineResult out;
  StateSet left = parent.all_states();
  std::size_t pos = 0;
  const std::size_t half = L / 4;  // sub-blocks per half block
  for (std::size_t l = 0; l < blocks; ++l) {
    const std::size_t bs = l * B;
    std::vector<std::size_t> inside;
    for (std::size_t nk : signal.checkpoints)
      if (nk >= bs && nk < bs + B) inside.push_back(nk);

    std::size_t lo = 0, hi = L / 2;  // candidate sub-block range [lo, hi)
    if (!inside.empty()) {
      if (l > 0) {
        if (inside.size() > 1)
          throw InputError("block " + std::to_string(l) + " at level " + std::to_string(i) +
                           " holds more than one checkpoint");
        const std::size_t v = (inside[0] - bs) / K;
        if (v < half) {
          lo = half;
        } else {
          hi = half;
        }
      } else {
        // Sub-blocks below K L / 4 are never candidates here, which protects
        // every checkpoint in the first quarter.
        std::vector<std::size_t> upper;
        for (std::size_t nk : inside)
          if (nk >= B / 2) upper.push_back(nk);
        if (upper.size() > 1)
          throw InputError("more than one checkpoint in [K L / 4, K L / 2) at level " +
                           std::to_string(i));
        lo = half;
        hi = L / 2;
        if (upper.size() == 1) {
          const std::size_t v = upper[0] / K;
          if (v < 3 * L / 8) {
            lo = 3 * L / 8;
          } else {
            hi = 3 * L / 8;
          }
        }
      }
    }
    std::size_t best = lo;
    double best_cost = cost(bs + lo * K);
    for (std::size_t v = lo + 1; v < hi; ++v) {
      const double c = cost(bs + v * K);
      if (c < best_cost) {
        best_cost = c;
        best = v;
      }
    }

    const std::size_t s = bs + best * K;
    left = advance(parent, left, std::span<const Symbol>(x.data() + pos, s - pos));
    Modification mod;
    mod.level = i;
    mod.block = l;
    mod.v_index = best;
    mod.start = s;
    Word current(parent.alphabet(), std::vector<Symbol>(x.begin() + s, x.begin() + s + K));
    if (contains(current, W)) {
      mod.kept = true;
      mod.fill = current;
    } else {
      mod.fill = fill_between(parent, left, entry[(s + K) / K], K, W);
      std::copy(mod.fill.data().begin(), mod.fill.data().end(), x.begin() + s);
    }
    left = advance(parent, left, mod.fill.symbols());
    pos = s + K;
    out.log.push_back(std::move(mod));
  }
  out.point = Word(sign_alphabet(), std::move(x));
  return out;
}

std::vector<CheckpointSums> checkpoint_sums(const SignalSeries& signal, const Word& point) {
  std::vector<CheckpointSums> out;
  double dot = 0.0, abs = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < signal.checkpoints.size(); ++k) {
    const std::size_t nk = signal.checkpoints[k];
    for (; n < nk; ++n) {
      dot += signal.samples[n] * sign_value(point[n]);
      abs += std::abs(signal.samples[n]);
    }
    out.push_back({k, nk, dot, abs});
  }
  return out;
}

WitnessReport build_witness(const SignalSeries& signal, const TowerSpec& spec) {
  validate_signal(signal);
  if (signal.size() == 0) throw InputError("empty signal");
  WitnessReport r;
  r.depth = spec.depth();
  r.schedule.assign(spec.schedule.begin(), spec.schedule.begin() + static_cast<std::ptrdiff_t>(r.depth));
  r.signal_length = signal.size();

  Word x = initial_point(signal);
  for (std::size_t i = 0; i <= r.depth; ++i) {
    if (i > 0) {
      auto step = refine_level(x, signal, spec, i);
      x = std::move(step.point);
      r.log.insert(r.log.end(), std::make_move_iterator(step.log.begin()),
                   std::make_move_iterator(step.log.end()));
    }
    const double factor = 1.0 - schedule_loss(spec.schedule, i);
    r.factors.push_back(factor);
    auto sums = checkpoint_sums(signal, x);
    for (const auto& row : sums) {
      const bool zero = row.abs == 0.0;
      if (zero) r.degenerate = true;
      // Level 0 is exact; later levels must stay strictly above the bound.
      const bool ok = i == 0 ? row.dot == row.abs
                             : (zero ? row.dot >= 0.0 : row.dot > factor * row.abs);
      if (!ok) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "correlation bound violated at level " << i << ", checkpoint k=" << row.k
            << " (N_k=" << row.N_k << "): sum a_n x_n = " << row.dot << ", required > " << factor
            << " * " << row.abs << " = " << factor * row.abs;
        throw ContractViolation(msg.str());
      }
    }
    r.sums.push_back(std::move(sums));
  }
  if (!is_allowable(spec.top().automaton, x))
    throw ContractViolation("witness point is not allowable in X_" + std::to_string(r.depth));
  r.bound_factor = r.factors.back();
  r.working_length = x.size();
  r.point = x.slice(0, signal.size());
  return r;
}

}  // namespace subshift
