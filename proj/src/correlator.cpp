#include "subshift/correlator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "subshift/errors.hpp"

namespace subshift {

OverlapReport measure_overlaps(const Word& alpha, const Word& beta) {
  return {overlap(alpha, beta), self_overlap(alpha), self_overlap(beta)};
}

namespace {

bool below_fraction(std::size_t value, double r, std::size_t l) {
  return static_cast<double>(value) < r * static_cast<double>(l);
}

bool overlaps_below(const OverlapReport& o, double r, std::size_t l) {
  return below_fraction(o.between, r, l) && below_fraction(o.alpha_self, r, l) &&
         below_fraction(o.beta_self, r, l);
}

}  // namespace

CorrelatorPlan::CorrelatorPlan(const ShiftAutomaton& automaton, Word alpha, Word beta,
                               std::size_t u, std::string origin)
    : automaton_(essentialize(automaton)),
      alpha_(std::move(alpha)),
      beta_(std::move(beta)),
      u_(u),
      origin_(std::move(origin)) {
  if (automaton_.empty()) throw InputError("correlator plan: the ambient subshift is empty");
  if (!same_alphabet(alpha_.alphabet(), automaton_.alphabet()) ||
      !same_alphabet(beta_.alphabet(), automaton_.alphabet()))
    throw InputError("correlator plan: block words use a different alphabet");
  if (alpha_.empty() || alpha_.size() != beta_.size())
    throw InputError("correlator plan: alpha and beta must be nonempty words of equal length l");
  if (alpha_ == beta_) throw InputError("correlator plan: alpha and beta must differ");
  const std::size_t l = alpha_.size();
  if (l < 3 * u_) {
    std::ostringstream msg;
    msg << "correlator plan: need l >= 3u for unique parsing, got l = " << l << ", u = " << u_;
    throw InputError(msg.str());
  }
  overlaps_ = measure_overlaps(alpha_, beta_);
  if (!overlaps_below(overlaps_, 1.0 / 3.0, l)) {
    std::ostringstream msg;
    msg << "correlator plan: overlaps must all be < l/3 (l = " << l
        << "): overlap = " << overlaps_.between << ", self(alpha) = " << overlaps_.alpha_self
        << ", self(beta) = " << overlaps_.beta_self;
    throw InputError(msg.str());
  }
  if (!is_allowable(automaton_, alpha_) || !is_allowable(automaton_, beta_))
    throw InputError("correlator plan: alpha and beta must be allowable");
}

std::size_t specification_gap(const ShiftAutomaton& a) {
  const ShiftAutomaton e = essentialize(a);
  if (e.empty()) throw EmptySubshiftError("specification gap of an empty subshift");
  const Word none(e.alphabet());
  return gap_constant(e, none, default_gap_bound(e, none)).K;
}

PairSearchResult find_low_overlap_pair(const ShiftAutomaton& a, std::size_t l,
                                       const PairSearchOptions& opts) {
  if (!(opts.r > 0.0 && opts.r < 1.0)) throw InputError("pair search needs 0 < r < 1");
  if (l == 0) throw InputError("pair search needs l >= 1");
  const ShiftAutomaton e = essentialize(a);
  if (e.empty()) throw EmptySubshiftError("pair search on an empty subshift");
  if (entropy(e) <= 1e-12) throw InputError("pair search needs positive entropy");

  const std::size_t n = static_cast<std::size_t>(std::floor(opts.r * static_cast<double>(l)));
  const std::size_t length = 3 * l + n;
  const std::size_t budget = opts.budget;

  // 0 = rejected, 1 = overlap bounds hold, 2 = bounds hold and the
  // recurrence-time test passed too.
  std::vector<int> grade(budget, 0);
  auto attempt = [&](std::size_t i) {
    const Word x = sample_point(e, length, derive_seed(opts.seed, i));
    const Word alpha = x.slice(0, l);
    const Word beta = x.slice(l, l);
    if (alpha == beta) return;
    if (!overlaps_below(measure_overlaps(alpha, beta), opts.r, l)) return;
    int g = 1;
    if (n >= 1) {
      // Within this prefix, "no recurrence" means R_n > 2l.
      auto long_return = [&](std::size_t offset) {
        const auto k = recurrence_time(x.slice(offset, length - offset), n, Recurrence::kAnyShift);
        return !k || *k > 2 * l;
      };
      if (long_return(0) && long_return(l - n) && long_return(l)) g = 2;
    }
    grade[i] = g;
  };
  if (opts.exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::size_t i = 0; i < budget; ++i) attempt(i);
  } else {
    for (std::size_t i = 0; i < budget; ++i) attempt(i);
  }

  PairSearchResult out;
  out.attempts = budget;
  for (int want : {2, 1}) {
    for (std::size_t i = 0; i < budget; ++i) {
      if (grade[i] != want) continue;
      const Word x = sample_point(e, length, derive_seed(opts.seed, i));
      Word alpha = x.slice(0, l);
      Word beta = x.slice(l, l);
      // Re-verify from scratch rather than trusting the grading pass.
      if (alpha == beta || !overlaps_below(measure_overlaps(alpha, beta), opts.r, l) ||
          !is_allowable(e, alpha) || !is_allowable(e, beta))
        throw ContractViolation("pair search produced a pair failing re-verification");
      std::ostringstream origin;
      origin << (want == 2 ? "recurrence" : "sampled") << ":seed=" << opts.seed
             << ",attempt=" << i;
      out.origin = origin.str();
      out.pair.emplace(std::move(alpha), std::move(beta));
      return out;
    }
  }
  out.origin = "none at this length";
  return out;
}

std::optional<std::vector<ParsedBlock>> unique_parse(const CorrelatorPlan& plan, const Word& w) {
  if (!same_alphabet(w.alphabet(), plan.automaton().alphabet()))
    throw InputError("unique_parse: alphabet mismatch");
  const std::size_t l = plan.l();
  const std::size_t P = plan.period();
  const std::size_t n = w.size();
  if (n < l) return std::nullopt;

  // code_at[p]: 0 / 1 when alpha / beta occurs at p, 2 when neither.
  std::vector<std::uint8_t> code_at(n, 2);
  for (std::size_t p : occurrences(plan.alpha(), w)) code_at[p] = 0;
  for (std::size_t p : occurrences(plan.beta(), w)) code_at[p] = 1;

  // A slot cut off by an end of w must agree with alpha or beta on the part
  // inside w.
  auto partial_ok = [&](long long p) {
    const std::size_t lo = static_cast<std::size_t>(std::max<long long>(p, 0));
    const std::size_t hi = static_cast<std::size_t>(std::min<long long>(p + static_cast<long long>(l),
                                                                       static_cast<long long>(n)));
    for (std::uint8_t code : {0, 1}) {
      const Word& b = plan.block(code);
      bool ok = true;
      for (std::size_t i = lo; i < hi && ok; ++i)
        ok = w[i] == b[static_cast<std::size_t>(static_cast<long long>(i) - p)];
      if (ok) return true;
    }
    return false;
  };

  std::optional<std::vector<ParsedBlock>> found;
  std::size_t found_phase = 0;
  for (std::size_t s = 0; s < P && s < n; ++s) {
    std::vector<ParsedBlock> blocks;
    bool ok = true;
    if (s > 0 && s + l > P) ok = partial_ok(static_cast<long long>(s) - static_cast<long long>(P));
    for (std::size_t p = s; ok && p < n; p += P) {
      if (p + l <= n) {
        if (code_at[p] == 2) ok = false;
        else blocks.push_back({p, code_at[p]});
      } else {
        ok = partial_ok(static_cast<long long>(p));
      }
    }
    if (!ok || blocks.empty()) continue;
    if (found) {
      std::ostringstream msg;
      msg << "unique_parse: phases " << found_phase << " and " << s
          << " both parse the word; the plan invariants should rule this out";
      throw ContractViolation(msg.str());
    }
    found = std::move(blocks);
    found_phase = s;
  }
  return found;
}

CodedPoint assemble_blocks(const CorrelatorPlan& plan, std::size_t t,
                           const std::vector<std::uint8_t>& blocks, FillMode mode,
                           std::uint64_t seed) {
  const ShiftAutomaton& a = plan.automaton();
  const std::size_t l = plan.l();
  const std::size_t u = plan.u();
  if (t >= plan.period()) throw InputError("block phase t must satisfy 0 <= t < l + u");
  if (blocks.empty()) throw InputError("assemble_blocks needs at least one block");
  Rng rng(seed);
  const Word none(a.alphabet());
  auto fill = [&](const StateSet& from, const StateSet& to, std::size_t len) {
    return mode == FillMode::kRandom ? random_fill_between(a, from, to, len, none, rng)
                                     : fill_between(a, from, to, len, none);
  };

  CodedPoint out;
  out.t = t;
  out.block_symbols = blocks;
  out.point = Word(a.alphabet());

  // The lead is the tail of an alpha block followed by a gap, so the point
  // parses from coordinate 0 on.
  const std::size_t first_gap = std::min(t, u);
  const Word tail = plan.alpha().slice(l - (t - first_gap), t - first_gap);
  StateSet cur = advance(a, a.all_states(), tail.symbols());
  const Word lead = tail + fill(cur, entry_states(a, plan.block(blocks[0])), first_gap);
  out.point += lead;
  out.fills.push_back(lead);
  cur = advance(a, a.all_states(), lead.symbols());

  for (std::size_t m = 0; m < blocks.size(); ++m) {
    const Word& b = plan.block(blocks[m]);
    out.point += b;
    cur = advance(a, cur, b.symbols());
    // Trailing gap after the last block keeps block starts below the end.
    const StateSet to = m + 1 < blocks.size() ? entry_states(a, plan.block(blocks[m + 1])) : a.all_states();
    Word g = fill(cur, to, u);
    cur = advance(a, cur, g.symbols());
    out.point += g;
    out.fills.push_back(std::move(g));
  }
  if (cur.empty()) throw ContractViolation("assembled coded point is not allowable");
  return out;
}

CodedPoint build_coded_point(const CorrelatorPlan& plan, const SignalSeries& signal,
                             std::size_t horizon) {
  const std::size_t P = plan.period();
  if (horizon > signal.size()) throw InputError("horizon exceeds the signal length");
  if (horizon < P) throw InputError("horizon shorter than one block period l + u");

  std::size_t best_t = 0;
  double best = -1.0;
  for (std::size_t t = 0; t < P; ++t) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t p = t; p < horizon; p += P, ++count) sum += std::abs(signal.samples[p]);
    const double mean = sum / static_cast<double>(count);
    if (mean > best) {
      best = mean;
      best_t = t;
    }
  }
  std::vector<std::uint8_t> blocks;
  for (std::size_t p = best_t; p < horizon; p += P)
    blocks.push_back(signal.samples[p] >= 0.0 ? 1 : 0);

  CodedPoint out = assemble_blocks(plan, best_t, blocks);
  out.phase_mean = best;
  out.horizon = horizon;
  return out;
}

std::vector<int> block_observable(const CorrelatorPlan& plan, const Word& z) {
  const auto parsed = unique_parse(plan, z);
  if (!parsed) throw ContractViolation("coded point does not parse");
  std::vector<int> f(z.size(), 0);
  for (const auto& b : *parsed) f[b.index] = b.code ? 1 : -1;
  return f;
}

int local_observable(const CorrelatorPlan& plan, const Word& z, std::size_t n) {
  const std::size_t reach = plan.period();
  const std::size_t lo = n > reach ? n - reach : 0;
  const std::size_t hi = std::min(z.size(), n + reach + 1);
  if (n >= hi) return 0;
  const auto parsed = unique_parse(plan, z.slice(lo, hi - lo));
  if (!parsed) return 0;
  for (const auto& b : *parsed)
    if (b.index + lo == n) return b.code ? 1 : -1;
  return 0;
}

std::vector<CorrelationRow> evaluate_correlation(const CorrelatorPlan& plan, const CodedPoint& coded,
                                                 const SignalSeries& signal,
                                                 const std::vector<std::size_t>& prefixes) {
  std::size_t top = 0;
  for (std::size_t N : prefixes) {
    if (N == 0) throw InputError("correlation prefixes must be positive");
    top = std::max(top, N);
  }
  if (top > signal.size() || top > coded.point.size())
    throw InputError("correlation prefix beyond the coded point or the signal");
  const std::vector<int> f = block_observable(plan, coded.point);
  const std::size_t P = plan.period();

  std::vector<double> corr(top + 1, 0.0), abs_sum(top + 1, 0.0), start_sum(top + 1, 0.0);
  for (std::size_t n = 0; n < top; ++n) {
    const double a = signal.samples[n];
    corr[n + 1] = corr[n] + a * f[n];
    abs_sum[n + 1] = abs_sum[n] + std::abs(a);
    const bool start = n >= coded.t && (n - coded.t) % P == 0;
    start_sum[n + 1] = start_sum[n] + (start ? std::abs(a) : 0.0);
  }
  std::vector<CorrelationRow> rows;
  rows.reserve(prefixes.size());
  for (std::size_t N : prefixes) {
    const double d = static_cast<double>(N);
    rows.push_back({N, corr[N] / d, abs_sum[N] / d, start_sum[N] / d});
  }
  return rows;
}

}  // namespace subshift
