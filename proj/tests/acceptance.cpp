// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "subshift/correlator.hpp"
#include "subshift/errors.hpp"
#include "subshift/kernels.hpp"
#include "subshift/serialize.hpp"
#include "subshift/spectra.hpp"
#include "subshift/tower.hpp"
#include "subshift/witness.hpp"

using namespace subshift;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "failed: " << what << "; ";
    pass = pass && ok;
  }
};

std::vector<double> random_pm1(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> s(n);
  for (auto& x : s) x = uniform_below(rng, 2) ? 1.0 : -1.0;
  return s;
}

const TowerSpec& depth_two() {
  static const TowerSpec spec = build_tower({64, 128}, 2);
  return spec;
}

void witness_bound(Outcome& o) {
  const std::size_t N = 1 << 16;
  const auto& spec = depth_two();
  o.require(spec.levels[1].L == 64 && spec.levels[2].L == 128, "schedule [64, 128]");
  const double factor = 1.0 - 16.0 / 64 - 16.0 / 128;
  double worst = 1.0;
  std::size_t rows = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto samples = random_pm1(N, derive_seed(2024, seed));
    const auto sig = make_signal(samples, geometric_checkpoints(N, 3));
    WitnessReport r;
    try {
      r = build_witness(sig, spec);
    } catch (const Error& e) {
      o.require(false, std::string("build_witness threw: ") + e.what());
      return;
    }
    for (std::size_t nk : sig.checkpoints) {
      const double dot = oracle::dot(samples, r.point.data(), nk);
      const double abs = oracle::abs_sum(samples, nk);
      o.require(dot > factor * abs, "sum a_n x_n > 0.625 sum |a_n| at N_k = " + std::to_string(nk));
      worst = std::min(worst, dot / abs);
      ++rows;
    }
    o.require(is_allowable(spec.top().automaton, r.point), "witness allowable in X_2");
  }
  o.detail << "20 signals, " << rows << " checkpoint rows, min ratio " << worst << " > " << factor;
}

void restriction_mixing(Outcome& o) {
  const auto full = full_shift(sign_alphabet());
  const Word W = Word::parse(sign_alphabet(), "-1 1");
  const std::size_t K = gap_constant(full, W, 100).K;
  o.require(K == 2, "K = 2 for the full shift and '-1 1'");
  for (std::size_t L : {8u, 64u}) {
    const auto r = window_restriction(full, W, L * K);
    o.require(!r.empty(), "nonempty restriction");
    o.require(is_mixing(r), "mixing for L = " + std::to_string(L));
    o.detail << "L=" << L << ": " << r.num_states() << " states, mixing; ";
    if (L == 8) {
      o.require(kernels::primitive_by_powering(r, Execution::kSerial), "Wielandt powering agrees");
      std::size_t allowed = 0;
      for (std::uint64_t i = 0; i < (1u << 16); ++i) {
        const auto w = oracle::from_index(i, 16, 2);
        if (!oracle::readable(r, w)) continue;
        ++allowed;
        o.require(oracle::contains(w, W.data()), "allowable 16-word contains '-1 1'");
      }
      o.detail << allowed << " of 65536 words of length 16 allowable, all contain '-1 1'; ";
    }
  }
}

const CorrelatorPlan& golden_plan(Outcome& o) {
  static std::optional<CorrelatorPlan> plan;
  if (!plan) {
    const auto g = builtin_system("goldenmean");
    PairSearchOptions opts;
    opts.seed = 7;
    opts.r = 1.0 / 3.0;
    const auto found = find_low_overlap_pair(g, 12, opts);
    o.require(found.pair.has_value(), "pair found at l = 12");
    plan.emplace(g, found.pair->first, found.pair->second, specification_gap(g), found.origin);
  }
  return *plan;
}

void correlator_exactness(Outcome& o) {
  const auto& plan = golden_plan(o);
  const std::size_t N = 100000;
  const auto samples = random_pm1(N, 77);
  const auto sig = make_signal(samples, {});
  const auto coded = build_coded_point(plan, sig, N);
  o.require(is_allowable(plan.automaton(), coded.point), "coded point allowable");
  const auto rows = evaluate_correlation(plan, coded, sig, {1000, 10000, N});
  const std::size_t P = plan.period();
  double max_err = 0.0;
  for (const auto& row : rows) {
    // Right-hand side from the construction alone.
    long double rhs = 0;
    for (std::size_t n = coded.t; n < row.N; n += P) rhs += std::fabs(samples[n]);
    const double expect = static_cast<double>(rhs / row.N);
    max_err = std::max(max_err, std::abs(row.corr - expect));
  }
  o.require(max_err <= 1e-12, "finite-sum identity within 1e-12");
  const double final_corr = rows.back().corr;
  const double threshold = 0.9 / static_cast<double>(P) * coded.phase_mean;
  o.require(final_corr > threshold, "correlation above 0.9/(l+u) times the phase mean");
  o.detail << "l=" << plan.l() << " u=" << plan.u() << " t=" << coded.t << ", max identity error " << max_err
           << ", corr " << final_corr << " > " << threshold;
}

void unique_parsing(Outcome& o) {
  const auto& plan = golden_plan(o);
  std::size_t ok = 0;
  for (std::uint64_t trial = 0; trial < 10000; ++trial) {
    Rng rng(derive_seed(4242, trial));
    std::vector<std::uint8_t> blocks(20);
    for (auto& b : blocks) b = static_cast<std::uint8_t>(uniform_below(rng, 2));
    const std::size_t t = uniform_below(rng, plan.period());
    const auto coded = assemble_blocks(plan, t, blocks, FillMode::kRandom, rng());
    const auto parsed = unique_parse(plan, coded.point);
    bool same = parsed && parsed->size() == blocks.size();
    for (std::size_t m = 0; same && m < blocks.size(); ++m)
      same = (*parsed)[m].index == t + m * plan.period() && (*parsed)[m].code == blocks[m];
    ok += same;
  }
  o.require(ok == 10000, "all round trips parse back");
  // l < 3u: the same words with a gap of 5 (l = 12 < 15).
  bool rejected = false;
  try {
    CorrelatorPlan bad(plan.automaton(), plan.alpha(), plan.beta(), 5);
  } catch (const InputError& e) {
    rejected = std::string(e.what()).find("l >= 3u") != std::string::npos;
  }
  o.require(rejected, "l < 3u rejected citing l >= 3u");
  o.detail << ok << "/10000 round trips exact; l=12, u=5 rejected";
}

void overlap_oracle(Outcome& o) {
  const auto alpha = binary_alphabet();
  std::vector<oracle::Seq> words;
  for (std::size_t len = 1; len <= 10; ++len)
    for (std::uint64_t i = 0; i < (1u << len); ++i) words.push_back(oracle::from_index(i, len, 2));
  std::vector<Word> lib;
  for (const auto& w : words) lib.emplace_back(alpha, w);
  std::size_t pairs = 0, mismatches = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (self_overlap(lib[i]) != oracle::self_overlap(words[i])) ++mismatches;
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (i == j) continue;
      if (overlap(lib[i], lib[j]) != oracle::overlap(words[i], words[j])) ++mismatches;
      ++pairs;
    }
  }
  o.require(mismatches == 0, "exhaustive short pairs agree");
  Rng rng(555);
  std::size_t random_mismatch = 0;
  for (int t = 0; t < 100000; ++t) {
    const std::size_t la = 11 + uniform_below(rng, 54), lb = 11 + uniform_below(rng, 54);
    oracle::Seq a(la), b(lb);
    // Periodic words and shared borders give large overlaps often.
    const std::size_t period = 1 + uniform_below(rng, 6);
    oracle::Seq base(period);
    for (auto& c : base) c = static_cast<Symbol>(uniform_below(rng, 2));
    const bool periodic = uniform_below(rng, 2);
    for (std::size_t i = 0; i < la; ++i) a[i] = periodic ? base[i % period] : static_cast<Symbol>(uniform_below(rng, 2));
    for (std::size_t i = 0; i < lb; ++i) b[i] = static_cast<Symbol>(uniform_below(rng, 2));
    if (uniform_below(rng, 2)) {
      const std::size_t k = 1 + uniform_below(rng, std::min(la, lb));
      std::copy(a.end() - static_cast<std::ptrdiff_t>(k), a.end(), b.begin());
    }
    if (a == b) continue;
    const Word wa(alpha, a), wb(alpha, b);
    if (overlap(wa, wb) != oracle::overlap(a, b)) ++random_mismatch;
    if (self_overlap(wa) != oracle::self_overlap(a)) ++random_mismatch;
  }
  o.require(random_mismatch == 0, "random long pairs agree");
  o.detail << pairs << " exhaustive ordered pairs, 1e5 random pairs, " << mismatches + random_mismatch
           << " mismatches";
}

void entropy_values(Outcome& o) {
  const double full = entropy(builtin_system("full2"));
  const double golden = entropy(builtin_system("goldenmean"));
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  o.require(std::abs(full - std::log(2.0)) < 1e-9, "full 2-shift entropy ln 2");
  o.require(std::abs(golden - std::log(phi)) < 1e-9, "golden-mean entropy ln phi");
  const auto s = sturmian_word((std::sqrt(5.0) - 1.0) / 2.0, 0.0, 100000);
  bool counts = true;
  for (std::size_t n = 1; n <= 10; ++n) counts = counts && factor_complexity(s.word, n) == n + 1;
  o.require(counts, "Sturmian factor count n + 1 for n <= 10");
  o.detail << "|h_full - ln 2| = " << std::abs(full - std::log(2.0)) << ", |h_golden - ln phi| = "
           << std::abs(golden - std::log(phi)) << ", complexity n+1 for n=1..10";
}

void spectral_demo(Outcome& o) {
  const double theta = (std::sqrt(5.0) - 1.0) / 2.0;
  const std::size_t N = 100000;
  const auto s = sign_series(sturmian_word(theta, 0.0, N).word);
  const double off = std::abs(weyl_average(s, 1.0 / 7.0, N));
  const double on = std::abs(weyl_average(s, theta, N));
  o.require(off < 0.05, "|A_N(1/7)| < 0.05");
  o.require(on > 0.2, "|A_N(theta)| > 0.2");

  // Witness point for a cosine signal at a grid frequency.
  const std::size_t M = 1 << 16, G = 1024, j0 = 157;
  const double freq = static_cast<double>(j0) / G;
  std::vector<double> a(M);
  for (std::size_t n = 0; n < M; ++n) a[n] = std::cos(2.0 * std::numbers::pi * std::fmod(freq * n, 1.0));
  const auto r = build_witness(make_signal(a, geometric_checkpoints(M)), depth_two());
  const auto scan = spectral_scan(sign_series(r.point), G, {4096, 16384, M}, "witness");
  bool persistent = true;
  double min_peak = 1.0;
  for (std::size_t p = 0; p < scan.prefixes.size(); ++p) {
    const std::size_t peak = scan.peak(p);
    persistent = persistent && (peak == j0 || peak == G - j0);
    min_peak = std::min(min_peak, scan.magnitude(p, j0));
  }
  o.require(persistent, "witness scan peaks at the cosine frequency for every prefix");
  o.require(min_peak > 0.2, "peak magnitude above 0.2");
  o.detail << "Sturmian |A_N(1/7)| = " << off << ", |A_N(theta)| = " << on << "; witness peak at " << freq
           << " with magnitude >= " << min_peak;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"witness correlation bound (depth 2, 20 signals)", witness_bound},
      {"window restriction nonempty and mixing", restriction_mixing},
      {"correlator exactness identity", correlator_exactness},
      {"unique parsing round trips and l >= 3u", unique_parsing},
      {"overlap oracle equivalence", overlap_oracle},
      {"entropy closed forms and Sturmian complexity", entropy_values},
      {"spectral obstruction demo", spectral_demo},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu %s: %s (%.2fs) %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, secs,
                o.detail.str().c_str());
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
