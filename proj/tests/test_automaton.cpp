#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>

#include "oracles.hpp"
#include "subshift/automaton.hpp"
#include "subshift/errors.hpp"
#include "subshift/kernels.hpp"

using namespace subshift;

namespace {

Word bin(const char* s) { return Word::parse(binary_alphabet(), s); }

ShiftAutomaton golden_mean() {
  const std::vector<Word> forbidden{bin("11")};
  return from_forbidden_words(binary_alphabet(), forbidden);
}

// Random deterministic automaton on n states; each (state, symbol) edge
// present with probability p.
ShiftAutomaton random_automaton(Rng& rng, std::size_t n, std::size_t k, double p) {
  std::vector<StateId> next(n * k, kNoState);
  for (auto& t : next)
    if (uniform_unit(rng) < p) t = static_cast<StateId>(uniform_below(rng, n));
  std::vector<std::string> names;
  for (std::size_t c = 0; c < k; ++c) names.push_back(std::string(1, static_cast<char>('a' + c)));
  return ShiftAutomaton(make_alphabet(names), n, std::move(next));
}

double dense_log_perron(const ShiftAutomaton& a) {
  const std::size_t n = a.num_states();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : a.edges()) m(e.from, e.to) += 1.0;
  const Eigen::VectorXcd ev = m.eigenvalues();
  double rho = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) rho = std::max(rho, std::abs(ev[i]));
  return std::log(rho);
}

std::set<oracle::Seq> as_set(const std::vector<Word>& ws) {
  std::set<oracle::Seq> s;
  for (const auto& w : ws) s.insert(w.data());
  return s;
}

}  // namespace

TEST(Automaton, FromEdgesRejectsNondeterminism) {
  const std::vector<Edge> edges{{0, 0, 0}, {0, 0, 1}};
  EXPECT_THROW(ShiftAutomaton::from_edges(binary_alphabet(), 2, edges), InputError);
}

TEST(Automaton, FullShiftIsOneStateWithAllLoops) {
  const auto a = full_shift(binary_alphabet());
  EXPECT_EQ(a.num_states(), 1u);
  EXPECT_EQ(a.num_edges(), 2u);
  EXPECT_TRUE(is_mixing(a));
}

TEST(Automaton, ForbiddenWordsMatchBruteForceLanguage) {
  // Forbidden sets where every locally admissible word extends both ways.
  const std::vector<std::vector<Word>> cases{
      {bin("11")}, {bin("00"), bin("111")}, {bin("010")}, {bin("0110"), bin("1001")}};
  for (const auto& forbidden : cases) {
    const auto a = from_forbidden_words(binary_alphabet(), forbidden);
    for (std::size_t n = 1; n <= 9; ++n) {
      std::set<oracle::Seq> expected;
      for (std::uint64_t i = 0; i < (1u << n); ++i) {
        auto w = oracle::from_index(i, n, 2);
        // Keep w if some two-sided extension by 4 symbols avoids every forbidden word.
        bool ok = false;
        for (std::uint64_t e = 0; e < 256 && !ok; ++e) {
          auto ext = oracle::from_index(e, 8, 2);
          oracle::Seq full(ext.begin(), ext.begin() + 4);
          full.insert(full.end(), w.begin(), w.end());
          full.insert(full.end(), ext.begin() + 4, ext.end());
          ok = true;
          for (const auto& f : forbidden)
            if (oracle::contains(full, f.data())) ok = false;
        }
        if (ok) expected.insert(w);
      }
      ASSERT_EQ(as_set(allowable_words(a, n)), expected) << "n = " << n;
      ASSERT_EQ(oracle::readable_words(a, n), expected);
    }
  }
}

TEST(Automaton, EverythingForbiddenIsEmpty) {
  const std::vector<Word> forbidden{bin("0"), bin("1")};
  EXPECT_THROW(from_forbidden_words(binary_alphabet(), forbidden), EmptySubshiftError);
  const std::vector<Word> both{bin("00"), bin("01"), bin("10"), bin("11")};
  EXPECT_THROW(from_forbidden_words(binary_alphabet(), both), EmptySubshiftError);
}

TEST(Automaton, EssentializeKeepsExactlyTheBiInfinitePaths) {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const auto a = random_automaton(rng, 1 + uniform_below(rng, 7), 2, 0.6);
    const auto e = essentialize(a);
    for (StateId s = 0; s < e.num_states(); ++s) {
      EXPECT_GT(e.in_degree(s), 0u);
      EXPECT_GT(e.out_degree(s), 0u);
    }
    // Words of length n readable in a in the middle of a word of length n + 2m
    // (m >= state count) are exactly those of the essential part.
    const std::size_t m = a.num_states();
    for (std::size_t n = 1; n <= 4; ++n) {
      std::set<oracle::Seq> mid;
      for (const auto& w : oracle::readable_words(a, n + 2 * m))
        mid.insert(oracle::Seq(w.begin() + m, w.begin() + m + n));
      EXPECT_EQ(e.empty() ? std::set<oracle::Seq>{} : oracle::readable_words(e, n), mid);
    }
  }
}

TEST(Automaton, AdvanceRetreatAllowability) {
  const auto g = golden_mean();
  EXPECT_TRUE(is_allowable(g, bin("0101")));
  EXPECT_FALSE(is_allowable(g, bin("0110")));
  EXPECT_TRUE(is_allowable(g, Word(binary_alphabet())));
  EXPECT_EQ(exit_states(g, bin("1")).size(), 1u);
  EXPECT_EQ(entry_states(g, bin("1")).size(), 1u);
  EXPECT_TRUE(exit_states(g, bin("11")).empty());
}

TEST(Mixing, AgreesWithWielandtPowering) {
  Rng rng(17);
  int mixing = 0, not_mixing = 0;
  for (int t = 0; t < 400; ++t) {
    const auto e = essentialize(random_automaton(rng, 1 + uniform_below(rng, 9), 2, 0.55));
    if (e.empty()) continue;
    const bool m = is_mixing(e);
    EXPECT_EQ(m, kernels::primitive_by_powering(e, Execution::kSerial));
    (m ? mixing : not_mixing)++;
  }
  EXPECT_GT(mixing, 20);
  EXPECT_GT(not_mixing, 20);
}

TEST(Mixing, PeriodicAndReducibleExamples) {
  const std::vector<Edge> cycle{{0, 0, 1}, {1, 1, 0}};
  EXPECT_FALSE(is_mixing(ShiftAutomaton::from_edges(binary_alphabet(), 2, cycle)));
  const std::vector<Edge> two_loops{{0, 0, 0}, {1, 1, 1}};
  EXPECT_FALSE(is_mixing(ShiftAutomaton::from_edges(binary_alphabet(), 2, two_loops)));
  EXPECT_TRUE(is_mixing(golden_mean()));
  EXPECT_THROW(is_mixing(ShiftAutomaton(binary_alphabet(), 0, {})), InputError);
}

TEST(GapConstant, GoldenMeanMatchesWordOracle) {
  const auto g = golden_mean();
  const auto cert = gap_constant(g, bin("01"), 100);
  EXPECT_EQ(cert.K, 3u);
  EXPECT_EQ(oracle::gap_constant(g, bin("01").data(), 3, 10, 6), 3u);
  EXPECT_EQ(gap_constant(g, Word(binary_alphabet()), 100).K, 1u);
  EXPECT_EQ(gap_constant(full_shift(binary_alphabet()), Word(binary_alphabet()), 100).K, 0u);
}

TEST(GapConstant, FullShiftMarkerNeedsOnlyItsLength) {
  const auto a = full_shift(sign_alphabet());
  EXPECT_EQ(gap_constant(a, Word::parse(sign_alphabet(), "-1 1"), 100).K, 2u);
}

TEST(GapConstant, RandomMixingAutomataMatchWordOracle) {
  Rng rng(23);
  int checked = 0;
  while (checked < 25) {
    const auto e = essentialize(random_automaton(rng, 2 + uniform_below(rng, 3), 2, 0.7));
    if (e.empty() || !is_mixing(e)) continue;
    const auto words = allowable_words(e, 2);
    const Word W = words[uniform_below(rng, words.size())];
    const auto cert = gap_constant(e, W, 200);
    // Contexts of length >= the state count pin every reachable state set.
    const auto expect = oracle::gap_constant(e, W.data(), e.num_states() + 1, cert.K + 2, 5);
    ASSERT_TRUE(expect.has_value());
    EXPECT_EQ(cert.K, *expect);
    ++checked;
  }
}

TEST(GapConstant, SerialAndParallelAgree) {
  const auto g = golden_mean();
  const auto restricted = window_restriction(full_shift(sign_alphabet()), Word::parse(sign_alphabet(), "-1 1"), 16);
  const Word W = Word::parse(sign_alphabet(), "-1 -1 1");
  const auto a = gap_constant(restricted, W, 1000, Execution::kSerial);
  const auto b = gap_constant(restricted, W, 1000, Execution::kParallel);
  EXPECT_EQ(a.K, b.K);
  EXPECT_EQ(a.saturation, b.saturation);
}

TEST(GapConstant, ErrorContracts) {
  const auto g = golden_mean();
  EXPECT_THROW(gap_constant(g, bin("11"), 100), InputError);
  EXPECT_THROW(gap_constant(g, bin("01"), 2), BoundExceededError);
  const std::vector<Edge> cycle{{0, 0, 1}, {1, 1, 0}};
  EXPECT_THROW(gap_constant(ShiftAutomaton::from_edges(binary_alphabet(), 2, cycle), bin("01"), 100),
               InputError);
}

TEST(Fill, LexicographicallyLeastAmongBruteForceCandidates) {
  const auto g = golden_mean();
  const Word W = bin("01");
  for (const char* left : {"0", "1"})
    for (const char* right : {"0", "1"})
      for (std::size_t l = 3; l <= 8; ++l) {
        const Word w = find_fill(g, bin(left), bin(right), l, W);
        ASSERT_EQ(w.size(), l);
        std::optional<oracle::Seq> best;
        for (std::uint64_t i = 0; i < (1u << l) && !best; ++i) {
          auto cand = oracle::from_index(i, l, 2);
          oracle::Seq all = bin(left).data();
          all.insert(all.end(), cand.begin(), cand.end());
          all.push_back(bin(right)[0]);
          if (oracle::contains(cand, W.data()) && oracle::readable(g, all)) best = cand;
        }
        ASSERT_TRUE(best.has_value());
        EXPECT_EQ(w.data(), *best);
      }
  EXPECT_THROW(find_fill(g, bin("1"), bin("1"), 2, W), FillError);
}

TEST(Fill, RandomFillsAreValid) {
  const auto g = golden_mean();
  Rng rng(2);
  const Word W = bin("01");
  for (int t = 0; t < 200; ++t) {
    const Word w = random_fill_between(g, exit_states(g, bin("1")), entry_states(g, bin("1")), 9, W, rng);
    EXPECT_TRUE(contains(w, W));
    EXPECT_TRUE(is_allowable(g, bin("1") + w + bin("1")));
  }
}

TEST(WindowRestriction, ExhaustiveEveryWindowContainsMarker) {
  const auto full = full_shift(sign_alphabet());
  const Word W = Word::parse(sign_alphabet(), "-1 1");
  // Every 2-window equal to "-1 1" forces a sequence with no successor.
  EXPECT_THROW(window_restriction(full, W, 2), EmptySubshiftError);
  for (std::size_t M : {3u, 5u, 8u}) {
    const auto r = window_restriction(full, W, M);
    ASSERT_FALSE(r.empty());
    // M = 3 leaves only the alternating orbit, which has period two.
    EXPECT_EQ(is_mixing(r), M != 3);
    // Allowable words of length n: exactly those in which every length-M window
    // contains W and which extend to such a sequence; check the window property
    // and that each survivor sits inside a longer allowable word.
    for (std::size_t n = M; n <= M + 4; ++n) {
      for (const auto& w : oracle::readable_words(r, n))
        for (std::size_t i = 0; i + M <= n; ++i)
          ASSERT_TRUE(oracle::contains(oracle::Seq(w.begin() + i, w.begin() + i + M), W.data()));
    }
  }
  EXPECT_THROW(window_restriction(full, W, 1), InputError);
}

TEST(WindowRestriction, LanguageMatchesPeriodicCharacterization) {
  // Over the full 2-shift, length-n words allowed in the restriction are the
  // middles of longer words whose every M-window contains W.
  const auto full = full_shift(binary_alphabet());
  const Word W = bin("01");
  const std::size_t M = 5;
  const auto r = window_restriction(full, W, M);
  for (std::size_t n = 1; n <= 7; ++n) {
    std::set<oracle::Seq> expected;
    const std::size_t pad = 6;
    for (std::uint64_t i = 0; i < (1u << (n + 2 * pad)); ++i) {
      const auto w = oracle::from_index(i, n + 2 * pad, 2);
      bool ok = true;
      for (std::size_t j = 0; j + M <= w.size() && ok; ++j)
        ok = oracle::contains(oracle::Seq(w.begin() + j, w.begin() + j + M), W.data());
      if (ok) expected.insert(oracle::Seq(w.begin() + pad, w.begin() + pad + n));
    }
    EXPECT_EQ(oracle::readable_words(r, n), expected) << "n = " << n;
  }
}

TEST(Entropy, ClosedFormsAndDenseEigenOracle) {
  EXPECT_NEAR(entropy(full_shift(binary_alphabet())), std::log(2.0), 1e-12);
  EXPECT_NEAR(entropy(golden_mean()), std::log((1.0 + std::sqrt(5.0)) / 2.0), 1e-12);
  Rng rng(31);
  int checked = 0;
  while (checked < 60) {
    const auto e = essentialize(random_automaton(rng, 2 + uniform_below(rng, 12), 3, 0.6));
    if (e.empty()) continue;
    const auto r = entropy_detail(e, Execution::kSerial);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.entropy, dense_log_perron(e), 1e-8) << e.num_states() << " states";
    EXPECT_EQ(r.entropy, entropy_detail(e, Execution::kParallel).entropy);
    ++checked;
  }
}

TEST(Entropy, PeriodicCycleHasZeroEntropy) {
  const std::vector<Edge> cycle{{0, 0, 1}, {1, 1, 2}, {2, 0, 0}};
  EXPECT_NEAR(entropy(ShiftAutomaton::from_edges(binary_alphabet(), 3, cycle)), 0.0, 1e-12);
}

TEST(Sampling, SampledPointsAreAllowableAndSeeded) {
  const auto g = golden_mean();
  const Word a = sample_point(g, 500, 9);
  EXPECT_TRUE(is_allowable(g, a));
  EXPECT_EQ(a, sample_point(g, 500, 9));
  EXPECT_NE(a, sample_point(g, 500, 10));
}
