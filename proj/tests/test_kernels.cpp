#include <gtest/gtest.h>

#include "oracles.hpp"
#include "subshift/kernels.hpp"
#include "subshift/errors.hpp"

using namespace subshift;

namespace {

ShiftAutomaton restricted(std::size_t M) {
  return window_restriction(full_shift(sign_alphabet()), Word::parse(sign_alphabet(), "-1 1"), M);
}

}  // namespace

TEST(PerronStep, SerialAndParallelBitIdentical) {
  const auto a = restricted(128);
  const std::size_t n = a.num_states();
  Rng rng(1);
  std::vector<double> v(n), y1(n), y2(n);
  for (auto& x : v) x = uniform_unit(rng) + 0.1;
  const auto s1 = kernels::perron_step(a.in_offsets(), a.in_sources_all(), v, y1, 1.0, Execution::kSerial);
  const auto s2 = kernels::perron_step(a.in_offsets(), a.in_sources_all(), v, y2, 1.0, Execution::kParallel);
  EXPECT_EQ(y1, y2);
  EXPECT_EQ(s1.sum, s2.sum);
  EXPECT_EQ(s1.min_ratio, s2.min_ratio);
  EXPECT_EQ(s1.max_ratio, s2.max_ratio);
  // Direct edge-list evaluation.
  std::vector<double> y3(n, 0.0);
  for (std::size_t q = 0; q < n; ++q) y3[q] = v[q];
  for (const Edge& e : a.edges()) y3[e.to] += v[e.from];
  for (std::size_t q = 0; q < n; ++q) EXPECT_NEAR(y1[q], y3[q], 1e-12);
}

TEST(BoolMatrix, MultiplyMatchesTripleLoop) {
  Rng rng(2);
  for (std::size_t n : {1u, 5u, 63u, 64u, 65u, 130u}) {
    kernels::BoolMatrix a(n), b(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (uniform_unit(rng) < 0.05) a.set(i, j);
        if (uniform_unit(rng) < 0.05) b.set(i, j);
      }
    const auto c = kernels::BoolMatrix::multiply(a, b, Execution::kSerial);
    EXPECT_EQ(c, kernels::BoolMatrix::multiply(a, b, Execution::kParallel));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        bool any = false;
        for (std::size_t k = 0; k < n && !any; ++k) any = a.get(i, k) && b.get(k, j);
        ASSERT_EQ(c.get(i, j), any);
      }
  }
}

TEST(BoolMatrix, PowerMatchesRepeatedMultiplication) {
  Rng rng(3);
  kernels::BoolMatrix a(20);
  for (std::size_t i = 0; i < 20; ++i) a.set(i, uniform_below(rng, 20));
  kernels::BoolMatrix acc = a;
  for (std::uint64_t e = 1; e <= 12; ++e) {
    EXPECT_EQ(kernels::bool_power(a, e, Execution::kSerial), acc);
    acc = kernels::BoolMatrix::multiply(acc, a, Execution::kSerial);
  }
}

TEST(GridWeyl, SerialParallelAndDirectSumsAgree) {
  Rng rng(4);
  std::vector<double> s(5000);
  for (auto& x : s) x = uniform_unit(rng) * 2.0 - 1.0;
  const std::vector<std::size_t> prefixes{1, 100, 999, 5000};
  const std::size_t G = 37;
  const auto a = kernels::grid_weyl_magnitudes(s, G, prefixes, Execution::kSerial);
  const auto b = kernels::grid_weyl_magnitudes(s, G, prefixes, Execution::kParallel);
  EXPECT_EQ(a, b);
  for (std::size_t p = 0; p < prefixes.size(); ++p)
    for (std::size_t j = 0; j < G; ++j)
      EXPECT_NEAR(a[p * G + j], std::abs(oracle::weyl(s, static_cast<double>(j) / G, prefixes[p])), 1e-12);
}

TEST(GridWeyl, RejectsBadPrefixes) {
  std::vector<double> s(10, 1.0);
  const std::vector<std::size_t> zero{0}, big{11}, down{5, 3};
  EXPECT_THROW(kernels::grid_weyl_magnitudes(s, 4, zero, Execution::kSerial), InputError);
  EXPECT_THROW(kernels::grid_weyl_magnitudes(s, 4, big, Execution::kSerial), InputError);
  EXPECT_THROW(kernels::grid_weyl_magnitudes(s, 4, down, Execution::kSerial), InputError);
  EXPECT_THROW(kernels::grid_weyl_magnitudes(s, 0, {}, Execution::kSerial), InputError);
}

TEST(ThreadsEnv, RejectsMalformedValues) {
  ::setenv("SUBSHIFT_FORGE_THREADS", "zero", 1);
  EXPECT_THROW(kernels::configure_threads_from_env(), InputError);
  ::setenv("SUBSHIFT_FORGE_THREADS", "2", 1);
  EXPECT_NO_THROW(kernels::configure_threads_from_env());
  EXPECT_EQ(kernels::max_threads(), 2);
  ::unsetenv("SUBSHIFT_FORGE_THREADS");
}
