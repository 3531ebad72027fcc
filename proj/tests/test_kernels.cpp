#include "doctest.h"
#include "numertree/errors.hpp"
#include "numertree/fixtures.hpp"
#include "numertree/kernels.hpp"
#include "numertree/sequences.hpp"
#include "testdata.hpp"

using namespace numertree;

TEST_CASE("k-kernel elements") {
  auto b2 = NumerationSystem::integer(2);
  auto count = make_count_factor(b2, b2.word_parse("11"));
  // j = 0, r = 0 is the sequence itself.
  auto self = k_kernel_element(*count, 2, 0, 0, 16);
  for (int n = 0; n < 16; ++n) CHECK(self[n] == Rat(testdata::count11_prefix()[n]));
  // Odd-indexed subsequence of the count-of-11 values.
  auto odd = k_kernel_element(*count, 2, 1, 1, 8);
  const std::vector<long> expected{0, 1, 0, 2, 1, 1, 2, 3};
  for (int n = 0; n < 8; ++n) CHECK(odd[n] == Rat(expected[n]));
  // Arithmetic progression from the identity sequence.
  auto prog = k_kernel_element(*make_power(1), 3, 2, 5, 5);
  for (int n = 0; n < 5; ++n) CHECK(prog[n] == Rat(9 * n + 5));
  CHECK_THROWS_AS(k_kernel_element(*count, 2, 1, 2, 4), ParseError);
}

TEST_CASE("s-kernel rows match the published table") {
  auto r32 = NumerationSystem::rational(3, 2);
  auto s = make_sum_digits(r32);
  for (const auto& row : testdata::sumdigits32_tau_rows()) {
    CAPTURE(row.suffix);
    auto got = s_kernel_element(r32, *s, r32.word_parse(row.suffix), 21);
    for (int n = 0; n < 21; ++n) CHECK(got[n] == Rat(row.values[n]));
  }
}

TEST_CASE("chi rows over the Zeckendorf tree") {
  auto fib = NumerationSystem::fibonacci();
  auto chi1 = chi(fib, 2, 1, 9);
  CHECK(chi1 == std::vector<int>{0, 1, 0, 0, 1, 0, 1, 0, 0});
  auto chi2 = chi(fib, 2, 2, 9);
  CHECK(chi2 == std::vector<int>{0, 0, 1, 1, 0, 1, 0, 1, 1});
  auto chi0 = chi(fib, 2, 0, 9);
  for (int n = 0; n < 9; ++n) CHECK(chi0[n] + chi1[n] + chi2[n] == 1);
}

TEST_CASE("filtered kernel rows") {
  auto fib = NumerationSystem::fibonacci();
  auto seq = parse_sequence("builtin:ext-fibrows", fib);
  Word zero = fib.word_parse("0");
  auto f1 = filtered_element(fib, *seq, zero, 2, 1, 9);
  const std::vector<long> expected1{0, 3, 0, 0, 6, 0, 9, 0, 0};
  for (int n = 0; n < 9; ++n) CHECK(f1[n] == Rat(expected1[n]));
  auto f2 = filtered_element(fib, *seq, zero, 2, 2, 9);
  const std::vector<long> expected2{0, 0, 4, 5, 0, 6, 0, 8, 7};
  for (int n = 0; n < 9; ++n) CHECK(f2[n] == Rat(expected2[n]));
  auto f0 = filtered_element(fib, *seq, zero, 2, 0, 9);
  for (int n = 0; n < 9; ++n) CHECK(f0[n] == 0);
}

TEST_CASE("filtered rows split the s-kernel") {
  struct Case {
    const char* system;
    const char* seq;
    const char* suffix;
    int h;
  };
  for (const Case& c : {Case{"3/2", "builtin:sumdigits", "0", 2},
                        Case{"3/2", "builtin:sumdigits", "10", 1},
                        Case{"fib", "builtin:ext-fibrows", "0", 2},
                        Case{"2", "builtin:count:11", "1", 2}}) {
    CAPTURE(c.system);
    CAPTURE(c.suffix);
    auto sys = NumerationSystem::parse(c.system);
    auto seq = parse_sequence(c.seq, sys);
    Word u = sys.word_parse(c.suffix);
    const std::uint64_t count = 200;
    auto tau = s_kernel_element(sys, *seq, u, count);
    auto tree = tree_covering(sys, nullptr, count, c.h);
    TypeTable table = classify(tree, c.h);
    std::vector<Rat> sum(count, Rat(0));
    for (int t = 0; t < static_cast<int>(table.types.size()); ++t) {
      auto part = filtered_element(sys, *seq, u, c.h, t, count);
      for (std::uint64_t n = 0; n < count; ++n) sum[n] += part[n];
    }
    for (std::uint64_t n = 0; n < count; ++n) CHECK(sum[n] == tau[n]);
  }
}

TEST_CASE("zero spacing of digit-sum kernel rows") {
  auto r32 = NumerationSystem::rational(3, 2);
  auto s = make_sum_digits(r32);
  for (const char* suffix : {"0", "1", "10", "01", "00", "000"}) {
    CAPTURE(suffix);
    Word u = r32.word_parse(suffix);
    auto tau = s_kernel_element(r32, *s, u, 2000);
    // Positions n >= 1 with nonzero values sit in one residue class mod
    // 2^|u|; the class is read off the first nonzero position.
    long long mod = 1;
    for (std::size_t i = 0; i < u.size(); ++i) mod *= 2;
    long long cls = -1;
    for (std::uint64_t n = 1; n < tau.size(); ++n)
      if (tau[n] != 0) {
        cls = static_cast<long long>(n % mod);
        break;
      }
    REQUIRE(cls >= 0);
    for (std::uint64_t n = 1; n < tau.size(); ++n)
      CHECK((tau[n] != 0) == (static_cast<long long>(n % mod) == cls));
  }
}

TEST_CASE("published shift identities between kernel rows") {
  auto r32 = NumerationSystem::rational(3, 2);
  auto s = make_sum_digits(r32);
  const std::uint64_t count = 2000;
  auto tau2 = s_kernel_element(r32, *s, r32.word_parse("2"), count);
  auto tau0 = s_kernel_element(r32, *s, r32.word_parse("0"), count);
  for (std::uint64_t n = 0; n < count; ++n)
    CHECK(tau2[n] == tau0[n] + Rat(n % 2 == 0 ? 2 : 0));
  auto tau21 = s_kernel_element(r32, *s, r32.word_parse("21"), count);
  auto tau00 = s_kernel_element(r32, *s, r32.word_parse("00"), count);
  for (std::uint64_t n = 0; n < count; ++n)
    CHECK(tau21[n] == tau00[n] + Rat(n % 4 == 0 ? 3 : 0));
}

TEST_CASE("rank profiles") {
  auto b2 = NumerationSystem::integer(2);
  // Constant sequence: the profile stabilizes at once.
  auto ones = rank_profile(b2, *make_power(0), 3, 256);
  REQUIRE(ones.entries.size() == 4);
  for (const auto& [len, rank] : ones.entries) CHECK(rank <= 2);
  CHECK(ones.entries[2].second == ones.entries[3].second);

  // The identity sequence is classically regular with two generators.
  auto id = rank_profile(b2, *make_power(1), 3, 512);
  for (const auto& [len, rank] : id.entries) CHECK(rank <= 2);

  // The digit-sum sequence in base 3/2 keeps gaining independent rows.
  auto r32 = NumerationSystem::rational(3, 2);
  auto s = rank_profile(r32, *make_sum_digits(r32), 3, 2000);
  REQUIRE(s.entries.size() == 4);
  for (std::size_t i = 1; i < s.entries.size(); ++i)
    CHECK(s.entries[i].second > s.entries[i - 1].second);
}

TEST_CASE("rank profile stabilizes on regular fixtures") {
  auto b2 = NumerationSystem::integer(2);
  auto count = rank_profile(b2, *make_count_factor(b2, b2.word_parse("11")), 4, 1024);
  CHECK(count.entries[3].second == count.entries[4].second);

  auto fib = NumerationSystem::fibonacci();
  auto rows = rank_profile(fib, *parse_sequence("builtin:ext-fibrows", fib), 4, 800);
  CHECK(rows.entries[3].second == rows.entries[4].second);
}

TEST_CASE("power-suffix and word-suffix kernels differ only on leading zeros") {
  auto b2 = NumerationSystem::integer(2);
  auto count = make_count_factor(b2, b2.word_parse("11"));
  // Suffix without a leading zero: identical sequences.
  auto tau1 = s_kernel_element(b2, *count, b2.word_parse("1"), 64);
  auto k1 = k_kernel_element(*count, 2, 1, 1, 64);
  CHECK(tau1 == k1);
  // Suffix with a leading zero: rep(0)u leaves the language, so the word
  // route starts with 0 while the power route reads x at val(u).
  auto ones = make_power(0);
  auto tau0 = s_kernel_element(b2, *ones, b2.word_parse("0"), 64);
  auto k0 = k_kernel_element(*ones, 2, 1, 0, 64);
  CHECK(tau0[0] == 0);
  CHECK(k0[0] == 1);
  for (int n = 1; n < 64; ++n) CHECK(tau0[n] == k0[n]);
}

TEST_CASE("rank profile csv shape") {
  auto b2 = NumerationSystem::integer(2);
  auto profile = rank_profile(b2, *make_power(1), 2, 64);
  std::string csv = rank_profile_csv(profile);
  CHECK(csv.rfind("suffix_len,rank\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
