#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "numertree/errors.hpp"
#include "numertree/fixtures.hpp"
#include "numertree/sequences.hpp"
#include "testdata.hpp"

using namespace numertree;

namespace {
const std::string kDataDir = NUMERTREE_TEST_DATA_DIR;
}

TEST_CASE("sum of digits fixtures") {
  auto r32 = NumerationSystem::rational(3, 2);
  for (unsigned long n = 0; n < 18; ++n)
    CHECK(sum_digits(r32, Int(n)) == testdata::sumdigits32_prefix()[n]);
  CHECK(sum_digits(r32, Int(0)) == 0);
  auto b2 = NumerationSystem::integer(2);
  CHECK(sum_digits(b2, Int(7)) == 3);
}

TEST_CASE("factor counting") {
  auto b2 = NumerationSystem::integer(2);
  Word pattern = b2.word_parse("11");
  for (unsigned long n = 0; n < 16; ++n)
    CHECK(count_factor(b2, pattern, Int(n)) == testdata::count11_prefix()[n]);
  CHECK(count_factor(b2, b2.word_parse("11111"), Int(3)) == 0);
  CHECK_THROWS_AS(count_factor(b2, {}, Int(3)), ParseError);

  // Frozen by scanning the printed representation list for base 3/2.
  auto r32 = NumerationSystem::rational(3, 2);
  const std::vector<long> expected{0, 0, 1, 1, 1, 1, 1, 1, 1};
  for (unsigned long n = 0; n < expected.size(); ++n)
    CHECK(count_factor(r32, r32.word_parse("21"), Int(n)) == expected[n]);
}

TEST_CASE("chain automaton output") {
  auto r32 = NumerationSystem::rational(3, 2);
  Dfao machine = sepchains_dfao();
  for (std::size_t i = 0; i < testdata::sepchains_terms_3_17().size(); ++i)
    CHECK(dfao_run(machine, r32, Int(static_cast<unsigned long>(3 + i))) ==
          Rat(testdata::sepchains_terms_3_17()[i]));
  CHECK(dfao_run(machine, r32, Int(0)) == machine.output[machine.initial]);

  Dfao one;
  one.alphabet = {0, 1, 2};
  one.initial = 0;
  one.next = {{0, 0, 0}};
  one.output = {Rat(3, 7)};
  for (unsigned long n = 0; n < 20; ++n) CHECK(dfao_run(one, r32, Int(n)) == Rat(3, 7));

  Dfao partial = machine;
  partial.next[0][2] = -1;  // break the only way out of the start state
  CHECK_THROWS_WITH_AS(dfao_run(partial, r32, Int(1)), doctest::Contains("prefix 2"),
                       ParseError);
}

TEST_CASE("cumulative transform") {
  auto r32 = NumerationSystem::rational(3, 2);
  auto id = make_power(1);
  CHECK(cumulative(r32, *id, Int(6)) == Rat(13));  // 0+1+2+4+6 along 2120
  CHECK(cumulative(r32, *id, Int(7)) == Rat(14));  // 0+1+2+4+7 along 2122
  CHECK(cumulative(r32, *id, Int(0)) == Rat(0));
  auto seq = make_cumulative(id, r32);
  CHECK(seq->term(6) == Rat(13));
}

TEST_CASE("powers and polynomials") {
  CHECK(power_seq(2, Int(11)) == 121);
  CHECK(power_seq(0, Int(12345)) == 1);
  CHECK(poly_seq({Rat(1), Rat(0), Rat(1)}, Int(3)) == Rat(10));
  CHECK(poly_seq({}, Int(3)) == Rat(0));
  CHECK(make_poly({Rat(1), Rat(0), Rat(1)})->term(3) == Rat(10));
}

TEST_CASE("b-file round trip and errors") {
  auto r32 = NumerationSystem::rational(3, 2);
  auto seq = make_sum_digits(r32);
  std::string path = "sumdigits_roundtrip.tmp";
  write_bfile(path, *seq, 100);
  auto back = read_bfile(path);
  REQUIRE(back->length() == 100);
  for (unsigned long n = 0; n < 100; ++n) CHECK(back->term(n) == seq->term(n));
  std::remove(path.c_str());

  std::istringstream gap("0 1\n2 5\n");
  CHECK_THROWS_WITH_AS(read_bfile(gap, "gap"), doctest::Contains("gap:2"), ParseError);
  std::istringstream bad("0 1\n1 x\n");
  CHECK_THROWS_WITH_AS(read_bfile(bad, "bad"), doctest::Contains("bad:2"), ParseError);
  std::istringstream comment("# hello\n0 4\n1 9/2\n");
  auto terms = read_bfile(comment, "c");
  REQUIRE(terms.size() == 2);
  CHECK(terms[1] == Rat(9, 2));
  CHECK_THROWS_AS(read_bfile("no_such_file.txt"), ParseError);
}

TEST_CASE("published prefixes match the builtin sequences") {
  auto fib = NumerationSystem::fibonacci();
  auto ext = parse_sequence("builtin:ext-fibrows", fib);
  auto bfile = read_bfile(kDataDir + "/b282717.txt");
  for (unsigned long n = 0; n < 21; ++n) CHECK(ext->term(n) == bfile->term(n));

  auto b2 = NumerationSystem::integer(2);
  auto count = parse_sequence("builtin:count:11", b2);
  auto a014081 = read_bfile(kDataDir + "/b014081.txt");
  for (unsigned long n = 0; n < 16; ++n) CHECK(count->term(n) == a014081->term(n));
}

TEST_CASE("extension fixtures reproduce their serializations") {
  auto b2 = NumerationSystem::integer(2);
  auto ext2 = parse_sequence("builtin:ext-count11", b2);
  for (unsigned long n = 0; n < 16; ++n)
    CHECK(ext2->term(n) == Rat(testdata::count11_prefix()[n]));

  auto fib = NumerationSystem::fibonacci();
  auto ext4 = parse_sequence("builtin:ext-fibrows", fib);
  for (unsigned long n = 0; n < 21; ++n)
    CHECK(ext4->term(n) == Rat(testdata::fibrows_prefix()[n]));

  auto r32 = NumerationSystem::rational(3, 2);
  auto ext56 = parse_sequence("builtin:ext-sumdigits", r32);
  for (unsigned long n = 0; n < 21; ++n)
    CHECK(ext56->term(n) == Rat(testdata::sumdigits32_prefix()[n]));
}

TEST_CASE("extension fixtures match their direct definitions at scale") {
  auto b2 = NumerationSystem::integer(2);
  auto ext = parse_sequence("builtin:ext-count11", b2);
  auto direct = parse_sequence("builtin:count:11", b2);
  for (unsigned long n = 0; n < 10000; ++n) CHECK(ext->term(n) == direct->term(n));

  auto r32 = NumerationSystem::rational(3, 2);
  auto ext56 = parse_sequence("builtin:ext-sumdigits", r32);
  auto sum = parse_sequence("builtin:sumdigits", r32);
  for (unsigned long n = 0; n < 10000; ++n) CHECK(ext56->term(n) == sum->term(n));
}

TEST_CASE("dfao json round trip") {
  Dfao machine = sepchains_dfao();
  Dfao back = Dfao::from_json(machine.to_json());
  CHECK(back.next == machine.next);
  CHECK(back.output == machine.output);
  auto r32 = NumerationSystem::rational(3, 2);
  auto direct = make_dfao(machine, r32);
  auto parsed = make_dfao(back, r32);
  for (unsigned long n = 0; n < 50; ++n) CHECK(direct->term(n) == parsed->term(n));
}

TEST_CASE("sequence spec parsing failures") {
  auto b2 = NumerationSystem::integer(2);
  CHECK_THROWS_AS(parse_sequence("builtin:nope", b2), ParseError);
  CHECK_THROWS_AS(parse_sequence("wat", b2), ParseError);
  CHECK_THROWS_AS(parse_sequence("builtin:ext-sumdigits", b2), ParseError);  // wrong system
}
