#include <fstream>

#include "doctest.h"
#include "numertree/errors.hpp"
#include "numertree/fixtures.hpp"
#include "numertree/sequences.hpp"
#include "testdata.hpp"

using namespace numertree;

namespace {

const GuessCell* find_cell(const GuessReport& report, int type_id, const Word& leaf) {
  for (const auto& c : report.cells)
    if (c.type_id == type_id && c.leaf == leaf) return &c;
  return nullptr;
}

int type_id_by_domain(const TypeTable& table, const std::vector<Word>& domain) {
  for (std::size_t i = 0; i < table.types.size(); ++i)
    if (table.types[i].domain == domain) return static_cast<int>(i);
  return -1;
}

Rat cell_coeff(const GuessCell& cell, const Word& w) {
  for (const auto& [word, c] : cell.coeffs)
    if (word == w) return c;
  return Rat(0);
}

}  // namespace

TEST_CASE("occurrence rows reproduce the published table") {
  auto sys = NumerationSystem::rational(3, 2);
  auto tree = build_tree(sys, *make_power(2), 14);
  TypeTable table = classify(tree, 3);
  int type2 = type_id_by_domain(table, residue_domain(sys, 2, 3));
  REQUIRE(type2 >= 0);
  OccurrenceRows rows = occurrences(tree, table, type2);
  REQUIRE(rows.internal_words.size() == 6);
  REQUIRE(rows.leaf_words.size() == 4);
  REQUIRE(rows.roots.size() >= 8);
  const auto& expected = testdata::squares_rows();
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(rows.roots[i] % 8 == 2);
    for (std::size_t j = 0; j < 6; ++j) CHECK(rows.internals.at(i, j) == expected[i][j]);
    for (std::size_t j = 0; j < 4; ++j) CHECK(rows.leaves.at(i, j) == expected[i][6 + j]);
  }
}

TEST_CASE("occurrence rows of a constant sequence are all ones") {
  auto sys = NumerationSystem::rational(3, 2);
  auto tree = build_tree(sys, *make_power(0), 8);
  TypeTable table = classify(tree, 2);
  for (int t = 0; t < static_cast<int>(table.types.size()); ++t) {
    OccurrenceRows rows = occurrences(tree, table, t);
    for (std::size_t i = 0; i < rows.roots.size(); ++i) {
      for (std::size_t j = 0; j < rows.internal_words.size(); ++j)
        CHECK(rows.internals.at(i, j) == 1);
      for (std::size_t j = 0; j < rows.leaf_words.size(); ++j)
        CHECK(rows.leaves.at(i, j) == 1);
    }
  }
}

TEST_CASE("digit-sum rows: the 1-child adds one") {
  auto sys = NumerationSystem::rational(3, 2);
  auto tree = build_tree(sys, *make_sum_digits(sys), 10);
  TypeTable table = classify(tree, 2);
  int type1 = type_id_by_domain(table, residue_domain(sys, 1, 2));
  REQUIRE(type1 >= 0);
  OccurrenceRows rows = occurrences(tree, table, type1);
  // Internal words are (eps, 1): the second decoration is the first plus 1.
  REQUIRE(rows.internal_words.size() == 2);
  for (std::size_t i = 0; i < rows.roots.size(); ++i)
    CHECK(rows.internals.at(i, 1) == rows.internals.at(i, 0) + 1);
}

TEST_CASE("guessing the squares relations at height 3") {
  auto sys = NumerationSystem::rational(3, 2);
  auto tree = build_tree(sys, *make_power(2), levels_for_count(sys, 20000));
  auto [relset, report] = guess(tree, 3);
  CHECK(report.all_solved());
  CHECK(relset.relations.size() == 27);

  TypeTable table = classify(tree, 3);
  int type2 = type_id_by_domain(table, residue_domain(sys, 2, 3));
  const auto& coeffs = testdata::squares_leaf_coeffs();
  const std::vector<const char*> internals{"", "0", "2", "01", "20", "22"};
  const std::vector<const char*> leaves{"011", "200", "202", "221"};
  for (std::size_t t = 0; t < leaves.size(); ++t) {
    const GuessCell* cell = find_cell(report, type2, sys.word_parse(leaves[t]));
    REQUIRE(cell);
    CHECK(cell->status == CellStatus::Solved);
    for (std::size_t j = 0; j < internals.size(); ++j)
      CHECK(cell_coeff(*cell, sys.word_parse(internals[j])) == rat_parse(coeffs[t][j]));
  }

  // The guessed set matches the published 27 relations coefficient by
  // coefficient.
  RelationSet published = builtin_relations("squares-h3");
  std::vector<int> remap = published.map_onto(table);
  for (const Relation& r : relset.relations) {
    const auto& domain = table.types[r.type_id].domain;
    const RelationSet::TypeInfo* ptype = published.find_type_by_domain(domain);
    REQUIRE(ptype);
    const Relation* pr = published.find_relation(ptype->id, r.leaf);
    REQUIRE(pr);
    CHECK(pr->coeffs == r.coeffs);
  }
  CHECK(verify(tree, relset).empty());
  CHECK(verify(tree, published).empty());
}

TEST_CASE("published relation sets verify at scale") {
  auto r32 = NumerationSystem::rational(3, 2);
  auto squares_tree = build_tree(r32, *make_power(2), levels_for_count(r32, 20000));
  CHECK(verify(squares_tree, builtin_relations("squares-h3")).empty());

  auto sum_tree = build_tree(r32, *make_sum_digits(r32), levels_for_count(r32, 10000));
  CHECK(verify(sum_tree, builtin_relations("sumdigits-h2")).empty());
  CHECK(verify(sum_tree, builtin_relations("sumdigits-h2-alt")).empty());

  auto b2 = NumerationSystem::integer(2);
  auto count_tree =
      build_tree(b2, *make_count_factor(b2, b2.word_parse("11")), levels_for_count(b2, 10000));
  CHECK(verify(count_tree, builtin_relations("count11-h3")).empty());

  auto fib = NumerationSystem::fibonacci();
  auto fib_tree =
      build_tree(fib, *parse_sequence("builtin:ext-fibrows", fib), levels_for_count(fib, 10000));
  CHECK(verify(fib_tree, builtin_relations("fibrows-h2")).empty());
}

TEST_CASE("corrupting one coefficient yields violations") {
  auto r32 = NumerationSystem::rational(3, 2);
  auto tree = build_tree(r32, *make_sum_digits(r32), 10);
  RelationSet rs = builtin_relations("sumdigits-h2");
  rs.relations[0].coeffs[0].second += 1;
  CHECK_FALSE(verify(tree, rs).empty());
}

TEST_CASE("the chain automaton defeats guessing at every height") {
  auto sys = NumerationSystem::rational(3, 2);
  auto seq = parse_sequence("builtin:sepchains", sys);
  auto tree = build_tree(sys, *seq, 21);
  for (int h = 1; h <= 5; ++h) {
    CAPTURE(h);
    auto [relset, report] = guess(tree, h);
    CHECK(report.any_inconsistent());
    bool witnessed = false;
    for (const auto& cell : report.cells) {
      if (cell.status != CellStatus::Inconsistent || !cell.witness) continue;
      witnessed = true;
      // The witness rows genuinely clash: re-solving the two-row system
      // fails.
      TypeTable table = classify(tree, h);
      auto [u, v] = *cell.witness;
      CHECK(table.assignment[u] == cell.type_id);
      CHECK(table.assignment[v] == cell.type_id);
      const auto& domain = table.types[cell.type_id].domain;
      std::vector<Word> internals;
      for (const Word& w : domain)
        if (static_cast<int>(w.size()) < h) internals.push_back(w);
      RatMatrix a(2, internals.size());
      RatVector b(2);
      int row = 0;
      for (std::uint64_t node : {u, v}) {
        for (std::size_t j = 0; j < internals.size(); ++j)
          a.at(row, j) = tree.decoration(tree.descend(node, internals[j]));
        b[row] = tree.decoration(tree.descend(node, cell.leaf));
        ++row;
      }
      CHECK_FALSE(solve_canonical(a, b).has_value());
      break;
    }
    CHECK(witnessed);
  }
}

TEST_CASE("guess statuses: insufficient data") {
  auto sys = NumerationSystem::rational(3, 2);
  auto tree = build_tree(sys, *make_power(2), 6);
  auto [relset, report] = guess(tree, 3);  // few occurrences at this depth
  bool any_insufficient = false;
  for (const auto& cell : report.cells)
    if (cell.status == CellStatus::Insufficient) {
      any_insufficient = true;
      CHECK(cell.rows_used < cell.rows_needed);
    }
  CHECK(any_insufficient);
}

TEST_CASE("lift keeps verified sets verified") {
  auto b2 = NumerationSystem::integer(2);
  auto count_tree = build_tree(b2, *make_count_factor(b2, b2.word_parse("11")),
                               levels_for_count(b2, 16384));
  RelationSet base = builtin_relations("count11-h3");
  RelationSet lifted = lift(base, count_tree);
  CHECK(lifted.h == 4);
  CHECK(verify(count_tree, lifted).empty());

  auto r32 = NumerationSystem::rational(3, 2);
  auto sum_tree = build_tree(r32, *make_sum_digits(r32), levels_for_count(r32, 8000));
  RelationSet sum_lift = lift(builtin_relations("sumdigits-h2"), sum_tree);
  CHECK(sum_lift.h == 3);
  CHECK(verify(sum_tree, sum_lift).empty());

  // Lifting is deterministic: same input, same coefficients.
  RelationSet again = lift(builtin_relations("sumdigits-h2"), sum_tree);
  REQUIRE(again.relations.size() == sum_lift.relations.size());
  for (std::size_t i = 0; i < again.relations.size(); ++i) {
    CHECK(again.relations[i].leaf == sum_lift.relations[i].leaf);
    CHECK(again.relations[i].coeffs == sum_lift.relations[i].coeffs);
  }
  // And composable: two lifts land at h+2 and still verify.
  RelationSet twice = lift(sum_lift, sum_tree);
  CHECK(twice.h == 4);
  CHECK(verify(sum_tree, twice).empty());
}

TEST_CASE("extension reproduces the fixture serializations") {
  auto b2 = NumerationSystem::integer(2);
  auto skeleton = build_tree(b2, nullptr, 3);
  TreePrefix prefix = build_tree(b2, *make_count_factor(b2, b2.word_parse("11")), 3);
  TreePrefix full = extend(prefix, builtin_relations("count11-h3"), 10);
  auto direct = make_count_factor(b2, b2.word_parse("11"));
  for (std::uint64_t i = 0; i < full.size(); ++i)
    CHECK(full.decoration(i) == direct->term(i));
}

TEST_CASE("extension needs a deep enough prefix") {
  auto r32 = NumerationSystem::rational(3, 2);
  TreePrefix tiny = build_tree(r32, *make_sum_digits(r32), 1);
  CHECK_THROWS_AS(extend(tiny, builtin_relations("sumdigits-h2"), 8), InsufficientError);
}

TEST_CASE("extension fixed point for guessed relations") {
  auto r32 = NumerationSystem::rational(3, 2);
  auto seq = make_sum_digits(r32);
  auto tree = build_tree(r32, *seq, levels_for_count(r32, 4000));
  auto [relset, report] = guess(tree, 2);
  REQUIRE(report.all_solved());
  TreePrefix prefix = build_tree(r32, *seq, 2);
  TreePrefix regrown = extend(prefix, relset, tree.levels());
  for (std::uint64_t i = 0; i < regrown.size(); ++i)
    CHECK(regrown.decoration(i) == tree.decoration(i));
}

TEST_CASE("relation set json round trip") {
  auto sys = NumerationSystem::rational(3, 2);
  RelationSet rs = builtin_relations("squares-h3");
  auto j = rs.to_json(sys);
  RelationSet back = RelationSet::from_json(j, sys);
  CHECK(back.h == rs.h);
  CHECK(back.system == rs.system);
  REQUIRE(back.types.size() == rs.types.size());
  REQUIRE(back.relations.size() == rs.relations.size());
  for (std::size_t i = 0; i < rs.relations.size(); ++i) {
    CHECK(back.relations[i].type_id == rs.relations[i].type_id);
    CHECK(back.relations[i].leaf == rs.relations[i].leaf);
    CHECK(back.relations[i].coeffs == rs.relations[i].coeffs);
  }
  // Malformed input: a coefficient outside the domain.
  auto bad = j;
  bad["relations"][0]["coeffs"]["111111"] = "1";
  CHECK_THROWS_AS(RelationSet::from_json(bad, sys), ParseError);
}

TEST_CASE("guess report json has a stable shape") {
  auto sys = NumerationSystem::integer(2);
  auto tree = build_tree(sys, *make_count_factor(sys, sys.word_parse("11")),
                         levels_for_count(sys, 2048));
  auto [relset, report] = guess(tree, 3);
  CHECK(report.all_solved());
  auto j = report.to_json(sys);
  CHECK(j.contains("cells"));
  CHECK(j.contains("types"));
  for (const auto& cell : j["cells"]) CHECK(cell["status"] == "solved");
}
