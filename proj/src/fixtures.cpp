#include "numertree/fixtures.hpp"

#include <fstream>
#include <initializer_list>

#include "numertree/errors.hpp"

namespace numertree {

namespace {

struct RelLine {
  const char* leaf;
  std::initializer_list<std::pair<const char*, const char*>> coeffs;
};

// Locates the classify() type whose domain matches the factor at `witness`
// and appends the given relations under that type id.
int add_type(RelationSet& rs, const NumerationSystem& sys, const TypeTable& table,
             const Word& witness_word, const TreePrefix& tree,
             std::initializer_list<RelLine> lines) {
  std::uint64_t node = tree.node_at(witness_word);
  if (node == TreePrefix::npos || table.assignment[node] < 0)
    throw ParseError("fixture: witness word not classified: " + sys.word_str(witness_word));
  int id = table.assignment[node];
  RelationSet::TypeInfo info;
  info.id = id;
  info.domain = table.types[id].domain;
  info.is_root = table.types[id].is_root_type;
  rs.types.push_back(info);
  for (const RelLine& line : lines) {
    Relation r;
    r.type_id = id;
    r.leaf = sys.word_parse(line.leaf);
    for (const auto& [w, c] : line.coeffs)
      r.coeffs.emplace_back(sys.word_parse(w), rat_parse(c));
    rs.relations.push_back(std::move(r));
  }
  return id;
}

RelationSet fixture_count11() {
  NumerationSystem sys = NumerationSystem::integer(2);
  TreePrefix tree = build_tree(sys, nullptr, 4);
  TypeTable table = classify(tree, 3);
  RelationSet rs;
  rs.h = 3;
  rs.system = sys.spec();
  rs.root_policy = RootPolicy::Include;
  // Full binary type: appending digits extends the count of "11" factors by
  // one per new 11; the deltas live on the nodes through edge 1.
  add_type(rs, sys, table, sys.word_parse("1"), tree,
           {{"000", {{"0", "1"}}},
            {"001", {{"0", "1"}}},
            {"010", {{"0", "1"}}},
            {"011", {{"0", "1"}, {"1", "-1"}, {"11", "1"}}},
            {"100", {{"1", "1"}}},
            {"101", {{"1", "1"}}},
            {"110", {{"11", "1"}}},
            {"111", {{"1", "-1"}, {"11", "2"}}}});
  // Root type: same rules restricted to the leaves without leading zeros.
  add_type(rs, sys, table, sys.word_parse(""), tree,
           {{"100", {{"1", "1"}}},
            {"101", {{"1", "1"}}},
            {"110", {{"11", "1"}}},
            {"111", {{"1", "-1"}, {"11", "2"}}}});
  return rs;
}

RelationSet fixture_fibrows() {
  NumerationSystem sys = NumerationSystem::fibonacci();
  TreePrefix tree = build_tree(sys, nullptr, 4);
  TypeTable table = classify(tree, 2);
  RelationSet rs;
  rs.h = 2;
  rs.system = sys.spec();
  rs.root_policy = RootPolicy::Include;
  // Type after an edge 1 (only 0 may follow).
  add_type(rs, sys, table, sys.word_parse("1"), tree,
           {{"00", {{"", "2"}}}, {"01", {{"", "2"}}}});
  // Type after an edge 0 (both digits follow).
  add_type(rs, sys, table, sys.word_parse("10"), tree,
           {{"00", {{"", "-1"}, {"0", "2"}}},
            {"01", {{"", "2"}}},
            {"10", {{"1", "3/2"}}}});
  // Root type, one occurrence.
  add_type(rs, sys, table, sys.word_parse(""), tree, {{"10", {{"", "-1"}, {"1", "2"}}}});
  return rs;
}

RelationSet fixture_sumdigits(bool root_leaning) {
  NumerationSystem sys = NumerationSystem::rational(3, 2);
  TreePrefix tree = build_tree(sys, nullptr, 5);
  TypeTable table = classify(tree, 2);
  RelationSet rs;
  rs.h = 2;
  rs.system = sys.spec();
  rs.root_policy = RootPolicy::Exclude;
  // Residue classes mod 4, witnessed by the nodes of value 1, 2, 3, 4.
  add_type(rs, sys, table, sys.word_parse("2"), tree,  // value 1
           {{"10", {{"1", "1"}}}, {"12", {{"", "-2"}, {"1", "3"}}}});
  if (root_leaning) {
    add_type(rs, sys, table, sys.word_parse("21"), tree,  // value 2
             {{"01", {{"", "1/2"}, {"2", "1/2"}}},
              {"20", {{"2", "1"}}},
              {"22", {{"", "-1"}, {"2", "2"}}}});
  } else {
    add_type(rs, sys, table, sys.word_parse("21"), tree,
             {{"01", {{"0", "1/2"}, {"2", "1/2"}}},
              {"20", {{"2", "1"}}},
              {"22", {{"0", "-1"}, {"2", "2"}}}});
  }
  add_type(rs, sys, table, sys.word_parse("210"), tree,  // value 3
           {{"11", {{"", "-1"}, {"1", "2"}}}});
  add_type(rs, sys, table, sys.word_parse("212"), tree,  // value 4
           {{"00", {{"0", "1"}}},
            {"02", {{"2", "1"}}},
            {"21", {{"", "-1/2"}, {"2", "3/2"}}}});
  return rs;
}

RelationSet fixture_squares() {
  NumerationSystem sys = NumerationSystem::rational(3, 2);
  TreePrefix tree = build_tree(sys, nullptr, 8);
  TypeTable table = classify(tree, 3);
  RelationSet rs;
  rs.h = 3;
  rs.system = sys.spec();
  rs.root_policy = RootPolicy::Exclude;
  auto witness = [&](unsigned long value) { return sys.rep(Int(value)); };
  // Residue classes mod 8, witnessed by the nodes of value 1..8.
  add_type(rs, sys, table, witness(1), tree,
           {{"101", {{"", "-27/14"}, {"10", "13/6"}, {"12", "13/28"}}},
            {"120", {{"12", "9/4"}}},
            {"122", {{"", "135/14"}, {"10", "-29/6"}, {"12", "145/28"}}}});
  add_type(rs, sys, table, witness(2), tree,
           {{"011", {{"01", "5/4"}, {"20", "5/4"}, {"22", "-1/4"}}},
            {"200", {{"20", "9/4"}}},
            {"202", {{"01", "-1/4"}, {"20", "5/4"}, {"22", "5/4"}}},
            {"221", {{"01", "1/2"}, {"20", "-7/4"}, {"22", "7/2"}}}});
  add_type(rs, sys, table, witness(3), tree,
           {{"110", {{"11", "9/4"}}},
            {"112", {{"", "189/20"}, {"1", "-69/4"}, {"11", "161/20"}}}});
  add_type(rs, sys, table, witness(4), tree,
           {{"001", {{"00", "5/4"}, {"02", "5/4"}, {"21", "-1/4"}}},
            {"020", {{"02", "9/4"}}},
            {"022", {{"00", "-1/4"}, {"02", "5/4"}, {"21", "5/4"}}},
            {"211", {{"00", "1/2"}, {"02", "-7/4"}, {"21", "7/2"}}}});
  add_type(rs, sys, table, witness(5), tree,
           {{"100", {{"10", "9/4"}}},
            {"102", {{"", "-27/14"}, {"10", "17/12"}, {"12", "17/14"}}},
            {"121", {{"", "27/7"}, {"10", "-25/12"}, {"12", "25/7"}}}});
  add_type(rs, sys, table, witness(6), tree,
           {{"010", {{"01", "9/4"}}},
            {"012", {{"01", "1/2"}, {"20", "2"}, {"22", "-1/4"}}},
            {"201", {{"01", "-1/4"}, {"20", "2"}, {"22", "1/2"}}},
            {"220", {{"22", "9/4"}}},
            {"222", {{"01", "5/4"}, {"20", "-4"}, {"22", "5"}}}});
  add_type(rs, sys, table, witness(7), tree,
           {{"111", {{"", "27/8"}, {"1", "-57/8"}, {"11", "19/4"}}}});
  add_type(rs, sys, table, witness(8), tree,
           {{"000", {{"00", "9/4"}}},
            {"002", {{"00", "1/2"}, {"02", "2"}, {"21", "-1/4"}}},
            {"021", {{"00", "-1/4"}, {"02", "2"}, {"21", "1/2"}}},
            {"210", {{"21", "9/4"}}},
            {"212", {{"00", "5/4"}, {"02", "-4"}, {"21", "5"}}}});
  return rs;
}

std::vector<Rat> rats(std::initializer_list<long> values) {
  std::vector<Rat> out;
  for (long v : values) out.emplace_back(v);
  return out;
}

}  // namespace

RelationSet builtin_relations(const std::string& name) {
  if (name == "count11-h3") return fixture_count11();
  if (name == "fibrows-h2") return fixture_fibrows();
  if (name == "sumdigits-h2") return fixture_sumdigits(false);
  if (name == "sumdigits-h2-alt") return fixture_sumdigits(true);
  if (name == "squares-h3") return fixture_squares();
  throw ParseError("unknown builtin relation set: " + name);
}

NumerationSystem builtin_relations_system(const std::string& name) {
  if (name == "count11-h3") return NumerationSystem::integer(2);
  if (name == "fibrows-h2") return NumerationSystem::fibonacci();
  if (name == "sumdigits-h2" || name == "sumdigits-h2-alt" || name == "squares-h3")
    return NumerationSystem::rational(3, 2);
  throw ParseError("unknown builtin relation set: " + name);
}

std::vector<std::string> builtin_relation_names() {
  return {"count11-h3", "fibrows-h2", "sumdigits-h2", "sumdigits-h2-alt", "squares-h3"};
}

std::vector<Rat> builtin_prefix(const std::string& name) {
  if (name == "count11-h3") return rats({0, 0, 0, 1, 0, 0, 1, 2});
  if (name == "fibrows-h2") return rats({1, 2});
  if (name == "sumdigits-h2" || name == "sumdigits-h2-alt") return rats({0, 2, 3});
  throw ParseError("no builtin prefix for: " + name);
}

Dfao sepchains_dfao() {
  Dfao d;
  d.alphabet = {0, 1, 2};
  d.initial = 0;
  d.next = {
      {0, 0, 1},   // pre-chain
      {1, 2, 1},   //
      {3, 2, 5},   // splits into the two chain families
      {4, 3, 4},   // low chain, output 1
      {3, 3, 3},   // low leaves, output 2
      {6, 5, 6},   // high chain, output 3
      {5, 5, 5},   // high leaves, output 5
  };
  d.output = {Rat(7), Rat(8), Rat(9), Rat(1), Rat(2), Rat(3), Rat(5)};
  return d;
}

namespace {

SeqPtr parse_builtin_sequence(const std::string& name, const NumerationSystem& sys) {
  if (name == "sumdigits") return make_sum_digits(sys);
  if (name.rfind("power:", 0) == 0) return make_power(std::stoi(name.substr(6)));
  if (name.rfind("poly:", 0) == 0) {
    std::vector<Rat> coeffs;
    std::string rest = name.substr(5);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      std::size_t comma = rest.find(',', pos);
      coeffs.push_back(rat_parse(
          rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return make_poly(std::move(coeffs));
  }
  if (name.rfind("count:", 0) == 0)
    return make_count_factor(sys, sys.word_parse(name.substr(6)));
  if (name == "sepchains") return make_dfao(sepchains_dfao(), sys);
  if (name.rfind("ext-", 0) == 0) {
    std::string fixture;
    if (name == "ext-count11") fixture = "count11-h3";
    else if (name == "ext-fibrows") fixture = "fibrows-h2";
    else if (name == "ext-sumdigits") fixture = "sumdigits-h2";
    else throw ParseError("unknown builtin sequence: " + name);
    NumerationSystem fsys = builtin_relations_system(fixture);
    if (fsys.spec() != sys.spec())
      throw ParseError("builtin " + name + " is defined over system " + fsys.spec());
    return make_extension(sys, builtin_prefix(fixture), builtin_relations(fixture));
  }
  throw ParseError("unknown builtin sequence: " + name);
}

}  // namespace

SeqPtr parse_sequence(const std::string& spec, const NumerationSystem& sys) {
  if (spec.rfind("builtin:", 0) == 0) return parse_builtin_sequence(spec.substr(8), sys);
  if (spec.rfind("bfile:", 0) == 0) return read_bfile(spec.substr(6));
  if (spec.rfind("dfao:", 0) == 0) {
    std::string path = spec.substr(5);
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dfao file: " + path);
    nlohmann::ordered_json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("dfao file " + path + ": " + e.what());
    }
    return make_dfao(Dfao::from_json(j), sys);
  }
  if (spec.rfind("ext:", 0) == 0) {
    std::string rest = spec.substr(4);
    std::size_t comma = rest.find(',');
    if (comma == std::string::npos)
      throw ParseError("ext: expects 'ext:RELATIONS,PREFIX_BFILE'");
    RelationSet rs = parse_relations(rest.substr(0, comma), sys);
    std::ifstream in(rest.substr(comma + 1));
    if (!in) throw ParseError("cannot open prefix b-file: " + rest.substr(comma + 1));
    std::vector<Rat> prefix = read_bfile(in, rest.substr(comma + 1));
    return make_extension(sys, std::move(prefix), std::move(rs));
  }
  if (spec.rfind("cumulative:", 0) == 0)
    return make_cumulative(parse_sequence(spec.substr(11), sys), sys);
  throw ParseError("unrecognized sequence spec: '" + spec + "'");
}

RelationSet parse_relations(const std::string& spec, const NumerationSystem& sys) {
  RelationSet rs;
  if (spec.rfind("builtin:", 0) == 0) {
    rs = builtin_relations(spec.substr(8));
  } else {
    std::ifstream in(spec);
    if (!in) throw ParseError("cannot open relation file: " + spec);
    nlohmann::ordered_json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("relation file " + spec + ": " + e.what());
    }
    rs = RelationSet::from_json(j, sys);
  }
  if (!rs.system.empty() && rs.system != sys.spec())
    throw ParseError("relation set is for system '" + rs.system + "', requested '" + sys.spec() +
                     "'");
  return rs;
}

}  // namespace numertree
