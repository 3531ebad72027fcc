#include "numertree/relations.hpp"

#include <algorithm>
#include <map>

#include "numertree/errors.hpp"

namespace numertree {

Rat Relation::coeff(const Word& v) const {
  for (const auto& [w, c] : coeffs)
    if (w == v) return c;
  return Rat(0);
}

const RelationSet::TypeInfo* RelationSet::find_type(int id) const {
  for (const auto& t : types)
    if (t.id == id) return &t;
  return nullptr;
}

const RelationSet::TypeInfo* RelationSet::find_type_by_domain(
    const std::vector<Word>& domain) const {
  for (const auto& t : types)
    if (t.domain == domain) return &t;
  return nullptr;
}

const Relation* RelationSet::find_relation(int type_id, const Word& leaf) const {
  for (const auto& r : relations)
    if (r.type_id == type_id && r.leaf == leaf) return &r;
  return nullptr;
}

std::vector<int> RelationSet::map_onto(const TypeTable& table) const {
  std::vector<int> out(table.types.size(), -1);
  for (std::size_t i = 0; i < table.types.size(); ++i) {
    const TypeInfo* t = find_type_by_domain(table.types[i].domain);
    if (t) out[i] = t->id;
  }
  return out;
}

nlohmann::ordered_json RelationSet::to_json(const NumerationSystem& sys) const {
  nlohmann::ordered_json j;
  j["system"] = system;
  j["h"] = h;
  j["root_policy"] = root_policy == RootPolicy::Include ? "include" : "exclude";
  auto& types_j = j["types"] = nlohmann::ordered_json::array();
  for (const auto& t : types) {
    nlohmann::ordered_json tj;
    tj["id"] = t.id;
    auto& dj = tj["domain"] = nlohmann::ordered_json::array();
    for (const Word& w : t.domain) dj.push_back(sys.word_str(w));
    if (t.is_root) tj["root"] = true;
    types_j.push_back(std::move(tj));
  }
  auto& rels_j = j["relations"] = nlohmann::ordered_json::array();
  for (const auto& r : relations) {
    nlohmann::ordered_json rj;
    rj["type"] = r.type_id;
    rj["leaf"] = sys.word_str(r.leaf);
    auto& cj = rj["coeffs"] = nlohmann::ordered_json::object();
    for (const auto& [w, c] : r.coeffs) cj[sys.word_str(w)] = rat_str(c);
    rels_j.push_back(std::move(rj));
  }
  return j;
}

RelationSet RelationSet::from_json(const nlohmann::ordered_json& j, const NumerationSystem& sys) {
  RelationSet rs;
  try {
    rs.system = j.at("system").get<std::string>();
    rs.h = j.at("h").get<int>();
    if (j.contains("root_policy"))
      rs.root_policy = j.at("root_policy").get<std::string>() == "include"
                           ? RootPolicy::Include
                           : RootPolicy::Exclude;
    for (const auto& tj : j.at("types")) {
      TypeInfo t;
      t.id = tj.at("id").get<int>();
      for (const auto& wj : tj.at("domain"))
        t.domain.push_back(sys.word_parse(wj.get<std::string>()));
      t.is_root = tj.contains("root") && tj.at("root").get<bool>();
      rs.types.push_back(std::move(t));
    }
    for (const auto& rj : j.at("relations")) {
      Relation r;
      r.type_id = rj.at("type").get<int>();
      r.leaf = sys.word_parse(rj.at("leaf").get<std::string>());
      for (const auto& [k, v] : rj.at("coeffs").items())
        r.coeffs.emplace_back(sys.word_parse(k), rat_parse(v.get<std::string>()));
      std::sort(r.coeffs.begin(), r.coeffs.end(),
                [](const auto& a, const auto& b) { return radix_less(a.first, b.first); });
      rs.relations.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("relation set json: ") + e.what());
  }
  // Structural checks: leaves at height h inside the domain, coefficients on
  // internal words only, one relation per covered leaf.
  for (const auto& r : rs.relations) {
    const TypeInfo* t = rs.find_type(r.type_id);
    if (!t) throw ParseError("relation references unknown type " + std::to_string(r.type_id));
    if (static_cast<int>(r.leaf.size()) != rs.h)
      throw ParseError("relation leaf is not at height h");
    if (std::find(t->domain.begin(), t->domain.end(), r.leaf) == t->domain.end())
      throw ParseError("relation leaf outside its type domain");
    for (const auto& [w, c] : r.coeffs) {
      if (static_cast<int>(w.size()) >= rs.h)
        throw ParseError("relation coefficient on a non-internal word");
      if (std::find(t->domain.begin(), t->domain.end(), w) == t->domain.end())
        throw ParseError("relation coefficient outside its type domain");
    }
  }
  return rs;
}

OccurrenceRows occurrences(const TreePrefix& tree, const TypeTable& table, int type_id) {
  if (type_id < 0 || type_id >= static_cast<int>(table.types.size()))
    throw ParseError("occurrences: unknown type id " + std::to_string(type_id));
  OccurrenceRows rows;
  const auto& domain = table.types[type_id].domain;
  for (const Word& w : domain) {
    if (static_cast<int>(w.size()) < table.h)
      rows.internal_words.push_back(w);
    else
      rows.leaf_words.push_back(w);
  }
  for (std::uint64_t node = 0; node < table.classified_end; ++node)
    if (table.assignment[node] == type_id) rows.roots.push_back(node);
  rows.internals = RatMatrix(rows.roots.size(), rows.internal_words.size());
  rows.leaves = RatMatrix(rows.roots.size(), rows.leaf_words.size());
  for (std::size_t i = 0; i < rows.roots.size(); ++i) {
    for (std::size_t j = 0; j < rows.internal_words.size(); ++j)
      rows.internals.at(i, j) =
          tree.decoration(tree.descend(rows.roots[i], rows.internal_words[j]));
    for (std::size_t j = 0; j < rows.leaf_words.size(); ++j)
      rows.leaves.at(i, j) = tree.decoration(tree.descend(rows.roots[i], rows.leaf_words[j]));
  }
  return rows;
}

OccurrenceRows occurrences(const TreePrefix& tree, int h, int type_id) {
  return occurrences(tree, classify(tree, h), type_id);
}

namespace {

// Two-row inconsistency certificate: rows whose internal parts are
// proportional while the right-hand sides break the same proportion.
std::optional<std::pair<std::uint64_t, std::uint64_t>> find_witness_pair(
    const RatMatrix& internals, const RatMatrix& leaves, std::size_t leaf_col,
    const std::vector<std::uint64_t>& roots) {
  struct Key {
    std::vector<Rat> normalized;
    bool operator<(const Key& o) const {
      for (std::size_t i = 0; i < normalized.size(); ++i) {
        if (normalized[i] < o.normalized[i]) return true;
        if (o.normalized[i] < normalized[i]) return false;
      }
      return false;
    }
  };
  std::map<Key, std::pair<std::size_t, Rat>> seen;  // key -> (row, normalized rhs)
  for (std::size_t i = 0; i < internals.rows(); ++i) {
    Rat scale(0);
    for (std::size_t j = 0; j < internals.cols(); ++j)
      if (internals.at(i, j) != 0) {
        scale = internals.at(i, j);
        break;
      }
    Key key;
    key.normalized.resize(internals.cols());
    Rat rhs = leaves.at(i, leaf_col);
    if (scale != 0) {
      for (std::size_t j = 0; j < internals.cols(); ++j)
        key.normalized[j] = internals.at(i, j) / scale;
      rhs /= scale;
    } else if (rhs != 0) {
      // A zero internal row with a nonzero decoration is its own certificate.
      return std::make_pair(roots[i], roots[i]);
    }
    auto [it, inserted] = seen.emplace(std::move(key), std::make_pair(i, rhs));
    if (!inserted && it->second.second != rhs)
      return std::make_pair(roots[it->second.first], roots[i]);
  }
  return std::nullopt;
}

bool row_satisfies(const RatMatrix& internals, std::size_t row, const RatVector& sol,
                   const Rat& rhs) {
  Rat acc(0);
  for (std::size_t j = 0; j < sol.size(); ++j)
    if (sol[j] != 0 && internals.at(row, j) != 0) acc += internals.at(row, j) * sol[j];
  return acc == rhs;
}

RatMatrix top_rows(const RatMatrix& m, std::size_t n) {
  RatMatrix out(n, m.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = m.at(i, j);
  return out;
}

std::vector<std::pair<Word, Rat>> solution_coeffs(const RatVector& sol,
                                                  const std::vector<Word>& words) {
  std::vector<std::pair<Word, Rat>> out;
  for (std::size_t j = 0; j < sol.size(); ++j)
    if (sol[j] != 0) out.emplace_back(words[j], sol[j]);
  return out;
}

}  // namespace

std::string to_string(CellStatus s) {
  switch (s) {
    case CellStatus::Solved: return "solved";
    case CellStatus::Underdetermined: return "underdetermined";
    case CellStatus::Inconsistent: return "inconsistent";
    case CellStatus::Insufficient: return "insufficient";
  }
  return "?";
}

bool GuessReport::all_solved() const {
  return std::all_of(cells.begin(), cells.end(),
                     [](const GuessCell& c) { return c.status == CellStatus::Solved; });
}

bool GuessReport::any_inconsistent() const {
  return std::any_of(cells.begin(), cells.end(),
                     [](const GuessCell& c) { return c.status == CellStatus::Inconsistent; });
}

nlohmann::ordered_json GuessReport::to_json(const NumerationSystem& sys) const {
  nlohmann::ordered_json j;
  j["h"] = h;
  auto& tj = j["types"] = nlohmann::ordered_json::array();
  for (const auto& t : type_stats) {
    nlohmann::ordered_json e;
    e["id"] = t.type_id;
    e["root"] = t.is_root;
    e["occurrences"] = t.occurrence_count;
    e["internal_count"] = t.internal_count;
    e["leaf_count"] = t.leaf_count;
    tj.push_back(std::move(e));
  }
  auto& cj = j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : cells) {
    nlohmann::ordered_json e;
    e["type"] = c.type_id;
    e["leaf"] = sys.word_str(c.leaf);
    e["status"] = to_string(c.status);
    if (c.status == CellStatus::Solved || c.status == CellStatus::Underdetermined) {
      auto& coeffs = e["coeffs"] = nlohmann::ordered_json::object();
      for (const auto& [w, r] : c.coeffs) coeffs[sys.word_str(w)] = rat_str(r);
      e["free_dim"] = c.free_dim;
      e["holdout_confirmed"] = c.holdout_confirmed;
    }
    e["rows_used"] = c.rows_used;
    if (c.status == CellStatus::Insufficient) e["rows_needed"] = c.rows_needed;
    if (c.witness) e["witness"] = {c.witness->first, c.witness->second};
    cj.push_back(std::move(e));
  }
  return j;
}

std::pair<RelationSet, GuessReport> guess(const TreePrefix& tree, int h,
                                          const GuessOptions& opts) {
  if (!tree.decorated()) throw ParseError("guess needs a decorated tree");
  TypeTable table = classify(tree, h);
  RelationSet rs;
  rs.h = h;
  rs.system = tree.system().spec();
  rs.root_policy = opts.include_root ? RootPolicy::Include : RootPolicy::Exclude;
  GuessReport report;
  report.h = h;

  for (int type_id = 0; type_id < static_cast<int>(table.types.size()); ++type_id) {
    bool is_root = table.types[type_id].is_root_type;
    if (is_root && !opts.include_root) continue;
    OccurrenceRows occ = occurrences(tree, table, type_id);
    const std::size_t i_count = occ.internal_words.size();
    const std::size_t k_count = occ.leaf_words.size();
    const std::uint64_t n = occ.roots.size();
    report.type_stats.push_back({type_id, is_root, n, i_count, k_count});

    RelationSet::TypeInfo info;
    info.id = type_id;
    info.domain = table.types[type_id].domain;
    info.is_root = is_root;
    rs.types.push_back(std::move(info));

    const std::uint64_t needed =
        is_root ? 1 : opts.min_occurrences.value_or(2 * static_cast<std::uint64_t>(i_count) + 2);
    if (n < needed) {
      for (std::size_t t = 0; t < k_count; ++t) {
        GuessCell cell;
        cell.type_id = type_id;
        cell.leaf = occ.leaf_words[t];
        cell.status = CellStatus::Insufficient;
        cell.rows_used = n;
        cell.rows_needed = needed;
        report.cells.push_back(std::move(cell));
      }
      continue;
    }

    std::size_t holdout =
        is_root ? 0
                : static_cast<std::size_t>(static_cast<double>(n) * opts.holdout_fraction);
    std::size_t train = static_cast<std::size_t>(n) - holdout;
    RatMatrix train_internals = top_rows(occ.internals, train);
    const int train_rank = static_cast<int>(rank(train_internals));
    const int full_rank =
        holdout ? static_cast<int>(rank(occ.internals)) : train_rank;

    for (std::size_t t = 0; t < k_count; ++t) {
      GuessCell cell;
      cell.type_id = type_id;
      cell.leaf = occ.leaf_words[t];
      cell.rows_used = n;
      RatVector b(train);
      for (std::size_t i = 0; i < train; ++i) b[i] = occ.leaves.at(i, t);
      auto sol = solve_canonical(train_internals, b);
      if (!sol) {
        cell.status = CellStatus::Inconsistent;
        cell.witness = find_witness_pair(occ.internals, occ.leaves, t, occ.roots);
        report.cells.push_back(std::move(cell));
        continue;
      }
      bool confirmed = true;
      for (std::size_t i = train; i < n; ++i)
        if (!row_satisfies(occ.internals, i, *sol, occ.leaves.at(i, t))) {
          confirmed = false;
          break;
        }
      if (confirmed) {
        cell.status = CellStatus::Solved;
        cell.coeffs = solution_coeffs(*sol, occ.internal_words);
        cell.free_dim = static_cast<int>(i_count) - train_rank;
        cell.holdout_confirmed = holdout > 0;
        rs.relations.push_back(Relation{type_id, cell.leaf, cell.coeffs});
        report.cells.push_back(std::move(cell));
        continue;
      }
      // The holdout rejected the training pick; refit on everything.
      RatVector full_b(n);
      for (std::size_t i = 0; i < n; ++i) full_b[i] = occ.leaves.at(i, t);
      auto full_sol = solve_canonical(occ.internals, full_b);
      if (!full_sol) {
        cell.status = CellStatus::Inconsistent;
        cell.witness = find_witness_pair(occ.internals, occ.leaves, t, occ.roots);
      } else {
        cell.status = CellStatus::Underdetermined;
        cell.coeffs = solution_coeffs(*full_sol, occ.internal_words);
        cell.free_dim = static_cast<int>(i_count) - full_rank;
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return {std::move(rs), std::move(report)};
}

namespace {

// Per tree-type relation pointers for a relation set, matched by domain.
std::vector<std::vector<const Relation*>> relations_by_tree_type(const TypeTable& table,
                                                                 const RelationSet& relset) {
  std::vector<std::vector<const Relation*>> out(table.types.size());
  std::vector<int> remap = relset.map_onto(table);
  for (std::size_t i = 0; i < table.types.size(); ++i) {
    if (remap[i] < 0) continue;
    for (const auto& r : relset.relations)
      if (r.type_id == remap[i]) out[i].push_back(&r);
  }
  return out;
}

}  // namespace

std::vector<Violation> verify(const TreePrefix& tree, const RelationSet& relset) {
  if (!tree.decorated()) throw ParseError("verify needs a decorated tree");
  if (!relset.system.empty() && relset.system != tree.system().spec())
    throw ParseError("relation set is for system '" + relset.system + "', tree is '" +
                     tree.system().spec() + "'");
  TypeTable table = classify(tree, relset.h);
  auto rels = relations_by_tree_type(table, relset);
  // A relation set whose types match nothing in a tree deep enough to show
  // every type is structurally incompatible.
  if (table.classified_end > 0) {
    bool any = false;
    for (const auto& v : rels) any = any || !v.empty();
    if (!any && !relset.relations.empty())
      throw ParseError("relation set domains match no type of this tree");
  }
  std::vector<Violation> out;
  for (std::uint64_t node = 0; node < table.classified_end; ++node) {
    const auto& node_rels = rels[table.assignment[node]];
    for (const Relation* r : node_rels) {
      Rat expected(0);
      for (const auto& [w, c] : r->coeffs)
        expected += c * tree.decoration(tree.descend(node, w));
      const Rat& actual = tree.decoration(tree.descend(node, r->leaf));
      if (expected != actual) out.push_back({node, r->leaf, expected, actual});
    }
  }
  return out;
}

RelationSet lift(const RelationSet& relset, const TreePrefix& tree) {
  const int h2 = relset.h + 1;
  TypeTable table = classify(tree, h2);
  RelationSet out;
  out.h = h2;
  out.system = relset.system;
  for (std::size_t j = 0; j < table.types.size(); ++j) {
    const auto& domain2 = table.types[j].domain;
    bool is_root = table.types[j].is_root_type;
    // Child domains per first letter, read off the height-(h+1) domain.
    std::vector<Digit> letters;
    for (const Word& w : domain2)
      if (w.size() == 1) letters.push_back(w[0]);
    std::map<Digit, const RelationSet::TypeInfo*> child_type;
    bool covered = true;
    for (Digit a : letters) {
      // Stripping the first letter keeps radix order; the one-letter word
      // itself contributes the empty word.
      std::vector<Word> child_domain;
      for (const Word& w : domain2)
        if (!w.empty() && w[0] == a) child_domain.push_back(Word(w.begin() + 1, w.end()));
      const RelationSet::TypeInfo* t = relset.find_type_by_domain(child_domain);
      if (!t) {
        if (is_root && relset.root_policy == RootPolicy::Exclude) {
          covered = false;
          break;
        }
        throw InsufficientError("lift: child type through digit " + std::to_string(a) +
                                " of type " + std::to_string(j) + " is not covered");
      }
      child_type[a] = t;
    }
    if (!covered) continue;
    RelationSet::TypeInfo info;
    info.id = static_cast<int>(j);
    info.domain = domain2;
    info.is_root = is_root;
    out.types.push_back(info);
    if (is_root) out.root_policy = RootPolicy::Include;
    for (const Word& w : domain2) {
      if (static_cast<int>(w.size()) != h2) continue;
      Digit a = w[0];
      Word u(w.begin() + 1, w.end());
      const Relation* r = relset.find_relation(child_type[a]->id, u);
      if (!r)
        throw InsufficientError("lift: missing relation for child leaf " + word_str(u) +
                                " of type " + std::to_string(child_type[a]->id));
      Relation lifted;
      lifted.type_id = static_cast<int>(j);
      lifted.leaf = w;
      for (const auto& [v, c] : r->coeffs) {
        Word av;
        av.reserve(v.size() + 1);
        av.push_back(a);
        av.insert(av.end(), v.begin(), v.end());
        lifted.coeffs.emplace_back(std::move(av), c);
      }
      std::sort(lifted.coeffs.begin(), lifted.coeffs.end(),
                [](const auto& x, const auto& y) { return radix_less(x.first, y.first); });
      out.relations.push_back(std::move(lifted));
    }
  }
  return out;
}

TreePrefix extend(const TreePrefix& prefix, const RelationSet& relset, int target_levels,
                  const BuildOptions& opts) {
  const NumerationSystem& sys = prefix.system();
  if (!relset.system.empty() && relset.system != sys.spec())
    throw ParseError("relation set is for system '" + relset.system + "', prefix is '" +
                     sys.spec() + "'");
  if (!prefix.decorated()) throw ParseError("extend needs a decorated prefix");
  const int h = relset.h;
  TreePrefix out = build_tree(sys, nullptr, target_levels, opts);
  TypeTable table = classify(out, h);
  std::vector<int> remap = relset.map_onto(table);
  std::vector<std::vector<const Relation*>> rels = relations_by_tree_type(table, relset);
  bool root_covered = !rels[table.assignment[0]].empty();

  int required_levels = root_covered ? h - 1 : h;
  if (prefix.levels() < required_levels)
    throw InsufficientError("extend: prefix has " + std::to_string(prefix.levels()) +
                            " decorated levels, needs " + std::to_string(required_levels));

  std::uint64_t copied = std::min<std::uint64_t>(prefix.size(), out.size());
  for (std::uint64_t i = 0; i < copied; ++i) out.set_decoration(i, prefix.decoration(i));

  int first_new = prefix.levels() + 1;
  for (int m = first_new; m <= target_levels; ++m) {
    for (std::uint64_t node = out.level_begin(m); node < out.level_end(m); ++node) {
      // Ancestor at level m-h and the length-h path down to this node.
      Word leaf(h);
      std::uint64_t anc = node;
      for (int i = h - 1; i >= 0; --i) {
        leaf[i] = out.edge(anc);
        anc = out.parent(anc);
      }
      int type_id = table.assignment[anc];
      const Relation* rel = nullptr;
      for (const Relation* r : rels[type_id])
        if (r->leaf == leaf) {
          rel = r;
          break;
        }
      if (!rel)
        throw InsufficientError("extend: no relation for leaf " + sys.word_str(leaf) +
                                " of type " + std::to_string(type_id) + " (node " +
                                std::to_string(node) + ")");
      Rat value(0);
      for (const auto& [w, c] : rel->coeffs)
        value += c * out.decoration(out.descend(anc, w));
      out.set_decoration(node, std::move(value));
    }
  }
  out.mark_decorated();
  return out;
}

nlohmann::ordered_json violations_to_json(const std::vector<Violation>& violations,
                                          const NumerationSystem& sys) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& v : violations) {
    nlohmann::ordered_json e;
    e["occurrence_root"] = v.occurrence_root;
    e["leaf"] = sys.word_str(v.leaf);
    e["expected"] = rat_str(v.expected);
    e["actual"] = rat_str(v.actual);
    j.push_back(std::move(e));
  }
  return j;
}

}  // namespace numertree
