#include "numertree/tree.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "numertree/errors.hpp"

namespace numertree {

int TreePrefix::level_of(std::uint64_t node) const {
  auto it = std::upper_bound(level_offset_.begin(), level_offset_.end(), node);
  return static_cast<int>(it - level_offset_.begin()) - 1;
}

std::uint64_t TreePrefix::child_by_digit(std::uint64_t node, Digit d) const {
  std::uint64_t b = first_child_[node];
  std::uint64_t e = b + child_count_[node];
  for (std::uint64_t c = b; c < e; ++c)
    if (edge_[c] == d) return c;
  return npos;
}

std::uint64_t TreePrefix::descend(std::uint64_t node, const Word& path) const {
  std::uint64_t cur = node;
  for (Digit d : path) {
    cur = child_by_digit(cur, d);
    if (cur == npos) return npos;
  }
  return cur;
}

Word TreePrefix::word_of(std::uint64_t node) const {
  Word w;
  for (std::uint64_t cur = node; cur != 0; cur = parent_[cur]) w.push_back(edge_[cur]);
  std::reverse(w.begin(), w.end());
  return w;
}

std::uint64_t TreePrefix::node_at(const Word& w) const { return descend(0, w); }

TreePrefix build_tree(const NumerationSystem& sys, const SequenceSource* seq, int levels,
                      const BuildOptions& opts) {
  if (levels < 0) throw ParseError("build_tree: negative level count");
  TreePrefix t(sys);
  t.parent_.push_back(TreePrefix::npos);
  t.edge_.push_back(-1);
  t.level_offset_ = {0, 1};

  // Per-node construction state: DFA state for regular systems; otherwise
  // the node value, which breadth-first order makes equal to the node index.
  std::vector<int> state;
  if (sys.is_regular()) state.push_back(sys.dfa().initial);

  for (int l = 0; l < levels; ++l) {
    std::uint64_t begin = t.level_offset_[l];
    std::uint64_t end = t.level_offset_[l + 1];
    for (std::uint64_t node = begin; node < end; ++node) {
      switch (sys.kind()) {
        case NumerationSystem::Kind::IntegerBase: {
          for (Digit a = (node == 0 ? 1 : 0); a < sys.p(); ++a) {
            t.parent_.push_back(node);
            t.edge_.push_back(a);
          }
          break;
        }
        case NumerationSystem::Kind::RationalBase: {
          for (Digit a : sys.children_digits(Int(static_cast<unsigned long>(node)))) {
            t.parent_.push_back(node);
            t.edge_.push_back(a);
          }
          break;
        }
        case NumerationSystem::Kind::Regular: {
          const Dfa& d = sys.dfa();
          for (std::size_t a = 0; a < d.alphabet.size(); ++a) {
            int to = d.next[state[node]][a];
            if (to < 0) continue;
            t.parent_.push_back(node);
            t.edge_.push_back(d.alphabet[a]);
            state.push_back(to);
          }
          break;
        }
      }
      if (t.parent_.size() > opts.node_budget)
        throw BudgetError("tree node budget exceeded (" + std::to_string(opts.node_budget) +
                          " nodes)");
    }
    t.level_offset_.push_back(t.parent_.size());
  }

  t.first_child_.assign(t.size(), 0);
  t.child_count_.assign(t.size(), 0);
  for (std::uint64_t i = 1; i < t.size(); ++i) {
    std::uint64_t p = t.parent_[i];
    if (t.child_count_[p] == 0) t.first_child_[p] = i;
    ++t.child_count_[p];
  }

  if (seq) {
    t.decoration_.resize(t.size());
    for (std::uint64_t i = 0; i < t.size(); ++i) {
      try {
        t.decoration_[i] = seq->term(i);
      } catch (const Error&) {
        throw;
      } catch (const std::exception& e) {
        throw ParseError("decoration for node " + std::to_string(i) + " failed: " + e.what());
      }
    }
    t.decorated_ = true;
  } else {
    t.decoration_.resize(t.size());
  }
  return t;
}

int levels_for_count(const NumerationSystem& sys, std::uint64_t count) {
  // Steps level widths without building any nodes.
  if (count <= 1) return 0;
  int level = 0;
  std::uint64_t total = 1;
  if (sys.is_regular()) {
    const Dfa& d = sys.dfa();
    std::vector<std::uint64_t> freq(d.states(), 0);
    freq[d.initial] = 1;
    while (total < count) {
      std::vector<std::uint64_t> nf(d.states(), 0);
      std::uint64_t width = 0;
      for (int s = 0; s < d.states(); ++s) {
        if (!freq[s]) continue;
        for (std::size_t a = 0; a < d.alphabet.size(); ++a)
          if (d.next[s][a] >= 0) {
            nf[d.next[s][a]] += freq[s];
            width += freq[s];
          }
      }
      if (width == 0) throw ParseError("levels_for_count: finite language");
      total += width;
      freq = std::move(nf);
      ++level;
    }
    return level;
  }
  // Integer and rational bases: breadth-first order makes the values on
  // level l the contiguous interval [S_{l-1}, S_l), so the next width is a
  // per-residue count over that interval times the signature word lengths.
  const int p = sys.p(), q = sys.q();
  if (q == 1) {
    std::uint64_t width = p - 1;
    total += width;
    ++level;
    while (total < count) {
      width *= p;
      total += width;
      ++level;
    }
    return level;
  }
  std::vector<std::size_t> sig_len(q);
  {
    auto sig = sys.signature();
    for (int r = 0; r < q; ++r) sig_len[r] = sig.words[r].size();
  }
  auto congruent_below = [q](std::uint64_t x, int r) -> std::uint64_t {
    // #{v < x : v = r (mod q)}
    if (x <= static_cast<std::uint64_t>(r)) return 0;
    return (x - 1 - r) / q + 1;
  };
  std::uint64_t lo = 0, hi = 1;  // value interval of the current level
  {
    std::uint64_t width = sys.children_digits(Int(0)).size();
    total += width;
    ++level;
    lo = 1;
    hi = 1 + width;
  }
  while (total < count) {
    std::uint64_t width = 0;
    for (int r = 0; r < q; ++r)
      width += sig_len[r] * (congruent_below(hi, r) - congruent_below(lo, r));
    if (width == 0) throw ParseError("levels_for_count: empty level");
    total += width;
    ++level;
    lo = hi;
    hi += width;
  }
  return level;
}

std::vector<Word> factor_domain(const TreePrefix& tree, std::uint64_t node, int h) {
  int node_level = tree.level_of(node);
  if (node_level + h > tree.levels())
    throw InsufficientError("factor of height " + std::to_string(h) + " at level " +
                            std::to_string(node_level) + " needs " +
                            std::to_string(node_level + h) + " built levels, have " +
                            std::to_string(tree.levels()));
  std::vector<Word> domain;
  std::vector<std::pair<std::uint64_t, Word>> frontier{{node, {}}};
  domain.push_back({});
  for (int d = 0; d < h; ++d) {
    std::vector<std::pair<std::uint64_t, Word>> next;
    for (const auto& [n, w] : frontier) {
      std::uint64_t b = tree.first_child(n);
      for (std::uint64_t c = b; c < b + tree.child_count(n); ++c) {
        Word cw = w;
        cw.push_back(tree.edge(c));
        domain.push_back(cw);
        next.emplace_back(c, std::move(cw));
      }
    }
    frontier = std::move(next);
  }
  return domain;
}

Factor factor(const TreePrefix& tree, std::uint64_t node, int h) {
  Factor f;
  f.root = node;
  f.height = h;
  f.domain = factor_domain(tree, node, h);
  if (tree.decorated()) {
    f.decorations.reserve(f.domain.size());
    for (const Word& w : f.domain) f.decorations.push_back(tree.decoration(tree.descend(node, w)));
  }
  return f;
}

namespace {

std::string domain_key(const std::vector<Word>& domain) {
  std::string key;
  for (const Word& w : domain) {
    for (Digit d : w) {
      key += std::to_string(d);
      key += ',';
    }
    key += ';';
  }
  return key;
}

}  // namespace

TypeTable classify(const TreePrefix& tree, int h) {
  TypeTable table;
  table.h = h;
  if (h < 0 || h > tree.levels())
    throw InsufficientError("classify: height " + std::to_string(h) + " exceeds built levels");
  int max_level = tree.levels() - h;
  table.classified_end = tree.level_end(max_level);
  table.assignment.assign(tree.size(), -1);
  std::unordered_map<std::string, int> by_key;
  for (std::uint64_t node = 0; node < table.classified_end; ++node) {
    auto domain = factor_domain(tree, node, h);
    std::string key = domain_key(domain);
    auto it = by_key.find(key);
    if (it == by_key.end()) {
      int id = static_cast<int>(table.types.size());
      by_key.emplace(std::move(key), id);
      table.types.push_back({std::move(domain), node == 0});
      table.assignment[node] = id;
    } else {
      table.assignment[node] = it->second;
      if (node != 0) table.types[it->second].is_root_type = false;
    }
  }
  return table;
}

int count_types(const TreePrefix& tree, int h) {
  return static_cast<int>(classify(tree, h).types.size());
}

std::vector<Word> residue_domain(const NumerationSystem& sys, long long residue, int h) {
  if (!sys.is_rational()) throw ParseError("residue_domain needs a rational base");
  const long long p = sys.p(), q = sys.q();
  long long mod = 1;
  for (int i = 0; i < h; ++i) mod *= q;
  if (residue < 0 || residue >= mod) throw ParseError("residue out of range");
  // A node at depth d below the class root has a residue that is well
  // defined mod q^(h-d); child residue = (p*r + a)/q one modulus step down.
  std::vector<Word> domain{{}};
  std::vector<std::pair<long long, Word>> frontier{{residue, {}}};
  long long level_mod = mod;
  for (int depth = 0; depth < h; ++depth) {
    level_mod /= q;
    std::vector<std::pair<long long, Word>> next;
    for (const auto& [r, w] : frontier) {
      int first = static_cast<int>((q - (p % q) * (r % q) % q) % q);
      for (int a = first; a < p; a += q) {
        long long child = ((p * r + a) / q) % level_mod;
        Word cw = w;
        cw.push_back(a);
        domain.push_back(cw);
        next.emplace_back(child, std::move(cw));
      }
    }
    frontier = std::move(next);
  }
  return domain;
}

std::map<Word, long long> window_type_map(const NumerationSystem& sys, int h) {
  if (!sys.is_rational()) throw ParseError("window_type_map needs a rational base");
  if (h < 1) throw ParseError("window_type_map needs h >= 1");
  long long mod = 1;
  for (int i = 0; i < h; ++i) mod *= sys.q();
  std::map<Word, long long> map;
  for (long long r = 0; r < mod; ++r) {
    for (const Word& w : residue_domain(sys, r, h)) {
      if (static_cast<int>(w.size()) != h) continue;
      auto [it, inserted] = map.emplace(w, r);
      if (!inserted)
        throw ParseError("window " + word_str(w) + " appears in two residue domains");
    }
  }
  return map;
}

std::string render_dot(const TreePrefix& tree) {
  std::ostringstream out;
  out << "digraph numertree {\n  node [shape=\"circle\"];\n";
  for (std::uint64_t i = 0; i < tree.size(); ++i) {
    out << "  n" << i << " [label=\"" << i << ":"
        << (tree.decorated() ? rat_str(tree.decoration(i)) : std::string("?")) << "\"];\n";
  }
  for (std::uint64_t i = 1; i < tree.size(); ++i)
    out << "  n" << tree.parent(i) << " -> n" << i << " [label=\"" << tree.edge(i) << "\"];\n";
  out << "}\n";
  return out.str();
}

std::string render_text(const TreePrefix& tree) {
  std::ostringstream out;
  // Depth-first so indentation reads as tree shape; digits order children.
  std::vector<std::uint64_t> stack{0};
  while (!stack.empty()) {
    std::uint64_t n = stack.back();
    stack.pop_back();
    int level = tree.level_of(n);
    for (int i = 0; i < level; ++i) out << "  ";
    if (n == 0)
      out << "*";
    else
      out << tree.edge(n);
    out << " " << n << ":" << (tree.decorated() ? rat_str(tree.decoration(n)) : std::string("?"))
        << "\n";
    std::uint64_t b = tree.first_child(n);
    for (std::uint64_t c = b + tree.child_count(n); c > b; --c) stack.push_back(c - 1);
  }
  out << "serialization:";
  for (std::uint64_t i = 0; i < tree.size(); ++i)
    out << (i ? "," : " ") << (tree.decorated() ? rat_str(tree.decoration(i)) : std::string("?"));
  out << "\n";
  return out.str();
}

}  // namespace numertree
