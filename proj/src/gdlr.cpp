#include "numertree/gdlr.hpp"

#include <algorithm>
#include <set>

#include "numertree/errors.hpp"

namespace numertree {

std::size_t Gdlr::index_of(const Word& w) const {
  auto it = std::lower_bound(index_words.begin(), index_words.end(), w, radix_less);
  if (it == index_words.end() || *it != w)
    throw ParseError("word not in the representation index set");
  return static_cast<std::size_t>(it - index_words.begin());
}

namespace {

// Step matrix from `type` through `letter`: copy rows for target words of
// length <= h-2, relation rows for length h-1, zero rows for words outside
// the child's domain.
RatMatrix step_matrix(const Gdlr& g, const RelationSet& relset,
                      const RelationSet::TypeInfo& type, Digit letter) {
  const int h = g.h;
  const std::size_t dim = g.index_words.size();
  RatMatrix m(dim, dim);
  auto in_domain = [&type](const Word& w) {
    return std::find(type.domain.begin(), type.domain.end(), w) != type.domain.end();
  };
  for (std::size_t row = 0; row < dim; ++row) {
    const Word& z = g.index_words[row];
    Word az;
    az.reserve(z.size() + 1);
    az.push_back(letter);
    az.insert(az.end(), z.begin(), z.end());
    if (static_cast<int>(z.size()) <= h - 2) {
      if (in_domain(az)) m.at(row, g.index_of(az)) = 1;
    } else {
      if (!in_domain(az)) continue;
      const Relation* rel = relset.find_relation(type.id, az);
      if (!rel)
        throw InsufficientError("missing relation for leaf " + word_str(az) + " of type " +
                                std::to_string(type.id));
      for (const auto& [v, c] : rel->coeffs) m.at(row, g.index_of(v)) += c;
    }
  }
  return m;
}

}  // namespace

Gdlr build_gdlr(const NumerationSystem& sys, const RelationSet& relset, const TreePrefix& tree) {
  {
    auto violations = verify(tree, relset);
    if (!violations.empty())
      throw InsufficientError("relation set has " + std::to_string(violations.size()) +
                              " violations on the supplied tree; refusing to compile");
  }
  const int h = relset.h;
  if (tree.levels() < h - 1) throw InsufficientError("tree too shallow for the initial vector");

  Gdlr g;
  g.h = h;
  g.system = sys.spec();
  g.mode = sys.is_rational() ? Gdlr::Mode::Window : Gdlr::Mode::Typed;

  // D: words of length < h in the union of type domains, root factor
  // included so short representations stay expressible.
  std::set<Word, decltype(&radix_less)> words(&radix_less);
  for (const auto& t : relset.types)
    for (const Word& w : t.domain)
      if (static_cast<int>(w.size()) < h) words.insert(w);
  for (const Word& w : factor_domain(tree, 0, std::min(h - 1, tree.levels())))
    words.insert(w);
  g.index_words.assign(words.begin(), words.end());

  // Initial vector: decorations of the height-(h-1) prefix, zero at words
  // the language does not realize.
  g.initial.assign(g.index_words.size(), Rat(0));
  for (std::size_t i = 0; i < g.index_words.size(); ++i) {
    std::uint64_t node = tree.node_at(g.index_words[i]);
    if (node != TreePrefix::npos) g.initial[i] = tree.decoration(node);
  }

  // Output rows: one characteristic row per word of D.
  for (std::size_t i = 0; i < g.index_words.size(); ++i) {
    RatVector row(g.index_words.size(), Rat(0));
    row[i] = 1;
    g.outputs.emplace(g.index_words[i], std::move(row));
  }

  if (g.mode == Gdlr::Mode::Window) {
    auto windows = window_type_map(sys, h);
    for (const auto& [window, residue] : windows) {
      auto domain = residue_domain(sys, residue, h);
      const RelationSet::TypeInfo* type = relset.find_type_by_domain(domain);
      if (!type)
        throw InsufficientError("no relation type matches the residue class of window " +
                                sys.word_str(window));
      Gdlr::StepKey key;
      key.window = window;
      g.steps.emplace(key, step_matrix(g, relset, *type, window[0]));
    }
  } else {
    // Factor domains are a function of the DFA state; map states to types
    // and read the type transition off the automaton.
    const Dfa& dfa = sys.automaton();
    std::vector<std::vector<Word>> state_domain(dfa.states());
    std::vector<int> state_type(dfa.states(), -1);
    for (int s = 0; s < dfa.states(); ++s) {
      // Reachable relative words from s, breadth-first.
      std::vector<Word> domain{{}};
      std::vector<std::pair<int, Word>> frontier{{s, {}}};
      for (int d = 0; d < h; ++d) {
        std::vector<std::pair<int, Word>> next;
        for (const auto& [st, w] : frontier)
          for (std::size_t a = 0; a < dfa.alphabet.size(); ++a) {
            int to = dfa.next[st][a];
            if (to < 0) continue;
            Word cw = w;
            cw.push_back(dfa.alphabet[a]);
            domain.push_back(cw);
            next.emplace_back(to, std::move(cw));
          }
        frontier = std::move(next);
      }
      state_domain[s] = std::move(domain);
      const RelationSet::TypeInfo* type = relset.find_type_by_domain(state_domain[s]);
      state_type[s] = type ? type->id : -1;
    }
    g.root_type = state_type[dfa.initial];
    if (g.root_type < 0)
      throw InsufficientError("relation set does not cover the initial factor type");
    for (int s = 0; s < dfa.states(); ++s) {
      if (state_type[s] < 0)
        throw InsufficientError("relation set does not cover the factor type of state " +
                                std::to_string(s));
      for (std::size_t a = 0; a < dfa.alphabet.size(); ++a) {
        int to = dfa.next[s][a];
        if (to < 0) continue;
        std::pair<int, Digit> tkey{state_type[s], dfa.alphabet[a]};
        auto it = g.type_transition.find(tkey);
        if (it != g.type_transition.end()) {
          if (it->second != state_type[to])
            throw InsufficientError(
                "type transitions are ambiguous at this height; increase h");
          continue;
        }
        g.type_transition.emplace(tkey, state_type[to]);
        const RelationSet::TypeInfo* type = relset.find_type(state_type[s]);
        Gdlr::StepKey key;
        key.type = state_type[s];
        key.digit = dfa.alphabet[a];
        g.steps.emplace(key, step_matrix(g, relset, *type, dfa.alphabet[a]));
      }
    }
  }
  return g;
}

EvalResult eval_word_counted(const Gdlr& g, const NumerationSystem& sys, const Word& w) {
  Int value = sys.val(w);  // validates; throws WordError on bad input
  (void)value;
  EvalResult result;
  const int h = g.h;
  if (static_cast<int>(w.size()) <= h - 1) {
    auto it = g.outputs.find(w);
    if (it == g.outputs.end()) throw ParseError("no output row for short representation");
    Rat acc(0);
    for (std::size_t i = 0; i < it->second.size(); ++i)
      if (it->second[i] != 0) acc += it->second[i] * g.initial[i];
    result.value = acc;
    return result;
  }
  RatVector vec = g.initial;
  if (g.mode == Gdlr::Mode::Window) {
    for (std::size_t i = 0; i + h <= w.size(); ++i) {
      Gdlr::StepKey key;
      key.window.assign(w.begin() + i, w.begin() + i + h);
      auto it = g.steps.find(key);
      if (it == g.steps.end())
        throw ParseError("no step matrix for window " + sys.word_str(key.window));
      vec = mat_vec(it->second, vec);
      ++result.matrix_products;
    }
  } else {
    int type = g.root_type;
    for (std::size_t i = 0; i + h <= w.size(); ++i) {
      Gdlr::StepKey key;
      key.type = type;
      key.digit = w[i];
      auto it = g.steps.find(key);
      if (it == g.steps.end())
        throw ParseError("no step matrix for type " + std::to_string(type) + " and digit " +
                         std::to_string(w[i]));
      vec = mat_vec(it->second, vec);
      ++result.matrix_products;
      type = g.type_transition.at({type, w[i]});
    }
  }
  Word suffix(w.end() - (h - 1), w.end());
  auto it = g.outputs.find(suffix);
  if (it == g.outputs.end()) throw ParseError("no output row for suffix " + sys.word_str(suffix));
  Rat acc(0);
  for (std::size_t i = 0; i < it->second.size(); ++i)
    if (it->second[i] != 0) acc += it->second[i] * vec[i];
  result.value = acc;
  return result;
}

Rat eval_word(const Gdlr& g, const NumerationSystem& sys, const Word& w) {
  return eval_word_counted(g, sys, w).value;
}

Rat eval(const Gdlr& g, const NumerationSystem& sys, const Int& n) {
  return eval_word(g, sys, sys.rep(n));
}

nlohmann::ordered_json Gdlr::to_json(const NumerationSystem& sys) const {
  nlohmann::ordered_json j;
  j["system"] = system;
  j["h"] = h;
  j["mode"] = mode == Mode::Window ? "window" : "typed";
  auto& idx = j["index"] = nlohmann::ordered_json::array();
  for (const Word& w : index_words) idx.push_back(sys.word_str(w));
  auto& init = j["initial"] = nlohmann::ordered_json::array();
  for (const Rat& r : initial) init.push_back(rat_str(r));
  auto& st = j["steps"] = nlohmann::ordered_json::object();
  for (const auto& [key, m] : steps) {
    std::string name = mode == Mode::Window
                           ? "window:" + sys.word_str(key.window)
                           : "type:" + std::to_string(key.type) +
                                 ",digit:" + std::to_string(key.digit);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(rat_str(m.at(i, k)));
      rows.push_back(std::move(row));
    }
    st[name] = std::move(rows);
  }
  if (mode == Mode::Typed) {
    j["root_type"] = root_type;
    auto& tr = j["transitions"] = nlohmann::ordered_json::object();
    for (const auto& [key, to] : type_transition)
      tr["type:" + std::to_string(key.first) + ",digit:" + std::to_string(key.second)] = to;
  }
  auto& outs = j["outputs"] = nlohmann::ordered_json::object();
  for (const auto& [w, row] : outputs) {
    nlohmann::ordered_json rj = nlohmann::ordered_json::array();
    for (const Rat& r : row) rj.push_back(rat_str(r));
    outs[sys.word_str(w)] = std::move(rj);
  }
  return j;
}

Gdlr Gdlr::from_json(const nlohmann::ordered_json& j, const NumerationSystem& sys) {
  Gdlr g;
  try {
    g.system = j.at("system").get<std::string>();
    g.h = j.at("h").get<int>();
    g.mode = j.at("mode").get<std::string>() == "window" ? Mode::Window : Mode::Typed;
    for (const auto& wj : j.at("index")) g.index_words.push_back(sys.word_parse(wj));
    for (const auto& rj : j.at("initial")) g.initial.push_back(rat_parse(rj));
    for (const auto& [name, rows] : j.at("steps").items()) {
      StepKey key;
      if (name.rfind("window:", 0) == 0) {
        key.window = sys.word_parse(name.substr(7));
      } else if (name.rfind("type:", 0) == 0) {
        auto comma = name.find(",digit:");
        key.type = std::stoi(name.substr(5, comma - 5));
        key.digit = std::stoi(name.substr(comma + 7));
      } else {
        throw ParseError("bad step key: " + name);
      }
      RatMatrix m(rows.size(), g.index_words.size());
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < g.index_words.size(); ++k)
          m.at(i, k) = rat_parse(rows[i][k]);
      g.steps.emplace(key, std::move(m));
    }
    if (g.mode == Mode::Typed) {
      g.root_type = j.at("root_type").get<int>();
      for (const auto& [name, to] : j.at("transitions").items()) {
        auto comma = name.find(",digit:");
        g.type_transition[{std::stoi(name.substr(5, comma - 5)),
                           std::stoi(name.substr(comma + 7))}] = to.get<int>();
      }
    }
    for (const auto& [name, row] : j.at("outputs").items()) {
      RatVector r;
      for (const auto& e : row) r.push_back(rat_parse(e));
      g.outputs.emplace(sys.word_parse(name), std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("gdlr json: ") + e.what());
  }
  return g;
}

}  // namespace numertree
