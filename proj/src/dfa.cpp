#include "numertree/dfa.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "numertree/errors.hpp"

namespace numertree {

int Dfa::alphabet_index(Digit d) const {
  auto it = std::lower_bound(alphabet.begin(), alphabet.end(), d);
  if (it == alphabet.end() || *it != d) return -1;
  return static_cast<int>(it - alphabet.begin());
}

int Dfa::step(int state, Digit d) const {
  int a = alphabet_index(d);
  if (a < 0) return -1;
  return next[state][a];
}

bool Dfa::accepts_prefixes(const Word& w) const {
  int s = initial;
  for (Digit d : w) {
    s = step(s, d);
    if (s < 0) return false;
  }
  return true;
}

void Dfa::validate() const {
  if (next.empty()) throw ParseError("dfa: no states");
  if (initial < 0 || initial >= states()) throw ParseError("dfa: bad initial state");
  if (!std::is_sorted(alphabet.begin(), alphabet.end()) ||
      std::adjacent_find(alphabet.begin(), alphabet.end()) != alphabet.end())
    throw ParseError("dfa: alphabet must be strictly ascending");
  for (const auto& row : next) {
    if (row.size() != alphabet.size()) throw ParseError("dfa: ragged transition table");
    for (int t : row)
      if (t < -1 || t >= states()) throw ParseError("dfa: transition target out of range");
  }
  // Reachability: every state must be live (all states accept, so trim
  // reduces to reachability from the initial state).
  std::vector<bool> seen(states(), false);
  std::queue<int> q;
  q.push(initial);
  seen[initial] = true;
  while (!q.empty()) {
    int s = q.front();
    q.pop();
    for (int t : next[s])
      if (t >= 0 && !seen[t]) {
        seen[t] = true;
        q.push(t);
      }
  }
  for (int s = 0; s < states(); ++s)
    if (!seen[s]) throw ParseError("dfa: unreachable state " + std::to_string(s));
}

nlohmann::ordered_json Dfa::to_json() const {
  nlohmann::ordered_json j;
  j["alphabet"] = alphabet;
  j["states"] = states();
  j["initial"] = initial;
  auto& tr = j["transitions"] = nlohmann::ordered_json::array();
  for (int s = 0; s < states(); ++s)
    for (std::size_t a = 0; a < alphabet.size(); ++a)
      if (next[s][a] >= 0) tr.push_back({s, alphabet[a], next[s][a]});
  return j;
}

Dfa Dfa::from_json(const nlohmann::ordered_json& j) {
  Dfa d;
  try {
    d.alphabet = j.at("alphabet").get<std::vector<Digit>>();
    int states = j.at("states").get<int>();
    d.initial = j.at("initial").get<int>();
    d.next.assign(states, std::vector<int>(d.alphabet.size(), -1));
    for (const auto& t : j.at("transitions")) {
      int from = t.at(0).get<int>();
      Digit digit = t.at(1).get<Digit>();
      int to = t.at(2).get<int>();
      if (from < 0 || from >= states || to < 0 || to >= states)
        throw ParseError("dfa json: state out of range");
      int a = d.alphabet_index(digit);
      if (a < 0) throw ParseError("dfa json: digit not in alphabet");
      if (d.next[from][a] != -1) throw ParseError("dfa json: duplicate transition");
      d.next[from][a] = to;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("dfa json: ") + e.what());
  }
  d.validate();
  return d;
}

Dfa minimize(const Dfa& dfa) {
  dfa.validate();
  const int n = dfa.states();
  const int sink = n;  // implicit rejecting sink to totalize
  const std::size_t asz = dfa.alphabet.size();

  // Moore partition refinement over the totalized automaton. Initial split:
  // accepting states vs the sink.
  std::vector<int> cls(n + 1, 0);
  cls[sink] = 1;
  int classes = 2;
  for (;;) {
    std::map<std::vector<int>, int> sig_to_class;
    std::vector<int> next_cls(n + 1);
    for (int s = 0; s <= n; ++s) {
      std::vector<int> sig;
      sig.reserve(asz + 1);
      sig.push_back(cls[s]);
      for (std::size_t a = 0; a < asz; ++a) {
        int t = (s == sink) ? sink : (dfa.next[s][a] < 0 ? sink : dfa.next[s][a]);
        sig.push_back(cls[t]);
      }
      auto [it, inserted] = sig_to_class.emplace(std::move(sig), static_cast<int>(sig_to_class.size()));
      next_cls[s] = it->second;
    }
    int new_classes = static_cast<int>(sig_to_class.size());
    cls = std::move(next_cls);
    if (new_classes == classes) break;
    classes = new_classes;
  }

  // Renumber reachable non-sink classes breadth-first from the initial class.
  int sink_cls = cls[sink];
  std::map<int, int> number;
  std::vector<int> order;
  std::queue<int> q;
  number[cls[dfa.initial]] = 0;
  order.push_back(cls[dfa.initial]);
  q.push(dfa.initial);
  std::vector<int> repr_state(classes, -1);
  for (int s = 0; s < n; ++s)
    if (repr_state[cls[s]] < 0) repr_state[cls[s]] = s;
  std::set<int> visited{cls[dfa.initial]};
  while (!q.empty()) {
    int s = q.front();
    q.pop();
    for (std::size_t a = 0; a < asz; ++a) {
      int t = dfa.next[s][a];
      if (t < 0) continue;
      if (visited.insert(cls[t]).second) {
        number[cls[t]] = static_cast<int>(order.size());
        order.push_back(cls[t]);
        q.push(repr_state[cls[t]]);
      }
    }
  }

  Dfa out;
  out.alphabet = dfa.alphabet;
  out.initial = 0;
  out.next.assign(order.size(), std::vector<int>(asz, -1));
  for (std::size_t i = 0; i < order.size(); ++i) {
    int s = repr_state[order[i]];
    for (std::size_t a = 0; a < asz; ++a) {
      int t = dfa.next[s][a];
      if (t < 0 || cls[t] == sink_cls) continue;
      out.next[i][a] = number.at(cls[t]);
    }
  }
  out.validate();
  return out;
}

}  // namespace numertree
