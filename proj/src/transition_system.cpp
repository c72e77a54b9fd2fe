#include "transition_system.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dcds {

int TransitionSystem::add_state(Instance db, std::string annotation) {
  states_.push_back({std::move(db), std::move(annotation)});
  succ_.emplace_back();
  return static_cast<int>(states_.size()) - 1;
}

void TransitionSystem::add_edge(int src, int dst, std::string label) {
  if (src < 0 || dst < 0 || src >= static_cast<int>(states_.size()) ||
      dst >= static_cast<int>(states_.size())) {
    throw std::out_of_range("edge endpoint out of range");
  }
  Edge e{src, dst, std::move(label)};
  if (!edge_set_.insert(e).second) return;
  auto& succ = succ_[src];
  if (std::find(succ.begin(), succ.end(), dst) == succ.end()) succ.push_back(dst);
  edges_.push_back(std::move(e));
}

void TransitionSystem::set_initial(int s) {
  if (s < 0 || s >= static_cast<int>(states_.size())) {
    throw std::out_of_range("initial state out of range");
  }
  initial_ = s;
}

std::set<Term> TransitionSystem::adom() const {
  std::set<Term> out;
  for (const State& s : states_) {
    auto a = s.db.adom();
    out.insert(a.begin(), a.end());
  }
  return out;
}

bool operator==(const TransitionSystem& a, const TransitionSystem& b) {
  if (a.initial_ != b.initial_ || a.states_.size() != b.states_.size()) return false;
  for (size_t i = 0; i < a.states_.size(); ++i) {
    if (!(a.states_[i].db == b.states_[i].db) ||
        a.states_[i].annotation != b.states_[i].annotation) {
      return false;
    }
  }
  auto ea = a.edges_;
  auto eb = b.edges_;
  std::sort(ea.begin(), ea.end());
  std::sort(eb.begin(), eb.end());
  return ea == eb;
}

TransitionSystem truncate(const TransitionSystem& ts, int depth) {
  std::map<int, int> dist;
  std::deque<int> queue{ts.initial()};
  dist[ts.initial()] = 0;
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    if (dist[s] >= depth) continue;
    for (int t : ts.successors(s)) {
      if (!dist.count(t)) {
        dist[t] = dist[s] + 1;
        queue.push_back(t);
      }
    }
  }
  TransitionSystem out;
  std::map<int, int> remap;
  for (size_t i = 0; i < ts.state_count(); ++i) {
    int s = static_cast<int>(i);
    if (dist.count(s)) {
      remap[s] = out.add_state(ts.state(s).db, ts.state(s).annotation);
    }
  }
  out.set_initial(remap.at(ts.initial()));
  for (const auto& e : ts.edges()) {
    if (remap.count(e.src) && remap.count(e.dst)) {
      out.add_edge(remap.at(e.src), remap.at(e.dst), e.label);
    }
  }
  return out;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string export_dot(const TransitionSystem& ts) {
  std::ostringstream out;
  out << "digraph ts {\n  rankdir=LR;\n  node [shape=box];\n";
  for (size_t i = 0; i < ts.state_count(); ++i) {
    const auto& st = ts.state(static_cast<int>(i));
    std::ostringstream label;
    bool first = true;
    for (const Fact& f : st.db.facts()) {
      if (!first) label << "\\n";
      first = false;
      label << f.str();
    }
    if (st.db.empty()) label << "(empty)";
    if (!st.annotation.empty()) label << "\\n-- " << st.annotation;
    out << "  s" << i << " [label=\"" << dot_escape(label.str()) << '"';
    if (static_cast<int>(i) == ts.initial()) out << ", peripheries=2";
    out << "];\n";
  }
  auto edges = ts.edges();
  std::sort(edges.begin(), edges.end());
  for (const auto& e : edges) {
    out << "  s" << e.src << " -> s" << e.dst;
    if (!e.label.empty()) out << " [label=\"" << dot_escape(e.label) << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_json(const TransitionSystem& ts) {
  nlohmann::json j;
  j["states"] = nlohmann::json::array();
  for (size_t i = 0; i < ts.state_count(); ++i) {
    const auto& st = ts.state(static_cast<int>(i));
    nlohmann::json js;
    js["id"] = i;
    js["facts"] = nlohmann::json::array();
    for (const Fact& f : st.db.facts()) js["facts"].push_back(f.str());
    if (st.annotation.empty()) {
      js["annotation"] = nullptr;
    } else {
      js["annotation"] = st.annotation;
    }
    j["states"].push_back(std::move(js));
  }
  j["initial"] = ts.initial();
  auto edges = ts.edges();
  std::sort(edges.begin(), edges.end());
  j["edges"] = nlohmann::json::array();
  for (const auto& e : edges) {
    j["edges"].push_back({{"src", e.src}, {"dst", e.dst}, {"label", e.label}});
  }
  return j.dump(2);
}

TsImportResult import_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded()) return {std::nullopt, "invalid JSON"};
  try {
    TransitionSystem ts;
    for (const auto& js : j.at("states")) {
      Instance db;
      for (const auto& fs : js.at("facts")) {
        std::string text = fs.get<std::string>();
        size_t paren = text.find('(');
        if (paren == std::string::npos || text.back() != ')') {
          return {std::nullopt, "malformed fact: " + text};
        }
        Fact fact;
        fact.rel = text.substr(0, paren);
        std::string args = text.substr(paren + 1, text.size() - paren - 2);
        // Split on top-level commas.
        int depth = 0;
        std::string current;
        std::vector<std::string> parts;
        for (char c : args) {
          if (c == '(') ++depth;
          if (c == ')') --depth;
          if (c == ',' && depth == 0) {
            parts.push_back(current);
            current.clear();
          } else {
            current.push_back(c);
          }
        }
        if (!current.empty()) parts.push_back(current);
        for (const std::string& p : parts) {
          std::string err;
          auto t = parse_term(p, &err);
          if (!t) return {std::nullopt, "malformed term '" + p + "': " + err};
          fact.args.push_back(*t);
        }
        db.insert(std::move(fact));
      }
      std::string annotation;
      if (js.contains("annotation") && !js.at("annotation").is_null()) {
        annotation = js.at("annotation").get<std::string>();
      }
      ts.add_state(std::move(db), std::move(annotation));
    }
    ts.set_initial(j.at("initial").get<int>());
    for (const auto& je : j.at("edges")) {
      ts.add_edge(je.at("src").get<int>(), je.at("dst").get<int>(),
                  je.value("label", std::string()));
    }
    return {std::move(ts), ""};
  } catch (const std::exception& e) {
    return {std::nullopt, std::string("malformed transition system JSON: ") + e.what()};
  }
}

bool is_run(const TransitionSystem& ts, const std::vector<int>& states) {
  if (states.empty() || states.front() != ts.initial()) return false;
  for (size_t i = 0; i + 1 < states.size(); ++i) {
    const auto& succ = ts.successors(states[i]);
    if (std::find(succ.begin(), succ.end(), states[i + 1]) == succ.end()) return false;
  }
  return true;
}

}  // namespace dcds
