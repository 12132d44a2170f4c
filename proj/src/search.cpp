#include "hoconc/search.hpp"

#include <deque>
#include <nlohmann/json.hpp>
#include <ostream>
#include <unordered_set>

namespace hoconc {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::BugFound: return "bug-found";
    case Verdict::Exhausted: return "exhausted";
    case Verdict::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

namespace {

std::string outcome_kind(const ConcOutcome& o) {
  if (o.is_value()) return "value";
  if (o.is_exhausted()) return "fuel-exhausted";
  return std::string(to_string(o.bug().kind));
}

nlohmann::json trail_json(const std::vector<MutationRule>& trail) {
  auto j = nlohmann::json::array();
  for (auto r : trail) j.push_back(std::string(to_string(r)));
  return j;
}

struct Entry {
  Store store;
  std::optional<Query> query;
  Path predicted;
  std::vector<MutationRule> trail;
};

}  // namespace

void JsonlTraceWriter::on_run(std::uint64_t iteration, const Store& store, const ConcolicRun& run,
                              const std::vector<MutationRule>& trail, SatStatus solver) {
  nlohmann::json j{{"type", "run"},
                   {"iteration", iteration},
                   {"store", print_store_structure(store)},
                   {"rule", trail.empty() ? "initial" : std::string(to_string(trail.back()))},
                   {"trail", trail_json(trail)},
                   {"solver", solver == SatStatus::Sat ? "sat" : "none"},
                   {"outcome", outcome_kind(run.outcome)},
                   {"path", to_json(run.path)}};
  if (run.outcome.is_value()) j["value"] = print_conc_value(run.outcome.value());
  out_ << j.dump() << "\n";
}

void JsonlTraceWriter::on_event(const std::string& kind, const std::string& detail) {
  out_ << nlohmann::json{{"type", "event"}, {"kind", kind}, {"detail", detail}}.dump() << "\n";
}

void DotPathTree::on_run(std::uint64_t, const Store&, const ConcolicRun& run, const std::vector<MutationRule>&,
                         SatStatus) {
  std::size_t at = 0;
  for (const auto& c : decisions(run.path)) {
    const std::string key = print_constraint(c);
    auto it = nodes_[at].children.find(key);
    if (it == nodes_[at].children.end()) {
      nodes_.push_back(Node{key, {}, {}});
      it = nodes_[at].children.emplace(key, nodes_.size() - 1).first;
    }
    at = it->second;
  }
  nodes_[at].outcome = outcome_kind(run.outcome);
}

void DotPathTree::write(std::ostream& out) const {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  out << "digraph paths {\n  node [shape=box, fontname=monospace];\n";
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    std::string label = nodes_[i].label;
    if (!nodes_[i].outcome.empty()) label += "\n=> " + nodes_[i].outcome;
    out << "  n" << i << " [label=" << quote(label);
    if (nodes_[i].outcome == "error" || nodes_[i].outcome == "stuck") out << ", color=red";
    out << "];\n";
    for (const auto& [key, child] : nodes_[i].children) out << "  n" << i << " -> n" << child << ";\n";
  }
  out << "}\n";
}

bool replay_bug(const Program& program, const Store& store, BugKind kind, std::uint64_t fuel,
                std::string* detail) {
  std::map<std::string, UserValue> inputs;
  for (const auto& in : program.inputs) inputs.emplace(in.name, reify(store, in.name));
  const std::uint64_t replay_fuel = fuel > UINT64_MAX / 10 ? UINT64_MAX : fuel * 10;
  Outcome o = eval_user(program, inputs, replay_fuel);
  if (detail) {
    *detail = o.is_value()       ? "value " + print_value(o.value())
              : o.is_exhausted() ? std::string("fuel exhausted")
                                 : std::string(to_string(o.bug().kind)) + " at " + to_string(o.bug().at);
  }
  return o.is_bug(kind);
}

Report run_search(const Program& program, const SearchConfig& config, SearchObserver* observer) {
  const auto start = std::chrono::steady_clock::now();
  Report report;
  SearchStats& st = report.stats;
  Solver solver(config.solver);
  std::deque<Entry> frontier;
  std::unordered_set<std::string> seen;
  std::vector<std::string> input_names;
  for (const auto& in : program.inputs) input_names.push_back(in.name);

  auto event = [&](const std::string& kind, const std::string& detail) {
    if (observer) observer->on_event(kind, detail);
  };
  auto finish = [&](Verdict v) {
    report.verdict = v;
    st.solver_calls = solver.stats().solver_calls;
    st.cache_hits = solver.stats().cache_hits;
    st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  };

  frontier.push_back(Entry{initial_store(program, config.policy), std::nullopt, {}, {}});

  while (!frontier.empty()) {
    if (st.iterations >= config.max_iterations) return finish(Verdict::BudgetExceeded);
    if (std::chrono::steady_clock::now() - start >= config.timeout) return finish(Verdict::BudgetExceeded);

    Entry entry = std::move(frontier.front());
    frontier.pop_front();
    Store store = std::move(entry.store);
    if (entry.query) {
      SatResult r;
      try {
        r = solver.solve(*entry.query);
      } catch (const ProtocolError& e) {
        event("solver-protocol-error", e.what());
      }
      if (observer) observer->on_query(*entry.query, r);
      if (r.status == SatStatus::Unsat) {
        ++st.unsat;
        continue;
      }
      if (r.status == SatStatus::Unknown) {
        ++st.unknown;
        continue;
      }
      ++st.model_checks;
      if (!model_satisfies(*entry.query, r.model)) {
        ++st.model_violations;
        event("model-violation", to_smtlib(*entry.query));
        continue;
      }
      try {
        store = apply_model(store, r.model);
      } catch (const ImproperResult& e) {
        ++st.properness_violations;
        event("improper-result", e.what());
        continue;
      }
    }
    if (!seen.insert(fingerprint(store)).second) {
      ++st.duplicates;
      continue;
    }
    ++st.properness_checks;
    if (auto v = check_proper(store); !v.empty()) {
      ++st.properness_violations;
      event("improper-store", v.front().detail);
      continue;
    }

    ++st.iterations;
    for (auto r : entry.trail) report.rules_used.insert(r);
    ConcolicRun run = concolic_eval(program, store, config.fuel, config.max_path);
    if (observer) {
      observer->on_run(st.iterations, store, run, entry.trail, entry.query ? SatStatus::Sat : SatStatus::Unknown);
    }

    if (config.verify_predictions && entry.query) {
      ++st.predictions_checked;
      if (!verify_prediction(entry.predicted, run.path)) {
        ++st.prediction_violations;
        event("prediction-violation", "predicted " + print_path(entry.predicted) + " got " + print_path(run.path));
      }
    }

    if (run.outcome.is_bug(BugKind::ExplicitError) ||
        (config.count_stuck_as_bug && run.outcome.is_bug(BugKind::Stuck))) {
      BugReport bug{store, run.outcome.bug(), run.path, entry.trail, false, {}};
      bug.replay_confirmed = replay_bug(program, store, bug.bug.kind, config.fuel, &bug.replay_detail);
      event("bug", print_store(store, input_names));
      report.bug = std::move(bug);
      return finish(Verdict::BugFound);
    }

    for (auto& c : enumerate_mutations(store, run.path, config.policy)) {
      ++st.candidates;
      if (!c.query && seen.count(fingerprint(c.store))) {
        ++st.duplicates;
        continue;
      }
      ++st.properness_checks;
      if (auto v = check_proper(c.store); !v.empty()) {
        ++st.properness_violations;
        event("improper-candidate", v.front().detail);
        continue;
      }
      std::vector<MutationRule> trail = entry.trail;
      trail.insert(trail.end(), c.rules.begin(), c.rules.end());
      frontier.push_back(Entry{std::move(c.store), std::move(c.query), std::move(c.predicted), std::move(trail)});
    }
    if (frontier.size() > config.frontier_cap) {
      const std::size_t drop = frontier.size() - config.frontier_cap;
      frontier.erase(frontier.begin(), frontier.begin() + static_cast<long>(drop));
      st.pruned += drop;
      event("frontier-pruned", std::to_string(drop));
    }
  }
  return finish(Verdict::Exhausted);
}

}  // namespace hoconc
