#include "united/unite.hpp"

#include <algorithm>
#include <chrono>

#include "united/deduct.hpp"
#include "united/induct.hpp"
#include "united/syntax.hpp"

namespace united {

void StateQueue::push(double priority, ProofState state) {
  heap_.push_back(Entry{priority, next_seqno_++, std::move(state)});
  std::push_heap(heap_.begin(), heap_.end(), less);
}

ProofState StateQueue::pop() {
  std::pop_heap(heap_.begin(), heap_.end(), less);
  ProofState out = std::move(heap_.back().state);
  heap_.pop_back();
  return out;
}

bool StateQueue::less(const Entry& a, const Entry& b) {
  if (a.priority != b.priority) return a.priority < b.priority;
  return a.seqno > b.seqno;
}

std::optional<std::vector<Sequent>> apply_step(const Theory& theory,
                                               const std::vector<Sequent>& goals,
                                               const ProofStep& step,
                                               const SearchConfig& config,
                                               std::string* why_not) {
  auto fail = [&](const std::string& reason) -> std::optional<std::vector<Sequent>> {
    if (why_not) *why_not = reason;
    return std::nullopt;
  };
  if (goals.empty() && step.kind != ProofStep::Kind::Qed)
    return fail("no open goals");

  switch (step.kind) {
    case ProofStep::Kind::Auto: {
      // auto works on every open sequent
      std::vector<Sequent> out;
      bool changed = false;
      for (const auto& s : goals) {
        DeductOutcome r = auto_prove(theory, s, config.deduct);
        if (r.kind == DeductOutcome::Kind::Stuck) {
          out.push_back(s);
        } else {
          changed = true;
          for (auto& res : r.residual) out.push_back(std::move(res));
        }
      }
      if (!changed) return fail("auto made no progress");
      return out;
    }
    case ProofStep::Kind::Simp: {
      DeductOutcome r = simp(theory, goals.front(), config.deduct);
      if (r.kind == DeductOutcome::Kind::Stuck)
        return fail("simp made no progress");
      std::vector<Sequent> out;
      for (auto& res : r.residual) out.push_back(std::move(res));
      out.insert(out.end(), goals.begin() + 1, goals.end());
      return out;
    }
    case ProofStep::Kind::Induct: {
      std::vector<Sequent> cases;
      try {
        cases = apply_induction(goals.front(), step.induct, theory);
      } catch (const InvalidArgs& e) {
        return fail(e.what());
      }
      std::vector<Sequent> out = std::move(cases);
      out.insert(out.end(), goals.begin() + 1, goals.end());
      return out;
    }
    case ProofStep::Kind::Cases: {
      std::vector<Sequent> cases;
      try {
        cases = apply_cases(goals.front(), step.var, theory);
      } catch (const InvalidArgs& e) {
        return fail(e.what());
      }
      std::vector<Sequent> out = std::move(cases);
      out.insert(out.end(), goals.begin() + 1, goals.end());
      return out;
    }
    case ProofStep::Kind::Conjecture: {
      std::vector<Sequent> split =
          insert_conjecture(goals.front(), step.conjecture);
      std::vector<Sequent> out = std::move(split);
      out.insert(out.end(), goals.begin() + 1, goals.end());
      return out;
    }
    case ProofStep::Kind::Qed:
      return fail("qed is handled by the caller");
  }
  return fail("unknown step");
}

namespace {

std::size_t conjecture_size_of(const Formula& f) {
  return f.conclusion.lhs->size() + f.conclusion.rhs->size();
}

// Renames a sequent's variables to v0, v1, ... in first-occurrence order so
// that alpha-variant states collapse to one key.
std::string canonical_sequent_key(const Sequent& s) {
  Subst rename;
  std::size_t counter = 0;
  auto visit = [&](const TypedVar& v) {
    if (!rename.count(v.name))
      rename.emplace(v.name,
                     Term::var("v" + std::to_string(counter++), v.type));
  };
  for (const auto& v : free_vars(s.target)) visit(v);
  for (const auto& h : s.hyps)
    for (const auto& v : free_vars(h.formula)) visit(v);

  Sequent canon;
  canon.target = substitute(s.target, rename);
  for (const auto& h : s.hyps) {
    Hypothesis ch;
    ch.formula = substitute(h.formula, rename);
    for (const auto& name : h.schematic_vars) {
      auto it = rename.find(name);
      ch.schematic_vars.insert(it == rename.end() ? name
                                                  : it->second->name());
    }
    canon.hyps.push_back(std::move(ch));
  }
  return print_sequent(canon);
}

std::string canonical_state_key(const std::vector<Sequent>& goals) {
  std::string key;
  for (const auto& s : goals) {
    key += canonical_sequent_key(s);
    key += '\n';
  }
  return key;
}

}  // namespace

bool conjecture_valuable(const Theory& theory, const Sequent& sequent,
                         const Formula& conjecture,
                         const SearchConfig& config) {
  return filter_conjecture(theory, sequent, conjecture, config).kind ==
         ConjectureVerdict::Kind::Valuable;
}

namespace {

// Refutation outcomes depend only on the conjecture, so one search run
// shares them across states.
struct RefuteCache {
  std::map<std::string, bool> refuted;

  bool is_refuted(const Theory& theory, const Formula& conjecture,
                  const SearchConfig& config) {
    std::string key = print_formula(conjecture);
    auto it = refuted.find(key);
    if (it != refuted.end()) return it->second;
    bool r = find_counterexample(theory, conjecture, config.refute_size,
                                 config.eval_fuel)
                 .has_value();
    refuted.emplace(std::move(key), r);
    return r;
  }
};

}  // namespace

std::vector<std::pair<InductArgs, double>> scored_candidates(
    const Sequent& sequent, const Theory& theory, const SearchConfig& config) {
  std::vector<InductArgs> candidates =
      candidate_applications(sequent, theory, config.induct);
  if (!config.use_ranking) {
    std::vector<std::pair<InductArgs, double>> out;
    for (auto& c : candidates) out.emplace_back(std::move(c), 0.0);
    return out;
  }
  std::vector<std::pair<InductArgs, FeatureVector>> with_features;
  with_features.reserve(candidates.size());
  for (auto& c : candidates) {
    FeatureVector v = extract(sequent, c, config.features, theory);
    with_features.emplace_back(std::move(c), std::move(v));
  }
  return rank(with_features, config.weights);
}

double priority(const ProofState& state, const ProofStep& step,
                double step_score, const SearchConfig& config) {
  (void)step;
  double goal_size = 0;
  for (const auto& s : state.goals) goal_size += formula_size(s.target);
  return config.w_score * step_score - config.w_goal_size * goal_size -
         config.w_depth * static_cast<double>(state.depth) -
         config.w_goal_count * static_cast<double>(state.goals.size());
}

namespace {

std::vector<Expansion> expand_impl(const Theory& theory,
                                   const ProofState& state,
                                   const SearchConfig& config,
                                   std::uint64_t& seqno_counter,
                                   RefuteCache* cache) {
  std::vector<Expansion> out;
  auto child = [&](ProofStep step, std::vector<Sequent> goals,
                   double step_score) {
    ProofState next;
    next.goals = std::move(goals);
    next.log = state.log;
    next.log.push_back(step);
    next.depth = state.depth + 1;
    next.seqno = seqno_counter++;
    double p = priority(next, step, step_score, config);
    out.push_back(Expansion{std::move(step), std::move(next), p});
  };

  // deductive
  if (auto goals = apply_step(theory, state.goals, step_auto(), config))
    child(step_auto(), std::move(*goals), config.deductive_bonus);

  if (state.goals.empty()) return out;
  const Sequent& first = state.goals.front();

  // abductive: conjectures come from stuck sequents only
  if (config.max_conjectures > 0 &&
      auto_prove(theory, first, config.deduct).kind ==
          DeductOutcome::Kind::Stuck) {
    for (const auto& conj : generate_conjectures(first, theory, config)) {
      if (!prove_implication(theory, conj, first, config.deduct)) continue;
      bool refuted = cache ? cache->is_refuted(theory, conj, config)
                           : find_counterexample(theory, conj,
                                                 config.refute_size,
                                                 config.eval_fuel)
                                 .has_value();
      if (refuted) continue;
      ProofStep step = step_conjecture(conj);
      if (auto goals = apply_step(theory, state.goals, step, config))
        child(std::move(step), std::move(*goals),
              -static_cast<double>(conjecture_size_of(conj)) / 4.0);
    }
  }

  // inductive
  auto ranked = scored_candidates(first, theory, config);
  std::size_t k = std::min(config.top_k, ranked.size());
  for (std::size_t i = 0; i < k; ++i) {
    ProofStep step = step_induct(ranked[i].first);
    if (auto goals = apply_step(theory, state.goals, step, config))
      child(std::move(step), std::move(*goals), ranked[i].second);
  }
  return out;
}

}  // namespace

std::vector<Expansion> expand(const Theory& theory, const ProofState& state,
                              const SearchConfig& config,
                              std::uint64_t& seqno_counter) {
  return expand_impl(theory, state, config, seqno_counter, nullptr);
}

SearchResult united_prove(const Theory& theory, const std::string& goal_name,
                          const SearchConfig& config) {
  const NamedFormula* goal = theory.goal(goal_name);
  if (!goal) throw UnknownGoal(goal_name);

  auto start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  };

  SearchResult result;
  if (auto cex = find_counterexample(theory, goal->formula, config.refute_size,
                                     config.eval_fuel)) {
    result.kind = SearchResult::Kind::Refuted;
    result.cex = *cex;
    result.stats.millis = elapsed_ms();
    return result;
  }

  std::uint64_t seqno = 0;
  StateQueue queue;
  std::set<std::string> enqueued;
  ProofState root;
  root.goals.push_back(root_sequent(goal->formula));
  root.seqno = seqno++;
  enqueued.insert(canonical_state_key(root.goals));
  queue.push(0.0, std::move(root));

  std::uint64_t nodes = 0;
  RefuteCache cache;
  while (!queue.empty()) {
    if (nodes >= config.max_nodes ||
        (config.timeout_sec > 0 && elapsed_ms() > config.timeout_sec * 1000)) {
      result.kind = SearchResult::Kind::GaveUp;
      result.reason = SearchResult::GaveUpReason::BudgetExhausted;
      result.stats = {nodes, elapsed_ms()};
      return result;
    }
    ProofState state = queue.pop();
    ++nodes;
    for (auto& e : expand_impl(theory, state, config, seqno, &cache)) {
      if (e.state.goals.empty()) {
        ProofScript script = std::move(e.state.log);
        script.push_back(step_qed());
        result.kind = SearchResult::Kind::Proved;
        result.script =
            minimize_script(theory, goal_name, std::move(script), config);
        result.stats = {nodes, elapsed_ms()};
        return result;
      }
      // alpha-variant states reached twice are searched once
      if (!enqueued.insert(canonical_state_key(e.state.goals)).second)
        continue;
      queue.push(e.prio, std::move(e.state));
    }
  }
  result.kind = SearchResult::Kind::GaveUp;
  result.reason = SearchResult::GaveUpReason::QueueEmpty;
  result.stats = {nodes, elapsed_ms()};
  return result;
}

std::optional<ReplayError> check_script(const Theory& theory,
                                        const std::string& goal_name,
                                        const ProofScript& script,
                                        const SearchConfig& config) {
  const NamedFormula* goal = theory.goal(goal_name);
  if (!goal) return ReplayError{0, "unknown goal '" + goal_name + "'"};

  std::vector<Sequent> goals{root_sequent(goal->formula)};
  for (std::size_t i = 0; i < script.size(); ++i) {
    const ProofStep& step = script[i];
    if (step.kind == ProofStep::Kind::Qed) {
      if (!goals.empty())
        return ReplayError{i + 1, std::to_string(goals.size()) +
                                      " goal(s) remain at qed"};
      if (i + 1 != script.size())
        return ReplayError{i + 2, "steps after qed"};
      return std::nullopt;
    }
    std::string why;
    auto next = apply_step(theory, goals, step, config, &why);
    if (!next) return ReplayError{i + 1, why};
    goals = std::move(*next);
  }
  return ReplayError{script.size(), "script does not end with qed"};
}

ProofScript minimize_script(const Theory& theory, const std::string& goal_name,
                            ProofScript script, const SearchConfig& config) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < script.size(); ++i) {
      if (script[i].kind == ProofStep::Kind::Qed) continue;
      ProofScript candidate;
      candidate.reserve(script.size() - 1);
      for (std::size_t j = 0; j < script.size(); ++j)
        if (j != i) candidate.push_back(script[j]);
      if (!check_script(theory, goal_name, candidate, config)) {
        script = std::move(candidate);
        changed = true;
        break;
      }
    }
  }
  return script;
}

}  // namespace united
