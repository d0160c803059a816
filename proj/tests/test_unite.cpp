#include "doctest.h"

#include "united/syntax.hpp"
#include "united/unite.hpp"

#include "helpers.hpp"

using namespace united;
using namespace testutil;

namespace {

ProofState state_for(const Theory& th, const std::string& goal) {
  ProofState s;
  s.goals.push_back(root_sequent(th.goal(goal)->formula));
  return s;
}

}  // namespace

TEST_CASE("priority decreases with depth, goal size and goal count") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  ProofState shallow = state_for(th, "app_nil");
  ProofState deep = shallow;
  deep.depth = 3;
  ProofStep step = step_auto();
  CHECK(priority(shallow, step, 1.0, config) >
        priority(deep, step, 1.0, config));

  ProofState many = shallow;
  many.goals.push_back(many.goals.front());
  CHECK(priority(shallow, step, 1.0, config) >
        priority(many, step, 1.0, config));

  // a 1.5 score gap translates into a 1.5 priority gap at w_score = 1
  CHECK(priority(shallow, step, 2.0, config) -
            priority(shallow, step, 0.5, config) ==
        doctest::Approx(1.5));
}

TEST_CASE("queue pops by priority with FIFO ties") {
  StateQueue q;
  ProofState a, b, c;
  a.seqno = 0;
  b.seqno = 1;
  c.seqno = 2;
  a.depth = 10;
  b.depth = 20;
  c.depth = 30;
  q.push(1.0, a);
  q.push(2.0, b);
  q.push(2.0, c);
  CHECK(q.pop().depth == 20);  // higher priority first
  CHECK(q.pop().depth == 30);  // FIFO among equal priorities
  CHECK(q.pop().depth == 10);
  CHECK(q.empty());
}

TEST_CASE("queue discipline holds on random workloads") {
  Rng rng(53);
  for (int round = 0; round < 50; ++round) {
    StateQueue q;
    std::vector<std::pair<double, std::uint64_t>> reference;  // prio, order
    std::uint64_t order = 0;
    std::size_t ops = 40;
    for (std::size_t i = 0; i < ops; ++i) {
      if (!q.empty() && rng.below(3) == 0) {
        // reference pop: max priority, min insertion order
        auto best = reference.begin();
        for (auto it = reference.begin(); it != reference.end(); ++it)
          if (it->first > best->first ||
              (it->first == best->first && it->second < best->second))
            best = it;
        ProofState popped = q.pop();
        CHECK(popped.seqno == best->second);
        reference.erase(best);
      } else {
        double prio = static_cast<double>(rng.below(5));
        ProofState s;
        s.seqno = order;
        q.push(prio, s);
        reference.emplace_back(prio, order);
        ++order;
      }
    }
  }
}

TEST_CASE("apply_step auto acts on every open sequent") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  std::vector<Sequent> goals = apply_induction(
      root_sequent(th.goal("app_nil")->formula),
      InductArgs{{"xs"}, {}, std::nullopt}, th);
  REQUIRE(goals.size() == 2);
  auto after = apply_step(th, goals, step_auto(), config);
  REQUIRE(after.has_value());
  CHECK(after->empty());  // both cases close in one auto step
}

TEST_CASE("apply_step fails cleanly when nothing changes") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  std::vector<Sequent> goals{root_sequent(th.goal("rev_rev")->formula)};
  std::string why;
  CHECK_FALSE(apply_step(th, goals, step_auto(), config, &why));
  CHECK(why.find("no progress") != std::string::npos);
  CHECK_FALSE(apply_step(th, {}, step_auto(), config, &why));
}

TEST_CASE("apply_step induct rejects invalid arguments with a reason") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  std::vector<Sequent> goals{root_sequent(th.goal("app_nil")->formula)};
  std::string why;
  CHECK_FALSE(apply_step(th, goals, step_induct(InductArgs{{"zz"}, {}, {}}),
                         config, &why));
  CHECK_FALSE(why.empty());
}

TEST_CASE("expansion of the double-reverse root") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  ProofState root = state_for(th, "rev_rev");
  std::uint64_t seqno = 1;
  auto children = expand(th, root, config, seqno);
  // no deductive child (auto is stuck), no valuable root conjectures,
  // two induction children both inducting on xs
  REQUIRE(children.size() == 2);
  for (const auto& c : children) {
    CHECK(c.step.kind == ProofStep::Kind::Induct);
    CHECK(c.step.induct.on == std::vector<std::string>{"xs"});
    CHECK(c.state.depth == 1);
    CHECK(c.state.log.size() == 1);
  }
}

TEST_CASE("expansion of the stuck step case offers the conjecture") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  ProofState st;
  Sequent stuck;
  stuck.target = fparse(th, "rev (app (rev xs) (Cons x Nil)) = Cons x xs");
  stuck.hyps.push_back(Hypothesis{fparse(th, "rev (rev xs) = xs"), {}});
  stuck.fixed_vars = {{"xs", Type{"list"}}, {"x", Type{"nat"}}};
  st.goals.push_back(stuck);
  std::uint64_t seqno = 1;
  auto children = expand(th, st, config, seqno);
  bool has_conjecture = false;
  for (const auto& c : children)
    if (c.step.kind == ProofStep::Kind::Conjecture) {
      has_conjecture = true;
      CHECK(print_formula(c.step.conjecture) ==
            "rev (app l (Cons n Nil)) = Cons n (rev l)");
      CHECK(c.state.goals.size() == 2);
    }
  CHECK(has_conjecture);
}

TEST_CASE("solved states short-circuit the search") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  SearchResult r = united_prove(th, "app_nil", config);
  REQUIRE(r.kind == SearchResult::Kind::Proved);
  CHECK(r.stats.nodes <= 5);
}

TEST_CASE("united_prove refutes false goals before searching") {
  Theory th = load_theory("rev_id.thy");
  SearchConfig config = default_config();
  SearchResult r = united_prove(th, "rev_id", config);
  REQUIRE(r.kind == SearchResult::Kind::Refuted);
  CHECK(print_term(r.cex.assignment.at("xs")) ==
        "Cons Zero (Cons (Suc Zero) Nil)");
  CHECK(r.stats.nodes == 0);
}

TEST_CASE("united_prove finds the documented app_assoc script") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  SearchResult r = united_prove(th, "app_assoc", config);
  REQUIRE(r.kind == SearchResult::Kind::Proved);
  CHECK(print_script(NamedScript{"app_assoc", r.script}) ==
        "proof app_assoc\ninduct xs\nauto\nqed\n");
}

TEST_CASE("united_prove proves rev_rev through a conjecture") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  SearchResult r = united_prove(th, "rev_rev", config);
  REQUIRE(r.kind == SearchResult::Kind::Proved);
  bool has_conjecture = false, has_induct = false;
  for (const auto& s : r.script) {
    has_conjecture = has_conjecture || s.kind == ProofStep::Kind::Conjecture;
    has_induct = has_induct || s.kind == ProofStep::Kind::Induct;
  }
  CHECK(has_conjecture);
  CHECK(has_induct);
  CHECK(r.script.back().kind == ProofStep::Kind::Qed);
  CHECK_FALSE(check_script(th, "rev_rev", r.script, config).has_value());
}

TEST_CASE("unknown goals raise") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  CHECK_THROWS_AS(united_prove(th, "missing", config), UnknownGoal);
}

TEST_CASE("giving up reports the budget") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  config.max_conjectures = 0;
  config.max_nodes = 50;
  SearchResult r = united_prove(th, "rev_rev", config);
  REQUIRE(r.kind == SearchResult::Kind::GaveUp);
  CHECK(r.reason == SearchResult::GaveUpReason::BudgetExhausted);
  CHECK(r.stats.nodes == 50);
}

TEST_CASE("an exhausted candidate space empties the queue") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  config.max_conjectures = 0;
  config.top_k = 0;  // no induction children either
  SearchResult r = united_prove(th, "rev_rev", config);
  REQUIRE(r.kind == SearchResult::Kind::GaveUp);
  CHECK(r.reason == SearchResult::GaveUpReason::QueueEmpty);
}

TEST_CASE("replay rejects scripts with a deleted step") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  SearchResult r = united_prove(th, "app_assoc", config);
  REQUIRE(r.kind == SearchResult::Kind::Proved);
  // deleting auto leaves goals open at qed
  ProofScript without_auto;
  for (const auto& s : r.script)
    if (s.kind != ProofStep::Kind::Auto) without_auto.push_back(s);
  auto err = check_script(th, "app_assoc", without_auto, config);
  REQUIRE(err.has_value());
  CHECK(err->reason.find("remain") != std::string::npos);
}

TEST_CASE("replay rejects scripts applied to the wrong goal") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  SearchResult r = united_prove(th, "app_assoc", config);
  REQUIRE(r.kind == SearchResult::Kind::Proved);
  CHECK(check_script(th, "rev_rev", r.script, config).has_value());
}

TEST_CASE("replay rejects scripts without qed") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  ProofScript s{step_induct(InductArgs{{"xs"}, {}, std::nullopt}), step_auto()};
  auto err = check_script(th, "app_nil", s, config);
  REQUIRE(err.has_value());
  CHECK(err->reason.find("qed") != std::string::npos);
}

TEST_CASE("replay reproduces the logged goal states step by step") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  SearchResult r = united_prove(th, "rev_rev", config);
  REQUIRE(r.kind == SearchResult::Kind::Proved);
  std::vector<Sequent> goals{root_sequent(th.goal("rev_rev")->formula)};
  for (const auto& step : r.script) {
    if (step.kind == ProofStep::Kind::Qed) {
      CHECK(goals.empty());
      break;
    }
    auto next = apply_step(th, goals, step, config);
    REQUIRE(next.has_value());
    goals = std::move(*next);
  }
}

TEST_CASE("script minimization strips redundant steps") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  ProofScript padded{step_induct(InductArgs{{"xs"}, {}, std::nullopt}),
                     step_simp(), step_auto(), step_qed()};
  REQUIRE_FALSE(check_script(th, "app_nil", padded, config).has_value());
  ProofScript minimal = minimize_script(th, "app_nil", padded, config);
  CHECK(minimal.size() == 3);  // the simp is redundant
  CHECK_FALSE(check_script(th, "app_nil", minimal, config).has_value());
  // nothing else can go: removing any remaining step breaks the proof
  for (std::size_t i = 0; i + 1 < minimal.size(); ++i) {
    ProofScript candidate;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) candidate.push_back(minimal[j]);
    CHECK(check_script(th, "app_nil", candidate, config).has_value());
  }
}

TEST_CASE("single-threaded runs are deterministic") {
  Theory th = load_theory("listrev.thy");
  SearchConfig config = default_config();
  SearchResult a = united_prove(th, "rev_rev", config);
  SearchResult b = united_prove(th, "rev_rev", config);
  REQUIRE(a.kind == SearchResult::Kind::Proved);
  REQUIRE(b.kind == SearchResult::Kind::Proved);
  CHECK(equal(a.script, b.script));
  CHECK(a.stats.nodes == b.stats.nodes);
}

TEST_CASE("proved goals across the corpus survive exhaustive ground testing") {
  Theory th = load_theory("corpus.thy");
  SearchConfig config = default_config();
  Theory working = th;
  std::size_t proved = 0;
  for (const auto& goal : th.goals) {
    SearchResult r = united_prove(working, goal.name, config);
    if (r.kind != SearchResult::Kind::Proved) continue;
    ++proved;
    CHECK(ref_true_up_to(working, goal.formula, 4));
    CHECK_FALSE(check_script(working, goal.name, r.script, config));
    working.lemmas.push_back(NamedFormula{goal.name, goal.formula});
  }
  CHECK(proved == th.goals.size());
}
