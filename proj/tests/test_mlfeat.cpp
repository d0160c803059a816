#include "doctest.h"

#include <cmath>

#include "united/mlfeat.hpp"
#include "united/syntax.hpp"

#include "helpers.hpp"

using namespace united;
using namespace testutil;

namespace {

Sequent goal_sequent(const Theory& th, const std::string& name) {
  return root_sequent(th.goal(name)->formula);
}

FeatureExprPtr fexpr(const std::string& line) {
  FeatureSet fs = parse_features(line);
  REQUIRE(fs.size() == 1);
  return fs.exprs.front();
}

}  // namespace

TEST_CASE("all induction variables are datatype variables") {
  Theory th = load_theory("listrev.thy");
  FeatureExprPtr all_dt = fexpr("all induction-var t . is_datatype_var(t)");
  Sequent s = goal_sequent(th, "app_nil");
  for (const auto& args : candidate_applications(s, th, {}))
    CHECK(eval_feature(all_dt, s, args, th));
}

TEST_CASE("recursion-position feature fires on app's first argument") {
  Theory th = load_theory("listrev.thy");
  FeatureExprPtr rec = fexpr(
      "some induction-var v . some occurrence o of v . some function f . "
      "at_rec_argpos(o, f)");
  Sequent s = goal_sequent(th, "app_nil");
  CHECK(eval_feature(rec, s, InductArgs{{"xs"}, {}, std::nullopt}, th));
}

TEST_CASE("accumulator feature fires for the generalized itrev argument") {
  Theory th = load_theory("corpus.thy");
  FeatureExprPtr acc = fexpr(
      "some arbitrary-var v . some occurrence o of v . some function f . "
      "at_varying_argpos(o, f)");
  Sequent s = goal_sequent(th, "itrev_gen");
  CHECK(eval_feature(acc, s, InductArgs{{"xs"}, {"ys"}, std::nullopt}, th));
  CHECK_FALSE(eval_feature(acc, s, InductArgs{{"ys"}, {"xs"}, std::nullopt}, th));
  CHECK_FALSE(eval_feature(acc, s, InductArgs{{"xs"}, {}, std::nullopt}, th));
}

TEST_CASE("recursion and accumulator positions of the benchmark functions") {
  Theory th = load_theory("listrev.thy");
  CHECK(recursion_positions(*th.function("add")) ==
        std::vector<std::size_t>{0});
  CHECK(varying_positions(*th.function("add")).empty());
  CHECK(recursion_positions(*th.function("itrev")) ==
        std::vector<std::size_t>{0});
  CHECK(varying_positions(*th.function("itrev")) ==
        std::vector<std::size_t>{1});
  CHECK(varying_positions(*th.function("app")).empty());
  CHECK(varying_positions(*th.function("rev")).empty());
}

TEST_CASE("default feature vector of the app_nil candidate") {
  Theory th = load_theory("listrev.thy");
  FeatureSet fs = default_feature_set();
  REQUIRE(fs.size() == 10);
  Sequent s = goal_sequent(th, "app_nil");
  FeatureVector v = extract(s, InductArgs{{"xs"}, {}, std::nullopt}, fs, th);
  CHECK(v == FeatureVector{true, true, true, false, true, true, true, false,
                           false, false});
}

TEST_CASE("empty feature set gives an empty vector") {
  Theory th = load_theory("listrev.thy");
  Sequent s = goal_sequent(th, "app_nil");
  CHECK(extract(s, InductArgs{{"xs"}, {}, std::nullopt}, FeatureSet{}, th)
            .empty());
}

TEST_CASE("extraction is deterministic") {
  Theory th = load_theory("corpus.thy");
  FeatureSet fs = default_feature_set();
  Sequent s = goal_sequent(th, "itrev_gen");
  for (const auto& args : candidate_applications(s, th, {}))
    CHECK(extract(s, args, fs, th) == extract(s, args, fs, th));
}

TEST_CASE("score is the weighted sum of true features") {
  Weights w{{1.0, 5.0, -0.5}};
  CHECK(score(FeatureVector{false, false, false}, w) == doctest::Approx(0.0));
  CHECK(score(FeatureVector{true, false, true}, w) == doctest::Approx(0.5));
  CHECK_THROWS_AS(score(FeatureVector{true}, w), std::invalid_argument);
}

TEST_CASE("shipped weights rank the generalized itrev candidates sensibly") {
  Theory th = load_theory("corpus.thy");
  FeatureSet fs = default_feature_set();
  Weights w = default_weights();
  REQUIRE(w.values.size() == fs.size());
  Sequent s = goal_sequent(th, "itrev_gen");
  auto scored = [&](const InductArgs& args) {
    return score(extract(s, args, fs, th), w);
  };
  // values frozen from the shipped feature set and weights
  CHECK(scored(InductArgs{{"xs"}, {}, std::nullopt}) == doctest::Approx(4.75));
  CHECK(scored(InductArgs{{"xs"}, {"ys"}, std::nullopt}) ==
        doctest::Approx(7.25));
  CHECK(scored(InductArgs{{"ys"}, {}, std::nullopt}) == doctest::Approx(-0.25));
  CHECK(scored(InductArgs{{"ys"}, {"xs"}, std::nullopt}) ==
        doctest::Approx(-1.75));
  CHECK(scored(InductArgs{{"xs", "ys"}, {}, "itrev"}) == doctest::Approx(1.75));
  CHECK(scored(InductArgs{{"xs"}, {}, "rev"}) == doctest::Approx(5.25));
  // the generalizing candidate beats plain induction on the accumulator
  CHECK(scored(InductArgs{{"xs"}, {"ys"}, std::nullopt}) >
        scored(InductArgs{{"ys"}, {}, std::nullopt}));
}

TEST_CASE("rank sorts by score with stable ties") {
  Theory th = load_theory("corpus.thy");
  FeatureSet fs = default_feature_set();
  Weights w = default_weights();
  Sequent s = goal_sequent(th, "itrev_gen");
  std::vector<std::pair<InductArgs, FeatureVector>> cands;
  for (const auto& args : candidate_applications(s, th, {}))
    cands.emplace_back(args, extract(s, args, fs, th));
  auto ranked = rank(cands, w);
  REQUIRE(ranked.size() == cands.size());
  for (std::size_t i = 1; i < ranked.size(); ++i)
    CHECK(ranked[i - 1].second >= ranked[i].second);
  CHECK(ranked.front().first ==
        InductArgs{{"xs"}, {"ys"}, std::optional<std::string>("rev")});
}

TEST_CASE("shipped data files match the embedded defaults") {
  FeatureSet file_features =
      parse_features(read_file(std::string(SHIPPED_DATA_DIR) + "/features.txt"));
  FeatureSet embedded = default_feature_set();
  REQUIRE(file_features.size() == embedded.size());
  CHECK(file_features.names == embedded.names);
  Weights file_weights =
      parse_weights(read_file(std::string(SHIPPED_DATA_DIR) + "/weights.txt"));
  CHECK(file_weights.values == default_weights().values);
}

TEST_CASE("empty corpus fits to all-zero weights") {
  FeatureSet fs = default_feature_set();
  Weights w = fit_weights({}, fs, {});
  for (double v : w.values) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("single-example corpus reproduces the smoothed log-odds") {
  Theory th = load_theory("listrev.thy");
  FeatureSet fs = default_feature_set();
  FitExample ex{&th, root_sequent(th.goal("app_nil")->formula),
                InductArgs{{"xs"}, {}, std::nullopt}};
  Weights w = fit_weights({ex}, fs, {});
  // P = 1, N = 0 (the goal has exactly one candidate). A feature true on
  // the sole positive gets log(2/3) - log(1/2), a false one log(1/3) - log(1/2).
  double pos = std::log(2.0 / 3.0) - std::log(1.0 / 2.0);
  double neg = std::log(1.0 / 3.0) - std::log(1.0 / 2.0);
  FeatureVector v = extract(ex.root, ex.chosen, fs, th);
  for (std::size_t i = 0; i < fs.size(); ++i)
    CHECK(w.values[i] == doctest::Approx(v[i] ? pos : neg));
}

TEST_CASE("chosen candidates outside the enumerated space are rejected") {
  Theory th = load_theory("listrev.thy");
  FitExample ex{&th, root_sequent(th.goal("app_nil")->formula),
                InductArgs{{"xs"}, {}, "app"}};
  CHECK_THROWS_AS(fit_weights({ex}, default_feature_set(), {}), UnknownChoice);
}

TEST_CASE("fitted weights are always finite") {
  Theory th = load_theory("corpus.thy");
  FeatureSet fs = default_feature_set();
  Rng rng(43);
  std::vector<std::string> goals = {"app_nil",  "app_assoc", "itrev_gen",
                                    "len_app",  "rev_rev",   "add_comm"};
  for (int iter = 0; iter < 30; ++iter) {
    std::vector<FitExample> corpus;
    std::size_t n = 1 + rng.below(goals.size());
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& g = goals[rng.below(goals.size())];
      Sequent root = root_sequent(th.goal(g)->formula);
      auto cands = candidate_applications(root, th, {});
      corpus.push_back(FitExample{&th, root, cands[rng.below(cands.size())]});
    }
    Weights w = fit_weights(corpus, fs, {});
    for (double v : w.values) CHECK(std::isfinite(v));
  }
}

TEST_CASE("shifting an always-true feature's weight keeps the ranking") {
  Theory th = load_theory("corpus.thy");
  FeatureSet fs = default_feature_set();
  Weights w = default_weights();
  Sequent s = goal_sequent(th, "itrev_gen");
  std::vector<std::pair<InductArgs, FeatureVector>> cands;
  for (const auto& args : candidate_applications(s, th, {}))
    cands.emplace_back(args, extract(s, args, fs, th));
  // feature 0 (all inducted variables are datatype variables) holds for
  // every candidate here
  for (const auto& [args, v] : cands) REQUIRE(v[0]);
  Weights shifted = w;
  shifted.values[0] += 17.5;
  auto before = rank(cands, w);
  auto after = rank(cands, shifted);
  REQUIRE(before.size() == after.size());
  for (std::size_t i = 0; i < before.size(); ++i)
    CHECK(before[i].first == after[i].first);
}

TEST_CASE("feature evaluation is total on random sequents") {
  Theory th = load_theory("corpus.thy");
  FeatureSet fs = default_feature_set();
  Rng rng(47);
  for (int iter = 0; iter < 100; ++iter) {
    Sequent s = root_sequent(random_formula(th, rng));
    for (const auto& args : candidate_applications(s, th, InductLimits{1}))
      (void)extract(s, args, fs, th);
  }
}

TEST_CASE("feature parser rejects malformed assertions") {
  CHECK_THROWS(parse_features("some induction-var v ."));
  CHECK_THROWS(parse_features("unknown_pred(v)"));
  CHECK_THROWS(parse_features("count_on <= many"));
  CHECK_THROWS(parse_features("some occurrence o . uses_rule"));
}
