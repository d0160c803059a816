#include "united/cli.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "united/syntax.hpp"
#include "united/unite.hpp"

namespace united {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CommonOpts {
  std::string config_file;
  std::string weights_file;
  std::string features_file;
  std::uint64_t nodes = 0;
  double timeout = 0;
  long max_conjectures = -1;
  long top_k = -1;
  std::uint64_t seed = 0;  // reserved

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "config file (key = value lines)");
    cmd->add_option("--weights", weights_file, "ranking weights file");
    cmd->add_option("--features", features_file, "feature assertions file");
    cmd->add_option("--nodes", nodes, "node expansion budget");
    cmd->add_option("--timeout", timeout, "wall timeout in seconds");
    cmd->add_option("--max-conjectures", max_conjectures,
                    "conjecture candidates per expansion");
    cmd->add_option("--top-k", top_k, "induction candidates per expansion");
    cmd->add_option("--seed", seed, "reserved");
  }

  SearchConfig build() const {
    SearchConfig config = default_config();
    if (!config_file.empty()) apply_config_text(config, read_file(config_file));
    if (!features_file.empty())
      config.features = parse_features(read_file(features_file));
    if (!weights_file.empty())
      config.weights = parse_weights(read_file(weights_file));
    if (config.features.size() != config.weights.values.size())
      throw std::runtime_error("feature set and weights differ in length");
    if (nodes > 0) config.max_nodes = nodes;
    if (timeout > 0) config.timeout_sec = timeout;
    if (max_conjectures >= 0)
      config.max_conjectures = static_cast<std::size_t>(max_conjectures);
    if (top_k >= 0) config.top_k = static_cast<std::size_t>(top_k);
    return config;
  }
};

std::string format_counterexample(const Counterexample& cex) {
  std::string out;
  for (const auto& [var, term] : cex.assignment)
    out += "  " + var + " = " + print_term(term) + "\n";
  return out;
}

struct GoalOutcome {
  std::string name;
  std::string verdict;  // PROVED | REFUTED | GAVEUP
  std::uint64_t nodes = 0;
  double millis = 0;
  std::optional<ProofScript> script;
  std::optional<Counterexample> cex;
};

GoalOutcome prove_one(const Theory& theory, const std::string& goal_name,
                      const SearchConfig& config,
                      const std::optional<Strategy>& strategy) {
  GoalOutcome out;
  out.name = goal_name;
  if (strategy) {
    StrategyStats stats;
    auto script =
        run_strategy(theory, theory.goal(goal_name)->formula, *strategy,
                     config, &stats);
    out.nodes = stats.nodes;
    out.millis = stats.millis;
    if (script) {
      out.verdict = "PROVED";
      out.script = std::move(*script);
    } else {
      out.verdict = "GAVEUP";
    }
    return out;
  }
  SearchResult r = united_prove(theory, goal_name, config);
  out.nodes = r.stats.nodes;
  out.millis = r.stats.millis;
  switch (r.kind) {
    case SearchResult::Kind::Proved:
      out.verdict = "PROVED";
      out.script = std::move(r.script);
      break;
    case SearchResult::Kind::Refuted:
      out.verdict = "REFUTED";
      out.cex = std::move(r.cex);
      break;
    case SearchResult::Kind::GaveUp:
      out.verdict = "GAVEUP";
      break;
  }
  return out;
}

int cmd_prove(const std::string& file, const std::string& goal_opt,
              const CommonOpts& opts, const std::string& strategy_text,
              const std::string& emit_dir, bool json, unsigned jobs,
              bool no_lemma_reuse, std::ostream& out, std::ostream& err) {
  Theory theory;
  SearchConfig config;
  std::optional<Strategy> strategy;
  try {
    theory = parse_theory(read_file(file));
    config = opts.build();
    if (!strategy_text.empty()) strategy = parse_strategy(strategy_text);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }

  std::vector<std::string> goal_names;
  if (!goal_opt.empty()) {
    if (!theory.goal(goal_opt)) {
      err << "error: unknown goal '" << goal_opt << "'\n";
      return 3;
    }
    goal_names.push_back(goal_opt);
  } else {
    for (const auto& g : theory.goals) goal_names.push_back(g.name);
  }

  if (!emit_dir.empty()) {
    std::error_code ec;
    fs::create_directories(emit_dir, ec);
    if (ec) {
      err << "error: cannot create '" << emit_dir << "'\n";
      return 3;
    }
  }

  std::vector<GoalOutcome> outcomes;
  if (jobs > 1 && no_lemma_reuse) {
    std::vector<std::future<GoalOutcome>> futures;
    for (const auto& name : goal_names)
      futures.push_back(std::async(std::launch::async, [&, name] {
        return prove_one(theory, name, config, strategy);
      }));
    for (auto& f : futures) outcomes.push_back(f.get());
  } else {
    for (const auto& name : goal_names) {
      outcomes.push_back(prove_one(theory, name, config, strategy));
      if (!no_lemma_reuse && outcomes.back().verdict == "PROVED")
        theory.lemmas.push_back(
            NamedFormula{outcomes.back().name,
                         theory.goal(outcomes.back().name)->formula});
    }
  }

  bool any_refuted = false, any_gaveup = false;
  for (auto& o : outcomes) {
    std::string script_path;
    if (o.script && !emit_dir.empty()) {
      script_path = (fs::path(emit_dir) / (o.name + ".prf")).string();
      std::ofstream prf(script_path, std::ios::binary);
      prf << print_script(NamedScript{o.name, *o.script});
    }
    if (json) {
      nlohmann::ordered_json j;
      j["goal"] = o.name;
      j["verdict"] = o.verdict;
      j["nodes"] = o.nodes;
      if (o.script) {
        NamedScript ns{o.name, *o.script};
        j["script"] = script_path.empty() ? print_script(ns) : script_path;
      }
      if (o.cex) {
        nlohmann::ordered_json c;
        for (const auto& [var, term] : o.cex->assignment)
          c[var] = print_term(term);
        j["counterexample"] = c;
      }
      out << j.dump() << "\n";
    } else {
      out << o.verdict << " " << o.name << " " << o.nodes << " "
          << static_cast<long long>(o.millis) << "\n";
      if (o.cex) out << format_counterexample(*o.cex);
      if (o.script && emit_dir.empty())
        out << print_script(NamedScript{o.name, *o.script});
    }
    any_refuted = any_refuted || o.verdict == "REFUTED";
    any_gaveup = any_gaveup || o.verdict == "GAVEUP";
  }
  if (any_refuted) return 1;
  if (any_gaveup) return 2;
  return 0;
}

// Several scripts replay in goal file order; a goal whose script checked is
// available as a lemma to later scripts, mirroring sequential proving.
int cmd_check(const std::string& file,
              const std::vector<std::string>& script_files,
              const CommonOpts& opts, std::ostream& out, std::ostream& err) {
  try {
    Theory theory = parse_theory(read_file(file));
    SearchConfig config = opts.build();
    std::vector<NamedScript> scripts;
    for (const auto& path : script_files)
      scripts.push_back(parse_script(read_file(path), theory));
    for (const auto& s : scripts)
      if (!theory.goal(s.goal)) {
        err << "error: unknown goal '" << s.goal << "'\n";
        return 3;
      }
    std::stable_sort(scripts.begin(), scripts.end(),
                     [&](const NamedScript& a, const NamedScript& b) {
                       auto index = [&](const std::string& name) {
                         for (std::size_t i = 0; i < theory.goals.size(); ++i)
                           if (theory.goals[i].name == name) return i;
                         return theory.goals.size();
                       };
                       return index(a.goal) < index(b.goal);
                     });
    bool any_failed = false;
    for (const auto& s : scripts) {
      if (auto replay_error = check_script(theory, s.goal, s.script, config)) {
        out << "REPLAY FAILED " << s.goal << " at step "
            << replay_error->step_index << ": " << replay_error->reason
            << "\n";
        any_failed = true;
        continue;
      }
      out << "CHECKED " << s.goal << "\n";
      theory.lemmas.push_back(
          NamedFormula{s.goal, theory.goal(s.goal)->formula});
    }
    return any_failed ? 1 : 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

int cmd_refute(const std::string& file, const std::string& goal_name,
               std::size_t size, const CommonOpts& opts, std::ostream& out,
               std::ostream& err) {
  try {
    Theory theory = parse_theory(read_file(file));
    SearchConfig config = opts.build();
    const NamedFormula* goal = theory.goal(goal_name);
    if (!goal) {
      err << "error: unknown goal '" << goal_name << "'\n";
      return 3;
    }
    if (size == 0) size = config.refute_size;
    auto cex =
        find_counterexample(theory, goal->formula, size, config.eval_fuel);
    if (cex) {
      out << "REFUTED " << goal_name << "\n" << format_counterexample(*cex);
      return 1;
    }
    out << "NO COUNTEREXAMPLE " << goal_name << " up to size " << size << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

int cmd_rank(const std::string& file, const std::string& goal_name,
             const CommonOpts& opts, std::ostream& out, std::ostream& err) {
  try {
    Theory theory = parse_theory(read_file(file));
    SearchConfig config = opts.build();
    const NamedFormula* goal = theory.goal(goal_name);
    if (!goal) {
      err << "error: unknown goal '" << goal_name << "'\n";
      return 3;
    }
    Sequent root = root_sequent(goal->formula);
    auto ranked = scored_candidates(root, theory, config);
    std::size_t i = 1;
    for (const auto& [args, score] : ranked) {
      FeatureVector v = extract(root, args, config.features, theory);
      std::string bits;
      for (bool b : v) bits += b ? '1' : '0';
      out << i++ << ". " << print_step(step_induct(args)) << "  [" << bits
          << "]  " << score << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

int cmd_conjecture(const std::string& file, const std::string& goal_name,
                   const CommonOpts& opts, std::ostream& out,
                   std::ostream& err) {
  try {
    Theory theory = parse_theory(read_file(file));
    SearchConfig config = opts.build();
    const NamedFormula* goal = theory.goal(goal_name);
    if (!goal) {
      err << "error: unknown goal '" << goal_name << "'\n";
      return 3;
    }
    Sequent root = root_sequent(goal->formula);
    for (const auto& conj : generate_conjectures(root, theory, config)) {
      ConjectureVerdict verdict = filter_conjecture(theory, root, conj, config);
      switch (verdict.kind) {
        case ConjectureVerdict::Kind::Valuable:
          out << "VALUABLE " << print_formula(conj) << "\n";
          break;
        case ConjectureVerdict::Kind::NotStrongEnough:
          out << "NOT STRONG ENOUGH " << print_formula(conj) << "\n";
          break;
        case ConjectureVerdict::Kind::Refuted: {
          out << "REFUTED " << print_formula(conj) << " ";
          std::string sep = "(";
          for (const auto& [var, term] : verdict.cex.assignment) {
            out << sep << var << " = " << print_term(term);
            sep = ", ";
          }
          out << (verdict.cex.assignment.empty() ? "(closed)" : ")") << "\n";
          break;
        }
      }
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

int cmd_fit(const std::string& corpus_file, const CommonOpts& opts,
            const std::string& out_file, std::ostream& out, std::ostream& err) {
  try {
    SearchConfig config = opts.build();
    fs::path base = fs::path(corpus_file).parent_path();

    std::map<std::string, Theory> theories;
    std::vector<FitExample> corpus;
    std::istringstream in(read_file(corpus_file));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos)
        line.resize(hash);
      std::istringstream ls(line);
      std::string path, goal_name;
      if (!(ls >> path >> goal_name)) continue;  // blank line
      std::string rest;
      std::getline(ls, rest);
      std::string full = (base / path).string();
      if (!theories.count(full))
        theories.emplace(full, parse_theory(read_file(full)));
      const Theory& theory = theories.at(full);
      const NamedFormula* goal = theory.goal(goal_name);
      if (!goal)
        throw std::runtime_error("corpus line " + std::to_string(lineno) +
                                 ": unknown goal '" + goal_name + "'");
      Theory dummy;  // step parser only needs a signature for formulas
      ProofStep step = [&] {
        // reuse the script step syntax for the chosen invocation
        NamedScript ns = parse_script("proof " + goal_name + "\n" + rest +
                                          "\nqed\n",
                                      theory);
        return ns.script.front();
      }();
      if (step.kind != ProofStep::Kind::Induct)
        throw std::runtime_error("corpus line " + std::to_string(lineno) +
                                 ": expected an induct step");
      corpus.push_back(
          FitExample{&theories.at(full), root_sequent(goal->formula),
                     step.induct});
      (void)dummy;
    }

    Weights w = fit_weights(corpus, config.features, config.induct);
    std::string text = print_weights(w);
    if (!out_file.empty()) {
      std::ofstream f(out_file, std::ios::binary);
      f << text;
    } else {
      out << text;
    }
    out << "fit " << corpus.size() << " examples, " << w.values.size()
        << " weights\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"united - an automatic inductive theorem prover"};
  app.require_subcommand(1);

  // prove
  auto* prove = app.add_subcommand("prove", "prove goals of a theory file");
  std::string prove_file, prove_goal, strategy_text, emit_dir;
  bool united_mode = false, json = false, no_lemma_reuse = false;
  unsigned jobs = 1;
  CommonOpts prove_opts;
  prove->add_option("file", prove_file, "theory file")->required();
  prove->add_option("--goal", prove_goal, "prove only this goal");
  prove->add_flag("--united", united_mode, "best-first united search (default)");
  prove->add_option("--strategy", strategy_text,
                    "run a strategy (name or expression) instead");
  prove->add_option("--emit-proof", emit_dir, "write proof scripts here");
  prove->add_flag("--json", json, "one JSON object per goal");
  prove->add_option("--jobs", jobs, "parallel goals (needs --no-lemma-reuse)");
  prove->add_flag("--no-lemma-reuse", no_lemma_reuse,
                  "do not feed proved goals forward as lemmas");
  prove_opts.attach(prove);

  // check
  auto* check = app.add_subcommand("check", "replay a proof script");
  std::string check_file;
  std::vector<std::string> check_script_files;
  CommonOpts check_opts;
  check->add_option("file", check_file, "theory file")->required();
  check->add_option("scripts", check_script_files, "proof script file(s)")
      ->required();
  check_opts.attach(check);

  // refute
  auto* refute = app.add_subcommand("refute", "search for a counterexample");
  std::string refute_file, refute_goal;
  std::size_t refute_size = 0;
  CommonOpts refute_opts;
  refute->add_option("file", refute_file, "theory file")->required();
  refute->add_option("--goal", refute_goal, "goal name")->required();
  refute->add_option("--size", refute_size, "max term size per variable");
  refute_opts.attach(refute);

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "rank induction candidates");
  std::string rank_file, rank_goal;
  CommonOpts rank_opts;
  rank_cmd->add_option("file", rank_file, "theory file")->required();
  rank_cmd->add_option("--goal", rank_goal, "goal name")->required();
  rank_opts.attach(rank_cmd);

  // conjecture
  auto* conj_cmd =
      app.add_subcommand("conjecture", "generate and filter conjectures");
  std::string conj_file, conj_goal;
  CommonOpts conj_opts;
  conj_cmd->add_option("file", conj_file, "theory file")->required();
  conj_cmd->add_option("--goal", conj_goal, "goal name")->required();
  conj_opts.attach(conj_cmd);

  // fit
  auto* fit = app.add_subcommand("fit", "fit ranking weights from a corpus");
  std::string fit_corpus, fit_out;
  CommonOpts fit_opts;
  fit->add_option("corpus", fit_corpus, "corpus file")->required();
  fit->add_option("--out", fit_out, "output weights file");
  fit_opts.attach(fit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 3;
  }

  if (united_mode && !strategy_text.empty()) {
    err << "error: --united and --strategy are mutually exclusive\n";
    return 3;
  }
  if (jobs > 1 && !no_lemma_reuse) {
    err << "error: --jobs needs --no-lemma-reuse\n";
    return 3;
  }

  if (prove->parsed())
    return cmd_prove(prove_file, prove_goal, prove_opts, strategy_text,
                     emit_dir, json, jobs, no_lemma_reuse, out, err);
  if (check->parsed())
    return cmd_check(check_file, check_script_files, check_opts, out, err);
  if (refute->parsed())
    return cmd_refute(refute_file, refute_goal, refute_size, refute_opts, out,
                      err);
  if (rank_cmd->parsed())
    return cmd_rank(rank_file, rank_goal, rank_opts, out, err);
  if (conj_cmd->parsed())
    return cmd_conjecture(conj_file, conj_goal, conj_opts, out, err);
  if (fit->parsed()) return cmd_fit(fit_corpus, fit_opts, fit_out, out, err);
  return 3;
}

}  // namespace united
