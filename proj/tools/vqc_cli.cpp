#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace vqc::cli;
  CLI::App app{"Crowdsourced video-quality study simulator and analysis pipeline"};
  app.require_subcommand(1);

  RunOptions opt;
  std::string config;
  std::uint64_t seed = 0;
  int subjects = 0;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "INI config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--timestamp", opt.timestamp, "record wall-clock time in the manifest");
  };

  auto* sim = app.add_subcommand("simulate", "simulate sessions; writes ratings.csv, sessions.csv");
  common(sim);
  sim->add_option("--subjects", subjects, "population size");

  ScreenInputs screen_in;
  auto* scr = app.add_subcommand("screen", "apply subject screening; writes ledger.csv, surviving.csv");
  common(scr);
  scr->add_option("--ratings", screen_in.ratings)->required();
  scr->add_option("--sessions", screen_in.sessions)->required();

  AggregateInputs agg_in;
  auto* agg = app.add_subcommand("aggregate", "MOS/DMOS and validation; writes mos.csv, validation.json");
  common(agg);
  agg->add_option("--ratings", agg_in.ratings, "surviving ratings")->required();
  agg->add_option("--sessions", agg_in.sessions)->required();
  agg->add_option("--catalog", agg_in.catalog)->required();

  EvaluateInputs eval_in;
  auto* ev = app.add_subcommand("evaluate", "benchmark predictors against MOS; writes eval.csv, eval.json");
  common(ev);
  ev->add_option("--mos", eval_in.mos)->required();
  ev->add_option("--predictor", eval_in.predictors, "predictor CSV (repeatable)")->required();
  ev->add_option("--protocol", eval_in.protocol, "cv5 or median100");
  ev->add_option("--distance", eval_in.distance, "predictor name whose scores are negated");

  auto* run = app.add_subcommand("run", "simulate, screen, aggregate and evaluate");
  common(run);
  run->add_option("--subjects", subjects, "population size");
  run->add_option("--predictor", eval_in.predictors, "predictor CSV (repeatable)");
  run->add_option("--protocol", eval_in.protocol, "cv5 or median100");
  run->add_option("--distance", eval_in.distance, "predictor name whose scores are negated");

  auto* cfg = app.add_subcommand("config", "print the effective configuration");
  cfg->add_option("--config", config, "INI config file")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  if (!config.empty()) opt.config = config;
  for (auto* sub : {sim, scr, agg, ev, run}) {
    if (sub->parsed() && sub->count("--seed")) opt.seed = seed;
  }
  if ((sim->parsed() && sim->count("--subjects")) || (run->parsed() && run->count("--subjects"))) {
    opt.subjects = subjects;
  }

  if (sim->parsed()) return cmd_simulate(opt);
  if (scr->parsed()) return cmd_screen(screen_in, opt);
  if (agg->parsed()) return cmd_aggregate(agg_in, opt);
  if (ev->parsed()) return cmd_evaluate(eval_in, opt);
  if (run->parsed()) return cmd_run(eval_in, opt);
  return cmd_config(opt);
}
