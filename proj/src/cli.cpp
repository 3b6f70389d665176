/*
 * Copyright 2026 The grroor Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "grroor/commands.hpp"

namespace grroor::cli {

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::WrongLength:
    case ErrorCode::SubsetTooSmall:
      return kExitUsage;
    default:
      return kExitData;
  }
}

void parse_sweep(const std::string& text, RunConfig& cfg) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      cfg.sweep_min = 1;
      cfg.sweep_max = std::stol(text);
    } else {
      cfg.sweep_min = std::stol(text.substr(0, dots));
      cfg.sweep_max = std::stol(text.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "bad --sweep " + text);
  }
  require(cfg.sweep_min >= 1 && cfg.sweep_min <= cfg.sweep_max,
          ErrorCode::InvalidArgument, "bad --sweep " + text);
}

void print_resolved(const RunConfig& cfg, const std::string& command,
                    std::ostream& out) {
  nlohmann::ordered_json j;
  j["command"] = command;
  nlohmann::ordered_json hp = nlohmann::ordered_json::object();
  for (const auto& [k, v] : hyperparam_pairs(cfg.hp)) hp[k] = v;
  hp["seed"] = cfg.hp.seed;
  j["hyperparams"] = std::move(hp);
  j["knn"] = {{"neighbors", cfg.knn.k_neighbors}, {"smooth", cfg.knn.smooth}};
  j["data"] = cfg.data;
  j["format"] = cfg.format;
  j["split"] = cfg.split;
  j["standardize"] = cfg.standardize;
  j["sweep"] = std::to_string(cfg.sweep_min) + ".." + std::to_string(cfg.sweep_max);
  j["out"] = cfg.out_dir;
  out << j.dump(2) << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Embedded multi-label feature selection by orthogonal regression "
               "with global redundancy and label-relevance regularization"};
  app.name("grroor");
  app.set_config("--config", "", "TOML/INI file with the same keys as the long flags");
  app.require_subcommand(1, 1);
  app.fallthrough();

  RunConfig cfg;
  std::string sweep = "1..50";
  std::string standardize = "on";
  bool dry_run = false;
  auto& hp = cfg.hp;

  app.add_option("--data", cfg.data, "ARFF file, or features CSV");
  app.add_option("--labels", cfg.labels, "Labels CSV (with --format csv)");
  app.add_option("--labels-xml", cfg.labels_xml, "MULAN label XML");
  app.add_option("--label-count", cfg.label_count,
                 "Number of trailing label attributes (ARFF without XML)");
  app.add_option("--format", cfg.format, "Input format")
      ->check(CLI::IsMember({"arff", "csv"}));
  app.add_option("--split", cfg.split,
                 "Held-out test file(s) or random:<train ratio>");
  app.add_option("--standardize", standardize, "Per-feature z-scores")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--dataset-name", cfg.dataset_name, "Name recorded in reports");
  app.add_option("--method", cfg.method, "Method name recorded in reports");

  app.add_option("--lambda", hp.lambda, "Redundancy weight");
  app.add_option("--beta", hp.beta, "Label-relevance weight");
  app.add_option("--eta", hp.eta, "Graph-smoothness weight");
  app.add_option("--alpha", hp.alpha, "Label-reconstruction weight");
  app.add_option("--c", hp.latent_dim, "Latent dimension");
  app.add_option("--neighbors", hp.graph.neighbor_count, "Graph neighbor count");
  app.add_option("--sigma-sq", hp.graph.sigma_sq, "Heat-kernel width");
  app.add_option("--alm-mu0", hp.alm_mu0, "Initial ALM penalty");
  app.add_option("--alm-growth", hp.alm_growth, "ALM penalty growth (> 1)");
  app.add_option("--alm-tol", hp.alm_inner_tol, "ALM feasibility tolerance");
  app.add_option("--alm-max", hp.alm_inner_max, "ALM iteration cap");
  app.add_option("--outer-tol", hp.outer_tol, "Relative objective change to stop");
  app.add_option("--outer-max", hp.outer_max, "Outer iteration cap");
  app.add_option("--seed", hp.seed, "Random seed");

  app.add_option("--knn", cfg.knn.k_neighbors, "ML-KNN neighbor count");
  app.add_option("--smooth", cfg.knn.smooth, "ML-KNN smoothing");
  app.add_option("--grid", cfg.grid, "Grid JSON file");
  app.add_option("--sweep", sweep, "Feature-count sweep, e.g. 1..50");
  app.add_option("--acr-length", cfg.acr_length, "Subset sizes summed by ACR");
  app.add_option("--threads", cfg.threads, "Concurrent grid points");
  app.add_option("--ranking", cfg.ranking, "Ranking file for evaluate");
  app.add_option("--reports", cfg.reports, "Report files for stats/report");
  app.add_option("--q-alpha", cfg.q_alpha, "Nemenyi q (default: alpha 0.05 table)");
  app.add_option("--control", cfg.control, "Control method for stats");
  app.add_option("--metric", cfg.metric_filter, "Restrict stats to one metric");
  app.add_option("--out", cfg.out_dir, "Output directory");
  app.add_flag("--strict", cfg.strict, "Numerical warnings give exit code 3");
  app.add_flag("--dry-run", dry_run, "Validate and print the resolved settings");

  auto* select = app.add_subcommand("select", "Learn feature scores and write the ranking");
  auto* evaluate = app.add_subcommand("evaluate", "ML-KNN metrics over a feature-count sweep");
  auto* grid = app.add_subcommand("grid-search", "Pick hyperparameters by ACR");
  auto* stats = app.add_subcommand("stats", "Friedman / Nemenyi over reports");
  auto* report = app.add_subcommand("report", "Tidy CSV from reports");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    parse_sweep(sweep, cfg);
    cfg.standardize = standardize == "on";
    hp.validate();
    std::string name;
    int (*command)(const RunConfig&, std::ostream&) = nullptr;
    if (select->parsed()) {
      name = "select";
      command = cmd_select;
    } else if (evaluate->parsed()) {
      name = "evaluate";
      command = cmd_evaluate;
    } else if (grid->parsed()) {
      name = "grid-search";
      command = cmd_grid_search;
    } else if (stats->parsed()) {
      name = "stats";
      command = cmd_stats;
    } else if (report->parsed()) {
      name = "report";
      command = cmd_report;
    }
    if (name == "select" || name == "evaluate" || name == "grid-search") {
      require(!cfg.data.empty(), ErrorCode::InvalidArgument, "--data is required");
      require(std::filesystem::exists(cfg.data), ErrorCode::InvalidArgument,
              "--data file not found: " + cfg.data);
    }
    if (dry_run) {
      print_resolved(cfg, name, out);
      return kExitOk;
    }
    return command(cfg, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace grroor::cli
