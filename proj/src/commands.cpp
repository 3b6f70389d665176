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

#include "grroor/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "grroor/correlation.hpp"
#include "grroor/metrics.hpp"

namespace grroor::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

bool is_numerical_warning(WarningCode code) {
  switch (code) {
    case WarningCode::RankDeficient:
    case WarningCode::NearSingularPencil:
    case WarningCode::GpiStall:
    case WarningCode::AlmNoConverge:
    case WarningCode::NotConverged:
      return true;
    default:
      return false;
  }
}

std::vector<std::string> warning_strings(const Diagnostics& diag) {
  std::vector<std::string> out;
  for (const auto& w : diag.warnings()) {
    out.push_back(std::string(to_string(w.code)) + ": " + w.message);
  }
  return out;
}

bool has_numerical_warning(const Diagnostics& diag) {
  return std::any_of(diag.warnings().begin(), diag.warnings().end(),
                     [](const Warning& w) { return is_numerical_warning(w.code); });
}

std::string dataset_name(const RunConfig& cfg) {
  if (!cfg.dataset_name.empty()) return cfg.dataset_name;
  return fs::path(cfg.data).stem().string();
}

io::LabelSpec label_spec(const RunConfig& cfg) {
  io::LabelSpec spec;
  if (!cfg.labels_xml.empty()) {
    spec.names = io::read_label_xml(cfg.labels_xml);
  } else {
    require(cfg.label_count > 0, ErrorCode::InvalidArgument,
            "ARFF input needs --labels-xml or --label-count");
    spec.trailing_count = cfg.label_count;
  }
  return spec;
}

io::Dataset load_one(const RunConfig& cfg, const std::string& data,
                     const std::string& labels) {
  if (cfg.format == "csv") {
    require(!labels.empty(), ErrorCode::InvalidArgument,
            "CSV input needs a labels file (--labels)");
    return io::load_csv(data, labels);
  }
  require(cfg.format == "arff", ErrorCode::InvalidArgument,
          "unknown format " + cfg.format);
  return io::load_arff(data, label_spec(cfg));
}

Matrix restrict(const io::Dataset& data, const std::vector<Index>& features,
                const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(features.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t f = 0; f < features.size(); ++f) {
      out(static_cast<Index>(i), static_cast<Index>(f)) = data.x(features[f], rows[i]);
    }
  }
  return out;
}

Matrix label_rows(const io::Dataset& data, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), data.k());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Index>(i)) = data.y01.row(rows[i]);
  }
  return out;
}

const io::Split& require_split(const io::Dataset& data) {
  require(data.split.has_value(), ErrorCode::SplitMissing,
          "dataset has no train/test split; pass --split <test-file> or "
          "--split random:<ratio>");
  return *data.split;
}

void check_sweep(const RunConfig& cfg, Index d) {
  require(cfg.sweep_min >= 1 && cfg.sweep_min <= cfg.sweep_max &&
              cfg.sweep_max <= d,
          ErrorCode::InvalidArgument,
          "sweep " + std::to_string(cfg.sweep_min) + ".." +
              std::to_string(cfg.sweep_max) + " must lie within [1, " +
              std::to_string(d) + "]");
}

std::vector<Index> top_features(const std::vector<Index>& order, Index m) {
  return {order.begin(), order.begin() + m};
}

}  // namespace

std::vector<std::pair<std::string, double>> hyperparam_pairs(
    const solver::Hyperparams& hp) {
  return {
      {"alpha", hp.alpha},
      {"beta", hp.beta},
      {"eta", hp.eta},
      {"lambda", hp.lambda},
      {"latent_dim", double(hp.latent_dim)},
      {"neighbor_count", double(hp.graph.neighbor_count)},
      {"sigma_sq", hp.graph.sigma_sq},
      {"alm_mu0", hp.alm_mu0},
      {"alm_growth", hp.alm_growth},
      {"alm_inner_tol", hp.alm_inner_tol},
      {"alm_inner_max", double(hp.alm_inner_max)},
      {"outer_tol", hp.outer_tol},
      {"outer_max", double(hp.outer_max)},
  };
}

io::Dataset load_dataset(const RunConfig& cfg) {
  require(!cfg.data.empty(), ErrorCode::InvalidArgument, "--data is required");
  io::Dataset data = load_one(cfg, cfg.data, cfg.labels);
  const std::string random_prefix = "random:";
  if (cfg.split.rfind(random_prefix, 0) == 0) {
    double ratio = 0.0;
    try {
      ratio = std::stod(cfg.split.substr(random_prefix.size()));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad split spec " + cfg.split);
    }
    data.split = io::random_split(data.n(), ratio, cfg.hp.seed);
  } else if (!cfg.split.empty()) {
    std::string test_data = cfg.split;
    std::string test_labels;
    if (cfg.format == "csv") {
      const auto comma = cfg.split.find(',');
      require(comma != std::string::npos, ErrorCode::InvalidArgument,
              "CSV split needs <features.csv>,<labels.csv>");
      test_data = cfg.split.substr(0, comma);
      test_labels = cfg.split.substr(comma + 1);
    }
    data = io::concatenate(data, load_one(cfg, test_data, test_labels));
  }
  if (cfg.standardize) {
    const auto rows = training_rows(data);
    io::standardize(data, &rows);
  }
  return data;
}

std::vector<Index> training_rows(const io::Dataset& data) {
  if (data.split) return data.split->train;
  std::vector<Index> rows(static_cast<std::size_t>(data.n()));
  for (Index i = 0; i < data.n(); ++i) rows[static_cast<std::size_t>(i)] = i;
  return rows;
}

metrics::MetricReport evaluate_subset(const io::Dataset& data,
                                      const std::vector<Index>& features,
                                      const std::vector<Index>& train_rows,
                                      const std::vector<Index>& test_rows,
                                      const mlknn::MlknnParams& knn,
                                      Diagnostics* diag) {
  const auto model = mlknn::fit(restrict(data, features, train_rows),
                                label_rows(data, train_rows), knn);
  const auto pred = mlknn::predict(model, restrict(data, features, test_rows));
  metrics::PredictionSet set{label_rows(data, test_rows), pred.labels,
                             pred.scores};
  return metrics::evaluate(set, diag);
}

std::vector<GridPoint> read_grid(const std::string& path, Index label_count) {
  json j;
  {
    std::ifstream in(path);
    require(in.good(), ErrorCode::IoError, "cannot open grid file " + path);
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
  }
  auto axis = [&](const char* key) {
    require(j.contains(key) && j[key].is_array() && !j[key].empty(),
            ErrorCode::InvalidArgument,
            path + ": grid needs a nonempty \"" + key + "\" list");
    std::vector<double> values;
    for (const auto& v : j[key]) {
      double value = 0.0;
      if (v.is_number()) {
        value = v.get<double>();
      } else if (v.is_string() && std::string(key) == "c") {
        std::string s = v.get<std::string>();
        require(!s.empty() && s.back() == 'k', ErrorCode::InvalidArgument,
                path + ": bad latent dimension " + s);
        s.pop_back();
        const double frac = s.empty() ? 1.0 : std::stod(s);
        value = std::max(1.0, std::round(frac * double(label_count)));
      } else {
        throw Error(ErrorCode::InvalidArgument,
                    path + ": bad grid value in \"" + key + "\"");
      }
      require(value > 0.0 && std::isfinite(value), ErrorCode::InvalidArgument,
              path + ": grid values must be positive");
      values.push_back(value);
    }
    std::stable_sort(values.begin(), values.end());
    return values;
  };
  const auto lambdas = axis("lambda");
  const auto betas = axis("beta");
  const auto etas = axis("eta");
  const auto cs = axis("c");
  std::vector<GridPoint> points;
  for (double l : lambdas) {
    for (double b : betas) {
      for (double e : etas) {
        for (double c : cs) {
          points.push_back({l, b, e, static_cast<Index>(std::llround(c))});
        }
      }
    }
  }
  return points;
}

std::size_t best_grid_index(const std::vector<GridResult>& results) {
  require(!results.empty(), ErrorCode::InvalidArgument, "empty grid");
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].acr < results[best].acr) best = i;
  }
  return best;
}

int cmd_select(const RunConfig& cfg, std::ostream& log) {
  const io::Dataset data = load_dataset(cfg);
  const io::Dataset train = io::select_instances(data, training_rows(data));
  const solver::FitResult result = solver::fit(train.x, train.y01, cfg.hp);

  io::RankingFile file;
  file.order = result.ranking.order;
  file.names = data.feature_names;
  file.scores = result.ranking.scores;
  file.objective_trace = result.state.objective_trace;
  file.hyperparams = hyperparam_pairs(cfg.hp);
  file.hyperparams.emplace_back("seed", double(cfg.hp.seed));
  file.warnings = warning_strings(result.diagnostics);
  file.converged = result.converged;
  file.iterations = result.iterations;
  const fs::path path = fs::path(cfg.out_dir) / "ranking.json";
  io::write_ranking(file, path);

  log << "select: " << train.n() << " instances, " << train.d()
      << " features, " << train.k() << " labels; "
      << (result.converged ? "converged" : "not converged") << " after "
      << result.iterations << " iteration(s); wrote " << path.string() << "\n";
  for (const auto& w : file.warnings) log << "warning: " << w << "\n";
  if (cfg.strict && has_numerical_warning(result.diagnostics)) {
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& log) {
  const io::Dataset data = load_dataset(cfg);
  const io::Split& split = require_split(data);
  const fs::path ranking_path = cfg.ranking.empty()
                                    ? fs::path(cfg.out_dir) / "ranking.json"
                                    : fs::path(cfg.ranking);
  const io::RankingFile ranking = io::read_ranking(ranking_path);
  require(static_cast<Index>(ranking.order.size()) == data.d(),
          ErrorCode::ShapeMismatch,
          "ranking has " + std::to_string(ranking.order.size()) +
              " features, dataset has " + std::to_string(data.d()));
  check_sweep(cfg, data.d());

  const io::Dataset train = io::select_instances(data, split.train);
  const auto redundancy = correlation::build_redundancy(train.x);

  io::EvaluationReport report;
  report.method = cfg.method;
  report.dataset = dataset_name(cfg);
  report.seed = cfg.hp.seed;
  report.standardized = cfg.standardize;
  report.hyperparams = ranking.hyperparams;
  report.hyperparams.emplace_back("knn_neighbors", double(cfg.knn.k_neighbors));
  report.hyperparams.emplace_back("knn_smooth", cfg.knn.smooth);

  Diagnostics diag;
  for (Index m = cfg.sweep_min; m <= cfg.sweep_max; ++m) {
    const auto features = top_features(ranking.order, m);
    const auto r = evaluate_subset(data, features, split.train, split.test,
                                   cfg.knn, &diag);
    io::EvaluationRow row;
    row.subset_size = m;
    row.hamming_loss = r.hamming_loss;
    row.coverage = r.coverage;
    row.average_precision = r.average_precision;
    row.macro_f1 = r.macro_f1;
    row.micro_f1 = r.micro_f1;
    row.ranking_loss = r.ranking_loss;
    if (m >= 2) row.redundancy = metrics::redundancy_score(features, redundancy.a);
    row.coverage_skipped = r.coverage_skipped;
    row.ranking_loss_skipped = r.ranking_loss_skipped;
    report.rows.push_back(row);
  }
  const fs::path out = cfg.out_dir;
  io::write_report(report, out / "report.json", io::ReportFormat::Json);
  io::write_report(report, out / "report.csv", io::ReportFormat::Csv);
  log << "evaluate: " << report.rows.size() << " subset size(s) on "
      << split.train.size() << " train / " << split.test.size()
      << " test instances; wrote " << (out / "report.json").string() << "\n";
  Diagnostics unique;
  unique.merge_unique(diag);
  for (const auto& w : warning_strings(unique)) log << "warning: " << w << "\n";
  return kExitOk;
}

int cmd_grid_search(const RunConfig& cfg, std::ostream& log) {
  require(!cfg.grid.empty(), ErrorCode::InvalidArgument, "--grid is required");
  const io::Dataset data = load_dataset(cfg);
  const io::Split& split = require_split(data);
  const auto points = read_grid(cfg.grid, data.k());
  require(!points.empty(), ErrorCode::InvalidArgument, "empty grid");
  require(cfg.acr_length >= 1 && static_cast<Index>(cfg.acr_length) <= data.d(),
          ErrorCode::InvalidArgument,
          "ACR length " + std::to_string(cfg.acr_length) +
              " exceeds the feature count " + std::to_string(data.d()));
  for (const auto& p : points) {
    require(p.latent_dim <= std::min(data.d(), data.k()),
            ErrorCode::InvalidArgument,
            "grid latent dimension " + std::to_string(p.latent_dim) +
                " exceeds min(d, k)");
  }
  const io::Dataset train = io::select_instances(data, split.train);

  std::vector<GridResult> results(points.size());
  auto run_point = [&](std::size_t i) {
    solver::Hyperparams hp = cfg.hp;
    hp.lambda = points[i].lambda;
    hp.beta = points[i].beta;
    hp.eta = points[i].eta;
    hp.latent_dim = points[i].latent_dim;
    const auto fitted = solver::fit(train.x, train.y01, hp);
    std::vector<metrics::HlRl> runs;
    for (std::size_t m = 1; m <= cfg.acr_length; ++m) {
      const auto features = top_features(fitted.ranking.order, static_cast<Index>(m));
      const auto r = evaluate_subset(data, features, split.train, split.test, cfg.knn);
      runs.push_back({r.hamming_loss, r.ranking_loss});
    }
    GridResult& out = results[i];
    out.point = points[i];
    out.acr = metrics::acr(runs, cfg.acr_length);
    out.converged = fitted.converged;
    out.iterations = fitted.iterations;
    out.warnings = warning_strings(fitted.diagnostics);
  };

  const auto workers = static_cast<std::size_t>(std::max(1, cfg.threads));
  if (workers == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) run_point(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(workers, points.size()); ++t) {
      pool.emplace_back([&]() {
        for (std::size_t i = next++; i < points.size(); i = next++) {
          try {
            run_point(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  const std::size_t best = best_grid_index(results);
  std::ostringstream table;
  table << "lambda,beta,eta,c,acr,converged,iterations,warnings\n";
  for (const auto& r : results) {
    table << io::format_real(r.point.lambda) << ','
          << io::format_real(r.point.beta) << ','
          << io::format_real(r.point.eta) << ',' << r.point.latent_dim << ','
          << io::format_real(r.acr) << ',' << (r.converged ? 1 : 0) << ','
          << r.iterations << ',' << r.warnings.size() << '\n';
  }
  const fs::path out = cfg.out_dir;
  io::write_text(out / "grid.csv", table.str());

  json j;
  j["schema_version"] = 1;
  j["dataset"] = dataset_name(cfg);
  j["acr_length"] = cfg.acr_length;
  j["points"] = results.size();
  j["best"] = {{"lambda", io::round_real(results[best].point.lambda)},
               {"beta", io::round_real(results[best].point.beta)},
               {"eta", io::round_real(results[best].point.eta)},
               {"c", results[best].point.latent_dim},
               {"acr", io::round_real(results[best].acr)},
               {"converged", results[best].converged}};
  io::write_text(out / "best.json", j.dump(2) + "\n");
  log << "grid-search: " << results.size() << " point(s); best lambda="
      << io::format_real(results[best].point.lambda)
      << " beta=" << io::format_real(results[best].point.beta)
      << " eta=" << io::format_real(results[best].point.eta)
      << " c=" << results[best].point.latent_dim
      << " acr=" << io::format_real(results[best].acr) << "\n";
  const bool any_unconverged = std::any_of(
      results.begin(), results.end(), [](const GridResult& r) { return !r.converged; });
  if (cfg.strict && any_unconverged) return kExitNumerical;
  return kExitOk;
}

int cmd_stats(const RunConfig& cfg, std::ostream& log) {
  require(!cfg.reports.empty(), ErrorCode::InvalidArgument,
          "--reports is required");
  std::vector<io::EvaluationReport> reports;
  for (const auto& path : cfg.reports) reports.push_back(io::read_report(path));

  std::vector<std::string> methods;
  std::vector<std::string> datasets;
  std::map<std::pair<std::string, std::string>, const io::EvaluationReport*> cell;
  auto subset_sizes = [](const io::EvaluationReport& r) {
    std::vector<Index> sizes;
    for (const auto& row : r.rows) sizes.push_back(row.subset_size);
    return sizes;
  };
  const auto sizes = subset_sizes(reports.front());
  for (const auto& r : reports) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) {
      datasets.push_back(r.dataset);
    }
    require(cell.emplace(std::make_pair(r.method, r.dataset), &r).second,
            ErrorCode::IncompatibleReports,
            "two reports for method " + r.method + " on " + r.dataset);
    require(subset_sizes(r) == sizes && !sizes.empty(),
            ErrorCode::IncompatibleReports,
            "reports cover different subset sizes (" + r.method + " on " +
                r.dataset + ")");
  }
  require(methods.size() >= 2 && datasets.size() >= 2,
          ErrorCode::InvalidArgument, "stats needs >= 2 methods and >= 2 datasets");
  require(cell.size() == methods.size() * datasets.size(),
          ErrorCode::IncompatibleReports,
          "every method needs a report on every dataset");

  const auto nc = static_cast<Index>(methods.size());
  const auto nd = static_cast<Index>(datasets.size());
  const double q = cfg.q_alpha > 0.0 ? cfg.q_alpha : metrics::nemenyi_q_alpha_005(nc);
  const double cd = metrics::nemenyi_cd(nc, nd, q);
  std::size_t control = 0;
  if (!cfg.control.empty()) {
    const auto it = std::find(methods.begin(), methods.end(), cfg.control);
    require(it != methods.end(), ErrorCode::InvalidArgument,
            "control method " + cfg.control + " not among the reports");
    control = static_cast<std::size_t>(it - methods.begin());
  }

  json j;
  j["schema_version"] = 1;
  j["methods"] = methods;
  j["datasets"] = datasets;
  j["q_alpha"] = io::round_real(q);
  j["critical_difference"] = io::round_real(cd);
  j["control"] = methods[control];
  json per_metric = json::object();
  for (const auto& metric : io::metric_names()) {
    if (!cfg.metric_filter.empty() && metric != cfg.metric_filter) continue;
    Matrix scores(nd, nc);
    bool defined = true;
    for (Index di = 0; di < nd && defined; ++di) {
      for (Index mi = 0; mi < nc && defined; ++mi) {
        const auto* report = cell.at({methods[static_cast<std::size_t>(mi)],
                                      datasets[static_cast<std::size_t>(di)]});
        double sum = 0.0;
        int count = 0;
        for (const auto& row : report->rows) {
          if (const auto v = io::metric_value(row, metric)) {
            sum += *v;
            ++count;
          }
        }
        defined = count > 0;
        if (defined) scores(di, mi) = sum / count;
      }
    }
    if (!defined) continue;
    const Matrix ranks = metrics::rank_rows(scores, io::lower_is_better(metric));
    json m;
    json avg = json::object();
    json within = json::object();
    const Vector average = ranks.colwise().mean().transpose();
    for (Index mi = 0; mi < nc; ++mi) {
      const auto& name = methods[static_cast<std::size_t>(mi)];
      avg[name] = io::round_real(average(mi));
      within[name] =
          std::abs(average(mi) - average(static_cast<Index>(control))) <= cd;
    }
    m["average_ranks"] = std::move(avg);
    try {
      const auto f = metrics::friedman_stat(ranks);
      m["chi_sq"] = io::round_real(f.chi_sq);
      m["f_f"] = io::round_real(f.f_f);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateRanks) throw;
      const double k = double(nc);
      m["chi_sq"] = io::round_real(12.0 * double(nd) / (k * (k + 1.0)) *
                                   (average.squaredNorm() - k * (k + 1.0) * (k + 1.0) / 4.0));
      m["f_f"] = nullptr;
    }
    m["within_cd_of_control"] = std::move(within);
    per_metric[metric] = std::move(m);
  }
  j["metrics"] = std::move(per_metric);
  const fs::path out = fs::path(cfg.out_dir) / "stats.json";
  io::write_text(out, j.dump(2) + "\n");
  log << "stats: " << nc << " method(s) x " << nd << " dataset(s); CD="
      << io::format_real(cd) << "; wrote " << out.string() << "\n";
  return kExitOk;
}

int cmd_report(const RunConfig& cfg, std::ostream& log) {
  require(!cfg.reports.empty(), ErrorCode::InvalidArgument,
          "--reports is required");
  std::ostringstream tidy;
  tidy << "subset_size,metric,value,method,dataset\n";
  std::size_t lines = 0;
  for (const auto& path : cfg.reports) {
    const auto report = io::read_report(path);
    for (const auto& row : report.rows) {
      for (const auto& metric : io::metric_names()) {
        const auto v = io::metric_value(row, metric);
        if (!v) continue;
        tidy << row.subset_size << ',' << metric << ',' << io::format_real(*v)
             << ',' << report.method << ',' << report.dataset << '\n';
        ++lines;
      }
    }
  }
  const fs::path out = fs::path(cfg.out_dir) / "tidy.csv";
  io::write_text(out, tidy.str());
  log << "report: " << lines << " row(s); wrote " << out.string() << "\n";
  return kExitOk;
}

}  // namespace grroor::cli
