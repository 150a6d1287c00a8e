#include "vqc/eval/predictor_eval.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "vqc/errors.hpp"
#include "vqc/io/csv.hpp"
#include "vqc/parallel.hpp"
#include "vqc/stats/kernel_ridge.hpp"
#include "vqc/stats/kfold.hpp"
#include "vqc/stats/logistic.hpp"
#include "vqc/stats/moments.hpp"

namespace vqc::eval {

PredictorInput load_predictor(const std::filesystem::path& path, std::string name) {
  const auto table = io::read_csv(path);
  if (table.header.empty() || table.header.front() != "video_id") {
    throw DataError(path.string() + ": first column must be video_id");
  }
  if (table.header.size() < 2) throw DataError(path.string() + ": no predictor columns");
  if (table.rows.empty()) throw DataError(path.string() + ": empty predictor file");

  PredictorInput p;
  p.name = name.empty() ? path.stem().string() : std::move(name);
  const bool unaware = table.header.size() == 2 && table.header[1] == "score";
  p.kind = unaware ? PredictorKind::opinion_unaware_scores : PredictorKind::trainable_features;
  const auto dims = table.header.size() - 1;

  std::vector<std::vector<double>> rows;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    std::vector<double> v(dims);
    for (std::size_t c = 0; c < dims; ++c) {
      try {
        v[c] = io::parse_double(row.at(c + 1));
      } catch (const std::exception&) {
        throw DataError(io::row_context(path, r) + "non-numeric value in column " +
                        table.header[c + 1]);
      }
      if (!std::isfinite(v[c])) {
        throw DataError(io::row_context(path, r) + "non-finite value in column " +
                        table.header[c + 1]);
      }
    }
    const auto& id = row.at(0);
    if (auto it = seen.find(id); it != seen.end()) {
      if (rows[it->second] != v) {
        throw DataError(io::row_context(path, r) + "conflicting duplicate for " + id);
      }
      p.warnings.push_back("duplicate row for " + id + " dropped");
      continue;
    }
    seen.emplace(id, rows.size());
    p.ids.push_back(id);
    rows.push_back(std::move(v));
  }
  p.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dims));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < dims; ++c)
      p.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
  return p;
}

Aligned align(const PredictorInput& pred, const MosMap& mos) {
  Aligned a;
  std::vector<Eigen::Index> keep;
  std::unordered_map<std::string, char> covered;
  for (std::size_t i = 0; i < pred.ids.size(); ++i) {
    covered[pred.ids[i]] = 1;
    if (mos.count(pred.ids[i])) {
      keep.push_back(static_cast<Eigen::Index>(i));
      a.ids.push_back(pred.ids[i]);
    }
  }
  for (const auto& [id, m] : mos) {
    if (!covered.count(id)) a.missing.push_back(id);
  }
  a.x.resize(static_cast<Eigen::Index>(keep.size()), pred.values.cols());
  a.y.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    a.x.row(r) = pred.values.row(keep[i]);
    a.y(r) = mos.at(a.ids[i]);
  }
  return a;
}

namespace {

std::vector<double> to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::MatrixXd rows(const Eigen::MatrixXd& m, const std::vector<std::size_t>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(idx[i]));
  return out;
}

Eigen::VectorXd rows(const Eigen::VectorXd& v, const std::vector<std::size_t>& idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(idx[i]));
  return out;
}

void note_coverage(const Aligned& a, std::vector<std::string>& warnings) {
  if (a.missing.empty()) return;
  std::string msg = std::to_string(a.missing.size()) + " videos with MOS not covered:";
  const std::size_t shown = std::min<std::size_t>(a.missing.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) msg += " " + a.missing[i];
  if (shown < a.missing.size()) msg += " ...";
  warnings.push_back(msg);
}

stats::MetricTriple metrics_with_map(const stats::Logistic4Params& map,
                                     const std::vector<double>& pred,
                                     const std::vector<double>& mos, bool& degenerate) {
  stats::MetricTriple m;
  const auto mapped = map.apply(pred);
  const auto s = stats::srocc(pred, mos);
  const auto p = stats::plcc(mapped, mos);
  if (!s || !p) degenerate = true;
  m.srocc = s.value_or(0.0);
  m.plcc = p.value_or(0.0);
  m.rmse = stats::rmse(mapped, mos);
  return m;
}

}  // namespace

stats::MetricTriple score_predictions(const std::vector<double>& pred,
                                      const std::vector<double>& mos, bool* degenerate) {
  const auto fit = stats::fit_logistic4(pred, mos);
  bool deg = fit.degenerate;
  const auto m = metrics_with_map(fit.params, pred, mos, deg);
  if (degenerate) *degenerate = deg;
  return m;
}

EvalResult eval_unaware(const PredictorInput& pred, const MosMap& mos, bool distance) {
  if (pred.kind != PredictorKind::opinion_unaware_scores) {
    throw DataError(pred.name + ": expected a single score column");
  }
  const auto a = align(pred, mos);
  if (a.ids.size() < 20) {
    throw DataError(pred.name + ": only " + std::to_string(a.ids.size()) +
                    " videos overlap the MOS set (need 20)");
  }
  EvalResult r;
  r.name = pred.name;
  r.protocol = Protocol::unaware;
  r.n_videos_used = a.ids.size();
  r.warnings = pred.warnings;
  note_coverage(a, r.warnings);
  std::vector<double> x = to_vec(a.x.col(0));
  if (distance) {
    for (auto& v : x) v = -v;
  }
  r.metrics = score_predictions(x, to_vec(a.y), &r.degenerate);
  return r;
}

namespace {

void check_trainable(const PredictorInput& pred, const Aligned& a, const TrainOptions& o) {
  if (a.ids.size() < o.min_overlap) {
    throw DataError(pred.name + ": only " + std::to_string(a.ids.size()) +
                    " videos overlap the MOS set (need " + std::to_string(o.min_overlap) + ")");
  }
}

}  // namespace

std::vector<double> cv_predictions(const Aligned& data, Rng rng, const TrainOptions& options) {
  const auto n = static_cast<std::size_t>(data.y.size());
  const auto folds =
      stats::kfold_split(n, static_cast<std::size_t>(options.folds), rng.derive("folds"));
  std::vector<double> out(n);
  parallel_for(folds.size(), options.jobs, [&](std::size_t f) {
    const auto train = stats::complement(folds, f);
    if (train.size() < 2) throw DataError("fold with fewer than 2 training rows");
    const auto pred = stats::fit_predict(rows(data.x, train), rows(data.y, train),
                                         rows(data.x, folds[f]), rng.derive("fold", f));
    for (std::size_t i = 0; i < folds[f].size(); ++i) {
      out[folds[f][i]] = pred(static_cast<Eigen::Index>(i));
    }
  });
  return out;
}

EvalResult eval_cv5(const PredictorInput& pred, const MosMap& mos, Rng rng,
                    const TrainOptions& options) {
  const auto a = align(pred, mos);
  check_trainable(pred, a, options);
  EvalResult r;
  r.name = pred.name;
  r.protocol = Protocol::cv5_aggregate;
  r.n_videos_used = a.ids.size();
  r.warnings = pred.warnings;
  note_coverage(a, r.warnings);
  r.metrics = score_predictions(cv_predictions(a, rng, options), to_vec(a.y), &r.degenerate);
  return r;
}

SplitMetrics split_metrics(const Aligned& data, Rng rng, const TrainOptions& options) {
  const auto n = static_cast<std::size_t>(data.y.size());
  const auto reps = static_cast<std::size_t>(options.reps);
  SplitMetrics out;
  out.plcc.resize(reps);
  out.srocc.resize(reps);
  out.rmse.resize(reps);
  std::vector<char> degenerate(reps, 0);
  parallel_for(reps, options.jobs, [&](std::size_t rep) {
    Rng r = rng.derive("split", rep);
    const auto split = stats::train_test_split(n, options.test_fraction, r.derive("indices"));
    const Eigen::MatrixXd xt = rows(data.x, split.train);
    const Eigen::VectorXd yt = rows(data.y, split.train);

    const auto scaler = stats::MinMaxScaler::fit(xt);
    const Eigen::MatrixXd st = scaler.transform(xt);
    const auto hyper = stats::select_hyper(st, yt, r.derive("inner-cv"));
    const auto model = stats::kernel_fit(st, yt, hyper);
    const auto test_pred = to_vec(stats::kernel_predict(model, scaler.transform(rows(data.x, split.test))));

    // Out-of-fold training predictions with the chosen hyperparameters feed the logistic map.
    const auto folds = stats::kfold_split(split.train.size(), static_cast<std::size_t>(options.folds),
                                          r.derive("oof"));
    std::vector<double> oof(split.train.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
      const auto inner = stats::complement(folds, f);
      const auto m = stats::kernel_fit(rows(st, inner), rows(yt, inner), hyper);
      const auto p = stats::kernel_predict(m, rows(st, folds[f]));
      for (std::size_t i = 0; i < folds[f].size(); ++i) oof[folds[f][i]] = p(static_cast<Eigen::Index>(i));
    }
    const auto fit = stats::fit_logistic4(oof, to_vec(yt));
    bool deg = fit.degenerate;
    const auto m = metrics_with_map(fit.params, test_pred, to_vec(rows(data.y, split.test)), deg);
    out.plcc[rep] = m.plcc;
    out.srocc[rep] = m.srocc;
    out.rmse[rep] = m.rmse;
    degenerate[rep] = deg ? 1 : 0;
  });
  out.degenerate_splits = static_cast<int>(std::count(degenerate.begin(), degenerate.end(), 1));
  return out;
}

EvalResult eval_median100(const PredictorInput& pred, const MosMap& mos, Rng rng,
                          const TrainOptions& options) {
  const auto a = align(pred, mos);
  check_trainable(pred, a, options);
  EvalResult r;
  r.name = pred.name;
  r.protocol = Protocol::split80_20_median100;
  r.n_videos_used = a.ids.size();
  r.warnings = pred.warnings;
  note_coverage(a, r.warnings);
  const auto s = split_metrics(a, rng, options);
  r.metrics.plcc = stats::median(s.plcc);
  r.metrics.srocc = stats::median(s.srocc);
  r.metrics.rmse = stats::median(s.rmse);
  r.degenerate = 2 * s.degenerate_splits > options.reps;
  if (s.degenerate_splits > 0) {
    r.warnings.push_back(std::to_string(s.degenerate_splits) + " degenerate splits");
  }
  return r;
}

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::unaware: return "unaware";
    case Protocol::cv5_aggregate: return "cv5";
    case Protocol::split80_20_median100: return "median100";
  }
  return "?";
}

Protocol parse_protocol(std::string_view s) {
  if (s == "cv5" || s == "cv5_aggregate") return Protocol::cv5_aggregate;
  if (s == "median100" || s == "split80_20_median100") return Protocol::split80_20_median100;
  if (s == "unaware") return Protocol::unaware;
  throw ConfigError("unknown protocol '" + std::string(s) + "' (expected cv5 or median100)");
}

}  // namespace vqc::eval
