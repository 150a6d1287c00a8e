#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vqc/rng.hpp"
#include "vqc/stats/correlation.hpp"

namespace vqc::eval {

enum class PredictorKind { opinion_unaware_scores, trainable_features };

struct PredictorInput {
  std::string name;
  PredictorKind kind = PredictorKind::opinion_unaware_scores;
  std::vector<std::string> ids;  // one per row of `values`
  Eigen::MatrixXd values;
  std::vector<std::string> warnings;

  [[nodiscard]] std::size_t dimensionality() const noexcept {
    return static_cast<std::size_t>(values.cols());
  }
};

/// `video_id,score` gives an opinion-unaware predictor, `video_id,f1,...,fk` a
/// trainable one. Exact duplicate rows are dropped; conflicting duplicates,
/// non-numeric cells and empty files throw DataError.
PredictorInput load_predictor(const std::filesystem::path& path, std::string name = {});

using MosMap = std::map<std::string, double>;

struct Aligned {
  std::vector<std::string> ids;
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<std::string> missing;  // MOS videos the predictor does not cover
};

/// Rows of the predictor that have a MOS, in predictor order.
Aligned align(const PredictorInput& pred, const MosMap& mos);

enum class Protocol { unaware, cv5_aggregate, split80_20_median100 };

struct EvalResult {
  std::string name;
  Protocol protocol = Protocol::unaware;
  stats::MetricTriple metrics;
  std::size_t n_videos_used = 0;
  bool degenerate = false;  // constant predictions or a flagged logistic fit
  std::vector<std::string> warnings;
};

/// Logistic-mapped PLCC and RMSE, SROCC on the raw predictions. Degenerate
/// inputs give zero correlations and set `degenerate`.
stats::MetricTriple score_predictions(const std::vector<double>& pred,
                                      const std::vector<double>& mos, bool* degenerate = nullptr);

/// Needs an overlap of at least 20 videos. `distance` negates the scores first.
EvalResult eval_unaware(const PredictorInput& pred, const MosMap& mos, bool distance = false);

struct TrainOptions {
  int folds = 5;
  int reps = 100;
  double test_fraction = 0.2;
  unsigned jobs = 1;
  std::size_t min_overlap = 50;
};

/// Concatenates held-out predictions from all folds and scores them once.
EvalResult eval_cv5(const PredictorInput& pred, const MosMap& mos, Rng rng,
                    const TrainOptions& options = {});

/// Out-of-fold predictions per video for the cv5 protocol (aligned order).
std::vector<double> cv_predictions(const Aligned& data, Rng rng, const TrainOptions& options);

/// Repeated random 80/20 splits; the medians of each metric are reported
/// independently. The logistic map is fitted on out-of-fold predictions of
/// the training split and applied unchanged to the test split.
EvalResult eval_median100(const PredictorInput& pred, const MosMap& mos, Rng rng,
                          const TrainOptions& options = {});

struct SplitMetrics {
  std::vector<double> plcc, srocc, rmse;
  int degenerate_splits = 0;
};

SplitMetrics split_metrics(const Aligned& data, Rng rng, const TrainOptions& options);

std::string_view to_string(Protocol p);
Protocol parse_protocol(std::string_view s);

}  // namespace vqc::eval
