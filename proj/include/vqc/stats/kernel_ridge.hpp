#pragma once

#include <Eigen/Dense>
#include <vector>

#include "vqc/rng.hpp"

namespace vqc::stats {

struct KernelHyper {
  double gamma = 1.0;   // exp(-gamma * |x - x'|^2)
  double lambda = 1.0;  // ridge penalty
};

/// Per-column min-max scaling to [0,1]. Constant columns map to 0.
struct MinMaxScaler {
  Eigen::RowVectorXd lo;
  Eigen::RowVectorXd span;

  static MinMaxScaler fit(const Eigen::MatrixXd& x);
  [[nodiscard]] Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
};

struct KernelModel {
  KernelHyper hyper;
  Eigen::MatrixXd train_x;
  Eigen::VectorXd alpha;
  double offset = 0.0;  // training-target mean
};

/// RBF kernel ridge regression on mean-centred targets. Throws DataError if the
/// system is singular (lambda = 0 with duplicate rows).
KernelModel kernel_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, KernelHyper hyper);
Eigen::VectorXd kernel_predict(const KernelModel& model, const Eigen::MatrixXd& x);

Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double gamma);

/// {1e-3, 1e-2, ..., 1e3}
std::vector<double> default_grid();

/// Grid search over gamma x lambda by inner k-fold RMSE. Rows are expected to be
/// scaled already.
KernelHyper select_hyper(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Rng rng,
                         int inner_folds = 3, const std::vector<double>& gammas = default_grid(),
                         const std::vector<double>& lambdas = default_grid());

/// Scale on the training rows, pick hyperparameters, fit, and predict the test rows.
Eigen::VectorXd fit_predict(const Eigen::MatrixXd& train_x, const Eigen::VectorXd& train_y,
                            const Eigen::MatrixXd& test_x, Rng rng);

}  // namespace vqc::stats
