#include "vqc/stats/kernel_ridge.hpp"

#include <cmath>
#include <limits>

#include "vqc/errors.hpp"
#include "vqc/stats/kfold.hpp"

namespace vqc::stats {

namespace {

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::VectorXd an = a.rowwise().squaredNorm();
  const Eigen::RowVectorXd bn = b.rowwise().squaredNorm().transpose();
  Eigen::MatrixXd d = -2.0 * a * b.transpose();
  d.colwise() += an;
  d.rowwise() += bn;
  return d.cwiseMax(0.0);
}

Eigen::MatrixXd rows(const Eigen::MatrixXd& m, const std::vector<std::size_t>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(idx[i]));
  }
  return out;
}

Eigen::VectorXd rows(const Eigen::VectorXd& v, const std::vector<std::size_t>& idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(idx[i]));
  }
  return out;
}

/// Solves (K + lambda I) alpha = y; empty on failure.
bool solve(const Eigen::MatrixXd& k, double lambda, const Eigen::VectorXd& y,
           Eigen::VectorXd& alpha) {
  Eigen::MatrixXd a = k;
  a.diagonal().array() += lambda;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) return false;
  alpha = llt.solve(y);
  return alpha.allFinite();
}

}  // namespace

MinMaxScaler MinMaxScaler::fit(const Eigen::MatrixXd& x) {
  MinMaxScaler s;
  s.lo = x.colwise().minCoeff();
  s.span = x.colwise().maxCoeff() - s.lo;
  return s;
}

Eigen::MatrixXd MinMaxScaler::transform(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd out = x.rowwise() - lo;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    if (span(c) > 0.0) {
      out.col(c) /= span(c);
    } else {
      out.col(c).setZero();
    }
  }
  return out;
}

Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double gamma) {
  return (-gamma * squared_distances(a, b)).array().exp().matrix();
}

KernelModel kernel_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, KernelHyper hyper) {
  if (x.rows() < 2) throw DataError("kernel fit needs at least 2 rows");
  if (x.rows() != y.size()) throw DataError("kernel fit: feature rows and targets differ");
  KernelModel m;
  m.hyper = hyper;
  m.train_x = x;
  m.offset = y.mean();
  const Eigen::VectorXd centred = y.array() - m.offset;
  if (hyper.lambda <= 0.0) {
    const Eigen::MatrixXd d = squared_distances(x, x);
    for (Eigen::Index i = 0; i < d.rows(); ++i)
      for (Eigen::Index j = i + 1; j < d.cols(); ++j)
        if (d(i, j) == 0.0) throw DataError("kernel system is singular: duplicate rows at lambda 0");
  }
  if (!solve(rbf_kernel(x, x, hyper.gamma), hyper.lambda, centred, m.alpha)) {
    throw DataError("kernel system is singular");
  }
  return m;
}

Eigen::VectorXd kernel_predict(const KernelModel& model, const Eigen::MatrixXd& x) {
  Eigen::VectorXd out = rbf_kernel(x, model.train_x, model.hyper.gamma) * model.alpha;
  return out.array() + model.offset;
}

std::vector<double> default_grid() { return {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3}; }

KernelHyper select_hyper(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Rng rng,
                         int inner_folds, const std::vector<double>& gammas,
                         const std::vector<double>& lambdas) {
  const auto n = static_cast<std::size_t>(x.rows());
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(inner_folds), n);
  if (k < 2) return {gammas.front(), lambdas.back()};
  const auto folds = kfold_split(n, k, rng);

  std::vector<double> sse(gammas.size() * lambdas.size(), 0.0);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto train = complement(folds, f);
    const Eigen::MatrixXd xt = rows(x, train);
    const Eigen::MatrixXd xv = rows(x, folds[f]);
    const Eigen::VectorXd yt = rows(y, train);
    const Eigen::VectorXd yv = rows(y, folds[f]);
    const double offset = yt.mean();
    const Eigen::VectorXd centred = yt.array() - offset;
    const Eigen::MatrixXd dtt = squared_distances(xt, xt);
    const Eigen::MatrixXd dvt = squared_distances(xv, xt);
    for (std::size_t g = 0; g < gammas.size(); ++g) {
      const Eigen::MatrixXd ktt = (-gammas[g] * dtt).array().exp().matrix();
      const Eigen::MatrixXd kvt = (-gammas[g] * dvt).array().exp().matrix();
      for (std::size_t l = 0; l < lambdas.size(); ++l) {
        Eigen::VectorXd alpha;
        double& cell = sse[g * lambdas.size() + l];
        if (!solve(ktt, lambdas[l], centred, alpha)) {
          cell = std::numeric_limits<double>::infinity();
          continue;
        }
        const Eigen::VectorXd pred = (kvt * alpha).array() + offset;
        cell += (pred - yv).squaredNorm();
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < sse.size(); ++i) {
    if (sse[i] < sse[best]) best = i;
  }
  return {gammas[best / lambdas.size()], lambdas[best % lambdas.size()]};
}

Eigen::VectorXd fit_predict(const Eigen::MatrixXd& train_x, const Eigen::VectorXd& train_y,
                            const Eigen::MatrixXd& test_x, Rng rng) {
  const auto scaler = MinMaxScaler::fit(train_x);
  const Eigen::MatrixXd xt = scaler.transform(train_x);
  const auto hyper = select_hyper(xt, train_y, rng.derive("inner-cv"));
  const auto model = kernel_fit(xt, train_y, hyper);
  return kernel_predict(model, scaler.transform(test_x));
}

}  // namespace vqc::stats
