#include "vqc/stats/logistic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "vqc/stats/moments.hpp"

namespace vqc::stats {

double Logistic4Params::operator()(double q) const {
  const double s = std::fabs(beta4);
  return beta2 + (beta1 - beta2) / (1.0 + std::exp(-(q - beta3) / s));
}

std::vector<double> Logistic4Params::apply(std::span<const double> q) const {
  std::vector<double> out(q.size());
  std::transform(q.begin(), q.end(), out.begin(), [this](double v) { return (*this)(v); });
  return out;
}

namespace {

using Point = std::array<double, 4>;

Logistic4Params to_params(const Point& p) { return {p[0], p[1], p[2], p[3]}; }

struct Objective {
  std::span<const double> pred;
  std::span<const double> mos;

  double operator()(const Point& p) const {
    if (p[3] == 0.0) return std::numeric_limits<double>::infinity();
    const auto f = to_params(p);
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const double r = f(pred[i]) - mos[i];
      s += r * r;
    }
    return std::isfinite(s) ? s : std::numeric_limits<double>::infinity();
  }
};

struct SimplexResult {
  Point best;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

SimplexResult nelder_mead(const Objective& f, const Point& start, const Point& step,
                          int max_iter, double tol) {
  std::array<Point, 5> x;
  std::array<double, 5> fx{};
  x[0] = start;
  for (std::size_t i = 0; i < 4; ++i) {
    x[i + 1] = start;
    x[i + 1][i] += step[i];
  }
  for (std::size_t i = 0; i < 5; ++i) fx[i] = f(x[i]);

  SimplexResult res;
  std::array<std::size_t, 5> order{};
  for (; res.iterations < max_iter; ++res.iterations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return fx[a] < fx[b]; });
    const auto lo = order[0], hi = order[4], second = order[3];
    const double spread = std::fabs(fx[hi] - fx[lo]);
    if (spread <= tol * (std::fabs(fx[lo]) + tol)) {
      double size = 0.0;
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          size = std::max(size, std::fabs(x[i][j] - x[lo][j]) / (std::fabs(x[lo][j]) + 1e-8));
      if (size < 1e-10 || fx[lo] == 0.0) {
        res.converged = true;
        break;
      }
    }
    Point centroid{};
    for (std::size_t i = 0; i < 5; ++i) {
      if (i == hi) continue;
      for (std::size_t j = 0; j < 4; ++j) centroid[j] += x[i][j] / 4.0;
    }
    auto along = [&](double t) {
      Point p;
      for (std::size_t j = 0; j < 4; ++j) p[j] = centroid[j] + t * (x[hi][j] - centroid[j]);
      return p;
    };
    const Point xr = along(-1.0);
    const double fr = f(xr);
    if (fr < fx[lo]) {
      const Point xe = along(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        x[hi] = xe;
        fx[hi] = fe;
      } else {
        x[hi] = xr;
        fx[hi] = fr;
      }
      continue;
    }
    if (fr < fx[second]) {
      x[hi] = xr;
      fx[hi] = fr;
      continue;
    }
    const Point xc = fr < fx[hi] ? along(-0.5) : along(0.5);
    const double fc = f(xc);
    if (fc < std::min(fr, fx[hi])) {
      x[hi] = xc;
      fx[hi] = fc;
      continue;
    }
    for (std::size_t i = 0; i < 5; ++i) {
      if (i == lo) continue;
      for (std::size_t j = 0; j < 4; ++j) x[i][j] = x[lo][j] + 0.5 * (x[i][j] - x[lo][j]);
      fx[i] = f(x[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(fx.begin(), fx.end()) - fx.begin());
  res.best = x[best];
  res.value = fx[best];
  return res;
}

}  // namespace

LogisticFit fit_logistic4(std::span<const double> pred, std::span<const double> mos,
                          const LogisticOptions& options) {
  if (pred.size() != mos.size()) throw std::invalid_argument("logistic inputs differ in length");
  if (pred.size() < 5) throw std::invalid_argument("logistic fit needs at least 5 points");

  const Objective f{pred, mos};
  const auto [pmin, pmax] = std::minmax_element(pred.begin(), pred.end());
  const auto [mmin, mmax] = std::minmax_element(mos.begin(), mos.end());
  const double prange = *pmax - *pmin;
  const double mrange = *mmax - *mmin;
  const double pstd = sample_std(pred);

  LogisticFit fit;
  const Point init{*mmax, *mmin, median(pred), pstd > 0.0 ? pstd / 4.0 : 1.0};
  fit.initial_sse = f(init);
  if (prange <= 0.0 || mrange <= 0.0) {
    const double m = mean(mos);
    fit.params = {m, m, init[2], init[3]};
    fit.sse = f({m, m, init[2], init[3]});
    fit.initial_sse = std::max(fit.initial_sse, fit.sse);
    fit.degenerate = true;
    fit.converged = true;
    return fit;
  }

  // Near-linear start: a wide logistic matching the least-squares line at its midpoint.
  const double px = mean(pred), my = mean(mos);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    sxy += (pred[i] - px) * (mos[i] - my);
    sxx += (pred[i] - px) * (pred[i] - px);
  }
  const double slope = sxy / sxx;
  const double wide = 2.0 * prange;
  const double half = 2.0 * wide * slope;

  std::vector<Point> starts{init,
                            {init[1], init[0], init[2], init[3]},
                            {my + half, my - half, px, wide},
                            {init[0], init[1], init[2], init[3] * 0.1},
                            {init[0], init[1], init[2], init[3] * 5.0}};
  starts.resize(static_cast<std::size_t>(std::clamp(options.multistarts, 1, 5)));

  auto step_for = [&](const Point& p) {
    return Point{0.1 * mrange + 1e-6, 0.1 * mrange + 1e-6, 0.1 * prange + 1e-9,
                 0.5 * std::fabs(p[3]) + 1e-9};
  };

  SimplexResult best;
  best.value = std::numeric_limits<double>::infinity();
  int total_iter = 0;
  for (const auto& s : starts) {
    auto r = nelder_mead(f, s, step_for(s), options.max_iterations, options.tolerance);
    total_iter += r.iterations;
    if (r.value < best.value) best = r;
  }
  // Restart from the best vertex until a fresh simplex stops improving.
  for (int k = 0; k < 20; ++k) {
    auto r = nelder_mead(f, best.best, step_for(best.best), options.max_iterations,
                         options.tolerance);
    total_iter += r.iterations;
    const bool improved = r.value < best.value * (1.0 - 1e-12) && r.value < best.value - 1e-300;
    if (r.value <= best.value) best = r;
    if (!improved) break;
  }

  fit.params = to_params(best.best);
  fit.params.beta4 = std::fabs(fit.params.beta4);
  fit.sse = best.value;
  fit.iterations = total_iter;
  fit.converged = best.converged;
  if (!(fit.sse <= fit.initial_sse)) {
    fit.params = to_params(init);
    fit.sse = fit.initial_sse;
  }
  return fit;
}

}  // namespace vqc::stats
