#include "vqc/stats/kfold.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vqc::stats {

std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, Rng rng) {
  if (k <= 1) throw std::invalid_argument("k-fold split needs k >= 2");
  if (n < k) throw std::invalid_argument("k-fold split needs at least k items");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  rng.shuffle(idx.begin(), idx.end());
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t at = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(idx.begin() + static_cast<std::ptrdiff_t>(at),
                    idx.begin() + static_cast<std::ptrdiff_t>(at + size));
    at += size;
  }
  return folds;
}

TrainTest train_test_split(std::size_t n, double test_fraction, Rng rng) {
  if (test_fraction <= 0.0 || test_fraction >= 1.0) {
    throw std::invalid_argument("test fraction must lie in (0,1)");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  rng.shuffle(idx.begin(), idx.end());
  const auto n_test = static_cast<std::size_t>(std::lround(static_cast<double>(n) * test_fraction));
  TrainTest out;
  out.test.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
  out.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  return out;
}

std::vector<std::size_t> complement(const std::vector<std::vector<std::size_t>>& folds,
                                    std::size_t held_out) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (f != held_out) out.insert(out.end(), folds[f].begin(), folds[f].end());
  }
  return out;
}

}  // namespace vqc::stats
