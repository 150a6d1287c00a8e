#pragma once

#include <cstddef>
#include <vector>

#include "vqc/rng.hpp"

namespace vqc::stats {

/// Shuffled partition of [0, n) into k folds whose sizes differ by at most one;
/// the first n % k folds get the extra element. Throws std::invalid_argument
/// when k <= 1 or n < k.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, Rng rng);

struct TrainTest {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Random disjoint split with round(n * test_fraction) test rows.
TrainTest train_test_split(std::size_t n, double test_fraction, Rng rng);

/// Indices of every fold except `held_out`, concatenated.
std::vector<std::size_t> complement(const std::vector<std::vector<std::size_t>>& folds,
                                    std::size_t held_out);

}  // namespace vqc::stats
