#pragma once

// Brute-force transcription of the BT.500 Annex 2 subject-rejection steps on a
// dense subject x video matrix (NaN marks a missing score). Deliberately shares
// no code with the library: every moment is recomputed by hand from the column.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "vqc/rng.hpp"
#include "vqc/screening/screening.hpp"

namespace vqc::testing {

struct Bt500Matrix {
  std::vector<std::string> subjects;
  std::vector<std::string> videos;
  std::vector<std::vector<double>> u;  // u[i][j], NaN when subject i did not rate video j
};

inline std::vector<std::string> bt500_oracle(const Bt500Matrix& m, double reject_fraction = 0.05,
                                             double balance_ratio = 0.3) {
  const std::size_t n_sub = m.subjects.size();
  const std::size_t n_vid = m.videos.size();
  std::vector<double> mean(n_vid, 0.0), sigma(n_vid, 0.0);
  std::vector<bool> normal(n_vid, true);
  for (std::size_t j = 0; j < n_vid; ++j) {
    double sum = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < n_sub; ++i) {
      if (std::isnan(m.u[i][j])) continue;
      sum += m.u[i][j];
      ++n;
    }
    if (n == 0) continue;
    mean[j] = sum / n;
    double m2 = 0.0, m4 = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < n_sub; ++i) {
      if (std::isnan(m.u[i][j])) continue;
      const double d = m.u[i][j] - mean[j];
      m2 += d * d / n;
      m4 += d * d * d * d / n;
      ss += d * d;
    }
    sigma[j] = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    if (m2 > 0.0) {
      const double beta2 = m4 / (m2 * m2);
      normal[j] = beta2 >= 2.0 && beta2 <= 4.0;
    }
  }

  std::vector<std::string> rejected;
  for (std::size_t i = 0; i < n_sub; ++i) {
    int p = 0, q = 0, rated = 0;
    for (std::size_t j = 0; j < n_vid; ++j) {
      const double x = m.u[i][j];
      if (std::isnan(x)) continue;
      ++rated;
      const double k = normal[j] ? 2.0 : std::sqrt(20.0);
      // Strict comparisons: a score sitting exactly on the band edge is not an outlier.
      if (x > mean[j] + k * sigma[j]) ++p;
      if (x < mean[j] - k * sigma[j]) ++q;
    }
    if (p + q == 0) continue;
    const double ratio1 = static_cast<double>(p + q) / rated;
    const double ratio2 = std::abs(static_cast<double>(p - q) / (p + q));
    if (ratio1 > reject_fraction && ratio2 < balance_ratio) rejected.push_back(m.subjects[i]);
  }
  return rejected;
}

/// Integer scores around a per-video quality with per-subject bias; the first
/// `n_random` subjects answer uniformly at random. Cells go missing with
/// probability `missing`.
inline Bt500Matrix random_bt500_matrix(Rng& rng, int n_sub, int n_vid, int n_random,
                                       double missing = 0.0) {
  Bt500Matrix m;
  for (int i = 0; i < n_sub; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "S%03d", i);
    m.subjects.emplace_back(id);
  }
  std::vector<double> quality;
  for (int j = 0; j < n_vid; ++j) {
    m.videos.push_back("V" + std::to_string(j));
    quality.push_back(rng.uniform(10.0, 90.0));
  }
  const double noise = rng.uniform(3.0, 15.0);
  for (int i = 0; i < n_sub; ++i) {
    const double bias = rng.normal(0.0, rng.uniform(0.0, 12.0));
    std::vector<double> row;
    for (int j = 0; j < n_vid; ++j) {
      double x = i < n_random ? static_cast<double>(rng.uniform_int(0, 100))
                              : std::clamp(std::round(quality[j] + bias + rng.normal(0.0, noise)),
                                           0.0, 100.0);
      if (missing > 0.0 && rng.bernoulli(missing)) x = std::numeric_limits<double>::quiet_NaN();
      row.push_back(x);
    }
    m.u.push_back(std::move(row));
  }
  return m;
}

inline std::vector<screening::ScoreEntry> to_entries(const Bt500Matrix& m) {
  std::vector<screening::ScoreEntry> out;
  for (std::size_t i = 0; i < m.subjects.size(); ++i)
    for (std::size_t j = 0; j < m.videos.size(); ++j)
      if (!std::isnan(m.u[i][j])) out.push_back({m.subjects[i], m.videos[j], m.u[i][j]});
  return out;
}

}  // namespace vqc::testing
