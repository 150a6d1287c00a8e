#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vqc/aggregate/aggregate.hpp"
#include "vqc/core/types.hpp"
#include "vqc/eval/predictor_eval.hpp"
#include "vqc/screening/screening.hpp"
#include "vqc/session/session_engine.hpp"

namespace vqc::io {

std::string catalog_csv(std::span<const core::VideoAsset> assets);
/// Validates every asset; unknown resolutions are rejected.
std::vector<core::VideoAsset> read_catalog(const std::filesystem::path& path);

std::string ratings_csv(std::span<const core::RatingRecord> records);
std::vector<core::RatingRecord> read_ratings(const std::filesystem::path& path);

std::string sessions_csv(std::span<const session::SessionSummary> sessions);
std::vector<session::SessionSummary> read_sessions(const std::filesystem::path& path);

std::string mos_csv(std::span<const aggregate::VideoMos> rows);
std::vector<aggregate::VideoMos> read_mos(const std::filesystem::path& path);

std::string ledger_csv(std::span<const screening::LedgerRow> rows);

struct EvalRow {
  eval::EvalResult result;
  std::string error;  // non-empty for predictors that could not be evaluated
};

std::string eval_csv(std::span<const EvalRow> rows);
std::string eval_json(std::span<const EvalRow> rows);

}  // namespace vqc::io
