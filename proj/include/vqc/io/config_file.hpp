#pragma once

#include <filesystem>
#include <string>

#include "vqc/core/catalog.hpp"
#include "vqc/core/config.hpp"
#include "vqc/screening/screening.hpp"
#include "vqc/subject/subject_model.hpp"

namespace vqc::io {

struct EvaluationSettings {
  std::string protocol = "median100";
  int folds = 5;
  int reps = 100;
  double test_fraction = 0.2;
  int split_half_reps = 100;
  int curve_max_n = 2000;
  int curve_step = 10;
};

struct RunConfig {
  core::StudyConfig study;
  core::CatalogSpec catalog;
  subject::PopulationSpec population;
  screening::ScreeningOptions screening;
  EvaluationSettings evaluation;
};

/// INI file with sections [study], [catalog], [population], [network], [cpu],
/// [screening], [evaluation]. Missing keys keep their defaults; unknown
/// sections or keys and unparsable values throw ConfigError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

/// Every key with its current value, in a form load_config reads back.
std::string dump_config(const RunConfig& cfg);

}  // namespace vqc::io
