#pragma once

#include <vector>

#include "vqc/core/catalog.hpp"
#include "vqc/core/config.hpp"
#include "vqc/rng.hpp"
#include "vqc/session/session_engine.hpp"
#include "vqc/subject/subject_model.hpp"

namespace vqc::session {

struct StudyResult {
  subject::Population population;
  std::vector<SessionRecord> sessions;  // ordered by session id
};

/// Simulates one session per subject. Session i uses the stream derived from
/// ("session", i), so the output does not depend on `jobs`.
StudyResult simulate_study(const core::Catalog& catalog, const core::StudyConfig& cfg,
                           const subject::PopulationSpec& spec, Rng rng, unsigned jobs = 1);

std::vector<SessionRecord> run_sessions(const core::Catalog& catalog,
                                        const core::StudyConfig& cfg,
                                        const subject::PopulationSpec& spec,
                                        const subject::Population& population, Rng rng,
                                        unsigned jobs = 1);

}  // namespace vqc::session
