#include "vqc/session/study_runner.hpp"

#include <unordered_set>

#include "vqc/parallel.hpp"

namespace vqc::session {

std::vector<SessionRecord> run_sessions(const core::Catalog& catalog,
                                        const core::StudyConfig& cfg,
                                        const subject::PopulationSpec& spec,
                                        const subject::Population& population, Rng rng,
                                        unsigned jobs) {
  // Returning workers are recognised through the platform history.
  std::unordered_set<std::string> history;
  for (const auto& s : population.subjects) {
    if (s.participated_before) history.insert(s.id);
  }
  std::vector<SessionRecord> out(population.subjects.size());
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    const auto& s = population.subjects[i];
    SessionEnv env;
    env.config = &cfg;
    env.catalog = &catalog;
    env.population = &spec;
    env.bandwidth = &population.bandwidth_models.at(s.bandwidth_model_id);
    env.cpu = &population.cpu_models.at(s.cpu_model_id);
    env.history = &history;
    out[i] = run_session(s, env, static_cast<std::uint64_t>(i + 1), rng.derive("session", i));
  });
  return out;
}

StudyResult simulate_study(const core::Catalog& catalog, const core::StudyConfig& cfg,
                           const subject::PopulationSpec& spec, Rng rng, unsigned jobs) {
  StudyResult r;
  r.population = subject::spawn_population(spec, rng.derive("population"));
  r.sessions = run_sessions(catalog, cfg, spec, r.population, rng.derive("sessions"), jobs);
  return r;
}

}  // namespace vqc::session
