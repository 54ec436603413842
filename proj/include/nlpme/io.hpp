#pragma once

#include <string>
#include <vector>

#include "nlpme/diagnostics.hpp"
#include "nlpme/grid.hpp"
#include "nlpme/jko.hpp"
#include "nlpme/particles.hpp"

namespace nlpme {

/// Shortest-exact decimal rendering (17 significant digits): values round-trip
/// bit-exactly, so replayed checks see the recorded numbers.
std::string fmt17(double v);

void write_step_records_csv(const std::string& path,
                            const std::vector<StepRecord>& recs);
std::vector<StepRecord> read_step_records_csv(const std::string& path);

void write_particles_csv(const std::string& path, const ParticleMeasure& mu);
ParticleMeasure read_particles_csv(const std::string& path);

void write_grid_csv(const std::string& path, const GridDensity& v);
GridDensity read_grid_csv(const std::string& path);

void write_sweep_report_csv(const std::string& path, const SweepReport& rep);
void write_sweep_report_json(const std::string& path, const SweepReport& rep);

}  // namespace nlpme
