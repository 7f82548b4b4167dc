#pragma once

#include "fdl/evaluator.hpp"
#include "fdl/model.hpp"
#include "fdl/scheduler.hpp"

#include <string>

namespace fdl {

// Stable field ordering; every time/cost value is rendered as a
// one-decimal fixed-point string ("550.0").
std::string scheduleToJson(const Schedule& schedule, const FactoryModel& model);

// One row per segment: device,kind,name,start,end
std::string scheduleToCsv(const Schedule& schedule, const FactoryModel& model);

// One row per front entry: objective values, then the genome encoding.
std::string frontToCsv(const ParetoFront& front, const FactoryModel& model);
std::string frontToJson(const ParetoFront& front, const FactoryModel& model);

std::string genomeToJson(const Genome& genome);
Genome genomeFromJson(const std::string& text); // throws std::runtime_error on malformed input

} // namespace fdl
