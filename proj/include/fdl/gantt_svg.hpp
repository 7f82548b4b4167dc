#pragma once

#include "fdl/model.hpp"
#include "fdl/scheduler.hpp"

#include <string>

namespace fdl {

// One horizontal lane per device, time in minutes on the x axis.
// Exactly one <rect> per segment: executions colored per subprocess,
// setups hatched, suspensions grey.
std::string renderGanttSvg(const Schedule& schedule, const FactoryModel& model);

} // namespace fdl
