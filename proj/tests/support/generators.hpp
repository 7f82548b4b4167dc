#pragma once

#include "fdl/model.hpp"
#include "fdl/scheduler.hpp"

#include <random>
#include <string>

namespace fdltest {

struct GenOptions {
    int maxDevices = 3;
    int maxProcesses = 5;
    int maxSubprocessesPerProcess = 4;
    int maxOptionsPerSubprocess = 3;
    int maxAllocationsPerOption = 2;
    int maxWindows = 2;
    int maxSetups = 4;
    int maxExtraRelations = 2;   // LT/S/F/EQ/O/D on top of the M chains
    bool allowUnavailableDevices = true;
    bool withLinesAndTypes = false;
    bool allowZeroDurations = true;
};

// Builds a raw document and resolves it; the result always satisfies the
// model invariants.
fdl::FactoryModel randomModel(std::mt19937_64& rng, const GenOptions& opts);

fdl::Genome randomGenome(std::mt19937_64& rng, const fdl::FactoryModel& model);

struct InvariantReport {
    bool ok = true;
    std::string firstFailure;
};

// Re-derives every schedule invariant from the segments alone: disjointness,
// window avoidance, excluded devices, simultaneity, M exactness,
// setup-iff-adjacent and objective additivity.
InvariantReport checkScheduleInvariants(
    const fdl::FactoryModel& model, const fdl::Genome& genome, const fdl::Schedule& schedule);

// Hypervolume dominated by `front` relative to `reference` (minimization,
// any dimension; exact sweep suitable for small fronts).
double hypervolume(const std::vector<fdl::ObjectiveVector>& front, const fdl::ObjectiveVector& reference);

} // namespace fdltest
