#pragma once

#include "fdl/model.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdl {

// A candidate decision: one option index per subprocess plus a unique
// dispatch priority per subprocess (lower number = dispatched earlier).
struct Genome {
    std::vector<std::int32_t> optionChoice;
    std::vector<std::int32_t> taskPriority; // permutation of 0..N-1

    friend bool operator==(const Genome&, const Genome&) = default;
};

class InvalidGenome : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Unscheduled : public std::runtime_error {
public:
    explicit Unscheduled(const std::string& subprocess)
        : std::runtime_error("subprocess '" + subprocess + "' is not scheduled")
    {
    }
};

enum class SegmentKind { Execution, Setup, Suspension };

struct Segment {
    SegmentKind kind = SegmentKind::Execution;
    SubprocessId subprocess; // executing / being set up for / suspended
    DeviceId device;
    TimePoint start;
    TimePoint end;
    std::int32_t setupIndex = -1;  // Setup: index into FactoryModel::setups
    SubprocessId setupSource = {}; // Setup: the predecessor that triggered it
};

struct SubprocessPlacement {
    bool scheduled = false;
    TimePoint start;
    TimePoint end;
};

// A setup entry that fired between two executions on one device.  Entries
// with zero extraProcessingTime leave no Setup segment but still contribute
// their extra energy/monetary cost.
struct TriggeredSetup {
    std::int32_t setupIndex = -1;
    DeviceId device;
    SubprocessId source;
    SubprocessId destination;
};

struct ScheduleViolation {
    std::int32_t relationIndex = -1; // into FactoryModel::relations, or -1
    std::string explanation;
};

struct Schedule {
    std::vector<std::vector<Segment>> perDevice;        // by DeviceId, ordered by start
    std::vector<SubprocessPlacement> perSubprocess;     // by SubprocessId
    std::vector<TriggeredSetup> triggeredSetups;
    Genome genome;
    ObjectiveVector objectives;
    bool feasible = true;
    std::vector<ScheduleViolation> violations;

    TimePoint makespan() const;
};

// Maximal groups of subprocesses connected by M relations, in execution
// order.  Subprocesses without an M relation form chains of one.
struct TaskChain {
    std::vector<SubprocessId> members;
};

std::vector<TaskChain> buildTaskChains(const FactoryModel& model);

// Deterministic fixed-priority list scheduling; see the module docs for the
// placement rules (no-wait chains, suspend-resume standalones, setup
// insertion, priority dispatch).
Schedule simulate(const FactoryModel& model, const Genome& genome);

// Standard Allen semantics over the subprocess-level [start, end) intervals.
bool checkAllen(const SubprocessRelation& relation, const Schedule& schedule, const FactoryModel& model);

ObjectiveVector computeObjectives(const Schedule& schedule, const FactoryModel& model);

} // namespace fdl
