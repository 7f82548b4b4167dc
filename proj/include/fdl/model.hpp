#pragma once

#include "fdl/diagnostics.hpp"
#include "fdl/fixed.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fdl {

enum class ObjectiveKind { Makespan, Energy, Monetary };

std::optional<ObjectiveKind> objectiveKindFromName(std::string_view name); // case-insensitive
std::string_view objectiveName(ObjectiveKind kind);

enum class AllenOperator { LT, S, F, EQ, O, M, D };

std::optional<AllenOperator> allenOperatorFromName(std::string_view name);
std::string_view allenOperatorName(AllenOperator op);

// ---------------------------------------------------------------------------
// Unresolved (name-based) model, as produced by the parser.  resolve() turns
// name references into indices and checks every structural invariant.

namespace raw {

    struct Mode {
        std::string name;
        SourceLoc location;
    };

    struct Window {
        TimePoint start;
        TimePoint end;
        SourceLoc location;
    };

    struct Device {
        std::string name;
        bool available = true;
        std::vector<Window> unavailableWindows;
        std::vector<Mode> modes;
        SourceLoc location;
    };

    struct LineStation {
        int order = 0;
        std::string deviceName;
        SourceLoc location;
    };

    struct Line {
        std::string name;
        std::vector<LineStation> stations;
        SourceLoc location;
    };

    struct Allocation {
        std::string deviceName;
        std::string modeName; // empty means the device's sole/default mode
        SourceLoc location;
    };

    struct Option {
        std::vector<Allocation> allocations;
        std::optional<Duration> processingTime;
        std::optional<Energy> energyConsumption;
        std::optional<Money> monetaryCost;
        SourceLoc location;
    };

    struct Subprocess {
        std::string name;
        std::vector<Option> options;
        SourceLoc location;
    };

    struct CompatibleDevice {
        std::string deviceName;
        Duration processingTime;
        std::optional<Energy> energyConsumption;
        std::optional<Money> monetaryCost;
        SourceLoc location;
    };

    struct ProcessType {
        std::string name;
        Quantity amountProduced;
        std::vector<std::string> compatibleLines;
        std::vector<Subprocess> subprocesses;
        SourceLoc location;
    };

    struct Process {
        std::string name;
        std::optional<int> urgencyPriority;
        std::optional<int> cuts;
        std::vector<CompatibleDevice> compatibleDevices;
        std::vector<ProcessType> processTypes;
        std::vector<Subprocess> subprocesses;
        SourceLoc location;
    };

    struct Relation {
        std::string source;
        std::string destination;
        AllenOperator op = AllenOperator::M;
        SourceLoc location;
    };

    struct Setup {
        std::string source;      // process or subprocess name
        std::string destination; // process or subprocess name
        std::string deviceName;
        Duration extraProcessingTime;
        Energy extraEnergyConsumption;
        Money extraMonetaryCost;
        SourceLoc location;
    };

    struct Factory {
        std::vector<ObjectiveKind> objectives;
        std::vector<Device> devices;
        std::vector<Line> lines;
        std::vector<Process> processes;
        std::vector<Relation> relations;
        std::vector<Setup> setups;
    };

} // namespace raw

// ---------------------------------------------------------------------------
// Resolved model.  Index types are plain int32 wrappers; every index is
// valid for the FactoryModel it came from.

struct DeviceId {
    std::int32_t value = -1;
    friend constexpr auto operator<=>(DeviceId, DeviceId) = default;
};
struct ModeId { // index within the owning device's mode list
    std::int32_t value = -1;
    friend constexpr auto operator<=>(ModeId, ModeId) = default;
};
struct LineId {
    std::int32_t value = -1;
    friend constexpr auto operator<=>(LineId, LineId) = default;
};
struct ProcessId {
    std::int32_t value = -1;
    friend constexpr auto operator<=>(ProcessId, ProcessId) = default;
};
struct SubprocessId { // index into FactoryModel::subprocesses
    std::int32_t value = -1;
    friend constexpr auto operator<=>(SubprocessId, SubprocessId) = default;
};

struct OperatingMode {
    std::string name;
};

struct UnavailableWindow { // half-open [start, end)
    TimePoint start;
    TimePoint end;
    friend bool operator==(const UnavailableWindow&, const UnavailableWindow&) = default;
};

struct ProcessingDevice {
    std::string name;
    bool available = true;
    std::vector<UnavailableWindow> unavailableWindows; // sorted, merged
    std::vector<OperatingMode> modes;                  // non-empty after resolution
    bool syntheticDefaultMode = false;                 // modes were injected, not declared
};

struct ProductionLine {
    std::string name;
    std::vector<DeviceId> stations; // in order, normalized to base 0
};

struct Allocation {
    DeviceId device;
    ModeId mode;
    friend constexpr auto operator<=>(const Allocation&, const Allocation&) = default;
};

struct DeviceOption {
    std::vector<Allocation> allocations; // distinct devices, allocated simultaneously
    Duration processingTime;
    std::optional<Energy> energyConsumption;
    std::optional<Money> monetaryCost;
};

struct Subprocess {
    std::string name;
    ProcessId owner;
    std::vector<DeviceOption> options; // alternatives; a genome picks one
};

struct CompatibleDevice {
    DeviceId device;
    Duration processingTime;
    std::optional<Energy> energyConsumption;
    std::optional<Money> monetaryCost;
};

struct ProcessType {
    std::string name;
    Quantity amountProduced;
    std::vector<LineId> compatibleLines;
    std::vector<SubprocessId> subprocesses; // the recipe chain for this line group
};

struct ProductionProcess {
    std::string name;
    std::optional<int> urgencyPriority;
    std::optional<int> cuts;
    std::vector<CompatibleDevice> compatibleDevices;
    std::vector<ProcessType> processTypes;
    std::vector<SubprocessId> subprocesses;
};

struct SubprocessRelation {
    SubprocessId source;
    SubprocessId destination;
    AllenOperator op;
};

enum class SetupEndpointKind { Process, Subprocess };

struct SetupEndpoint {
    SetupEndpointKind kind = SetupEndpointKind::Process;
    std::int32_t index = -1; // ProcessId or SubprocessId value
    friend constexpr auto operator<=>(const SetupEndpoint&, const SetupEndpoint&) = default;
};

struct SequenceDependentSetup {
    SetupEndpoint source;
    SetupEndpoint destination;
    DeviceId device;
    Duration extraProcessingTime;
    Energy extraEnergyConsumption;
    Money extraMonetaryCost;
};

struct FactoryModel {
    std::vector<ObjectiveKind> objectives;
    std::vector<ProcessingDevice> devices;
    std::vector<ProductionLine> lines;
    std::vector<ProductionProcess> processes;
    std::vector<Subprocess> subprocesses; // flat; genomes index this order
    std::vector<SubprocessRelation> relations;
    std::vector<SequenceDependentSetup> setups;

    std::unordered_map<std::string, std::int32_t> deviceByName;
    std::unordered_map<std::string, std::int32_t> lineByName;
    std::unordered_map<std::string, std::int32_t> processByName;
    std::unordered_map<std::string, std::int32_t> subprocessByName;

    const ProcessingDevice& device(DeviceId id) const { return devices[id.value]; }
    const Subprocess& subprocess(SubprocessId id) const { return subprocesses[id.value]; }
    const ProductionProcess& process(ProcessId id) const { return processes[id.value]; }
};

struct ResolveResult {
    std::optional<FactoryModel> model; // set when diagnostics carry no Error
    std::vector<Diagnostic> diagnostics;
};

// Validates every reference and invariant of the raw factory; merges
// overlapping unavailability windows, injects a synthetic "default" mode
// into devices declared without one, and normalizes line station order.
ResolveResult resolve(const raw::Factory& input);

// Inverse of resolve up to normalization; resolve(toRaw(m)) reproduces m.
raw::Factory toRaw(const FactoryModel& model);

bool structurallyEqual(const FactoryModel& a, const FactoryModel& b);

// ---------------------------------------------------------------------------
// Objective vectors and Pareto dominance (componentwise minimization).

struct ObjectiveVector {
    std::vector<std::int64_t> tenths; // one entry per FactoryModel objective

    friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

class MismatchedObjectives : public std::runtime_error {
public:
    MismatchedObjectives()
        : std::runtime_error("objective vectors have different lengths")
    {
    }
};

// a dominates b: a <= b everywhere and a < b somewhere.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

} // namespace fdl
