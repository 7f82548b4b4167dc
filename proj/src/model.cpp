#include "fdl/model.hpp"

#include <algorithm>
#include <cctype>

namespace fdl {

namespace {

    std::string lowered(std::string_view s)
    {
        std::string out(s);
        for (char& c : out)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return out;
    }

} // namespace

std::optional<ObjectiveKind> objectiveKindFromName(std::string_view name)
{
    std::string n = lowered(name);
    if (n == "makespan")
        return ObjectiveKind::Makespan;
    if (n == "energy")
        return ObjectiveKind::Energy;
    if (n == "monetary")
        return ObjectiveKind::Monetary;
    return std::nullopt;
}

std::string_view objectiveName(ObjectiveKind kind)
{
    switch (kind) {
    case ObjectiveKind::Makespan: return "makespan";
    case ObjectiveKind::Energy: return "energy";
    case ObjectiveKind::Monetary: return "monetary";
    }
    return "?";
}

std::optional<AllenOperator> allenOperatorFromName(std::string_view name)
{
    std::string n;
    for (char c : name)
        if (!std::isspace(static_cast<unsigned char>(c)))
            n += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (n == "LT")
        return AllenOperator::LT;
    if (n == "S")
        return AllenOperator::S;
    if (n == "F")
        return AllenOperator::F;
    if (n == "EQ")
        return AllenOperator::EQ;
    if (n == "O")
        return AllenOperator::O;
    if (n == "M")
        return AllenOperator::M;
    if (n == "D")
        return AllenOperator::D;
    return std::nullopt;
}

std::string_view allenOperatorName(AllenOperator op)
{
    switch (op) {
    case AllenOperator::LT: return "LT";
    case AllenOperator::S: return "S";
    case AllenOperator::F: return "F";
    case AllenOperator::EQ: return "EQ";
    case AllenOperator::O: return "O";
    case AllenOperator::M: return "M";
    case AllenOperator::D: return "D";
    }
    return "?";
}

std::string renderDiagnostic(const Diagnostic& d, const std::string& file)
{
    std::string out = file;
    out += ':';
    out += std::to_string(d.location.line);
    out += ':';
    out += std::to_string(d.location.column);
    out += ": ";
    out += d.severity == Severity::Error ? "error" : "warning";
    out += '[';
    out += d.code;
    out += "]: ";
    out += d.message;
    return out;
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b)
{
    if (a.tenths.size() != b.tenths.size())
        throw MismatchedObjectives();
    bool strict = false;
    for (std::size_t i = 0; i < a.tenths.size(); ++i) {
        if (a.tenths[i] > b.tenths[i])
            return false;
        if (a.tenths[i] < b.tenths[i])
            strict = true;
    }
    return strict;
}

// ---------------------------------------------------------------------------
// resolve

namespace {

    class Resolver {
    public:
        explicit Resolver(const raw::Factory& input)
            : in_(input)
        {
        }

        ResolveResult run()
        {
            resolveObjectives();
            resolveDevices();
            resolveLines();
            resolveProcesses();
            resolveRelations();
            resolveSetups();
            checkRelationCycles();

            ResolveResult result;
            if (!hasErrors(diags_))
                result.model = std::move(out_);
            result.diagnostics = std::move(diags_);
            return result;
        }

    private:
        const raw::Factory& in_;
        FactoryModel out_;
        std::vector<Diagnostic> diags_;

        void error(std::string code, std::string message, SourceLoc loc)
        {
            diags_.push_back(Diagnostic::error(std::move(code), std::move(message), loc));
        }

        void resolveObjectives()
        {
            out_.objectives = in_.objectives;
            if (out_.objectives.empty())
                error("NoObjectives", "a factory model must declare at least one objective", {});
        }

        void resolveDevices()
        {
            for (const auto& rd : in_.devices) {
                if (out_.deviceByName.count(rd.name)) {
                    error("DuplicateName", "duplicate processingDevice name '" + rd.name + "'", rd.location);
                    continue;
                }
                ProcessingDevice d;
                d.name = rd.name;
                d.available = rd.available;
                for (const auto& w : rd.unavailableWindows) {
                    if (!(w.start < w.end)) {
                        error("BadWindow",
                            "unavailableTime window must have start < end (got " + w.start.str() + "," + w.end.str()
                                + ")",
                            w.location);
                        continue;
                    }
                    d.unavailableWindows.push_back({ w.start, w.end });
                }
                std::sort(d.unavailableWindows.begin(), d.unavailableWindows.end(),
                    [](const UnavailableWindow& a, const UnavailableWindow& b) { return a.start < b.start; });
                // Merge overlapping/adjacent windows.
                std::vector<UnavailableWindow> merged;
                for (const auto& w : d.unavailableWindows) {
                    if (!merged.empty() && w.start <= merged.back().end)
                        merged.back().end = std::max(merged.back().end, w.end);
                    else
                        merged.push_back(w);
                }
                d.unavailableWindows = std::move(merged);

                for (const auto& m : rd.modes) {
                    bool dup = std::any_of(d.modes.begin(), d.modes.end(),
                        [&](const OperatingMode& existing) { return existing.name == m.name; });
                    if (dup) {
                        error("DuplicateName",
                            "duplicate mode '" + m.name + "' in device '" + rd.name + "'", m.location);
                        continue;
                    }
                    d.modes.push_back({ m.name });
                }
                if (d.modes.empty()) {
                    d.modes.push_back({ "default" });
                    d.syntheticDefaultMode = true;
                }
                out_.deviceByName.emplace(d.name, static_cast<std::int32_t>(out_.devices.size()));
                out_.devices.push_back(std::move(d));
            }
        }

        std::optional<DeviceId> findDevice(const std::string& name, SourceLoc loc, const char* context)
        {
            auto it = out_.deviceByName.find(name);
            if (it == out_.deviceByName.end()) {
                error("DanglingReference",
                    std::string(context) + " references unknown processingDevice '" + name + "'", loc);
                return std::nullopt;
            }
            return DeviceId { it->second };
        }

        void resolveLines()
        {
            for (const auto& rl : in_.lines) {
                if (out_.lineByName.count(rl.name)) {
                    error("DuplicateName", "duplicate productionLine name '" + rl.name + "'", rl.location);
                    continue;
                }
                ProductionLine line;
                line.name = rl.name;
                auto stations = rl.stations;
                std::stable_sort(stations.begin(), stations.end(),
                    [](const raw::LineStation& a, const raw::LineStation& b) { return a.order < b.order; });
                int base = stations.empty() ? 0 : stations.front().order;
                if (base != 0 && base != 1)
                    error("BadOrder", "productionLine '" + rl.name + "' order indices must start at 0 or 1",
                        rl.location);
                for (std::size_t i = 0; i < stations.size(); ++i) {
                    if (stations[i].order != base + static_cast<int>(i)) {
                        error("BadOrder",
                            "productionLine '" + rl.name + "' order indices must be consecutive without branching",
                            stations[i].location);
                        break;
                    }
                }
                for (const auto& st : stations) {
                    if (auto id = findDevice(st.deviceName, st.location, "productionLineProcessingDevice"))
                        line.stations.push_back(*id);
                }
                out_.lineByName.emplace(line.name, static_cast<std::int32_t>(out_.lines.size()));
                out_.lines.push_back(std::move(line));
            }
        }

        std::optional<ModeId> findMode(DeviceId device, const std::string& modeName, SourceLoc loc)
        {
            const auto& modes = out_.devices[device.value].modes;
            if (modeName.empty()) {
                // Unspecified mode: the sole mode, or a declared/injected "default".
                if (modes.size() == 1)
                    return ModeId { 0 };
                for (std::size_t i = 0; i < modes.size(); ++i)
                    if (modes[i].name == "default")
                        return ModeId { static_cast<std::int32_t>(i) };
                error("DanglingReference",
                    "allocation on device '" + out_.devices[device.value].name
                        + "' omits the mode but the device declares several",
                    loc);
                return std::nullopt;
            }
            for (std::size_t i = 0; i < modes.size(); ++i)
                if (modes[i].name == modeName)
                    return ModeId { static_cast<std::int32_t>(i) };
            error("DanglingReference",
                "device '" + out_.devices[device.value].name + "' has no mode named '" + modeName + "'", loc);
            return std::nullopt;
        }

        void resolveSubprocess(const raw::Subprocess& rs, ProcessId owner,
            const std::vector<LineId>* restrictToLines)
        {
            if (out_.subprocessByName.count(rs.name)) {
                error("DuplicateName", "duplicate subprocess name '" + rs.name + "'", rs.location);
                return;
            }
            Subprocess sp;
            sp.name = rs.name;
            sp.owner = owner;
            if (rs.options.empty())
                error("MissingCosts", "subprocess '" + rs.name + "' declares no device option", rs.location);
            for (const auto& ro : rs.options) {
                DeviceOption opt;
                if (ro.allocations.empty()) {
                    error("MissingCosts", "device option of '" + rs.name + "' allocates no device", ro.location);
                    continue;
                }
                if (!ro.processingTime && !ro.energyConsumption && !ro.monetaryCost)
                    error("MissingCosts",
                        "device option of '" + rs.name
                            + "' must carry at least one of processingTime/energyConsumption/monetaryCost",
                        ro.location);
                opt.processingTime = ro.processingTime.value_or(Duration {});
                opt.energyConsumption = ro.energyConsumption;
                opt.monetaryCost = ro.monetaryCost;
                bool ok = true;
                for (const auto& ra : ro.allocations) {
                    auto devId = findDevice(ra.deviceName, ra.location, "subprocessProcessingDevice");
                    if (!devId) {
                        ok = false;
                        continue;
                    }
                    bool dup = std::any_of(opt.allocations.begin(), opt.allocations.end(),
                        [&](const Allocation& a) { return a.device == *devId; });
                    if (dup) {
                        error("DuplicateAllocation",
                            "option of '" + rs.name + "' allocates device '" + ra.deviceName + "' twice",
                            ra.location);
                        ok = false;
                        continue;
                    }
                    auto modeId = findMode(*devId, ra.modeName, ra.location);
                    if (!modeId) {
                        ok = false;
                        continue;
                    }
                    if (restrictToLines) {
                        bool onLine = false;
                        for (LineId lid : *restrictToLines) {
                            const auto& st = out_.lines[lid.value].stations;
                            if (std::find(st.begin(), st.end(), *devId) != st.end()) {
                                onLine = true;
                                break;
                            }
                        }
                        if (!onLine) {
                            error("DeviceNotOnLine",
                                "option of '" + rs.name + "' allocates device '" + ra.deviceName
                                    + "' which is on none of the compatible production lines",
                                ra.location);
                            ok = false;
                        }
                    }
                    opt.allocations.push_back({ *devId, *modeId });
                }
                if (ok)
                    sp.options.push_back(std::move(opt));
            }
            auto id = static_cast<std::int32_t>(out_.subprocesses.size());
            out_.subprocessByName.emplace(sp.name, id);
            out_.subprocesses.push_back(std::move(sp));
            out_.processes[owner.value].subprocesses.push_back(SubprocessId { id });
        }

        void resolveProcesses()
        {
            for (const auto& rp : in_.processes) {
                if (out_.processByName.count(rp.name)) {
                    error("DuplicateName", "duplicate productionProcess name '" + rp.name + "'", rp.location);
                    continue;
                }
                ProductionProcess p;
                p.name = rp.name;
                p.urgencyPriority = rp.urgencyPriority;
                p.cuts = rp.cuts;
                out_.processByName.emplace(p.name, static_cast<std::int32_t>(out_.processes.size()));
                out_.processes.push_back(std::move(p));
                ProcessId pid { static_cast<std::int32_t>(out_.processes.size() - 1) };

                for (const auto& cd : rp.compatibleDevices) {
                    if (auto dev = findDevice(cd.deviceName, cd.location, "compatibleDevice"))
                        out_.processes[pid.value].compatibleDevices.push_back(
                            { *dev, cd.processingTime, cd.energyConsumption, cd.monetaryCost });
                }
                for (const auto& rs : rp.subprocesses)
                    resolveSubprocess(rs, pid, nullptr);
                for (const auto& rt : rp.processTypes) {
                    ProcessType type;
                    type.name = rt.name;
                    type.amountProduced = rt.amountProduced;
                    if (rt.amountProduced.tenths() <= 0)
                        error("BadNumber",
                            "processType '" + rt.name + "' amountProduced must be positive", rt.location);
                    for (const auto& lineName : rt.compatibleLines) {
                        auto it = out_.lineByName.find(lineName);
                        if (it == out_.lineByName.end())
                            error("DanglingReference",
                                "compatibleProductionLine references unknown line '" + lineName + "'", rt.location);
                        else
                            type.compatibleLines.push_back(LineId { it->second });
                    }
                    std::size_t firstId = out_.subprocesses.size();
                    for (const auto& rs : rt.subprocesses)
                        resolveSubprocess(rs, pid, &type.compatibleLines);
                    for (std::size_t i = firstId; i < out_.subprocesses.size(); ++i)
                        type.subprocesses.push_back(SubprocessId { static_cast<std::int32_t>(i) });
                    out_.processes[pid.value].processTypes.push_back(std::move(type));
                }
            }
        }

        void resolveRelations()
        {
            for (const auto& rr : in_.relations) {
                auto src = out_.subprocessByName.find(rr.source);
                auto dst = out_.subprocessByName.find(rr.destination);
                if (src == out_.subprocessByName.end()) {
                    error("DanglingReference",
                        "subprocessRelation source references unknown subprocess '" + rr.source + "'", rr.location);
                    continue;
                }
                if (dst == out_.subprocessByName.end()) {
                    error("DanglingReference",
                        "subprocessRelation destination references unknown subprocess '" + rr.destination + "'",
                        rr.location);
                    continue;
                }
                if (src->second == dst->second) {
                    error("SelfRelation",
                        "subprocessRelation source and destination are both '" + rr.source + "'", rr.location);
                    continue;
                }
                out_.relations.push_back(
                    { SubprocessId { src->second }, SubprocessId { dst->second }, rr.op });
            }
        }

        std::optional<SetupEndpoint> findSetupEndpoint(const std::string& name, SourceLoc loc)
        {
            if (auto it = out_.subprocessByName.find(name); it != out_.subprocessByName.end())
                return SetupEndpoint { SetupEndpointKind::Subprocess, it->second };
            if (auto it = out_.processByName.find(name); it != out_.processByName.end())
                return SetupEndpoint { SetupEndpointKind::Process, it->second };
            error("DanglingReference",
                "sequenceDependentSetup references unknown process or subprocess '" + name + "'", loc);
            return std::nullopt;
        }

        void resolveSetups()
        {
            for (const auto& rs : in_.setups) {
                auto src = findSetupEndpoint(rs.source, rs.location);
                auto dst = findSetupEndpoint(rs.destination, rs.location);
                auto dev = findDevice(rs.deviceName, rs.location, "sequenceDependentSetup");
                if (!src || !dst || !dev)
                    continue;
                bool dup = std::any_of(out_.setups.begin(), out_.setups.end(),
                    [&](const SequenceDependentSetup& s) {
                        return s.source == *src && s.destination == *dst && s.device == *dev;
                    });
                if (dup) {
                    error("DuplicateSetup",
                        "duplicate sequenceDependentSetup (" + rs.source + " -> " + rs.destination + " on "
                            + rs.deviceName + ")",
                        rs.location);
                    continue;
                }
                out_.setups.push_back({ *src, *dst, *dev, rs.extraProcessingTime, rs.extraEnergyConsumption,
                    rs.extraMonetaryCost });
            }
        }

        // M/LT edges impose hard ordering; a cycle through them is unsatisfiable.
        void checkRelationCycles()
        {
            std::size_t n = out_.subprocesses.size();
            std::vector<std::vector<std::int32_t>> adj(n);
            for (const auto& r : out_.relations)
                if (r.op == AllenOperator::M || r.op == AllenOperator::LT)
                    adj[r.source.value].push_back(r.destination.value);

            std::vector<int> state(n, 0); // 0 unseen, 1 on stack, 2 done
            std::vector<std::pair<std::int32_t, std::size_t>> stack;
            for (std::size_t start = 0; start < n; ++start) {
                if (state[start] != 0)
                    continue;
                stack.push_back({ static_cast<std::int32_t>(start), 0 });
                state[start] = 1;
                while (!stack.empty()) {
                    auto& [node, next] = stack.back();
                    if (next < adj[node].size()) {
                        std::int32_t to = adj[node][next++];
                        if (state[to] == 1) {
                            const auto& sp = out_.subprocesses[to];
                            error("CyclicRelation",
                                "M/LT relations around subprocess '" + sp.name + "' (process '"
                                    + out_.processes[sp.owner.value].name + "') form a cycle",
                                {});
                            return;
                        }
                        if (state[to] == 0) {
                            state[to] = 1;
                            stack.push_back({ to, 0 });
                        }
                    } else {
                        state[node] = 2;
                        stack.pop_back();
                    }
                }
            }
        }
    };

} // namespace

ResolveResult resolve(const raw::Factory& input)
{
    return Resolver(input).run();
}

// ---------------------------------------------------------------------------
// toRaw

raw::Factory toRaw(const FactoryModel& model)
{
    raw::Factory out;
    out.objectives = model.objectives;

    for (const auto& d : model.devices) {
        raw::Device rd;
        rd.name = d.name;
        rd.available = d.available;
        for (const auto& w : d.unavailableWindows)
            rd.unavailableWindows.push_back({ w.start, w.end, {} });
        for (const auto& m : d.modes)
            rd.modes.push_back({ m.name, {} });
        out.devices.push_back(std::move(rd));
    }

    for (const auto& l : model.lines) {
        raw::Line rl;
        rl.name = l.name;
        for (std::size_t i = 0; i < l.stations.size(); ++i)
            rl.stations.push_back(
                { static_cast<int>(i), model.devices[l.stations[i].value].name, {} });
        out.lines.push_back(std::move(rl));
    }

    auto rawSubprocess = [&](SubprocessId id) {
        const auto& sp = model.subprocesses[id.value];
        raw::Subprocess rs;
        rs.name = sp.name;
        for (const auto& opt : sp.options) {
            raw::Option ro;
            ro.processingTime = opt.processingTime;
            ro.energyConsumption = opt.energyConsumption;
            ro.monetaryCost = opt.monetaryCost;
            for (const auto& alloc : opt.allocations) {
                const auto& dev = model.devices[alloc.device.value];
                ro.allocations.push_back({ dev.name, dev.modes[alloc.mode.value].name, {} });
            }
            rs.options.push_back(std::move(ro));
        }
        return rs;
    };

    for (const auto& p : model.processes) {
        raw::Process rp;
        rp.name = p.name;
        rp.urgencyPriority = p.urgencyPriority;
        rp.cuts = p.cuts;
        for (const auto& cd : p.compatibleDevices)
            rp.compatibleDevices.push_back({ model.devices[cd.device.value].name, cd.processingTime,
                cd.energyConsumption, cd.monetaryCost, {} });

        std::vector<bool> typeOwned(model.subprocesses.size(), false);
        for (const auto& t : p.processTypes)
            for (SubprocessId id : t.subprocesses)
                typeOwned[id.value] = true;
        for (SubprocessId id : p.subprocesses)
            if (!typeOwned[id.value])
                rp.subprocesses.push_back(rawSubprocess(id));
        for (const auto& t : p.processTypes) {
            raw::ProcessType rt;
            rt.name = t.name;
            rt.amountProduced = t.amountProduced;
            for (LineId lid : t.compatibleLines)
                rt.compatibleLines.push_back(model.lines[lid.value].name);
            for (SubprocessId id : t.subprocesses)
                rt.subprocesses.push_back(rawSubprocess(id));
            rp.processTypes.push_back(std::move(rt));
        }
        out.processes.push_back(std::move(rp));
    }

    for (const auto& r : model.relations)
        out.relations.push_back({ model.subprocesses[r.source.value].name,
            model.subprocesses[r.destination.value].name, r.op, {} });

    for (const auto& s : model.setups) {
        auto endpointName = [&](const SetupEndpoint& e) {
            return e.kind == SetupEndpointKind::Process ? model.processes[e.index].name
                                                        : model.subprocesses[e.index].name;
        };
        out.setups.push_back({ endpointName(s.source), endpointName(s.destination),
            model.devices[s.device.value].name, s.extraProcessingTime, s.extraEnergyConsumption,
            s.extraMonetaryCost, {} });
    }
    return out;
}

// ---------------------------------------------------------------------------
// structural equality (ignores provenance details such as synthetic-mode flags)

namespace {

    bool equal(const DeviceOption& a, const DeviceOption& b)
    {
        return a.allocations == b.allocations && a.processingTime == b.processingTime
            && a.energyConsumption == b.energyConsumption && a.monetaryCost == b.monetaryCost;
    }

    bool equal(const Subprocess& a, const Subprocess& b)
    {
        if (a.name != b.name || a.owner != b.owner || a.options.size() != b.options.size())
            return false;
        for (std::size_t i = 0; i < a.options.size(); ++i)
            if (!equal(a.options[i], b.options[i]))
                return false;
        return true;
    }

    bool equal(const ProcessingDevice& a, const ProcessingDevice& b)
    {
        if (a.name != b.name || a.available != b.available || a.unavailableWindows != b.unavailableWindows)
            return false;
        if (a.modes.size() != b.modes.size())
            return false;
        for (std::size_t i = 0; i < a.modes.size(); ++i)
            if (a.modes[i].name != b.modes[i].name)
                return false;
        return true;
    }

    bool equal(const ProductionProcess& a, const ProductionProcess& b)
    {
        if (a.name != b.name || a.urgencyPriority != b.urgencyPriority || a.cuts != b.cuts
            || a.subprocesses != b.subprocesses)
            return false;
        if (a.compatibleDevices.size() != b.compatibleDevices.size()
            || a.processTypes.size() != b.processTypes.size())
            return false;
        for (std::size_t i = 0; i < a.compatibleDevices.size(); ++i) {
            const auto& ca = a.compatibleDevices[i];
            const auto& cb = b.compatibleDevices[i];
            if (ca.device != cb.device || ca.processingTime != cb.processingTime
                || ca.energyConsumption != cb.energyConsumption || ca.monetaryCost != cb.monetaryCost)
                return false;
        }
        for (std::size_t i = 0; i < a.processTypes.size(); ++i) {
            const auto& ta = a.processTypes[i];
            const auto& tb = b.processTypes[i];
            if (ta.name != tb.name || ta.amountProduced != tb.amountProduced
                || ta.compatibleLines != tb.compatibleLines || ta.subprocesses != tb.subprocesses)
                return false;
        }
        return true;
    }

} // namespace

bool structurallyEqual(const FactoryModel& a, const FactoryModel& b)
{
    if (a.objectives != b.objectives)
        return false;
    if (a.devices.size() != b.devices.size() || a.lines.size() != b.lines.size()
        || a.processes.size() != b.processes.size() || a.subprocesses.size() != b.subprocesses.size()
        || a.relations.size() != b.relations.size() || a.setups.size() != b.setups.size())
        return false;
    for (std::size_t i = 0; i < a.devices.size(); ++i)
        if (!equal(a.devices[i], b.devices[i]))
            return false;
    for (std::size_t i = 0; i < a.lines.size(); ++i)
        if (a.lines[i].name != b.lines[i].name || a.lines[i].stations != b.lines[i].stations)
            return false;
    for (std::size_t i = 0; i < a.processes.size(); ++i)
        if (!equal(a.processes[i], b.processes[i]))
            return false;
    for (std::size_t i = 0; i < a.subprocesses.size(); ++i)
        if (!equal(a.subprocesses[i], b.subprocesses[i]))
            return false;
    for (std::size_t i = 0; i < a.relations.size(); ++i) {
        const auto& ra = a.relations[i];
        const auto& rb = b.relations[i];
        if (ra.source != rb.source || ra.destination != rb.destination || ra.op != rb.op)
            return false;
    }
    for (std::size_t i = 0; i < a.setups.size(); ++i) {
        const auto& sa = a.setups[i];
        const auto& sb = b.setups[i];
        if (sa.source != sb.source || sa.destination != sb.destination || sa.device != sb.device
            || sa.extraProcessingTime != sb.extraProcessingTime
            || sa.extraEnergyConsumption != sb.extraEnergyConsumption
            || sa.extraMonetaryCost != sb.extraMonetaryCost)
            return false;
    }
    return true;
}

} // namespace fdl
