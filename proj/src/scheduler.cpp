#include "fdl/scheduler.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>
#include <numeric>

namespace fdl {

TimePoint Schedule::makespan() const
{
    std::int64_t best = 0;
    for (const auto& lane : perDevice)
        for (const auto& seg : lane)
            if (seg.kind != SegmentKind::Suspension)
                best = std::max(best, seg.end.tenths());
    return TimePoint::fromTenths(best);
}

std::vector<TaskChain> buildTaskChains(const FactoryModel& model)
{
    std::size_t n = model.subprocesses.size();
    std::vector<std::vector<std::int32_t>> succ(n);
    std::vector<std::int32_t> indegree(n, 0);
    std::vector<std::int32_t> component(n, -1);

    // Union by repeated relabeling is fine at this scale.
    std::vector<std::int32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::int32_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };

    for (const auto& r : model.relations) {
        if (r.op != AllenOperator::M)
            continue;
        succ[r.source.value].push_back(r.destination.value);
        ++indegree[r.destination.value];
        parent[find(r.source.value)] = find(r.destination.value);
    }

    // Kahn order per component, lowest id first among ready nodes.
    std::vector<std::int32_t> order;
    order.reserve(n);
    std::vector<std::int32_t> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indegree[i] == 0)
            ready.push_back(static_cast<std::int32_t>(i));
    std::make_heap(ready.begin(), ready.end(), std::greater<>());
    auto degrees = indegree;
    while (!ready.empty()) {
        std::pop_heap(ready.begin(), ready.end(), std::greater<>());
        std::int32_t node = ready.back();
        ready.pop_back();
        order.push_back(node);
        for (std::int32_t to : succ[node])
            if (--degrees[to] == 0) {
                ready.push_back(to);
                std::push_heap(ready.begin(), ready.end(), std::greater<>());
            }
    }
    if (order.size() != n)
        throw std::logic_error("M relations form a cycle; the model was not resolved");

    std::map<std::int32_t, std::size_t> chainOf;
    std::vector<TaskChain> chains;
    for (std::int32_t node : order) {
        std::int32_t root = find(node);
        auto it = chainOf.find(root);
        if (it == chainOf.end()) {
            chainOf.emplace(root, chains.size());
            chains.push_back({ { SubprocessId { node } } });
        } else {
            chains[it->second].members.push_back(SubprocessId { node });
        }
    }
    // Deterministic chain order: by first member id.
    std::sort(chains.begin(), chains.end(), [](const TaskChain& a, const TaskChain& b) {
        return a.members.front().value < b.members.front().value;
    });
    return chains;
}

bool checkAllen(const SubprocessRelation& relation, const Schedule& schedule, const FactoryModel& model)
{
    const auto& a = schedule.perSubprocess[relation.source.value];
    const auto& b = schedule.perSubprocess[relation.destination.value];
    if (!a.scheduled)
        throw Unscheduled(model.subprocesses[relation.source.value].name);
    if (!b.scheduled)
        throw Unscheduled(model.subprocesses[relation.destination.value].name);
    std::int64_t s1 = a.start.tenths(), e1 = a.end.tenths();
    std::int64_t s2 = b.start.tenths(), e2 = b.end.tenths();
    switch (relation.op) {
    case AllenOperator::LT: return e1 < s2;
    case AllenOperator::M: return e1 == s2;
    case AllenOperator::O: return s1 < s2 && s2 < e1 && e1 < e2;
    case AllenOperator::S: return s1 == s2 && e1 < e2;
    case AllenOperator::D: return s2 < s1 && e1 < e2;
    case AllenOperator::F: return e1 == e2 && s2 < s1;
    case AllenOperator::EQ: return s1 == s2 && e1 == e2;
    }
    return false;
}

namespace {

    constexpr std::int64_t kNoPred = -1;

    struct SetupEntryRef {
        std::int32_t index = -1;
        std::int64_t extraTenths = 0;
    };

    // (source, destination, device) -> entry, at both granularities.
    // Subprocess-level entries take precedence over process-level ones.
    class SetupLookup {
    public:
        explicit SetupLookup(const FactoryModel& model)
            : model_(model)
        {
            for (std::size_t i = 0; i < model.setups.size(); ++i) {
                const auto& s = model.setups[i];
                Key key { s.source.kind, s.source.index, s.destination.kind, s.destination.index,
                    s.device.value };
                table_.emplace(key, static_cast<std::int32_t>(i));
            }
        }

        SetupEntryRef find(SubprocessId source, SubprocessId destination, DeviceId device) const
        {
            if (source == destination)
                return {};
            auto trySub = Key { SetupEndpointKind::Subprocess, source.value, SetupEndpointKind::Subprocess,
                destination.value, device.value };
            if (auto it = table_.find(trySub); it != table_.end())
                return ref(it->second);
            ProcessId sp = model_.subprocesses[source.value].owner;
            ProcessId dp = model_.subprocesses[destination.value].owner;
            // Mixed granularity entries: subprocess on one side, process on the other.
            Key mixed1 { SetupEndpointKind::Subprocess, source.value, SetupEndpointKind::Process, dp.value,
                device.value };
            if (auto it = table_.find(mixed1); it != table_.end())
                return ref(it->second);
            Key mixed2 { SetupEndpointKind::Process, sp.value, SetupEndpointKind::Subprocess,
                destination.value, device.value };
            if (auto it = table_.find(mixed2); it != table_.end())
                return ref(it->second);
            Key proc { SetupEndpointKind::Process, sp.value, SetupEndpointKind::Process, dp.value,
                device.value };
            if (auto it = table_.find(proc); it != table_.end())
                return ref(it->second);
            return {};
        }

        // Largest positive extra of any entry targeting `destination` on `device`;
        // used only to bound the placement scan.
        std::int64_t maxExtraTowards(SubprocessId destination, DeviceId device) const
        {
            std::int64_t best = 0;
            ProcessId dp = model_.subprocesses[destination.value].owner;
            for (const auto& s : model_.setups) {
                if (s.device.value != device.value)
                    continue;
                bool matches = (s.destination.kind == SetupEndpointKind::Subprocess
                                   && s.destination.index == destination.value)
                    || (s.destination.kind == SetupEndpointKind::Process && s.destination.index == dp.value);
                if (matches)
                    best = std::max(best, s.extraProcessingTime.tenths());
            }
            return best;
        }

    private:
        struct Key {
            SetupEndpointKind sk;
            std::int32_t si;
            SetupEndpointKind dk;
            std::int32_t di;
            std::int32_t dev;
            friend auto operator<=>(const Key&, const Key&) = default;
        };

        SetupEntryRef ref(std::int32_t index) const
        {
            return { index, model_.setups[index].extraProcessingTime.tenths() };
        }

        const FactoryModel& model_;
        std::map<Key, std::int32_t> table_;
    };

    // Per-device state during construction; execution records are disjoint
    // and sorted by start.
    struct ExecRec {
        std::int64_t start;
        std::int64_t end;
        std::int32_t sub;
        std::int32_t adjPred; // subprocess currently right before this one, or -1
        std::int32_t trigger; // setup entry fired for this start, or -1
    };

    // Execution records carry setup adjacency; claims carry occupancy and
    // include any setup block in front of an execution.  A claim covers a
    // task's whole stay on the device, including the suspension gaps of a
    // window-split run: a suspended task keeps its device, so no other work
    // may slip between its pieces.
    struct DeviceTimeline {
        std::vector<ExecRec> execs;                          // sorted by start
        std::vector<std::pair<std::int64_t, std::int64_t>> claims; // sorted, disjoint
        const std::vector<UnavailableWindow>* windows = nullptr;

        const ExecRec* prevExec(std::int64_t t) const
        {
            auto it = std::lower_bound(execs.begin(), execs.end(), t,
                [](const ExecRec& r, std::int64_t v) { return r.end <= v; });
            return it == execs.begin() ? nullptr : &*(it - 1);
        }

        std::int64_t maxEventEnd() const
        {
            std::int64_t best = 0;
            if (!claims.empty())
                best = claims.back().second;
            if (!windows->empty())
                best = std::max(best, windows->back().end.tenths());
            return best;
        }

        void insertExec(ExecRec rec)
        {
            auto it = std::lower_bound(execs.begin(), execs.end(), rec.start,
                [](const ExecRec& r, std::int64_t v) { return r.start < v; });
            execs.insert(it, rec);
        }

        void insertClaim(std::int64_t start, std::int64_t end)
        {
            auto it = std::lower_bound(claims.begin(), claims.end(), std::pair { start, end });
            claims.insert(it, { start, end });
        }
    };

    // One execution interval a placement wants to claim.
    struct ClaimedExec {
        std::int32_t device;
        std::int64_t start;
        std::int64_t end;
        std::int32_t sub;
        bool adjacencyHead; // eligible for a setup before it
    };

    struct PlacementPlan {
        std::vector<ClaimedExec> execs;
        struct PlannedSetup {
            std::int32_t device;
            std::int64_t start;
            std::int64_t end; // == exec start; start == end for zero-extra triggers
            std::int32_t entry;
            std::int32_t sourceSub;
            std::int32_t destSub;
        };
        std::vector<PlannedSetup> setups;
        struct PredUpdate {
            std::int32_t device;
            std::int64_t execStart; // identifies the existing exec
            std::int32_t newPred;
        };
        std::vector<PredUpdate> predUpdates;
        struct PlannedClaim {
            std::int32_t device;
            std::int64_t start;
            std::int64_t end;
        };
        std::vector<PlannedClaim> claims;
    };

    struct CheckOutcome {
        bool ok = false;
        std::int64_t nextT = 0;   // safe next candidate when !ok
        bool structural = false;  // failure cannot be resolved by shifting right
        PlacementPlan plan;
    };

    class Simulator {
    public:
        Simulator(const FactoryModel& model, const Genome& genome)
            : model_(model)
            , genome_(genome)
            , setups_(model)
        {
            timelines_.resize(model.devices.size());
            for (std::size_t d = 0; d < model.devices.size(); ++d)
                timelines_[d].windows = &model.devices[d].unavailableWindows;
            schedule_.perDevice.resize(model.devices.size());
            schedule_.perSubprocess.resize(model.subprocesses.size());
            schedule_.genome = genome;
        }

        Schedule run()
        {
            validateGenome();
            auto chains = buildTaskChains(model_);
            dispatch(chains);
            finalizeSegments();
            verifyRelations();
            schedule_.objectives = computeObjectives(schedule_, model_);
            return std::move(schedule_);
        }

    private:
        const FactoryModel& model_;
        const Genome& genome_;
        SetupLookup setups_;
        std::vector<DeviceTimeline> timelines_;
        Schedule schedule_;

        const DeviceOption& chosenOption(std::int32_t sub) const
        {
            return model_.subprocesses[sub].options[genome_.optionChoice[sub]];
        }

        void validateGenome()
        {
            std::size_t n = model_.subprocesses.size();
            if (genome_.optionChoice.size() != n || genome_.taskPriority.size() != n)
                throw InvalidGenome("genome length does not match the model's subprocess count");
            std::vector<bool> seen(n, false);
            for (std::size_t i = 0; i < n; ++i) {
                auto choice = genome_.optionChoice[i];
                if (choice < 0 || static_cast<std::size_t>(choice) >= model_.subprocesses[i].options.size())
                    throw InvalidGenome("option index " + std::to_string(choice) + " out of range for '"
                        + model_.subprocesses[i].name + "'");
                auto prio = genome_.taskPriority[i];
                if (prio < 0 || static_cast<std::size_t>(prio) >= n || seen[prio])
                    throw InvalidGenome("task priorities are not a permutation");
                seen[prio] = true;
            }
        }

        void infeasible(std::string why)
        {
            schedule_.feasible = false;
            schedule_.violations.push_back({ -1, std::move(why) });
        }

        // ------------------------------------------------------------ dispatch

        void dispatch(const std::vector<TaskChain>& chains)
        {
            std::size_t n = chains.size();
            std::vector<std::int32_t> chainOf(model_.subprocesses.size(), -1);
            for (std::size_t c = 0; c < n; ++c)
                for (SubprocessId id : chains[c].members)
                    chainOf[id.value] = static_cast<std::int32_t>(c);

            // LT relations crossing chains gate dispatch readiness.
            struct CrossEdge {
                std::int32_t fromChain;
                std::int32_t toChain;
                std::int32_t sourceSub;
                std::int32_t destSub;
            };
            std::vector<CrossEdge> edges;
            std::vector<std::vector<std::size_t>> outgoing(n);
            std::vector<int> pendingDeps(n, 0);
            for (const auto& r : model_.relations) {
                if (r.op != AllenOperator::LT)
                    continue;
                std::int32_t a = chainOf[r.source.value];
                std::int32_t b = chainOf[r.destination.value];
                if (a == b)
                    continue; // same chain: verified after the fact
                outgoing[a].push_back(edges.size());
                edges.push_back({ a, b, r.source.value, r.destination.value });
                ++pendingDeps[b];
            }

            std::vector<bool> done(n, false);
            std::size_t remaining = n;
            while (remaining > 0) {
                std::int32_t best = -1;
                std::int32_t bestPriority = 0;
                for (std::size_t c = 0; c < n; ++c) {
                    if (done[c] || pendingDeps[c] != 0)
                        continue;
                    std::int32_t p = genome_.taskPriority[chains[c].members.front().value];
                    if (best < 0 || p < bestPriority) {
                        best = static_cast<std::int32_t>(c);
                        bestPriority = p;
                    }
                }
                if (best < 0) {
                    infeasible("LT relations across chains form a cycle; remaining chains not scheduled");
                    break;
                }
                std::int64_t tMin = 0;
                for (const auto& e : edges) {
                    if (e.toChain != best)
                        continue;
                    const auto& placement = schedule_.perSubprocess[e.sourceSub];
                    if (!placement.scheduled)
                        continue; // predecessor chain was skipped; genome already infeasible
                    // LT is strict: the destination starts at least one tenth later.
                    tMin = std::max(tMin, placement.end.tenths() + 1 - offsetOf(chains[best], e.destSub));
                }
                placeChain(chains[best], tMin);
                done[best] = true;
                --remaining;
                for (std::size_t edgeIdx : outgoing[best])
                    --pendingDeps[edges[edgeIdx].toChain];
            }
        }

        // Relative start of a member inside its chain under the chosen options;
        // 0 when offsets cannot be computed (the placement will fail anyway).
        std::vector<std::int64_t> chainOffsets(const TaskChain& chain, bool& consistent)
        {
            consistent = true;
            std::map<std::int32_t, std::size_t> memberIndex;
            for (std::size_t i = 0; i < chain.members.size(); ++i)
                memberIndex[chain.members[i].value] = i;

            std::vector<std::int64_t> offset(chain.members.size(), 0);
            std::vector<bool> known(chain.members.size(), false);
            known[0] = true;
            // M edges fix relative offsets: destination starts where source ends.
            bool progress = true;
            while (progress) {
                progress = false;
                for (const auto& r : model_.relations) {
                    if (r.op != AllenOperator::M)
                        continue;
                    auto si = memberIndex.find(r.source.value);
                    auto di = memberIndex.find(r.destination.value);
                    if (si == memberIndex.end() || di == memberIndex.end())
                        continue;
                    std::int64_t srcDur = chosenOption(r.source.value).processingTime.tenths();
                    if (known[si->second] && !known[di->second]) {
                        offset[di->second] = offset[si->second] + srcDur;
                        known[di->second] = true;
                        progress = true;
                    } else if (!known[si->second] && known[di->second]) {
                        offset[si->second] = offset[di->second] - srcDur;
                        known[si->second] = true;
                        progress = true;
                    } else if (known[si->second] && known[di->second]) {
                        if (offset[di->second] != offset[si->second] + srcDur)
                            consistent = false;
                    }
                }
            }
            std::int64_t low = 0;
            for (std::size_t i = 0; i < offset.size(); ++i)
                low = std::min(low, offset[i]);
            for (auto& o : offset)
                o -= low;
            return offset;
        }

        std::int64_t offsetOf(const TaskChain& chain, std::int32_t sub)
        {
            bool consistent = true;
            auto offsets = chainOffsets(chain, consistent);
            for (std::size_t i = 0; i < chain.members.size(); ++i)
                if (chain.members[i].value == sub)
                    return offsets[i];
            return 0;
        }

        // -------------------------------------------------------- chain placement

        struct MemberShape {
            std::int32_t sub;
            std::int64_t offset;
            std::int64_t dur;
        };

        void placeChain(const TaskChain& chain, std::int64_t tMin)
        {
            // Options allocating an excluded device make the genome infeasible;
            // such chains host no segments at all.
            for (SubprocessId id : chain.members)
                for (const auto& alloc : chosenOption(id.value).allocations)
                    if (!model_.devices[alloc.device.value].available) {
                        infeasible("subprocess '" + model_.subprocesses[id.value].name
                            + "' allocates excluded device '" + model_.devices[alloc.device.value].name
                            + "'");
                        return;
                    }

            if (chain.members.size() == 1) {
                placeStandalone(chain.members.front(), tMin);
                return;
            }

            bool consistent = true;
            auto offsets = chainOffsets(chain, consistent);
            if (!consistent) {
                infeasible("M relations of chain starting at '"
                    + model_.subprocesses[chain.members.front().value].name
                    + "' demand inconsistent offsets for the chosen options");
                return;
            }

            std::vector<MemberShape> members;
            for (std::size_t i = 0; i < chain.members.size(); ++i)
                members.push_back({ chain.members[i].value, offsets[i],
                    chosenOption(chain.members[i].value).processingTime.tenths() });

            // Per-device claim lists in offset order; members of one chain must
            // not overlap on a shared device no matter where the chain starts.
            std::map<std::int32_t, std::vector<const MemberShape*>> byDevice;
            for (const auto& m : members)
                for (const auto& alloc : chosenOption(m.sub).allocations)
                    byDevice[alloc.device.value].push_back(&m);
            for (auto& [device, list] : byDevice) {
                std::sort(list.begin(), list.end(), [](const MemberShape* a, const MemberShape* b) {
                    return a->offset < b->offset;
                });
                for (std::size_t i = 0; i + 1 < list.size(); ++i)
                    if (list[i]->dur > 0 && list[i]->offset + list[i]->dur > list[i + 1]->offset) {
                        infeasible("chain members '" + model_.subprocesses[list[i]->sub].name + "' and '"
                            + model_.subprocesses[list[i + 1]->sub].name + "' overlap on device '"
                            + model_.devices[device].name + "'");
                        return;
                    }
            }

            std::int64_t tSafe = tMin;
            for (const auto& [device, list] : byDevice) {
                std::int64_t base = timelines_[device].maxEventEnd();
                for (const MemberShape* m : list)
                    tSafe = std::max(tSafe,
                        base + setups_.maxExtraTowards(SubprocessId { m->sub }, DeviceId { device })
                            - m->offset);
            }

            std::int64_t t = tMin;
            for (;;) {
                CheckOutcome outcome = checkChainAt(t, byDevice);
                if (outcome.ok) {
                    commit(outcome.plan, {});
                    for (const auto& m : members) {
                        auto& placement = schedule_.perSubprocess[m.sub];
                        placement.scheduled = true;
                        placement.start = TimePoint::fromTenths(t + m.offset);
                        placement.end = TimePoint::fromTenths(t + m.offset + m.dur);
                    }
                    return;
                }
                if (outcome.structural || t >= tSafe) {
                    infeasible("no feasible zero-gap start for chain starting at '"
                        + model_.subprocesses[chain.members.front().value].name + "'");
                    return;
                }
                t = std::min(std::max(outcome.nextT, t + 1), std::max(tSafe, tMin));
            }
        }

        CheckOutcome checkChainAt(
            std::int64_t t, const std::map<std::int32_t, std::vector<const MemberShape*>>& byDevice)
        {
            CheckOutcome out;
            for (const auto& [device, list] : byDevice) {
                auto& timeline = timelines_[device];
                for (std::size_t i = 0; i < list.size(); ++i) {
                    const MemberShape& m = *list[i];
                    if (m.dur == 0)
                        continue;
                    std::int64_t s = t + m.offset;
                    std::int64_t e = s + m.dur;
                    if (s < 0) {
                        out.nextT = t - s;
                        return out;
                    }
                    if (auto shift = blockEnd(timeline, s, e)) {
                        out.nextT = t + (*shift - s);
                        return out;
                    }
                    // Actual predecessor: the later of the preceding chain member
                    // on this device and the preceding already-placed execution.
                    std::int64_t intraEnd = kNoPred;
                    std::int32_t intraSub = -1;
                    for (std::size_t j = i; j-- > 0;) {
                        if (list[j]->dur == 0)
                            continue;
                        intraEnd = t + list[j]->offset + list[j]->dur;
                        intraSub = list[j]->sub;
                        break;
                    }
                    const ExecRec* ext = timeline.prevExec(s);
                    std::int64_t predEnd = intraEnd;
                    std::int32_t predSub = intraSub;
                    if (ext && ext->end > predEnd) {
                        predEnd = ext->end;
                        predSub = ext->sub;
                    }
                    std::int64_t claimStart = s;
                    if (predSub >= 0) {
                        auto entry = setups_.find(
                            SubprocessId { predSub }, SubprocessId { m.sub }, DeviceId { device });
                        if (entry.index >= 0) {
                            std::int64_t ss = s - entry.extraTenths;
                            if (ss < predEnd) {
                                // A rigid chain cannot widen the gap for its own
                                // internal setup; shifting right never helps.
                                if (predSub == intraSub && predEnd == intraEnd) {
                                    out.structural = true;
                                    return out;
                                }
                                out.nextT = t + 1;
                                return out;
                            }
                            if (ss < 0) {
                                out.nextT = t + (entry.extraTenths - s);
                                return out;
                            }
                            if (auto shift = blockEnd(timeline, ss, s)) {
                                out.nextT = t + (*shift - ss);
                                return out;
                            }
                            out.plan.setups.push_back({ device, ss, s, entry.index, predSub, m.sub });
                            if (entry.extraTenths > 0)
                                claimStart = ss;
                        }
                    }
                    out.plan.execs.push_back({ device, s, e, m.sub, true });
                    out.plan.claims.push_back({ device, claimStart, e });
                }
                if (!appendPredUpdates(out, device, t, list))
                    return out;
            }
            out.ok = true;
            return out;
        }

        // Existing executions whose immediate predecessor would change must not
        // carry or require a setup; otherwise the spot is not insertable.
        bool appendPredUpdates(CheckOutcome& out, std::int32_t device, std::int64_t t,
            const std::vector<const MemberShape*>& list)
        {
            auto& timeline = timelines_[device];
            for (const auto& x : timeline.execs) {
                std::int64_t bestEnd = kNoPred;
                std::int32_t bestSub = -1;
                for (const MemberShape* m : list) {
                    if (m->dur == 0)
                        continue;
                    std::int64_t end = t + m->offset + m->dur;
                    if (end <= x.start && end > bestEnd) {
                        bestEnd = end;
                        bestSub = m->sub;
                    }
                }
                if (bestSub < 0)
                    continue;
                const ExecRec* cur = timeline.prevExec(x.start);
                if (cur && cur->end > bestEnd)
                    continue; // existing predecessor stays closer
                if (x.trigger >= 0
                    || setups_.find(SubprocessId { bestSub }, SubprocessId { x.sub }, DeviceId { device })
                            .index
                        >= 0) {
                    out.nextT = t + 1;
                    return false;
                }
                out.plan.predUpdates.push_back({ device, x.start, bestSub });
            }
            return true;
        }

        // First blocking obstacle for [s, e): returns the time the interval
        // must shift to, i.e. the obstacle's end.
        std::optional<std::int64_t> blockEnd(
            const DeviceTimeline& timeline, std::int64_t s, std::int64_t e, bool includeWindows = true)
        {
            std::optional<std::int64_t> shift;
            if (includeWindows) {
                for (const auto& w : *timeline.windows) {
                    if (w.end.tenths() <= s)
                        continue;
                    if (w.start.tenths() < e)
                        shift = w.end.tenths();
                    break;
                }
            }
            auto it = std::lower_bound(timeline.claims.begin(), timeline.claims.end(), s,
                [](const std::pair<std::int64_t, std::int64_t>& c, std::int64_t v) {
                    return c.second <= v;
                });
            if (it != timeline.claims.end() && it->first < e)
                shift = shift ? std::min(*shift, it->second) : it->second;
            return shift;
        }

        // ---------------------------------------------------- standalone placement

        void placeStandalone(SubprocessId id, std::int64_t tMin)
        {
            const auto& option = chosenOption(id.value);
            std::int64_t dur = option.processingTime.tenths();

            // The union of the allocated devices' windows splits the run.
            std::vector<std::pair<std::int64_t, std::int64_t>> blocked;
            for (const auto& alloc : option.allocations)
                for (const auto& w : model_.devices[alloc.device.value].unavailableWindows)
                    blocked.push_back({ w.start.tenths(), w.end.tenths() });
            std::sort(blocked.begin(), blocked.end());
            std::vector<std::pair<std::int64_t, std::int64_t>> merged;
            for (auto [s, e] : blocked) {
                if (!merged.empty() && s <= merged.back().second)
                    merged.back().second = std::max(merged.back().second, e);
                else
                    merged.push_back({ s, e });
            }

            std::int64_t tSafe = tMin;
            for (const auto& alloc : option.allocations) {
                std::int64_t base = timelines_[alloc.device.value].maxEventEnd();
                tSafe = std::max(tSafe, base + setups_.maxExtraTowards(id, alloc.device));
            }

            std::int64_t t = tMin;
            for (;;) {
                auto outcome = checkStandaloneAt(t, id, option, dur, merged);
                if (outcome.ok) {
                    std::vector<Segment> suspensions = takeSuspensions(id, option, outcome.plan);
                    commit(outcome.plan, suspensions);
                    auto& placement = schedule_.perSubprocess[id.value];
                    placement.scheduled = true;
                    placement.start = TimePoint::fromTenths(t);
                    std::int64_t end = t;
                    for (const auto& ce : outcome.plan.execs)
                        end = std::max(end, ce.end);
                    placement.end = TimePoint::fromTenths(dur == 0 ? t : end);
                    return;
                }
                if (outcome.structural || t >= tSafe) {
                    infeasible(
                        "no feasible start for subprocess '" + model_.subprocesses[id.value].name + "'");
                    return;
                }
                t = std::min(std::max(outcome.nextT, t + 1), std::max(tSafe, tMin));
            }
        }

        CheckOutcome checkStandaloneAt(std::int64_t t, SubprocessId id, const DeviceOption& option,
            std::int64_t dur, const std::vector<std::pair<std::int64_t, std::int64_t>>& blocked)
        {
            CheckOutcome out;
            if (t < 0) {
                out.nextT = 0;
                return out;
            }
            // A run may not begin inside a blocked span.
            for (auto [bs, be] : blocked)
                if (bs <= t && t < be) {
                    out.nextT = be;
                    return out;
                }

            // Cut the run into pieces around blocked spans.
            std::vector<std::pair<std::int64_t, std::int64_t>> pieces;
            std::int64_t cursor = t;
            std::int64_t remaining = dur;
            std::size_t blockIdx = 0;
            while (blockIdx < blocked.size() && blocked[blockIdx].second <= cursor)
                ++blockIdx;
            while (remaining > 0) {
                std::int64_t limit = blockIdx < blocked.size()
                    ? blocked[blockIdx].first
                    : std::numeric_limits<std::int64_t>::max();
                std::int64_t run = std::min(remaining, limit - cursor);
                if (run > 0) {
                    pieces.push_back({ cursor, cursor + run });
                    remaining -= run;
                    cursor += run;
                }
                if (remaining > 0) {
                    cursor = blocked[blockIdx].second;
                    ++blockIdx;
                }
            }

            std::int64_t spanEnd = pieces.empty() ? t : pieces.back().second;
            for (const auto& alloc : option.allocations) {
                std::int32_t device = alloc.device.value;
                auto& timeline = timelines_[device];
                if (!pieces.empty()) {
                    // The whole stay, suspension gaps included, must be free of
                    // other claims; the pieces avoid windows by construction.
                    if (auto shift = blockEnd(timeline, t, spanEnd, false)) {
                        out.nextT = *shift;
                        return out;
                    }
                    std::int64_t claimStart = t;
                    const ExecRec* prev = timeline.prevExec(t);
                    if (prev && prev->sub != id.value) {
                        auto entry = setups_.find(SubprocessId { prev->sub }, id, alloc.device);
                        if (entry.index >= 0) {
                            std::int64_t ss = t - entry.extraTenths;
                            if (ss < prev->end || ss < 0) {
                                out.nextT = prev->end + entry.extraTenths;
                                return out;
                            }
                            if (auto shift = blockEnd(timeline, ss, t)) {
                                out.nextT = *shift + entry.extraTenths;
                                return out;
                            }
                            out.plan.setups.push_back({ device, ss, t, entry.index, prev->sub, id.value });
                            if (entry.extraTenths > 0)
                                claimStart = ss;
                        }
                    }
                    bool first = true;
                    for (auto [ps, pe] : pieces) {
                        out.plan.execs.push_back({ device, ps, pe, id.value, first });
                        first = false;
                    }
                    out.plan.claims.push_back({ device, claimStart, spanEnd });
                }
                // Changed-predecessor rule against this device's existing work.
                std::vector<MemberShape> shapes;
                std::vector<const MemberShape*> shapePtrs;
                shapes.reserve(pieces.size());
                for (auto [ps, pe] : pieces)
                    shapes.push_back({ id.value, ps - t, pe - ps });
                for (const auto& sh : shapes)
                    shapePtrs.push_back(&sh);
                if (!appendPredUpdates(out, device, t, shapePtrs))
                    return out;
            }
            out.ok = true;
            return out;
        }

        std::vector<Segment> takeSuspensions(
            SubprocessId id, const DeviceOption& option, const PlacementPlan& plan)
        {
            std::vector<Segment> out;
            if (plan.execs.empty())
                return out;
            std::int64_t firstStart = std::numeric_limits<std::int64_t>::max();
            std::int64_t lastEnd = 0;
            for (const auto& ce : plan.execs) {
                firstStart = std::min(firstStart, ce.start);
                lastEnd = std::max(lastEnd, ce.end);
            }
            // A window that interrupted the run becomes a Suspension segment on
            // the device that owns the window.
            for (const auto& alloc : option.allocations) {
                for (const auto& w : model_.devices[alloc.device.value].unavailableWindows) {
                    if (w.start.tenths() >= firstStart && w.end.tenths() <= lastEnd)
                        out.push_back({ SegmentKind::Suspension, id, alloc.device, w.start, w.end, -1, {} });
                }
            }
            return out;
        }

        // ----------------------------------------------------------------- commit

        void commit(const PlacementPlan& plan, const std::vector<Segment>& suspensions)
        {
            std::map<std::pair<std::int32_t, std::int64_t>, const PlacementPlan::PlannedSetup*> setupByExec;
            for (const auto& s : plan.setups)
                setupByExec[{ s.device, s.end }] = &s;

            for (const auto& ce : plan.execs) {
                ExecRec rec { ce.start, ce.end, ce.sub, -1, -1 };
                if (ce.adjacencyHead) {
                    if (auto it = setupByExec.find({ ce.device, ce.start }); it != setupByExec.end()) {
                        const auto& s = *it->second;
                        rec.trigger = s.entry;
                        rec.adjPred = s.sourceSub;
                        schedule_.triggeredSetups.push_back(
                            { s.entry, DeviceId { s.device }, SubprocessId { s.sourceSub },
                                SubprocessId { s.destSub } });
                        if (s.start < s.end)
                            schedule_.perDevice[s.device].push_back({ SegmentKind::Setup,
                                SubprocessId { s.destSub }, DeviceId { s.device },
                                TimePoint::fromTenths(s.start), TimePoint::fromTenths(s.end), s.entry,
                                SubprocessId { s.sourceSub } });
                    } else {
                        const ExecRec* prev = timelines_[ce.device].prevExec(ce.start);
                        rec.adjPred = prev ? prev->sub : -1;
                    }
                }
                timelines_[ce.device].insertExec(rec);
                schedule_.perDevice[ce.device].push_back({ SegmentKind::Execution, SubprocessId { ce.sub },
                    DeviceId { ce.device }, TimePoint::fromTenths(ce.start), TimePoint::fromTenths(ce.end),
                    -1, {} });
            }
            for (const auto& cl : plan.claims)
                timelines_[cl.device].insertClaim(cl.start, cl.end);
            for (const auto& upd : plan.predUpdates) {
                auto& execs = timelines_[upd.device].execs;
                auto it = std::lower_bound(execs.begin(), execs.end(), upd.execStart,
                    [](const ExecRec& r, std::int64_t v) { return r.start < v; });
                if (it != execs.end() && it->start == upd.execStart)
                    it->adjPred = upd.newPred;
            }
            for (const auto& s : suspensions)
                schedule_.perDevice[s.device.value].push_back(s);
        }

        void finalizeSegments()
        {
            for (auto& lane : schedule_.perDevice)
                std::sort(lane.begin(), lane.end(), [](const Segment& a, const Segment& b) {
                    if (a.start != b.start)
                        return a.start < b.start;
                    return a.kind < b.kind;
                });
        }

        void verifyRelations()
        {
            for (std::size_t i = 0; i < model_.relations.size(); ++i) {
                const auto& r = model_.relations[i];
                const auto& a = schedule_.perSubprocess[r.source.value];
                const auto& b = schedule_.perSubprocess[r.destination.value];
                if (!a.scheduled || !b.scheduled) {
                    // Already reported when the owning chain was skipped.
                    continue;
                }
                if (!checkAllen(r, schedule_, model_)) {
                    schedule_.feasible = false;
                    schedule_.violations.push_back({ static_cast<std::int32_t>(i),
                        std::string(allenOperatorName(r.op)) + " relation '"
                            + model_.subprocesses[r.source.value].name + "' -> '"
                            + model_.subprocesses[r.destination.value].name + "' does not hold" });
                }
            }
        }
    };

} // namespace

Schedule simulate(const FactoryModel& model, const Genome& genome)
{
    return Simulator(model, genome).run();
}

ObjectiveVector computeObjectives(const Schedule& schedule, const FactoryModel& model)
{
    std::int64_t energy = 0;
    std::int64_t money = 0;
    for (std::size_t i = 0; i < model.subprocesses.size(); ++i) {
        const auto& option = model.subprocesses[i].options[schedule.genome.optionChoice[i]];
        if (option.energyConsumption)
            energy += option.energyConsumption->tenths();
        if (option.monetaryCost)
            money += option.monetaryCost->tenths();
    }
    for (const auto& trig : schedule.triggeredSetups) {
        const auto& entry = model.setups[trig.setupIndex];
        energy += entry.extraEnergyConsumption.tenths();
        money += entry.extraMonetaryCost.tenths();
    }

    ObjectiveVector vec;
    for (auto kind : model.objectives) {
        switch (kind) {
        case ObjectiveKind::Makespan: vec.tenths.push_back(schedule.makespan().tenths()); break;
        case ObjectiveKind::Energy: vec.tenths.push_back(energy); break;
        case ObjectiveKind::Monetary: vec.tenths.push_back(money); break;
        }
    }
    return vec;
}

} // namespace fdl
