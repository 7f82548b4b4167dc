#include "fdl/evaluator.hpp"

#include <algorithm>
#include <numeric>

namespace fdl {

bool DecisionSpace::validGenome(const Genome& genome) const
{
    if (genome.optionChoice.size() != subprocessCount || genome.taskPriority.size() != subprocessCount)
        return false;
    std::vector<bool> seen(subprocessCount, false);
    for (std::size_t i = 0; i < subprocessCount; ++i) {
        if (genome.optionChoice[i] < 0 || genome.optionChoice[i] >= optionCardinalities[i])
            return false;
        auto p = genome.taskPriority[i];
        if (p < 0 || static_cast<std::size_t>(p) >= subprocessCount || seen[p])
            return false;
        seen[p] = true;
    }
    return true;
}

std::uint64_t DecisionSpace::searchSpaceSize(std::uint64_t cap) const
{
    std::uint64_t total = 1;
    for (auto card : optionCardinalities) {
        total *= static_cast<std::uint64_t>(card);
        if (total > cap)
            return cap + 1;
    }
    for (std::size_t i = 2; i <= subprocessCount; ++i) {
        total *= i;
        if (total > cap)
            return cap + 1;
    }
    return total;
}

bool constrainedDominates(const Evaluation& a, const Evaluation& b)
{
    if (a.feasible != b.feasible)
        return a.feasible;
    if (!a.feasible && a.violationCount != b.violationCount)
        return a.violationCount < b.violationCount;
    return dominates(a.objectives, b.objectives);
}

std::pair<DecisionSpace, EvaluatorFn> configure(const FactoryModel& model)
{
    if (model.objectives.empty())
        throw NoObjectives();
    DecisionSpace space;
    space.subprocessCount = model.subprocesses.size();
    space.objectiveKinds = model.objectives;
    for (const auto& sp : model.subprocesses)
        space.optionCardinalities.push_back(static_cast<std::int32_t>(sp.options.size()));

    EvaluatorFn evaluator = [&model](const Genome& genome) {
        Schedule schedule = simulate(model, genome);
        Evaluation eval;
        eval.objectives = schedule.objectives;
        eval.feasible = schedule.feasible;
        eval.violationCount = static_cast<std::int32_t>(schedule.violations.size());
        return eval;
    };
    return { std::move(space), std::move(evaluator) };
}

void ParetoArchive::add(Genome genome, Evaluation evaluation)
{
    for (const auto& e : entries_) {
        if (constrainedDominates(e.evaluation, evaluation))
            return;
        if (e.evaluation.feasible == evaluation.feasible && e.evaluation.objectives == evaluation.objectives)
            return; // duplicate objective vector
    }
    std::erase_if(entries_, [&](const FrontEntry& e) {
        return constrainedDominates(evaluation, e.evaluation);
    });
    entries_.push_back({ std::move(genome), std::move(evaluation) });
}

ParetoFront ParetoArchive::front() const
{
    ParetoFront front;
    front.entries = entries_;
    std::sort(front.entries.begin(), front.entries.end(), [](const FrontEntry& a, const FrontEntry& b) {
        if (a.evaluation.feasible != b.evaluation.feasible)
            return a.evaluation.feasible;
        return a.evaluation.objectives.tenths < b.evaluation.objectives.tenths;
    });
    return front;
}

ParetoFront bruteForce(const FactoryModel& model, std::uint64_t cap)
{
    auto [space, evaluate] = configure(model);
    if (space.searchSpaceSize(cap) > cap)
        throw TooLarge("search space exceeds the enumeration cap of " + std::to_string(cap));

    std::size_t n = space.subprocessCount;
    ParetoArchive archive;

    Genome genome;
    genome.optionChoice.assign(n, 0);
    genome.taskPriority.resize(n);
    std::iota(genome.taskPriority.begin(), genome.taskPriority.end(), 0);

    if (n == 0) {
        archive.add(genome, evaluate(genome));
        return archive.front();
    }

    for (;;) {
        std::vector<std::int32_t> priorities(n);
        std::iota(priorities.begin(), priorities.end(), 0);
        do {
            genome.taskPriority = priorities;
            archive.add(genome, evaluate(genome));
        } while (std::next_permutation(priorities.begin(), priorities.end()));

        // Next option combination, mixed radix.
        std::size_t pos = 0;
        while (pos < n) {
            if (++genome.optionChoice[pos] < space.optionCardinalities[pos])
                break;
            genome.optionChoice[pos] = 0;
            ++pos;
        }
        if (pos == n)
            break;
    }
    return archive.front();
}

} // namespace fdl
