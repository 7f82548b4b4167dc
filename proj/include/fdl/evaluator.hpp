#pragma once

#include "fdl/model.hpp"
#include "fdl/scheduler.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fdl {

class NoObjectives : public std::runtime_error {
public:
    NoObjectives()
        : std::runtime_error("the model declares no objectives")
    {
    }
};

class TooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Everything needed to build and check genomes, independent of the model.
struct DecisionSpace {
    std::size_t subprocessCount = 0;
    std::vector<std::int32_t> optionCardinalities;
    std::vector<ObjectiveKind> objectiveKinds;

    bool validGenome(const Genome& genome) const;
    // Number of (option, priority) decision vectors, saturating at the cap.
    std::uint64_t searchSpaceSize(std::uint64_t cap) const;
};

struct Evaluation {
    ObjectiveVector objectives;
    bool feasible = true;
    std::int32_t violationCount = 0;

    friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

// Feasible beats infeasible; among infeasible, fewer violations wins, with
// Pareto dominance breaking violation ties; among feasible, plain dominance.
bool constrainedDominates(const Evaluation& a, const Evaluation& b);

using EvaluatorFn = std::function<Evaluation(const Genome&)>;

// Derives the decision space and the genome -> Evaluation function from a
// resolved model.  The returned function references the model; keep the
// model alive while evaluating.
std::pair<DecisionSpace, EvaluatorFn> configure(const FactoryModel& model);

struct FrontEntry {
    Genome genome;
    Evaluation evaluation;
};

struct ParetoFront {
    std::vector<FrontEntry> entries; // mutually non-dominated, sorted by objectives
};

// Mutually non-dominated evaluations under constrained dominance,
// deduplicated by objective vector.  Insertion order independent.
class ParetoArchive {
public:
    void add(Genome genome, Evaluation evaluation);
    ParetoFront front() const; // sorted lexicographically by objective vector
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<FrontEntry> entries_;
};

// Exhaustive enumeration of all (optionChoice, priority permutation)
// genomes.  Throws TooLarge when the search space exceeds `cap`.
ParetoFront bruteForce(const FactoryModel& model, std::uint64_t cap);

} // namespace fdl
