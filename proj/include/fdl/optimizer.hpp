#pragma once

#include "fdl/evaluator.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace fdl {

struct GaParams {
    int populationSize = 50;
    int generations = 100;
    double crossoverRate = 0.9;
    std::optional<double> mutationRate; // default: 1 / subprocess count
    std::uint64_t seed = 0;
    int threads = 0; // evaluation parallelism; 0 = hardware concurrency
};

// Deb's fast non-dominated sort under constrained dominance: front 0 holds
// the non-dominated evaluations, front k the non-dominated remainder.
std::vector<std::vector<std::size_t>> nondominatedSort(const std::vector<Evaluation>& population);

// Boundary points per objective are infinite; interior points accumulate
// min-max normalized neighbor gaps.
std::vector<double> crowdingDistance(const std::vector<ObjectiveVector>& front);

using GenerationObserver = std::function<void(int generation, const ParetoFront& archive)>;

// Generational NSGA-II over (option choice, priority permutation) genomes.
// Fully deterministic for a given seed, independent of thread count.
ParetoFront optimize(const FactoryModel& model, const GaParams& params,
    const GenerationObserver& observer = {});

} // namespace fdl
