#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fdl/export.hpp"
#include "fdl/optimizer.hpp"
#include "support/generators.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace fdl;

namespace {

Evaluation eval(std::vector<std::int64_t> v, bool feasible = true, int violations = 0)
{
    return { ObjectiveVector { std::move(v) }, feasible, violations };
}

FactoryModel enumerableModel(std::mt19937_64& rng, std::uint64_t cap)
{
    fdltest::GenOptions opts;
    opts.maxDevices = 3;
    opts.maxProcesses = 2;
    opts.maxSubprocessesPerProcess = 2;
    opts.maxOptionsPerSubprocess = 3;
    opts.maxSetups = 2;
    opts.allowUnavailableDevices = false;
    opts.allowZeroDurations = false;
    for (;;) {
        auto model = fdltest::randomModel(rng, opts);
        auto [space, evaluate] = configure(model);
        if (space.searchSpaceSize(cap) <= cap && space.subprocessCount >= 1)
            return model;
    }
}

std::set<std::pair<bool, std::vector<std::int64_t>>> objectiveSet(const ParetoFront& front)
{
    std::set<std::pair<bool, std::vector<std::int64_t>>> out;
    for (const auto& e : front.entries)
        out.insert({ e.evaluation.feasible, e.evaluation.objectives.tenths });
    return out;
}

} // namespace

TEST_CASE("non-dominated sorting splits fronts as expected")
{
    auto fronts = nondominatedSort({ eval({ 1, 2 }), eval({ 2, 1 }), eval({ 2, 2 }) });
    REQUIRE(fronts.size() == 2);
    CHECK(fronts[0] == std::vector<std::size_t> { 0, 1 });
    CHECK(fronts[1] == std::vector<std::size_t> { 2 });

    auto identical = nondominatedSort({ eval({ 3, 3 }), eval({ 3, 3 }), eval({ 3, 3 }) });
    REQUIRE(identical.size() == 1);
    CHECK(identical[0].size() == 3);

    auto chainlike = nondominatedSort({ eval({ 1, 1 }), eval({ 2, 2 }), eval({ 3, 3 }) });
    REQUIRE(chainlike.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(chainlike[i] == std::vector<std::size_t> { i });

    // constrained dominance: infeasible ranks behind feasible
    auto mixed = nondominatedSort({ eval({ 9, 9 }), eval({ 1, 1 }, false, 1) });
    REQUIRE(mixed.size() == 2);
    CHECK(mixed[0] == std::vector<std::size_t> { 0 });
}

TEST_CASE("crowding distance marks boundaries infinite and sums gaps")
{
    auto two = crowdingDistance({ ObjectiveVector { { 0, 1 } }, ObjectiveVector { { 1, 0 } } });
    REQUIRE(two.size() == 2);
    CHECK(std::isinf(two[0]));
    CHECK(std::isinf(two[1]));

    auto one = crowdingDistance({ ObjectiveVector { { 5 } } });
    REQUIRE(one.size() == 1);
    CHECK(std::isinf(one[0]));

    auto three = crowdingDistance({ ObjectiveVector { { 0, 10 } }, ObjectiveVector { { 5, 5 } },
        ObjectiveVector { { 10, 0 } } });
    REQUIRE(three.size() == 3);
    CHECK(std::isinf(three[0]));
    CHECK(std::isinf(three[2]));
    CHECK(three[1] == doctest::Approx(2.0));
}

TEST_CASE("single-genome space collapses to one entry after one generation")
{
    std::mt19937_64 rng(3);
    fdltest::GenOptions opts;
    opts.maxProcesses = 1;
    opts.maxSubprocessesPerProcess = 1;
    opts.maxOptionsPerSubprocess = 1;
    opts.allowUnavailableDevices = false;
    auto model = fdltest::randomModel(rng, opts);
    GaParams params;
    params.populationSize = 4;
    params.generations = 1;
    params.seed = 7;
    params.threads = 1;
    auto front = optimize(model, params);
    REQUIRE(front.entries.size() == 1);
    auto oracle = bruteForce(model, 100);
    CHECK(objectiveSet(front) == objectiveSet(oracle));
}

TEST_CASE("identical seeds give identical fronts; genomes stay legal")
{
    std::mt19937_64 rng(17);
    fdltest::GenOptions opts;
    opts.allowUnavailableDevices = false;
    auto model = fdltest::randomModel(rng, opts);
    auto [space, evaluate] = configure(model);
    GaParams params;
    params.populationSize = 8;
    params.generations = 10;
    params.seed = 42;
    params.threads = 1;
    auto a = optimize(model, params);
    auto b = optimize(model, params);
    CHECK(frontToCsv(a, model) == frontToCsv(b, model));
    for (const auto& entry : a.entries)
        CHECK(space.validGenome(entry.genome));

    params.threads = 4; // parallel evaluation must not change anything
    auto c = optimize(model, params);
    CHECK(frontToCsv(a, model) == frontToCsv(c, model));

    params.threads = 1;
    params.seed = 43;
    auto d = optimize(model, params); // may differ, must not crash
    for (const auto& entry : d.entries)
        CHECK(space.validGenome(entry.genome));
}

TEST_CASE("archive improves monotonically and keeps elites")
{
    std::mt19937_64 rng(23);
    auto model = enumerableModel(rng, 5000);
    // Reference point: 1.1 x the worst initial-front value per objective.
    std::vector<ParetoFront> snapshots;
    GaParams params;
    params.populationSize = 8;
    params.generations = 15;
    params.seed = 11;
    params.threads = 1;
    optimize(model, params, [&](int, const ParetoFront& archive) { snapshots.push_back(archive); });
    REQUIRE(snapshots.size() == static_cast<std::size_t>(params.generations) + 1);

    ObjectiveVector reference;
    {
        std::size_t dims = model.objectives.size();
        reference.tenths.assign(dims, 0);
        for (const auto& e : snapshots.front().entries)
            for (std::size_t k = 0; k < dims; ++k)
                reference.tenths[k] = std::max(reference.tenths[k], e.evaluation.objectives.tenths[k]);
        for (std::size_t k = 0; k < dims; ++k)
            reference.tenths[k] = reference.tenths[k] * 11 / 10 + 1;
    }

    double previous = -1.0;
    for (const auto& snapshot : snapshots) {
        std::vector<ObjectiveVector> vectors;
        for (const auto& e : snapshot.entries)
            if (e.evaluation.feasible)
                vectors.push_back(e.evaluation.objectives);
        double hv = fdltest::hypervolume(vectors, reference);
        CHECK(hv >= previous - 1e-9);
        previous = hv;
    }

    // Elitism: every feasible front vector stays weakly dominated next round.
    for (std::size_t g = 0; g + 1 < snapshots.size(); ++g) {
        for (const auto& e : snapshots[g].entries) {
            if (!e.evaluation.feasible)
                continue;
            bool covered = false;
            for (const auto& n : snapshots[g + 1].entries)
                if (n.evaluation.feasible
                    && (n.evaluation.objectives == e.evaluation.objectives
                        || dominates(n.evaluation.objectives, e.evaluation.objectives)))
                    covered = true;
            CHECK(covered);
        }
    }
}

TEST_CASE("optimizer matches the exhaustive oracle on enumerable instances")
{
    std::mt19937_64 rng(31);
    int exact = 0;
    const int instances = 20;
    for (int i = 0; i < instances; ++i) {
        auto model = enumerableModel(rng, 10000);
        auto oracle = bruteForce(model, 10000);
        GaParams params;
        params.populationSize = 50;
        params.generations = 100;
        params.seed = 1000 + i;
        params.threads = 1;
        auto front = optimize(model, params);

        auto got = objectiveSet(front);
        auto want = objectiveSet(oracle);
        if (got == want)
            ++exact;
        // Whatever happens, the returned front may never be dominated by the oracle.
        for (const auto& e : front.entries) {
            if (!e.evaluation.feasible)
                continue;
            for (const auto& o : oracle.entries) {
                if (!o.evaluation.feasible)
                    continue;
                CHECK(!dominates(o.evaluation.objectives, e.evaluation.objectives));
            }
        }
    }
    // The GA re-finds the exact front in nearly all tiny instances.
    CHECK(exact >= instances - 1);
}

TEST_CASE("parameter validation")
{
    std::mt19937_64 rng(5);
    fdltest::GenOptions opts;
    auto model = fdltest::randomModel(rng, opts);
    GaParams params;
    params.populationSize = 3; // odd
    CHECK_THROWS_AS(optimize(model, params), std::invalid_argument);
    params.populationSize = 4;
    params.crossoverRate = 1.5;
    CHECK_THROWS_AS(optimize(model, params), std::invalid_argument);
}
