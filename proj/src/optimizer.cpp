#include "fdl/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace fdl {

std::vector<std::vector<std::size_t>> nondominatedSort(const std::vector<Evaluation>& population)
{
    std::size_t n = population.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<int> dominationCount(n, 0);
    std::vector<std::vector<std::size_t>> fronts;

    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            if (constrainedDominates(population[i], population[j]))
                dominated[i].push_back(j);
            else if (constrainedDominates(population[j], population[i]))
                ++dominationCount[i];
        }
        if (dominationCount[i] == 0)
            current.push_back(i);
    }
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<std::size_t> next;
        for (std::size_t i : current)
            for (std::size_t j : dominated[i])
                if (--dominationCount[j] == 0)
                    next.push_back(j);
        std::sort(next.begin(), next.end());
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowdingDistance(const std::vector<ObjectiveVector>& front)
{
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::size_t n = front.size();
    std::vector<double> distance(n, 0.0);
    if (n == 0)
        return distance;
    if (n <= 2) {
        std::fill(distance.begin(), distance.end(), kInf);
        return distance;
    }
    std::size_t objectives = front[0].tenths.size();
    std::vector<std::size_t> order(n);
    for (std::size_t m = 0; m < objectives; ++m) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return front[a].tenths[m] < front[b].tenths[m];
        });
        double lo = static_cast<double>(front[order.front()].tenths[m]);
        double hi = static_cast<double>(front[order.back()].tenths[m]);
        distance[order.front()] = kInf;
        distance[order.back()] = kInf;
        if (hi <= lo)
            continue;
        for (std::size_t k = 1; k + 1 < n; ++k) {
            if (distance[order[k]] == kInf)
                continue;
            double below = static_cast<double>(front[order[k - 1]].tenths[m]);
            double above = static_cast<double>(front[order[k + 1]].tenths[m]);
            distance[order[k]] += (above - below) / (hi - lo);
        }
    }
    return distance;
}

namespace {

    // Library-independent draws so runs reproduce bit-for-bit everywhere.
    class Rng {
    public:
        explicit Rng(std::uint64_t seed)
            : state_(seed ? seed : 0x9e3779b97f4a7c15ULL)
        {
        }

        std::uint64_t next()
        {
            // splitmix64
            std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        }

        std::size_t below(std::size_t bound) { return bound ? next() % bound : 0; }
        double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
        bool chance(double p) { return unit() < p; }

    private:
        std::uint64_t state_;
    };

    void runParallel(std::size_t count, int threads, const std::function<void(std::size_t)>& work)
    {
        unsigned hw = std::thread::hardware_concurrency();
        std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : (hw ? hw : 1);
        workers = std::min(workers, count);
        if (workers <= 1) {
            for (std::size_t i = 0; i < count; ++i)
                work(i);
            return;
        }
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < count; i += workers)
                    work(i);
            });
        for (auto& t : pool)
            t.join();
    }

    struct Individual {
        Genome genome;
        Evaluation evaluation;
        int rank = 0;
        double crowding = 0.0;
    };

    class Nsga2 {
    public:
        Nsga2(const FactoryModel& model, const GaParams& params, const GenerationObserver& observer)
            : model_(model)
            , params_(params)
            , observer_(observer)
            , rng_(params.seed)
        {
            auto [space, evaluate] = configure(model);
            space_ = std::move(space);
            evaluate_ = std::move(evaluate);
            n_ = space_.subprocessCount;
            mutationRate_ = params.mutationRate.value_or(n_ > 0 ? 1.0 / static_cast<double>(n_) : 1.0);
        }

        ParetoFront run()
        {
            validateParams();
            initPopulation();
            evaluateAll(population_);
            rankPopulation();
            archiveAll(population_);
            if (observer_)
                observer_(0, archive_.front());

            for (int gen = 1; gen <= params_.generations; ++gen) {
                auto offspring = makeOffspring();
                evaluateAll(offspring);
                archiveAll(offspring);
                environmentalSelection(offspring);
                if (observer_)
                    observer_(gen, archive_.front());
            }
            return archive_.front();
        }

    private:
        const FactoryModel& model_;
        const GaParams& params_;
        const GenerationObserver& observer_;
        Rng rng_;
        DecisionSpace space_;
        EvaluatorFn evaluate_;
        std::size_t n_ = 0;
        double mutationRate_ = 0.0;
        std::vector<Individual> population_;
        ParetoArchive archive_;

        void validateParams() const
        {
            if (params_.populationSize < 2 || params_.populationSize % 2 != 0)
                throw std::invalid_argument("populationSize must be even and at least 2");
            if (params_.generations < 0)
                throw std::invalid_argument("generations must be non-negative");
            if (params_.crossoverRate < 0.0 || params_.crossoverRate > 1.0)
                throw std::invalid_argument("crossoverRate must lie in [0,1]");
            if (mutationRate_ < 0.0 || mutationRate_ > 1.0)
                throw std::invalid_argument("mutationRate must lie in [0,1]");
        }

        Genome randomGenome()
        {
            Genome g;
            g.optionChoice.resize(n_);
            g.taskPriority.resize(n_);
            for (std::size_t i = 0; i < n_; ++i)
                g.optionChoice[i]
                    = static_cast<std::int32_t>(rng_.below(static_cast<std::size_t>(space_.optionCardinalities[i])));
            std::vector<std::int32_t> seq(n_);
            std::iota(seq.begin(), seq.end(), 0);
            for (std::size_t i = n_; i > 1; --i)
                std::swap(seq[i - 1], seq[rng_.below(i)]);
            for (std::size_t k = 0; k < n_; ++k)
                g.taskPriority[seq[k]] = static_cast<std::int32_t>(k);
            return g;
        }

        // One individual honors the document's urgency hints: more urgent
        // processes get earlier dispatch, options pick the fastest device.
        Genome greedySeed()
        {
            Genome g;
            g.optionChoice.resize(n_);
            g.taskPriority.resize(n_);
            for (std::size_t i = 0; i < n_; ++i) {
                const auto& options = model_.subprocesses[i].options;
                std::int32_t best = 0;
                for (std::size_t k = 1; k < options.size(); ++k)
                    if (options[k].processingTime < options[best].processingTime)
                        best = static_cast<std::int32_t>(k);
                g.optionChoice[i] = best;
            }
            std::vector<std::size_t> processOrder(model_.processes.size());
            std::iota(processOrder.begin(), processOrder.end(), 0);
            std::stable_sort(processOrder.begin(), processOrder.end(), [&](std::size_t a, std::size_t b) {
                int ua = model_.processes[a].urgencyPriority.value_or(std::numeric_limits<int>::max());
                int ub = model_.processes[b].urgencyPriority.value_or(std::numeric_limits<int>::max());
                return ua < ub;
            });
            std::int32_t next = 0;
            for (std::size_t p : processOrder)
                for (SubprocessId id : model_.processes[p].subprocesses)
                    g.taskPriority[id.value] = next++;
            return g;
        }

        void initPopulation()
        {
            population_.clear();
            population_.push_back({ greedySeed(), {}, 0, 0.0 });
            while (population_.size() < static_cast<std::size_t>(params_.populationSize))
                population_.push_back({ randomGenome(), {}, 0, 0.0 });
        }

        void evaluateAll(std::vector<Individual>& individuals)
        {
            runParallel(individuals.size(), params_.threads,
                [&](std::size_t i) { individuals[i].evaluation = evaluate_(individuals[i].genome); });
        }

        void archiveAll(const std::vector<Individual>& individuals)
        {
            for (const auto& ind : individuals)
                archive_.add(ind.genome, ind.evaluation);
        }

        void rankPopulation()
        {
            std::vector<Evaluation> evals;
            evals.reserve(population_.size());
            for (const auto& ind : population_)
                evals.push_back(ind.evaluation);
            auto fronts = nondominatedSort(evals);
            for (std::size_t f = 0; f < fronts.size(); ++f) {
                std::vector<ObjectiveVector> vectors;
                vectors.reserve(fronts[f].size());
                for (std::size_t idx : fronts[f])
                    vectors.push_back(population_[idx].evaluation.objectives);
                auto crowd = crowdingDistance(vectors);
                for (std::size_t k = 0; k < fronts[f].size(); ++k) {
                    population_[fronts[f][k]].rank = static_cast<int>(f);
                    population_[fronts[f][k]].crowding = crowd[k];
                }
            }
        }

        const Individual& tournament()
        {
            const Individual& a = population_[rng_.below(population_.size())];
            const Individual& b = population_[rng_.below(population_.size())];
            if (a.rank != b.rank)
                return a.rank < b.rank ? a : b;
            if (a.crowding != b.crowding)
                return a.crowding > b.crowding ? a : b;
            return a;
        }

        // Order crossover on the dispatch sequence keeps both children
        // permutations.
        static std::vector<std::int32_t> sequenceOf(const Genome& g)
        {
            std::vector<std::int32_t> seq(g.taskPriority.size());
            for (std::size_t i = 0; i < g.taskPriority.size(); ++i)
                seq[g.taskPriority[i]] = static_cast<std::int32_t>(i);
            return seq;
        }

        static void applySequence(Genome& g, const std::vector<std::int32_t>& seq)
        {
            for (std::size_t k = 0; k < seq.size(); ++k)
                g.taskPriority[seq[k]] = static_cast<std::int32_t>(k);
        }

        std::vector<std::int32_t> orderCross(
            const std::vector<std::int32_t>& p1, const std::vector<std::int32_t>& p2, std::size_t a,
            std::size_t b)
        {
            std::vector<std::int32_t> child(n_, -1);
            std::vector<bool> used(n_, false);
            for (std::size_t k = a; k <= b; ++k) {
                child[k] = p1[k];
                used[p1[k]] = true;
            }
            std::size_t fill = 0;
            for (std::size_t k = 0; k < n_; ++k) {
                if (used[p2[k]])
                    continue;
                if (fill >= a && fill <= b)
                    fill = b + 1;
                child[fill++] = p2[k];
            }
            return child;
        }

        std::pair<Genome, Genome> crossover(const Genome& p1, const Genome& p2)
        {
            Genome c1 = p1;
            Genome c2 = p2;
            if (n_ == 0)
                return { c1, c2 };
            if (rng_.chance(params_.crossoverRate)) {
                for (std::size_t i = 0; i < n_; ++i)
                    if (rng_.next() & 1)
                        std::swap(c1.optionChoice[i], c2.optionChoice[i]);
                std::size_t a = rng_.below(n_);
                std::size_t b = rng_.below(n_);
                if (a > b)
                    std::swap(a, b);
                auto s1 = sequenceOf(p1);
                auto s2 = sequenceOf(p2);
                applySequence(c1, orderCross(s1, s2, a, b));
                applySequence(c2, orderCross(s2, s1, a, b));
            }
            return { c1, c2 };
        }

        void mutate(Genome& g)
        {
            for (std::size_t i = 0; i < n_; ++i)
                if (rng_.chance(mutationRate_))
                    g.optionChoice[i] = static_cast<std::int32_t>(
                        rng_.below(static_cast<std::size_t>(space_.optionCardinalities[i])));
            if (n_ < 2)
                return;
            auto seq = sequenceOf(g);
            bool touched = false;
            for (std::size_t p = 0; p + 1 < n_; ++p)
                if (rng_.chance(mutationRate_)) {
                    std::swap(seq[p], seq[p + 1]);
                    touched = true;
                }
            if (touched)
                applySequence(g, seq);
        }

        std::vector<Individual> makeOffspring()
        {
            std::vector<Individual> offspring;
            offspring.reserve(params_.populationSize);
            while (offspring.size() < static_cast<std::size_t>(params_.populationSize)) {
                const Individual& p1 = tournament();
                const Individual& p2 = tournament();
                auto [c1, c2] = crossover(p1.genome, p2.genome);
                mutate(c1);
                mutate(c2);
                offspring.push_back({ std::move(c1), {}, 0, 0.0 });
                if (offspring.size() < static_cast<std::size_t>(params_.populationSize))
                    offspring.push_back({ std::move(c2), {}, 0, 0.0 });
            }
            return offspring;
        }

        void environmentalSelection(std::vector<Individual>& offspring)
        {
            std::vector<Individual> combined = std::move(population_);
            combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
                std::make_move_iterator(offspring.end()));

            std::vector<Evaluation> evals;
            evals.reserve(combined.size());
            for (const auto& ind : combined)
                evals.push_back(ind.evaluation);
            auto fronts = nondominatedSort(evals);

            std::vector<Individual> next;
            next.reserve(params_.populationSize);
            for (std::size_t f = 0; f < fronts.size() && next.size() < static_cast<std::size_t>(params_.populationSize); ++f) {
                std::vector<ObjectiveVector> vectors;
                vectors.reserve(fronts[f].size());
                for (std::size_t idx : fronts[f])
                    vectors.push_back(combined[idx].evaluation.objectives);
                auto crowd = crowdingDistance(vectors);
                std::vector<std::size_t> picks(fronts[f].size());
                std::iota(picks.begin(), picks.end(), 0);
                if (next.size() + picks.size() > static_cast<std::size_t>(params_.populationSize)) {
                    std::stable_sort(picks.begin(), picks.end(),
                        [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
                    picks.resize(static_cast<std::size_t>(params_.populationSize) - next.size());
                }
                for (std::size_t k : picks) {
                    Individual ind = std::move(combined[fronts[f][k]]);
                    ind.rank = static_cast<int>(f);
                    ind.crowding = crowd[k];
                    next.push_back(std::move(ind));
                }
            }
            population_ = std::move(next);
        }
    };

} // namespace

ParetoFront optimize(const FactoryModel& model, const GaParams& params, const GenerationObserver& observer)
{
    return Nsga2(model, params, observer).run();
}

} // namespace fdl
