#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "nanodesign/errors.hpp"
#include "nanodesign/genetic.hpp"
#include "nanodesign/training.hpp"
#include "toy_models.hpp"

using namespace nanodesign;
using nanodesign::testing::toy_model;

namespace {

bool in_alphabet(const Individual& ind) {
    return std::all_of(ind.begin(), ind.end(), [](double g) {
        return std::find(kGeneAlphabet.begin(), kGeneAlphabet.end(), g) != kGeneAlphabet.end();
    });
}

Spectrum surrogate_target(const MlpModel& m, const Individual& genes) {
    return predict_spectrum(m, genes);
}

std::vector<Individual> enumerate(std::size_t layers) {
    std::vector<Individual> all{{}};
    for (std::size_t l = 0; l < layers; ++l) {
        std::vector<Individual> next;
        for (const auto& prefix : all) {
            for (double g : kGeneAlphabet) {
                auto ind = prefix;
                ind.push_back(g);
                next.push_back(ind);
            }
        }
        all = std::move(next);
    }
    return all;
}

Individual exhaustive_best(const MlpModel& m, const Spectrum& target) {
    const FitnessEvaluator eval(m, target);
    Individual best;
    double best_x = -1.0;
    for (const auto& ind : enumerate(static_cast<std::size_t>(m.arch.input_dim))) {
        const double x = eval(ind);
        if (x > best_x) best_x = x, best = ind;
    }
    return best;
}

}  // namespace

TEST_SUITE("inverse") {

TEST_CASE("fitness is 1000 n over the floored SSE") {
    CHECK(fitness_from_sse(1000.0 * 8, 8) == 1.0);
    CHECK(fitness_from_sse(4000.0, 400) == 100.0);
    CHECK(fitness_from_sse(0.0, 400) == 1000.0 * 400 / 1e-9);
    CHECK(std::isfinite(fitness_from_sse(0.0, 400)));
}

TEST_CASE("fitness goes through the surrogate and checks the grid") {
    const MlpModel m = toy_model(ArchitectureKind::TwoChannel, 3, 8, 2, 8, 1);
    const Individual genes{35.0, 55.0, 65.0};
    const Spectrum target = surrogate_target(m, genes);
    CHECK(fitness(genes, target, m) == fitness_from_sse(0.0, 8));
    const Individual other{45.0, 55.0, 65.0};
    const auto y = predict_spectrum(m, other);
    CHECK(fitness(other, target, m) ==
          doctest::Approx(fitness_from_sse(sum_squared_error(y.values, target.values), 8)).epsilon(1e-9));

    Spectrum wrong{SpectralGrid(400.0, 800.0, 6), std::vector<double>(6, 1.0)};
    CHECK_THROWS_AS(fitness(genes, wrong, m), ArgumentError);
}

TEST_CASE("generation plans follow the operator-count formulas") {
    GaConfig c;
    c.selection = SelectionPolicy{SelectionPolicy::Mode::Fixed, 20};
    auto p = plan_generation(std::vector<double>{1.0, 2.0}, c);
    CHECK(p.selection == 20);
    CHECK(p.crossover == 56);
    CHECK(p.mutation == 24);

    c.selection = SelectionPolicy{};
    c.t_value = 100.0;
    p = plan_generation(std::vector<double>{95.0, 90.0, 85.0}, c);
    CHECK(p.selection == 90);
    CHECK(p.crossover == 7);
    CHECK(p.mutation == 3);
    p = plan_generation(std::vector<double>{500.0, 1e6}, c);
    CHECK(p.selection == 90);

    p = plan_generation(std::vector<double>{1e-9, 1e-9}, c);
    CHECK(p.selection == 0);
    CHECK(p.crossover == 70);
    CHECK(p.mutation == 30);

    p = plan_generation(std::vector<double>{20.0, 30.0}, c);  // 100 * 25 / 100
    CHECK(p.selection == 25);
    CHECK(p.crossover == 53);
    CHECK(p.mutation == 22);

    c.selection = SelectionPolicy{SelectionPolicy::Mode::Literal, 0};
    p = plan_generation(std::vector<double>{20.0, 40.0}, c);  // 40 / 100 * 30
    CHECK(p.selection == 12);

    CHECK_THROWS_AS(plan_generation(std::vector<double>{}, c), ArgumentError);
}

TEST_CASE("plans conserve the population and grow with mean fitness") {
    GaConfig c;
    c.t_value = 5000.0;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 10000.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> x(100);
        for (double& v : x) v = u(rng) * (trial / 500.0);
        for (auto mode : {SelectionPolicy::Mode::Adaptive, SelectionPolicy::Mode::Literal}) {
            c.selection.mode = mode;
            const auto p = plan_generation(x, c);
            CHECK(p.selection + p.crossover + p.mutation == 100);
            CHECK(p.selection <= 90);
            CHECK(p.selection >= 0);
            CHECK(p.crossover >= 0);
            CHECK(p.mutation >= 0);
        }
    }
    c.selection.mode = SelectionPolicy::Mode::Adaptive;
    int previous = 0;
    for (double mean = 0.0; mean < 6000.0; mean += 37.0) {
        const int s = plan_generation(std::vector<double>{mean}, c).selection;
        CHECK(s >= previous);
        previous = s;
    }
}

TEST_CASE("selection policy parsing") {
    CHECK(SelectionPolicy::parse("adaptive").mode == SelectionPolicy::Mode::Adaptive);
    CHECK(SelectionPolicy::parse("literal").mode == SelectionPolicy::Mode::Literal);
    const auto f = SelectionPolicy::parse("fixed:80");
    CHECK(f.mode == SelectionPolicy::Mode::Fixed);
    CHECK(f.fixed_count == 80);
    CHECK(f.to_string() == "fixed:80");
    CHECK_THROWS_AS(SelectionPolicy::parse("fixed:"), ArgumentError);
    CHECK_THROWS_AS(SelectionPolicy::parse("fixed:2x"), ArgumentError);
    CHECK_THROWS_AS(SelectionPolicy::parse("greedy"), ArgumentError);
}

TEST_CASE("config validation") {
    GaConfig c;
    CHECK_NOTHROW(c.validate());
    c.population_size = 1;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    c = GaConfig{};
    c.t_value = 0.0;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    c = GaConfig{};
    c.selection_cap = 100;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    c = GaConfig{};
    c.selection = SelectionPolicy{SelectionPolicy::Mode::Fixed, 95};
    CHECK_THROWS_AS(c.validate(), ArgumentError);
}

TEST_CASE("roulette with equal fitness is uniform") {
    const int n = 10, draws = 100000;
    std::vector<Individual> pop;
    for (int i = 0; i < n; ++i) pop.push_back({static_cast<double>(i)});
    const std::vector<double> x(n, 3.0);
    Rng rng(11);
    std::vector<int> counts(n, 0);
    for (int round = 0; round < draws / n; ++round) {
        const auto picked = roulette_select(pop, x, n, rng, false);
        REQUIRE(picked.size() == static_cast<std::size_t>(n));
        for (const auto& ind : picked) ++counts[static_cast<int>(ind[0])];
    }
    const double expected = draws / double(n);
    const double sigma = std::sqrt(draws * (1.0 / n) * (1.0 - 1.0 / n));
    double chi2 = 0.0;
    for (int c : counts) {
        CHECK(std::abs(c - expected) < 3.0 * sigma);
        chi2 += (c - expected) * (c - expected) / expected;
    }
    CHECK(chi2 < 27.88);  // chi-square, 9 dof, p = 0.001
}

TEST_CASE("roulette favours a dominant individual") {
    std::vector<Individual> pop;
    std::vector<double> x;
    for (int i = 0; i < 10; ++i) {
        pop.push_back({static_cast<double>(i)});
        x.push_back(i == 4 ? 99.0 * 9 : 1.0);
    }
    Rng rng(12);
    int hits = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        if (roulette_select(pop, x, 1, rng, false)[0][0] == 4.0) ++hits;
    }
    CHECK(hits >= 9500);
}

TEST_CASE("roulette edge cases and elitism") {
    std::vector<Individual> pop{{1.0}, {2.0}, {3.0}};
    Rng rng(13);
    CHECK(roulette_select(pop, std::vector<double>{1, 2, 3}, 0, rng, false).empty());
    CHECK(roulette_select(pop, std::vector<double>{1, 2, 3}, 0, rng, true).empty());
    for (int trial = 0; trial < 50; ++trial) {
        CHECK(roulette_select(pop, std::vector<double>{5, 1e-6, 1e-6}, 1, rng, true)[0][0] == 1.0);
        CHECK(roulette_select(pop, std::vector<double>{1, 100, 1}, 2, rng, true)[0][0] == 2.0);
    }
    CHECK_THROWS_AS(roulette_select(pop, std::vector<double>{1, 0, 1}, 2, rng, false), ArgumentError);
    CHECK_THROWS_AS(roulette_select(pop, std::vector<double>{1, 1}, 2, rng, false), ArgumentError);
    CHECK_THROWS_AS(roulette_select(pop, std::vector<double>{1, 1, 1}, 4, rng, false), ArgumentError);
}

TEST_CASE("single-point crossover") {
    const Individual a{35, 35, 35, 35}, b{65, 65, 65, 65};
    CHECK(single_point_crossover(a, b, 2) == Individual{35, 35, 65, 65});
    CHECK(single_point_crossover(a, a, 3) == a);

    Rng rng(14);
    const std::vector<Individual> twins{a, a, a};
    for (const auto& child : crossover(twins, 20, rng)) CHECK(child == a);

    const auto parents = random_population(30, 6, rng);
    const auto kids = crossover(parents, 500, rng);
    CHECK(kids.size() == 500);
    std::set<std::size_t> cuts;
    for (const auto& k : kids) {
        CHECK(k.size() == 6);
        CHECK(in_alphabet(k));
    }
    const std::vector<Individual> ab{a, b};
    for (const auto& k : crossover(ab, 200, rng)) {
        // one switch point strictly inside the string
        CHECK(k.front() != k.back());
        const auto switch_at = static_cast<std::size_t>(
            std::adjacent_find(k.begin(), k.end(), std::not_equal_to<>()) - k.begin()) + 1;
        cuts.insert(switch_at);
    }
    CHECK(cuts == std::set<std::size_t>{1, 2, 3});

    CHECK(crossover(std::vector<Individual>{a}, 0, rng).empty());
    CHECK_THROWS_AS(crossover(std::vector<Individual>{a}, 1, rng), ArgumentError);
}

TEST_CASE("mutation creates uniform fresh individuals") {
    Rng rng(15);
    CHECK(mutation(0, 5, rng).empty());
    const auto mutants = mutation(10000, 3, rng);
    std::map<double, int> freq;
    for (const auto& m : mutants) {
        CHECK(m.size() == 3);
        CHECK(in_alphabet(m));
        for (double g : m) ++freq[g];
    }
    REQUIRE(freq.size() == 4);
    for (const auto& [gene, count] : freq) CHECK(std::abs(count / 30000.0 - 0.25) <= 0.02);
}

TEST_CASE("GA matches exhaustive enumeration on three-layer problems") {
    int agree = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const MlpModel m = toy_model(ArchitectureKind::TwoChannel, 3, 8, 2, 12, 100 + seed);
        Rng pick(seed);
        const Individual hidden = mutation(1, 3, pick)[0];
        const Spectrum target = surrogate_target(m, hidden);
        GaConfig c;
        c.seed = seed;
        c.t_value = 1e12;
        c.max_generations = 30;
        const GaResult r = run_ga(target, m, c);
        if (r.best == exhaustive_best(m, target)) ++agree;
        CHECK(in_alphabet(r.best));
    }
    CHECK(agree >= 19);
}

TEST_CASE("GA on a two-layer problem with population larger than the space") {
    const MlpModel m = toy_model(ArchitectureKind::SingleChannel, 2, 6, 2, 10, 7);
    const std::vector<double> continuous{41.0, 58.0};
    const Spectrum target = predict_spectrum(m, continuous);
    GaConfig c;
    c.t_value = 1e15;  // unreachable, so the run uses every generation
    c.max_generations = 15;
    const GaResult r = run_ga(target, m, c);
    CHECK_FALSE(r.reached_threshold);
    CHECK(r.generations == 15);
    CHECK(r.best == exhaustive_best(m, target));
}

TEST_CASE("GA bookkeeping") {
    const MlpModel m = toy_model(ArchitectureKind::TwoChannel, 4, 8, 2, 8, 21);
    const Spectrum target = predict_spectrum(m, std::vector<double>{33.0, 47.0, 61.0, 52.0});
    GaConfig c;
    c.seed = 5;
    c.t_value = 1e15;
    c.max_generations = 25;
    c.elitism = false;
    const GaResult r = run_ga(target, m, c);
    REQUIRE(r.history.size() == 26);
    for (std::size_t g = 0; g < r.history.size(); ++g) {
        const auto& h = r.history[g];
        CHECK(h.generation == static_cast<int>(g));
        CHECK(h.plan.selection + h.plan.crossover + h.plan.mutation == c.population_size);
        CHECK(h.max_fitness >= h.mean_fitness);
        CHECK(h.best_fitness >= h.max_fitness);
        if (g) CHECK(h.best_fitness >= r.history[g - 1].best_fitness);
    }
    CHECK(r.best_fitness == r.history.back().best_fitness);
    CHECK(FitnessEvaluator(m, target)(r.best) == doctest::Approx(r.best_fitness).epsilon(1e-9));

    const GaResult again = run_ga(target, m, c);
    CHECK(again.best == r.best);
    CHECK(again.history.back().mean_fitness == r.history.back().mean_fitness);
}

TEST_CASE("GA stops as soon as the threshold is met") {
    const MlpModel m = toy_model(ArchitectureKind::TwoChannel, 3, 8, 2, 8, 22);
    const Individual hidden{45.0, 65.0, 35.0};
    const Spectrum target = surrogate_target(m, hidden);
    GaConfig c;
    c.t_value = 1e12;
    c.max_generations = 200;
    const GaResult r = run_ga(target, m, c);
    CHECK(r.reached_threshold);
    CHECK(r.best == hidden);
    CHECK(r.generations < 200);
    CHECK(static_cast<int>(r.history.size()) == r.generations + 1);

    Rng rng(1);
    CHECK_THROWS_AS(run_ga(target, m, c, random_population(50, 3, rng)), ArgumentError);
    c.max_generations = 0;
    const GaResult none = run_ga(target, m, c, std::vector<Individual>(100, Individual{35, 35, 35}));
    CHECK(none.generations == 0);
    CHECK(none.best == Individual{35, 35, 35});
}

TEST_CASE("every individual of every generation stays on the alphabet") {
    Rng rng(31);
    auto pop = random_population(100, 5, rng);
    std::vector<double> x(pop.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 + static_cast<double>(i % 7);
    for (int gen = 0; gen < 10; ++gen) {
        GaConfig c;
        c.t_value = 10.0;
        const auto plan = plan_generation(x, c);
        auto next = roulette_select(pop, x, plan.selection, rng, true);
        const auto pool = roulette_select(pop, x, 100, rng, false);
        const auto kids = crossover(pool, plan.crossover, rng);
        const auto fresh = mutation(plan.mutation, 5, rng);
        next.insert(next.end(), kids.begin(), kids.end());
        next.insert(next.end(), fresh.begin(), fresh.end());
        REQUIRE(next.size() == 100);
        for (const auto& ind : next) CHECK(in_alphabet(ind));
        pop = next;
    }
}

}  // TEST_SUITE
