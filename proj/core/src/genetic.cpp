#include "nanodesign/genetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nanodesign/errors.hpp"

namespace nanodesign {
namespace {

std::size_t argmax(std::span<const double> values) {
    return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

double mean_of(std::span<const double> values) {
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::vector<std::size_t> roulette_indices(std::span<const double> fitness_values, int count,
                                          Rng& rng, bool elitism) {
    std::vector<std::size_t> picked;
    if (count <= 0) return picked;
    if (static_cast<std::size_t>(count) > fitness_values.size()) {
        throw ArgumentError("cannot select more individuals than the population holds");
    }
    for (double x : fitness_values) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw ArgumentError("roulette selection needs finite positive fitness values");
        }
    }
    picked.reserve(static_cast<std::size_t>(count));
    if (elitism) picked.push_back(argmax(fitness_values));
    std::discrete_distribution<std::size_t> wheel(fitness_values.begin(), fitness_values.end());
    while (picked.size() < static_cast<std::size_t>(count)) picked.push_back(wheel(rng));
    return picked;
}

}  // namespace

SelectionPolicy SelectionPolicy::parse(const std::string& text) {
    if (text == "adaptive") return {Mode::Adaptive, 0};
    if (text == "literal") return {Mode::Literal, 0};
    if (text.rfind("fixed:", 0) == 0) {
        try {
            std::size_t used = 0;
            const int n = std::stoi(text.substr(6), &used);
            if (used == text.size() - 6 && n >= 0) return {Mode::Fixed, n};
        } catch (const std::exception&) {
        }
    }
    throw ArgumentError("selection policy must be adaptive, literal or fixed:<count>, got '" + text + "'");
}

std::string SelectionPolicy::to_string() const {
    switch (mode) {
        case Mode::Adaptive: return "adaptive";
        case Mode::Literal: return "literal";
        case Mode::Fixed: return "fixed:" + std::to_string(fixed_count);
    }
    return "adaptive";
}

void GaConfig::validate() const {
    if (population_size < 2) throw ArgumentError("population size must be at least 2");
    if (!(t_value > 0.0)) throw ArgumentError("fitness threshold must be positive");
    if (max_generations < 0) throw ArgumentError("max generations must be non-negative");
    if (selection_cap < 0 || selection_cap >= population_size) {
        throw ArgumentError("selection cap must lie in [0, population size)");
    }
    if (!(crossover_fraction >= 0.0 && crossover_fraction <= 1.0)) {
        throw ArgumentError("crossover fraction must lie in [0, 1]");
    }
    if (selection.mode == SelectionPolicy::Mode::Fixed &&
        (selection.fixed_count < 0 || selection.fixed_count > selection_cap)) {
        throw ArgumentError("fixed selection count must lie in [0, cap]");
    }
}

double fitness_from_sse(double sse, std::size_t n_points) {
    return 1000.0 * static_cast<double>(n_points) / std::max(sse, kFitnessSseFloor);
}

FitnessEvaluator::FitnessEvaluator(const MlpModel& model, const Spectrum& target) : model_(model) {
    if (target.size() != static_cast<std::size_t>(model.arch.output_dim) ||
        !(target.grid == model.provenance.grid)) {
        throw ArgumentError("target spectrum grid does not match the model grid");
    }
    target_ = model.normalizer.normalize_spectrum(target.values);
}

double FitnessEvaluator::operator()(const Individual& genes) const {
    const Eigen::VectorXd y = forward(model_, model_.normalizer.normalize_stack(genes));
    return fitness_from_sse(
        validation_error(std::span(y.data(), static_cast<std::size_t>(y.size())), target_),
        target_.size());
}

std::vector<double> FitnessEvaluator::evaluate(const std::vector<Individual>& population) const {
    std::vector<double> out(population.size());
    if (population.empty()) return out;
    Eigen::MatrixXd x(model_.arch.input_dim, static_cast<Eigen::Index>(population.size()));
    for (std::size_t j = 0; j < population.size(); ++j) {
        if (population[j].size() != static_cast<std::size_t>(x.rows())) {
            throw ArgumentError("individual length does not match the model input");
        }
        const auto u = model_.normalizer.normalize_stack(population[j]);
        x.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(u.data(), x.rows());
    }
    const Eigen::MatrixXd y = forward_batch(model_, x);
    const Eigen::Map<const Eigen::VectorXd> t(target_.data(), static_cast<Eigen::Index>(target_.size()));
    for (std::size_t j = 0; j < population.size(); ++j) {
        out[j] = fitness_from_sse((y.col(static_cast<Eigen::Index>(j)) - t).squaredNorm(), target_.size());
    }
    return out;
}

double fitness(const Individual& genes, const Spectrum& target, const MlpModel& model) {
    return FitnessEvaluator(model, target)(genes);
}

GenerationPlan plan_generation(std::span<const double> x, const GaConfig& config) {
    config.validate();
    if (x.empty()) throw ArgumentError("fitness vector is empty");
    const int population = config.population_size;
    double raw = 0.0;
    switch (config.selection.mode) {
        case SelectionPolicy::Mode::Adaptive:
            raw = population * mean_of(x) / config.t_value;
            break;
        case SelectionPolicy::Mode::Literal:
            raw = *std::max_element(x.begin(), x.end()) / config.t_value * mean_of(x);
            break;
        case SelectionPolicy::Mode::Fixed:
            raw = config.selection.fixed_count;
            break;
    }
    GenerationPlan plan;
    plan.selection = raw >= config.selection_cap ? config.selection_cap
                                                 : static_cast<int>(std::lround(std::max(raw, 0.0)));
    plan.selection = std::min(plan.selection, config.selection_cap);
    plan.crossover = static_cast<int>(
        std::lround(config.crossover_fraction * static_cast<double>(population - plan.selection)));
    plan.mutation = population - plan.selection - plan.crossover;
    return plan;
}

std::vector<Individual> roulette_select(const std::vector<Individual>& population,
                                        std::span<const double> fitness_values, int count, Rng& rng,
                                        bool elitism) {
    if (population.size() != fitness_values.size()) {
        throw ArgumentError("population and fitness vector differ in length");
    }
    std::vector<Individual> out;
    for (std::size_t i : roulette_indices(fitness_values, count, rng, elitism)) {
        out.push_back(population[i]);
    }
    return out;
}

Individual single_point_crossover(const Individual& first, const Individual& second,
                                  std::size_t cut) {
    if (first.size() != second.size()) throw ArgumentError("parents differ in length");
    if (cut > first.size()) throw ArgumentError("crossover cut beyond the gene string");
    Individual child(first.begin(), first.begin() + static_cast<std::ptrdiff_t>(cut));
    child.insert(child.end(), second.begin() + static_cast<std::ptrdiff_t>(cut), second.end());
    return child;
}

std::vector<Individual> crossover(const std::vector<Individual>& parents, int count, Rng& rng) {
    std::vector<Individual> out;
    if (count <= 0) return out;
    if (parents.size() < 2) throw ArgumentError("crossover needs at least two parents");
    const std::size_t layers = parents.front().size();
    std::uniform_int_distribution<std::size_t> pick_first(0, parents.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_second(0, parents.size() - 2);
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const std::size_t i = pick_first(rng);
        std::size_t j = pick_second(rng);
        if (j >= i) ++j;
        if (layers < 2) {
            out.push_back(parents[i]);
            continue;
        }
        std::uniform_int_distribution<std::size_t> pick_cut(1, layers - 1);
        out.push_back(single_point_crossover(parents[i], parents[j], pick_cut(rng)));
    }
    return out;
}

std::vector<Individual> mutation(int count, std::size_t num_layers, Rng& rng) {
    std::vector<Individual> out;
    if (count <= 0) return out;
    std::uniform_int_distribution<std::size_t> gene(0, kGeneAlphabet.size() - 1);
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        Individual ind(num_layers);
        for (double& g : ind) g = kGeneAlphabet[gene(rng)];
        out.push_back(std::move(ind));
    }
    return out;
}

std::vector<Individual> random_population(int size, std::size_t num_layers, Rng& rng) {
    return mutation(size, num_layers, rng);
}

GaResult run_ga(const Spectrum& target, const MlpModel& model, const GaConfig& config,
                std::optional<std::vector<Individual>> initial_population) {
    config.validate();
    const FitnessEvaluator evaluate(model, target);
    const auto layers = static_cast<std::size_t>(model.arch.input_dim);
    Rng rng(config.seed);

    std::vector<Individual> population =
        initial_population ? std::move(*initial_population)
                           : random_population(config.population_size, layers, rng);
    if (population.size() != static_cast<std::size_t>(config.population_size)) {
        throw ArgumentError("initial population size does not match the configuration");
    }
    std::vector<double> x = evaluate.evaluate(population);

    GaResult result;
    std::size_t best = argmax(x);
    result.best = population[best];
    result.best_fitness = x[best];

    auto record = [&](int generation) {
        GenerationRecord r;
        r.generation = generation;
        r.max_fitness = *std::max_element(x.begin(), x.end());
        r.mean_fitness = mean_of(x);
        r.best_fitness = result.best_fitness;
        r.plan = plan_generation(x, config);
        result.history.push_back(r);
        return r.plan;
    };

    GenerationPlan plan = record(0);
    int generation = 0;
    while (true) {
        if (result.best_fitness >= config.t_value) {
            result.reached_threshold = true;
            break;
        }
        if (generation >= config.max_generations) break;

        const std::vector<std::size_t> kept = roulette_indices(x, plan.selection, rng, config.elitism);
        std::vector<Individual> mating_pool;
        for (std::size_t i : roulette_indices(x, config.population_size, rng, false)) {
            mating_pool.push_back(population[i]);
        }
        std::vector<Individual> children = crossover(mating_pool, plan.crossover, rng);
        std::vector<Individual> mutants = mutation(plan.mutation, layers, rng);
        children.insert(children.end(), std::make_move_iterator(mutants.begin()),
                        std::make_move_iterator(mutants.end()));

        std::vector<Individual> next;
        std::vector<double> next_x;
        next.reserve(population.size());
        next_x.reserve(population.size());
        for (std::size_t i : kept) {
            next.push_back(population[i]);
            next_x.push_back(x[i]);  // the surrogate is pure, so survivors keep their score
        }
        const std::vector<double> child_x = evaluate.evaluate(children);
        next.insert(next.end(), children.begin(), children.end());
        next_x.insert(next_x.end(), child_x.begin(), child_x.end());
        population = std::move(next);
        x = std::move(next_x);
        ++generation;

        best = argmax(x);
        if (x[best] > result.best_fitness) {
            result.best_fitness = x[best];
            result.best = population[best];
        }
        plan = record(generation);
    }
    result.generations = generation;
    return result;
}

}  // namespace nanodesign
