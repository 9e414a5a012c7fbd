#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "nanodesign/network.hpp"
#include "nanodesign/spectral.hpp"

namespace nanodesign {

/// Thicknesses (nm) the GA may assign to a layer.
inline constexpr std::array<double, 4> kGeneAlphabet{35.0, 45.0, 55.0, 65.0};

/// Floor applied to the SSE before inverting it into a fitness.
inline constexpr double kFitnessSseFloor = 1e-9;

using Individual = std::vector<double>;
using Rng = std::mt19937_64;

/// How N_selection is derived from the fitness vector.
struct SelectionPolicy {
    enum class Mode {
        Adaptive,  // min(cap, round(P * mean(X) / T))
        Literal,   // min(cap, round(max(X) / T * mean(X)))
        Fixed,     // constant count
    };
    Mode mode = Mode::Adaptive;
    int fixed_count = 0;

    /// "adaptive", "literal" or "fixed:<count>".
    static SelectionPolicy parse(const std::string& text);
    std::string to_string() const;
};

struct GaConfig {
    int population_size = 100;
    double t_value = 1e6;  // fitness threshold: drives adaptivity and stops the run
    int max_generations = 200;
    int selection_cap = 90;
    double crossover_fraction = 0.7;
    std::uint64_t seed = 0;
    bool elitism = true;
    SelectionPolicy selection;

    void validate() const;
};

struct GenerationPlan {
    int selection = 0;
    int crossover = 0;
    int mutation = 0;

    friend bool operator==(const GenerationPlan&, const GenerationPlan&) = default;
};

/// 1000 n / max(SSE, floor).
double fitness_from_sse(double sse, std::size_t n_points);

/// Scores individuals (genes in nm) against a target spectrum through the
/// surrogate. Comparison happens in the model's normalised output units.
class FitnessEvaluator {
public:
    FitnessEvaluator(const MlpModel& model, const Spectrum& target);

    double operator()(const Individual& genes) const;
    std::vector<double> evaluate(const std::vector<Individual>& population) const;
    const std::vector<double>& normalized_target() const noexcept { return target_; }

private:
    const MlpModel& model_;
    std::vector<double> target_;
};

double fitness(const Individual& genes, const Spectrum& target, const MlpModel& model);

GenerationPlan plan_generation(std::span<const double> fitness_values, const GaConfig& config);

/// `count` fitness-proportional draws with replacement; with elitism the
/// first slot is the current best individual.
std::vector<Individual> roulette_select(const std::vector<Individual>& population,
                                        std::span<const double> fitness_values, int count, Rng& rng,
                                        bool elitism);

Individual single_point_crossover(const Individual& first, const Individual& second,
                                  std::size_t cut);

/// Each child takes two distinct parents uniformly and a uniform cut in [1, L-1].
std::vector<Individual> crossover(const std::vector<Individual>& parents, int count, Rng& rng);

/// Fresh individuals drawn uniformly from the gene alphabet.
std::vector<Individual> mutation(int count, std::size_t num_layers, Rng& rng);

std::vector<Individual> random_population(int size, std::size_t num_layers, Rng& rng);

struct GenerationRecord {
    int generation = 0;
    double max_fitness = 0.0;   // best in this generation
    double mean_fitness = 0.0;
    double best_fitness = 0.0;  // best seen so far
    GenerationPlan plan;        // plan that produced the next generation
};

struct GaResult {
    Individual best;
    double best_fitness = 0.0;
    bool reached_threshold = false;
    int generations = 0;  // generations bred after the initial population
    std::vector<GenerationRecord> history;
};

/// Selection, crossover and mutation until the best fitness reaches
/// `t_value` or `max_generations` generations have been bred. An explicit
/// initial population makes different selection policies comparable.
GaResult run_ga(const Spectrum& target, const MlpModel& model, const GaConfig& config,
                std::optional<std::vector<Individual>> initial_population = std::nullopt);

}  // namespace nanodesign
