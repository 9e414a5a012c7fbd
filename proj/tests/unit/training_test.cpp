#include <doctest.h>

#include <cmath>

#include "nanodesign/errors.hpp"
#include "nanodesign/training.hpp"
#include "toy_models.hpp"

using namespace nanodesign;
using nanodesign::testing::toy_model;

namespace {

Dataset toy_dataset(std::size_t count, std::size_t layers, std::uint64_t seed) {
    GenerateOptions o;
    o.count = count;
    o.num_layers = layers;
    o.seed = seed;
    o.grid = SpectralGrid(400.0, 800.0, 8);
    return generate_dataset(o, MaterialLibrary::defaults());
}

MlpModel fitted_toy(const Dataset& train, int width = 16, std::uint64_t seed = 1) {
    MlpModel m = toy_model(ArchitectureKind::TwoChannel, static_cast<int>(train.manifest.num_layers),
                           static_cast<int>(train.manifest.grid.size()), 2, width, seed);
    m.normalizer = Normalizer::fit(train);
    return m;
}

}  // namespace

TEST_SUITE("surrogate") {

TEST_CASE("a single record is memorised") {
    const Dataset one = toy_dataset(1, 2, 3);
    TrainConfig c;
    c.epochs = 3000;
    c.learning_rate = 3e-3;
    const MlpModel m = train(fitted_toy(one), one, one, c);
    REQUIRE(m.history.size() == 3000);
    CHECK(m.history.back().train_loss < 1e-6);
    CHECK(evaluate_mean_error(m, one) < 1e-6);
}

TEST_CASE("training records history, lowers the error and is reproducible") {
    const Dataset ds = toy_dataset(120, 2, 4);
    const DatasetSplit split = split_dataset(ds, {0.8, 0.1, 0.1}, 5);
    TrainConfig c;
    c.epochs = 60;
    c.batch_size = 32;
    c.seed = 9;
    int callbacks = 0;
    const MlpModel a = train(fitted_toy(split.train), split.train, split.validation, c,
                             [&](const EpochRecord& r) { CHECK(r.epoch == ++callbacks); });
    CHECK(callbacks == 60);
    REQUIRE(a.history.size() == 60);
    CHECK(a.history.back().validation_error < a.history.front().validation_error);
    CHECK(a.config.epochs == 60);

    c.workers = 3;
    const MlpModel b = train(fitted_toy(split.train), split.train, split.validation, c);
    CHECK(a.params.flatten() == b.params.flatten());
    CHECK(a.history.back().train_loss == b.history.back().train_loss);

    c.seed = 10;
    const MlpModel other = train(fitted_toy(split.train), split.train, split.validation, c);
    CHECK(other.params.flatten() != a.params.flatten());
}

TEST_CASE("training preconditions and divergence") {
    const Dataset ds = toy_dataset(10, 2, 4);
    MlpModel unfitted = toy_model(ArchitectureKind::TwoChannel, 2, 8, 1, 4, 1);
    unfitted.normalizer = Normalizer();
    TrainConfig c;
    c.epochs = 2;
    CHECK_THROWS_AS(train(unfitted, ds, ds, c), ArgumentError);

    MlpModel wrong = toy_model(ArchitectureKind::TwoChannel, 3, 8, 1, 4, 1);
    CHECK_THROWS_AS(train(wrong, ds, ds, c), ArgumentError);

    Dataset bad = ds;
    bad.records[3].spectrum[2] = std::nan("");
    MlpModel m = toy_model(ArchitectureKind::TwoChannel, 2, 8, 1, 4, 1);
    try {
        (void)train(m, bad, ds, c);
        FAIL("expected divergence");
    } catch (const TrainingError& e) {
        CHECK(e.epoch() == 1);
    }
}

TEST_CASE("mean error is the average per-record SSE in normalised units") {
    Dataset ds = toy_dataset(2, 2, 6);
    MlpModel m = fitted_toy(ds, 4, 2);
    double expected = 0.0;
    for (const auto& r : ds.records) {
        const auto y = forward(m, m.normalizer.normalize_stack(r.thicknesses));
        expected += validation_error(std::span(y.data(), 8), m.normalizer.normalize_spectrum(r.spectrum));
    }
    CHECK(evaluate_mean_error(m, ds) == doctest::Approx(expected / 2.0).epsilon(1e-14));

    // a network with zero weights whose output bias is the (shared) target is perfect
    for (auto& r : ds.records) r.spectrum = ds.records[0].spectrum;
    MlpModel perfect = fitted_toy(ds, 4, 2);
    perfect.params.assign(std::vector<double>(perfect.params.count(), 0.0));
    const auto target = perfect.normalizer.normalize_spectrum(ds.records[0].spectrum);
    perfect.params.channels[0].back().bias = Eigen::Map<const Eigen::VectorXd>(target.data(), 4);
    perfect.params.channels[1].back().bias = Eigen::Map<const Eigen::VectorXd>(target.data() + 4, 4);
    CHECK(evaluate_mean_error(perfect, ds) == 0.0);

    CHECK_THROWS_AS(evaluate_mean_error(toy_model(ArchitectureKind::TwoChannel, 3, 8, 1, 4, 1), ds), ArgumentError);
    MlpModel unfitted = fitted_toy(ds);
    unfitted.normalizer = Normalizer();
    CHECK_THROWS_AS(evaluate_mean_error(unfitted, ds), ArgumentError);
}

TEST_CASE("predicted spectra come back in physical units on the model grid") {
    const Dataset ds = toy_dataset(4, 2, 7);
    MlpModel m = fitted_toy(ds);
    m.provenance.grid = ds.manifest.grid;
    const Spectrum s = predict_spectrum(m, ds.records[0].thicknesses);
    CHECK(s.grid == ds.manifest.grid);
    const auto y = forward(m, m.normalizer.normalize_stack(ds.records[0].thicknesses));
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(s.values[i] == doctest::Approx(y(static_cast<Eigen::Index>(i)) * m.normalizer.output_scale()));
    }
}

}  // TEST_SUITE
