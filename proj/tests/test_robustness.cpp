#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "test_helpers.hpp"
#include "urldet/generator.hpp"
#include "urldet/metrics.hpp"
#include "urldet/models/cross_validation.hpp"
#include "urldet/robustness.hpp"

using namespace urldet;

namespace {

struct Fixture {
    FeatureMatrix matrix;        // BR features for the whole corpus
    FeatureMatrix malicious;     // true-malicious rows only
    std::unique_ptr<Classifier> model;

    Fixture() {
        GeneratorSpec spec;
        spec.n_records = 500;
        spec.seed = 77;
        const auto records = generate(spec);
        matrix = assemble(records, FeatureSetId::BR);
        TrainConfig cfg;
        cfg.ann.epochs = 40;
        model = train_model(ModelKind::ANN, matrix, cfg);

        std::vector<int> mal;
        for (std::size_t i = 0; i < matrix.labels.size(); ++i) {
            if (matrix.labels[i] == 1) mal.push_back(static_cast<int>(i));
        }
        malicious = matrix.subset(mal);
    }
};

}  // namespace

TEST_SUITE("robustness") {

TEST_CASE("sweeping a feature outside the model's set keeps every rate at baseline") {
    const Fixture fx;
    const auto result = sweep(*fx.model, fx.malicious, default_sweep("ttl_std"));
    CHECK(result.verdict == SweepVerdict::NotInSet);
    for (const double rate : result.detection_rates) CHECK(rate == result.baseline_rate);
}

TEST_CASE("a constant-prediction model sweeps flat at its baseline") {
    const Fixture fx;
    // all-benign labels would be rejected, so force constants through an ELM
    // with zero output weights
    auto constant = std::make_unique<ElmModel>(FeatureSetId::BR, Eigen::MatrixXd::Zero(4, 8),
                                               Eigen::RowVectorXd::Zero(8), Eigen::VectorXd::Zero(8));
    Scaler s;
    s.mean = Eigen::VectorXd::Zero(4);
    s.std = Eigen::VectorXd::Ones(4);
    constant->set_scaler(s);
    const auto result = sweep(*constant, fx.malicious, default_sweep("ttl_mean"));
    CHECK(result.verdict == SweepVerdict::Robust);
    for (const double rate : result.detection_rates) CHECK(rate == result.baseline_rate);
}

TEST_CASE("unknown feature names are rejected") {
    const Fixture fx;
    CHECK_THROWS_AS(sweep(*fx.model, fx.malicious, SweepSpec{"no_such_feature", {0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(sweep(*fx.model, fx.malicious, SweepSpec{"ttl_mean", {}}), std::invalid_argument);
    CHECK_THROWS_AS(default_grid("no_such_feature"), std::invalid_argument);
}

TEST_CASE("baseline equals the recall of the unmanipulated malicious rows") {
    const Fixture fx;
    const auto result = sweep(*fx.model, fx.malicious, default_sweep("lifetime_years"));
    const auto predictions = fx.model->predict(fx.malicious.values);
    const auto c = confusion(fx.malicious.labels, predictions);
    CHECK(result.baseline_rate == doctest::Approx(recall(c)).epsilon(1e-12));
}

TEST_CASE("sweeps do not mutate their inputs and repeat bit-identically") {
    const Fixture fx;
    const Eigen::MatrixXd before = fx.malicious.values;
    const auto a = sweep(*fx.model, fx.malicious, default_sweep("ttl_mean"));
    CHECK(fx.malicious.values == before);
    const auto b = sweep(*fx.model, fx.malicious, default_sweep("ttl_mean"));
    CHECK(a.detection_rates == b.detection_rates);
    CHECK(a.baseline_rate == b.baseline_rate);

    // benign rows keep their predictions: the model never sees manipulated
    // benign inputs, and the matrix itself is untouched
    const Eigen::VectorXd benign_before = fx.model->predict_proba(fx.matrix.values);
    (void)sweep(*fx.model, fx.malicious, default_sweep("active_years"));
    const Eigen::VectorXd benign_after = fx.model->predict_proba(fx.matrix.values);
    CHECK(benign_before == benign_after);
}

TEST_CASE("triage thresholds") {
    SweepResult r;
    r.feature_name = "ttl_mean";
    r.baseline_rate = 0.8;

    r.detection_rates = {0.8, 0.8, 0.8};
    CHECK(triage(r, 0.9, 0.6) == SweepVerdict::Robust);

    r.detection_rates = {0.8, 0.6, 0.79};  // min = 0.75 * baseline
    CHECK(triage(r, 0.9, 0.6) == SweepVerdict::SemiRobust);

    r.detection_rates = {0.8, 0.0};
    CHECK(triage(r, 0.9, 0.6) == SweepVerdict::NonRobust);

    CHECK_THROWS_AS(triage(r, 0.6, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(triage(r, 1.5, 0.6), std::invalid_argument);
}

TEST_CASE("default grids respect the documented ranges") {
    const auto length = default_grid("length");
    CHECK(length.front() == 4.0);
    CHECK(length.back() == 60.0);
    const auto ttl = default_grid("ttl_std");
    CHECK(ttl.front() == 0.0);
    CHECK(ttl.back() == 120000.0);
    CHECK(ttl.size() == 121);
    const auto entropy = default_grid("entropy");
    CHECK(entropy.size() == 61);

    // rank grids stretch to the 99th percentile of the supplied matrix
    FeatureMatrix m;
    m.names = {"ccr"};
    m.values.resize(100, 1);
    for (int i = 0; i < 100; ++i) m.values(i, 0) = i;
    const auto ccr_grid = default_grid("ccr", &m);
    CHECK(ccr_grid.back() == doctest::Approx(99.0 * 0.99).epsilon(0.02));
}

TEST_CASE("sweep csv format") {
    const Fixture fx;
    const auto result = sweep(*fx.model, fx.malicious, SweepSpec{"ttl_mean", {0.0, 1000.0}});
    const auto path = std::filesystem::temp_directory_path() / "urldet_sweep.csv";
    write_sweep_csv(result, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "value,detection_rate");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2);
    std::filesystem::remove(path);
}

}  // TEST_SUITE
