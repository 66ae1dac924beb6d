#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "test_helpers.hpp"
#include "urldet/data_io.hpp"
#include "urldet/feature_assembly.hpp"
#include "urldet/generator.hpp"

using namespace urldet;

namespace {

struct Fixture {
    std::vector<DomainRecord> records;
    RatioTables tables;

    Fixture() {
        GeneratorSpec spec;
        spec.n_records = 400;
        spec.seed = 321;
        records = generate(spec);
        tables.countries = build_table(records, RatioKind::Countries, 10);
        tables.asns = build_table(records, RatioKind::Asns, 10);
    }
};

}  // namespace

TEST_SUITE("feature_assembly") {

TEST_CASE("column orders and set algebra") {
    const auto& b = feature_names(FeatureSetId::B);
    const auto& br = feature_names(FeatureSetId::BR);
    const auto& tcp = feature_names(FeatureSetId::TCP);
    const auto& brtcp = feature_names(FeatureSetId::BRTCP);
    const auto& btcp = feature_names(FeatureSetId::BTCP);

    CHECK(b == std::vector<std::string>{"length", "consecutive", "entropy", "ip_count", "geo_count", "ttl_mean",
                                        "ttl_std", "lifetime_years", "active_years"});
    CHECK(br == std::vector<std::string>{"consecutive", "ttl_mean", "lifetime_years", "active_years"});
    CHECK(tcp == std::vector<std::string>{"ssl_remaining", "ccr", "car", "pdns_changes"});

    // BR is a subsequence of B
    std::size_t pos = 0;
    for (const auto& name : b) {
        if (pos < br.size() && br[pos] == name) ++pos;
    }
    CHECK(pos == br.size());

    // TCP and BR are disjoint; the unions concatenate
    for (const auto& name : tcp) CHECK(std::find(br.begin(), br.end(), name) == br.end());
    CHECK(brtcp.size() == br.size() + tcp.size());
    CHECK(btcp.size() == b.size() + tcp.size());
    CHECK(std::equal(br.begin(), br.end(), brtcp.begin()));
    CHECK(std::equal(tcp.begin(), tcp.end(), brtcp.begin() + static_cast<long>(br.size())));
}

TEST_CASE("BR yields a four-column matrix and empty input stays valid") {
    const Fixture fx;
    const auto m = assemble(fx.records, FeatureSetId::BR);
    CHECK(m.cols() == 4);
    CHECK(m.rows() == 400);

    const auto empty = assemble(std::vector<DomainRecord>{}, FeatureSetId::B);
    CHECK(empty.rows() == 0);
    CHECK(empty.cols() == 9);
}

TEST_CASE("TCP sets demand tables") {
    const Fixture fx;
    CHECK_THROWS_AS(assemble(fx.records, FeatureSetId::TCP), ConfigError);
    CHECK_THROWS_AS(assemble(fx.records, FeatureSetId::BRTCP), ConfigError);
    CHECK_NOTHROW(assemble(fx.records, FeatureSetId::TCP, &fx.tables));
}

TEST_CASE("unions equal the column-wise concatenation of their parts") {
    const Fixture fx;
    const auto br = assemble(fx.records, FeatureSetId::BR);
    const auto tcp = assemble(fx.records, FeatureSetId::TCP, &fx.tables);
    const auto brtcp = assemble(fx.records, FeatureSetId::BRTCP, &fx.tables);
    const auto b = assemble(fx.records, FeatureSetId::B);
    const auto btcp = assemble(fx.records, FeatureSetId::BTCP, &fx.tables);

    CHECK(brtcp.values.leftCols(4) == br.values);
    CHECK(brtcp.values.rightCols(4) == tcp.values);
    CHECK(btcp.values.leftCols(9) == b.values);
    CHECK(btcp.values.rightCols(4) == tcp.values);
}

TEST_CASE("assembly preserves row order and labels") {
    const Fixture fx;
    const auto m = assemble(fx.records, FeatureSetId::B);
    for (std::size_t i = 0; i < fx.records.size(); ++i) {
        CHECK(m.labels[i] == label_to_int(fx.records[i].label));
        CHECK(m.values(static_cast<Eigen::Index>(i), 0) == static_cast<double>(fx.records[i].domain.size()));
    }
    const auto row = m.row(0);
    CHECK(row.values.size() == 9);
    CHECK(row.names == m.names);
    CHECK(row.set_id == FeatureSetId::B);
}

TEST_CASE("scaler normalizes training columns") {
    const Fixture fx;
    auto m = assemble(fx.records, FeatureSetId::B);
    const auto scaler = fit_scaler(m.values);
    const auto scaled = apply_scaler(m, scaler);
    REQUIRE(scaled.scaler.has_value());
    const Eigen::VectorXd mean = scaled.values.colwise().mean();
    for (Eigen::Index j = 0; j < mean.size(); ++j) {
        CHECK(std::abs(mean[j]) < 1e-9);
        const double var = scaled.values.col(j).array().square().mean() - mean[j] * mean[j];
        CHECK(std::sqrt(var) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("constant columns scale to zero") {
    FeatureMatrix m;
    m.set_id = FeatureSetId::BR;
    m.names = feature_names(FeatureSetId::BR);
    m.values = Eigen::MatrixXd::Constant(5, 4, 3.25);
    m.labels = {0, 0, 1, 1, 0};
    const auto scaled = apply_scaler(m, fit_scaler(m.values));
    CHECK(scaled.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("test rows scale with the training scaler") {
    Scaler s;
    s.mean = Eigen::VectorXd::Constant(2, 10.0);
    s.std = Eigen::VectorXd::Constant(2, 4.0);
    Eigen::MatrixXd rows(1, 2);
    rows << 18.0, 6.0;
    const Eigen::MatrixXd out = s.transform(rows);
    CHECK(out(0, 0) == doctest::Approx(2.0));
    CHECK(out(0, 1) == doctest::Approx(-1.0));
}

TEST_CASE("csv export carries a header and the label column") {
    const Fixture fx;
    const auto m = assemble(std::vector<DomainRecord>(fx.records.begin(), fx.records.begin() + 3), FeatureSetId::BR);
    const auto path = std::filesystem::temp_directory_path() / "urldet_matrix.csv";
    write_matrix_csv(m, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "consecutive,ttl_mean,lifetime_years,active_years,label");
    int lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 3);
    std::filesystem::remove(path);
}

}  // TEST_SUITE
