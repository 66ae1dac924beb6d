#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "test_helpers.hpp"
#include "urldet/ratio_table.hpp"

using namespace urldet;

namespace {

DomainRecord record_with_countries(Label label, std::vector<std::string> countries) {
    DomainRecord r = testing::sample_record();
    r.label = label;
    r.communication = CommunicationProfile{std::move(countries), {}};
    return r;
}

std::vector<DomainRecord> mixed_corpus(Rng& rng, int n) {
    const std::vector<std::string> vocab = {"aa", "bb", "cc", "dd", "ee"};
    std::vector<DomainRecord> records;
    for (int i = 0; i < n; ++i) {
        std::vector<std::string> countries;
        const auto k = rng.uniform_int(0, 6);
        for (int j = 0; j < k; ++j) countries.push_back(vocab[static_cast<std::size_t>(rng.uniform_int(0, 4))]);
        records.push_back(record_with_countries(rng.uniform() < 0.3 ? Label::Malicious : Label::Benign,
                                                std::move(countries)));
    }
    return records;
}

}  // namespace

TEST_SUITE("ratio_tables") {

TEST_CASE("benign ratio over seven benign and three malicious occurrences") {
    std::vector<DomainRecord> records;
    for (int i = 0; i < 7; ++i) records.push_back(record_with_countries(Label::Benign, {"il"}));
    for (int i = 0; i < 3; ++i) records.push_back(record_with_countries(Label::Malicious, {"il"}));
    const auto table = build_table(records, RatioKind::Countries, 5);
    REQUIRE(table.entries.count("il") == 1);
    CHECK(table.entries.at("il").benign_ratio == doctest::Approx(0.7));
    CHECK(table.entries.at("il").total() == 10);
}

TEST_CASE("items below the threshold are excluded but queryable") {
    std::vector<DomainRecord> records;
    for (int i = 0; i < 4; ++i) records.push_back(record_with_countries(Label::Benign, {"rare"}));
    for (int i = 0; i < 6; ++i) records.push_back(record_with_countries(Label::Benign, {"common"}));
    const auto table = build_table(records, RatioKind::Countries, 5);
    CHECK(table.entries.count("rare") == 0);
    CHECK(table.entries.count("common") == 1);

    const auto miss = table.lookup("rare");
    CHECK(miss.ranked == false);
    CHECK(miss.ratio == doctest::Approx(0.75));
    CHECK(miss.norm == doctest::Approx(1.0));
}

TEST_CASE("norms divide by the maximum total") {
    std::vector<DomainRecord> records;
    for (int i = 0; i < 10; ++i) records.push_back(record_with_countries(Label::Benign, {"x"}));
    for (int i = 0; i < 40; ++i) records.push_back(record_with_countries(Label::Benign, {"y"}));
    const auto table = build_table(records, RatioKind::Countries, 5);
    CHECK(table.max_occurrences == 40);
    CHECK(table.entries.at("x").norm == doctest::Approx(0.25));
    CHECK(table.entries.at("y").norm == doctest::Approx(1.0));
}

TEST_CASE("occurrences count per list entry, not per record") {
    const std::vector<DomainRecord> records = {record_with_countries(Label::Benign, {"us", "us", "us"}),
                                               record_with_countries(Label::Malicious, {"us"})};
    const auto table = build_table(records, RatioKind::Countries, 1);
    CHECK(table.entries.at("us").benign_count == 3);
    CHECK(table.entries.at("us").malicious_count == 1);
}

TEST_CASE("no communication data at all is an error") {
    std::vector<DomainRecord> records = {testing::sample_record()};
    records[0].communication.reset();
    CHECK_THROWS_AS(build_table(records, RatioKind::Countries, 1), DataError);
}

TEST_CASE("benign and malicious fractions sum to one") {
    Rng rng(17);
    const auto records = mixed_corpus(rng, 200);
    const auto table = build_table(records, RatioKind::Countries, 1);
    REQUIRE(!table.entries.empty());
    for (const auto& [item, e] : table.entries) {
        const double malicious_ratio = static_cast<double>(e.malicious_count) / static_cast<double>(e.total());
        CHECK(e.benign_ratio + malicious_ratio == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(e.benign_ratio >= 0.0);
        CHECK(e.benign_ratio <= 1.0);
        CHECK(e.norm > 0.0);
        CHECK(e.norm <= 1.0);
        CHECK(e.total() >= table.threshold);
    }
}

TEST_CASE("label swap maps every ratio to its complement") {
    Rng rng(23);
    auto records = mixed_corpus(rng, 300);
    const auto table = build_table(records, RatioKind::Countries, 1);
    for (auto& r : records) r.label = r.label == Label::Benign ? Label::Malicious : Label::Benign;
    const auto swapped = build_table(records, RatioKind::Countries, 1);
    REQUIRE(table.entries.size() == swapped.entries.size());
    for (const auto& [item, e] : table.entries) {
        CHECK(swapped.entries.at(item).benign_ratio == doctest::Approx(1.0 - e.benign_ratio).epsilon(1e-12));
    }
}

TEST_CASE("total occurrences never exceed the communication list mass") {
    Rng rng(29);
    const auto records = mixed_corpus(rng, 150);
    std::int64_t list_mass = 0;
    for (const auto& r : records) list_mass += static_cast<std::int64_t>(r.communication->countries.size());

    std::int64_t thresholded = 0;
    for (const auto& [item, e] : build_table(records, RatioKind::Countries, 3).entries) thresholded += e.total();
    CHECK(thresholded <= list_mass);

    std::int64_t full = 0;
    for (const auto& [item, e] : build_table(records, RatioKind::Countries, 1).entries) full += e.total();
    CHECK(full == list_mass);
}

TEST_CASE("rebuilds serialize byte-identically") {
    Rng rng(31);
    const auto records = mixed_corpus(rng, 100);
    const auto a = serialize_table(build_table(records, RatioKind::Countries, 2));
    const auto b = serialize_table(build_table(records, RatioKind::Countries, 2));
    CHECK(a == b);
}

TEST_CASE("save/load round trip is exact") {
    Rng rng(37);
    const auto records = mixed_corpus(rng, 120);
    const auto table = build_table(records, RatioKind::Countries, 2);

    const auto path = std::filesystem::temp_directory_path() / "urldet_table_roundtrip.tsv";
    save_table(table, path);
    const auto loaded = load_table(path);

    CHECK(loaded.kind == table.kind);
    CHECK(loaded.threshold == table.threshold);
    CHECK(loaded.max_occurrences == table.max_occurrences);
    REQUIRE(loaded.entries.size() == table.entries.size());
    for (const auto& [item, e] : table.entries) {
        const auto& l = loaded.entries.at(item);
        CHECK(l.benign_count == e.benign_count);
        CHECK(l.malicious_count == e.malicious_count);
        CHECK(l.benign_ratio == doctest::Approx(e.benign_ratio).epsilon(1e-13));
        CHECK(l.norm == doctest::Approx(e.norm).epsilon(1e-13));
    }
    CHECK(serialize_table(loaded) == serialize_table(table));
    std::filesystem::remove(path);
}

TEST_CASE("asn tables key by the decimal form") {
    DomainRecord r = testing::sample_record();
    r.communication = CommunicationProfile{{}, {13335, 13335, 15169}};
    const auto table = build_table(std::vector<DomainRecord>{r}, RatioKind::Asns, 1);
    CHECK(table.entries.count("13335") == 1);
    CHECK(table.entries.at("13335").total() == 2);
    CHECK(table.entries.count("15169") == 1);
}

TEST_CASE("truncated or alien files are rejected") {
    const auto path = std::filesystem::temp_directory_path() / "urldet_table_bad.tsv";
    {
        std::ofstream out(path);
        out << "not a table\n";
    }
    CHECK_THROWS_AS(load_table(path), IoError);
    {
        std::ofstream out(path);
        out << "urldet.ratio-table\t99\tcountries\t10\t40\n";
    }
    CHECK_THROWS_AS(load_table(path), IoError);  // wrong schema version
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_table(path), IoError);  // missing file
}

}  // TEST_SUITE
