#include <doctest.h>

#include "test_helpers.hpp"
#include "urldet/types.hpp"

using namespace urldet;

TEST_SUITE("core_model") {

TEST_CASE("well-formed record has no violations") {
    CHECK(validate_record(testing::sample_record()).empty());
}

TEST_CASE("created after expires is reported") {
    auto r = testing::sample_record();
    r.whois = WhoisInfo{Date{2021, 1, 1}, Date{2021, 1, 1}, Date{2020, 1, 1}};
    const auto v = validate_record(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "whois: created after expires");
}

TEST_CASE("ttl boundary: 2^31 is out of range, 2^31 - 1 is fine") {
    auto r = testing::sample_record();
    r.dns[0].ttl = kTtlMax + 1;
    const auto v = validate_record(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "dns[0]: ttl out of range");

    r.dns[0].ttl = kTtlMax;
    CHECK(validate_record(r).empty());
}

TEST_CASE("domain rules") {
    auto r = testing::sample_record();
    r.domain = "Ab.com";
    CHECK(validate_record(r) == std::vector<std::string>{"domain: not lowercase"});
    r.domain = "abcd";
    CHECK(validate_record(r) == std::vector<std::string>{"domain: missing dot"});
    r.domain = "a.b";
    CHECK(validate_record(r) == std::vector<std::string>{"domain: shorter than four characters"});
    r.domain = "";
    CHECK(validate_record(r) == std::vector<std::string>{"domain: empty"});
}

TEST_CASE("invalid certificate window only matters when valid") {
    auto r = testing::sample_record();
    r.certificate = CertificateInfo{1, 100, 50};
    CHECK(validate_record(r) == std::vector<std::string>{"certificate: expires before updated"});
    r.certificate->valid = 0;
    CHECK(validate_record(r).empty());
}

TEST_CASE("validate_record is pure") {
    const auto r = testing::sample_record();
    CHECK(validate_record(r) == validate_record(r));
}

TEST_CASE("feature set cardinalities") {
    CHECK(feature_count(FeatureSetId::B) == 9);
    CHECK(feature_count(FeatureSetId::BR) == 4);
    CHECK(feature_count(FeatureSetId::TCP) == 4);
    CHECK(feature_count(FeatureSetId::BRTCP) == 8);
    CHECK(feature_count(FeatureSetId::BTCP) == 13);
    for (const auto id : {FeatureSetId::B, FeatureSetId::BR, FeatureSetId::TCP, FeatureSetId::BRTCP,
                          FeatureSetId::BTCP}) {
        CHECK(feature_names(id).size() == feature_count(id));
        CHECK(feature_set_from_string(to_string(id)) == id);
    }
}

TEST_CASE("date round trip and arithmetic") {
    const Date d{2015, 5, 14};
    CHECK(Date::from_days(d.to_days()) == d);
    CHECK(Date{2020, 5, 14}.to_days() - d.to_days() == 1827);
    CHECK(Date{2018, 6, 4}.to_days() - d.to_days() == 1117);
    CHECK(Date::parse("2015-05-14") == d);
    CHECK(d.to_string() == "2015-05-14");
    CHECK_THROWS_AS(Date::parse("not-a-date"), DataError);
}

}  // TEST_SUITE
