#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace urldet {

/// Bad configuration (unknown option, missing table, infeasible setting).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Data that cannot be worked with (single-class training set, empty corpus).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File-level failures, including schema-version mismatches.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Label { Benign, Malicious };

inline int label_to_int(Label l) { return l == Label::Malicious ? 1 : 0; }

/// Day-precision calendar date (UTC). Whois records carry no usable
/// time-of-day component.
struct Date {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    /// Days since 1970-01-01, proleptic Gregorian.
    long long to_days() const;
    static Date from_days(long long days);

    /// Parses "YYYY-MM-DD"; throws DataError on malformed input.
    static Date parse(const std::string& iso);
    std::string to_string() const;

    auto operator<=>(const Date&) const = default;
};

/// RFC 2181 TTL upper bound.
inline constexpr std::int64_t kTtlMax = 2147483647;

struct DnsSnapshot {
    std::string ip;
    std::string country;
    std::int64_t ttl = 0;          // seconds, [0, kTtlMax]
    std::int64_t observed_at = 0;  // UTC seconds

    bool operator==(const DnsSnapshot&) const = default;
};

struct WhoisInfo {
    Date created;
    Date updated;
    Date expires;

    bool operator==(const WhoisInfo&) const = default;
};

/// One entry per communicating IP; repeats are meaningful.
struct CommunicationProfile {
    std::vector<std::string> countries;
    std::vector<std::int64_t> asns;

    bool operator==(const CommunicationProfile&) const = default;
};

struct CertificateInfo {
    int valid = 0;             // {0, 1}
    std::int64_t updated = 0;  // UTC seconds
    std::int64_t expires = 0;

    bool operator==(const CertificateInfo&) const = default;
};

/// One labeled observation. Missing Whois/communication/certificate data is
/// represented as absent, not zero; feature extraction defines the defaults.
struct DomainRecord {
    std::string url;
    std::string domain;  // name + TLD, lowercase, e.g. "example.co.il"
    Label label = Label::Benign;
    std::vector<DnsSnapshot> dns;
    std::optional<WhoisInfo> whois;
    std::int64_t pdns_change_count = 0;
    std::optional<CommunicationProfile> communication;
    std::optional<CertificateInfo> certificate;

    bool operator==(const DomainRecord&) const = default;
};

/// Pure invariant check. Violations are data, not faults: each entry names
/// the offending field and the broken rule. Empty result means well-formed.
std::vector<std::string> validate_record(const DomainRecord& r);

enum class FeatureSetId { B, BR, TCP, BRTCP, BTCP };

std::size_t feature_count(FeatureSetId id);  // 9 / 4 / 4 / 8 / 13
const std::vector<std::string>& feature_names(FeatureSetId id);
std::string to_string(FeatureSetId id);
FeatureSetId feature_set_from_string(const std::string& name);

/// True when the set contains any of the novel features and therefore needs
/// ratio tables for extraction.
bool needs_ratio_tables(FeatureSetId id);

struct FeatureVector {
    FeatureSetId set_id = FeatureSetId::B;
    std::vector<double> values;
    std::vector<std::string> names;
};

}  // namespace urldet
