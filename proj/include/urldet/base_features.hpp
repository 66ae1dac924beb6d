#pragma once

#include <array>
#include <span>
#include <string_view>

#include "urldet/types.hpp"

namespace urldet {

/// The nine lexical/DNS/Whois features of a record. Column order matches
/// feature_names(FeatureSetId::B).
struct BaseFeatureRow {
    int length = 0;
    int consecutive = 0;
    double entropy = 0.0;
    int ip_count = 0;
    int geo_count = 0;
    double ttl_mean = 0.0;
    double ttl_std = 0.0;
    double lifetime_years = 0.0;
    double active_years = 0.0;

    std::array<double, 9> values() const {
        return {double(length), double(consecutive), entropy,      double(ip_count), double(geo_count),
                ttl_mean,       ttl_std,             lifetime_years, active_years};
    }
};

/// Strips scheme, credentials, port, path/query and a leading "www." label,
/// then lowercases. "http://www.Example.co.il/x?q=1" -> "example.co.il".
std::string normalize_domain(std::string_view url_or_domain);

/// Character count of "name.tld", dots included. Throws std::invalid_argument
/// on an empty domain.
int domain_length(std::string_view domain);

/// Longest run of one repeated character over the full domain string (dots
/// take part in the scan). Throws std::invalid_argument on empty input.
int max_consecutive(std::string_view domain);

/// Position-summed character surprisal: -sum over positions of
/// p(c)*log_b p(c) with p(c) = count(c)/length. Base 2 is the canonical
/// setting; 10 and e are accepted for comparison runs.
double domain_entropy(std::string_view domain, double log_base = 2.0);

/// Distinct IP strings over the snapshots. Empty list -> 0.
int ip_count(std::span<const DnsSnapshot> dns);

/// Distinct country strings over the snapshots. Empty list -> 0.
int geo_count(std::span<const DnsSnapshot> dns);

/// Arithmetic mean of TTLs; 0 for an empty list.
double ttl_mean(std::span<const DnsSnapshot> dns);

/// Population standard deviation of TTLs; 0 for lists of size <= 1.
double ttl_std(std::span<const DnsSnapshot> dns);

/// (expires - created) in days / 365.25.
double lifetime_years(const WhoisInfo& w);

/// (updated - created) in days / 365.25.
double active_years(const WhoisInfo& w);

/// All nine features. Absent whois and empty DNS produce the documented
/// zero defaults.
BaseFeatureRow extract_base(const DomainRecord& r, double entropy_log_base = 2.0);

}  // namespace urldet
