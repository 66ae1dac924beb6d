#pragma once

#include <span>
#include <string>

#include "urldet/ratio_table.hpp"
#include "urldet/types.hpp"

namespace urldet {

inline constexpr double kDefaultRankEpsilon = 1e-6;

/// Communication-rank features plus the passive-DNS and certificate ones.
/// Column order matches feature_names(FeatureSetId::TCP) except that the
/// struct keeps the rank pair first for readability.
struct NovelFeatureRow {
    double ccr = 0.0;
    double car = 0.0;
    std::int64_t pdns_changes = 0;
    double ssl_remaining = 0.0;  // seconds
};

/// Sum over items of log_0.5(ratio + epsilon) / norm, where (ratio, norm)
/// come from the table lookup including the unranked fallback. Empty list
/// sums to 0. Throws std::invalid_argument for epsilon <= 0.
double communication_rank(std::span<const std::string> items, const RatioTable& table,
                          double epsilon = kDefaultRankEpsilon);

/// Rank of the record's communication country list against a Countries
/// table. Absent profile -> 0. Throws std::invalid_argument on a table of
/// the wrong kind.
double ccr(const DomainRecord& r, const RatioTable& countries_table, double epsilon = kDefaultRankEpsilon);

/// Rank of the record's communication ASN list against an Asns table.
double car(const DomainRecord& r, const RatioTable& asns_table, double epsilon = kDefaultRankEpsilon);

/// Pass-through of the record's passive-DNS change count.
std::int64_t pdns_changes(const DomainRecord& r);

/// valid * max(0, expires - updated) in seconds; absent certificate -> 0.
double ssl_remaining(const std::optional<CertificateInfo>& c);

NovelFeatureRow extract_novel(const DomainRecord& r, const RatioTable& countries_table,
                              const RatioTable& asns_table, double epsilon = kDefaultRankEpsilon);

}  // namespace urldet
