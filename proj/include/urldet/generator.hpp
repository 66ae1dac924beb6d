#pragma once

#include <json.hpp>

#include "urldet/rng.hpp"
#include "urldet/types.hpp"

namespace urldet {

struct FeatureStats {
    double mean = 0.0;
    double std = 0.0;
};

/// Class-conditional moments for every extracted feature.
struct ClassStats {
    FeatureStats length, consecutive, entropy, ip_count, geo_count;
    FeatureStats ttl_mean, ttl_std, lifetime_years, active_years;
    FeatureStats ccr, car, pdns_changes, ssl_remaining;
};

ClassStats default_benign_stats();
ClassStats default_malicious_stats();

struct GeneratorSpec {
    int n_records = 6700;
    double malicious_fraction = 0.25;
    std::uint64_t seed = 1;
    int snapshots = 30;  // DNS snapshots per record (realization may vary a few)
    ClassStats benign = default_benign_stats();
    ClassStats malicious = default_malicious_stats();

    nlohmann::json to_json() const;
    /// Missing fields fall back to the defaults above.
    static GeneratorSpec from_json(const nlohmann::json& j);
};

/// One record's drawn feature targets. Gaussian draws are clamped to each
/// feature's legal range and integer features are rounded:
///   length        round, [4, 60]
///   consecutive   round, [1, max(1, length - 4)]
///   entropy       [log2(length), 0.5 * length]
///   ip_count      round, [1, min(10, snapshots)]
///   geo_count     round, [1, ip_count]
///   ttl_mean      [0, kTtlMax]
///   ttl_std       [0, ttl_mean * sqrt(snapshots - 1)]; 0 when ttl_mean is 0
///   lifetime      [0, 80] years; active the same
///   ccr, car      [0, inf)
///   pdns          round, [0, 1e7]
///   ssl           [0, 1.26e9] seconds
/// The acceptance oracle mirrors exactly these rules.
struct TargetVector {
    int length = 0;
    int consecutive = 0;
    double entropy = 0.0;
    int ip_count = 0;
    int geo_count = 0;
    double ttl_mean = 0.0;
    double ttl_std = 0.0;
    double lifetime_years = 0.0;
    double active_years = 0.0;
    double ccr = 0.0;
    double car = 0.0;
    std::int64_t pdns_changes = 0;
    double ssl_remaining = 0.0;
};

/// Draws one clamped target vector; consumes exactly thirteen normal draws.
TargetVector draw_targets(const ClassStats& stats, int snapshots, Rng& rng);

/// Synthesizes a labeled corpus whose extracted features realize per-record
/// targets drawn from the class-conditional distributions. Communication
/// lists are planned jointly over the whole batch so that ranks computed
/// against tables built from the generated corpus land near the drawn
/// targets.
std::vector<DomainRecord> generate(const GeneratorSpec& spec);

}  // namespace urldet
