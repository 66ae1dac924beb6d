#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>

#include "urldet/types.hpp"

namespace urldet {

enum class RatioKind { Countries, Asns };

std::string to_string(RatioKind kind);
RatioKind ratio_kind_from_string(const std::string& name);

struct RatioEntry {
    std::int64_t benign_count = 0;
    std::int64_t malicious_count = 0;
    double benign_ratio = 0.0;  // benign / total
    double norm = 0.0;          // total / max_occurrences

    std::int64_t total() const { return benign_count + malicious_count; }
};

/// Fallback values for unseen or below-threshold items.
inline constexpr double kUnrankedRatio = 0.75;
inline constexpr double kUnrankedNorm = 1.0;

inline constexpr std::int64_t kDefaultRatioThreshold = 10;

/// Per-item benign-fraction statistics over communication countries or ASNs.
/// Immutable once built; entries are keyed and iterated in sorted item order
/// so rebuilds serialize byte-identically.
struct RatioTable {
    RatioKind kind = RatioKind::Countries;
    std::int64_t threshold = kDefaultRatioThreshold;
    std::int64_t max_occurrences = 0;  // max total over retained entries
    std::map<std::string, RatioEntry> entries;

    struct Lookup {
        double ratio = kUnrankedRatio;
        double norm = kUnrankedNorm;
        bool ranked = false;
    };

    /// Retained items report their stored values; everything else gets the
    /// unranked fallback.
    Lookup lookup(const std::string& item) const;
};

/// Aggregates one increment per occurrence in each record's communication
/// list (an item appearing twice in one record counts twice). Items whose
/// total falls below `threshold` are dropped from the table. Throws DataError
/// when no record carries a communication profile.
RatioTable build_table(std::span<const DomainRecord> records, RatioKind kind,
                       std::int64_t threshold = kDefaultRatioThreshold);

/// Versioned line-oriented text format; round-trips bit-exactly.
void save_table(const RatioTable& table, const std::filesystem::path& path);
RatioTable load_table(const std::filesystem::path& path);

/// In-memory form of the on-disk format, used by save_table and by the
/// determinism checks.
std::string serialize_table(const RatioTable& table);

}  // namespace urldet
