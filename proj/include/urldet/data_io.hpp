#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "urldet/types.hpp"

namespace urldet {

nlohmann::json record_to_json(const DomainRecord& r);
DomainRecord record_from_json(const nlohmann::json& j);

struct LoadError {
    std::size_t line = 0;
    std::string message;
};

struct LoadResult {
    std::vector<DomainRecord> records;
    std::vector<LoadError> errors;  // malformed or invariant-violating lines
};

/// Line-delimited records with a schema header on line 1. Lines that fail
/// to parse or violate record invariants are reported, not silently dropped.
/// Throws IoError on an unreadable file or a bad header.
LoadResult load_records(const std::filesystem::path& path);

void save_records(std::span<const DomainRecord> records, const std::filesystem::path& path);

/// Pool assignment: ratio_pool builds ratio tables only, model_pool feeds
/// feature extraction; train/test is the fixed 75/25 sub-split of the model
/// pool. All index lists refer to the input record order.
struct DatasetSplit {
    std::vector<int> ratio_pool;
    std::vector<int> model_pool;
    std::vector<int> train;  // subset of model_pool
    std::vector<int> test;   // subset of model_pool
};

/// Stratified by label within one record per pool; deterministic per seed.
/// Throws DataError when either class is too small to populate every pool.
DatasetSplit split(std::span<const DomainRecord> records, double ratio_pool_fraction, std::uint64_t seed);

}  // namespace urldet
