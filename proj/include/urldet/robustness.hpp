#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "urldet/feature_assembly.hpp"
#include "urldet/models/common.hpp"

namespace urldet {

enum class SweepVerdict { Robust, SemiRobust, NonRobust, NotInSet };

std::string to_string(SweepVerdict v);

inline constexpr double kDefaultRobustFloor = 0.9;
inline constexpr double kDefaultSemiRobustFloor = 0.6;

/// One-feature manipulation plan: the grid of values the feature is forced
/// to, one at a time, on malicious instances.
struct SweepSpec {
    std::string feature_name;
    std::vector<double> values;
};

struct SweepResult {
    std::string feature_name;
    std::vector<double> values;
    std::vector<double> detection_rates;  // per grid value
    double baseline_rate = 0.0;           // unmanipulated detection rate
    SweepVerdict verdict = SweepVerdict::Robust;

    double min_rate() const;
};

/// Built-in grid covering the feature's legal range. CCR/CAR grids run to
/// the 99th percentile of the supplied training matrix when available.
std::vector<double> default_grid(const std::string& feature, const FeatureMatrix* training = nullptr);
SweepSpec default_sweep(const std::string& feature, const FeatureMatrix* training = nullptr);

/// Overwrites the named feature with each grid value in raw feature space
/// (the model's own scaler applies afterwards), recomputes predictions, and
/// records the surviving detection rate. `malicious_rows` must hold only
/// true-malicious instances. A feature outside the model's set yields
/// NotInSet; predictions are still recomputed per value to demonstrate they
/// are bit-identical to the baseline.
SweepResult sweep(const Classifier& model, const FeatureMatrix& malicious_rows, const SweepSpec& spec,
                  double robust_floor = kDefaultRobustFloor, double semirobust_floor = kDefaultSemiRobustFloor);

/// Robust when no grid point drops below robust_floor * baseline; semi-robust
/// down to semirobust_floor * baseline; non-robust below that.
SweepVerdict triage(const SweepResult& result, double robust_floor = kDefaultRobustFloor,
                    double semirobust_floor = kDefaultSemiRobustFloor);

/// Per-sweep CSV `value,detection_rate` for external plotting.
void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path);

}  // namespace urldet
