#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "urldet/novel_features.hpp"
#include "urldet/ratio_table.hpp"
#include "urldet/types.hpp"

namespace urldet {

/// Per-column standardization fitted on training rows only.
struct Scaler {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;  // floored at kStdFloor

    static constexpr double kStdFloor = 1e-9;

    Eigen::MatrixXd transform(const Eigen::MatrixXd& rows) const;
};

/// Countries and ASNs tables travel together; the TCP features need both.
struct RatioTables {
    RatioTable countries;
    RatioTable asns;
};

struct FeatureMatrix {
    FeatureSetId set_id = FeatureSetId::B;
    Eigen::MatrixXd values;  // rows x features, raw (unscaled) space
    std::vector<int> labels; // 1 = malicious
    std::vector<std::string> names;
    std::optional<Scaler> scaler;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    FeatureVector row(Eigen::Index i) const;

    /// Column index for a feature name, or -1 if the set lacks it.
    int column_of(const std::string& feature) const;

    /// Row subset in the given order; labels follow.
    FeatureMatrix subset(std::span<const int> indices) const;
};

/// Builds the matrix for a named feature set. Row i corresponds to
/// records[i]. Sets containing the novel features require tables; passing
/// none for those is a configuration error.
FeatureMatrix assemble(std::span<const DomainRecord> records, FeatureSetId set_id,
                       const RatioTables* tables = nullptr, double epsilon = kDefaultRankEpsilon,
                       double entropy_log_base = 2.0);

Scaler fit_scaler(const Eigen::MatrixXd& rows);

/// Returns a standardized copy with the scaler recorded on the matrix.
FeatureMatrix apply_scaler(const FeatureMatrix& m, const Scaler& scaler);

/// CSV with a header row naming columns plus a trailing `label` column.
void write_matrix_csv(const FeatureMatrix& m, const std::filesystem::path& path);

}  // namespace urldet
