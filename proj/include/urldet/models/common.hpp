#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include <json.hpp>

#include "urldet/feature_assembly.hpp"
#include "urldet/types.hpp"

namespace urldet {

enum class ModelKind { LR, SVM, ELM, ANN };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct TrainMeta {
    std::uint64_t seed = 0;
    int iterations = 0;
    int fold_id = -1;
};

/// A fitted model bound to one feature set. Prediction always takes raw
/// (unscaled) feature rows; the stored scaler is applied internally first.
class Classifier {
public:
    virtual ~Classifier() = default;

    ModelKind kind() const { return kind_; }
    FeatureSetId set_id() const { return set_id_; }
    const std::optional<Scaler>& scaler() const { return scaler_; }
    void set_scaler(Scaler s) { scaler_ = std::move(s); }
    const TrainMeta& meta() const { return meta_; }
    TrainMeta& meta() { return meta_; }

    Eigen::VectorXd predict_proba(const Eigen::MatrixXd& raw_rows) const;
    std::vector<int> predict(const Eigen::MatrixXd& raw_rows) const;

    nlohmann::json to_json() const;
    static std::unique_ptr<Classifier> from_json(const nlohmann::json& j);

protected:
    Classifier(ModelKind kind, FeatureSetId set_id) : kind_(kind), set_id_(set_id) {}

    /// Probabilities on rows already passed through the scaler.
    virtual Eigen::VectorXd proba_scaled(const Eigen::MatrixXd& scaled_rows) const = 0;

    virtual nlohmann::json params_to_json() const = 0;

    ModelKind kind_;
    FeatureSetId set_id_;
    std::optional<Scaler> scaler_;
    TrainMeta meta_;

    friend struct ModelCodec;
};

void save_model(const Classifier& model, const std::filesystem::path& path);
std::unique_ptr<Classifier> load_model(const std::filesystem::path& path);

/// Throws DataError unless both labels occur.
void require_both_classes(const std::vector<int>& labels, const char* who);

inline Eigen::VectorXd labels_to_vector(const std::vector<int>& labels) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) y[static_cast<Eigen::Index>(i)] = labels[i];
    return y;
}

}  // namespace urldet
