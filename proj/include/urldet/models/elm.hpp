#pragma once

#include "urldet/models/common.hpp"

namespace urldet {

struct ElmConfig {
    int hidden_width = 128;
    double ridge = 1e-3;
    std::uint64_t seed = 1;
    bool standardize = true;
};

/// Extreme learning machine: random input weights, sigmoid hidden layer,
/// output weights solved in closed form by ridge-regularized least squares
/// against {0,1} targets.
class ElmModel : public Classifier {
public:
    ElmModel(FeatureSetId set_id, Eigen::MatrixXd w_in, Eigen::RowVectorXd b_in, Eigen::VectorXd beta)
        : Classifier(ModelKind::ELM, set_id), w_in_(std::move(w_in)), b_in_(std::move(b_in)), beta_(std::move(beta)) {}

    /// Hidden activations sigmoid(X*W + b) on scaled rows.
    Eigen::MatrixXd hidden(const Eigen::MatrixXd& scaled_rows) const;

    const Eigen::MatrixXd& input_weights() const { return w_in_; }
    const Eigen::RowVectorXd& input_bias() const { return b_in_; }
    const Eigen::VectorXd& output_weights() const { return beta_; }

protected:
    Eigen::VectorXd proba_scaled(const Eigen::MatrixXd& scaled_rows) const override;
    nlohmann::json params_to_json() const override;

private:
    Eigen::MatrixXd w_in_;     // inputs x hidden
    Eigen::RowVectorXd b_in_;  // hidden
    Eigen::VectorXd beta_;     // hidden
};

std::unique_ptr<Classifier> train_elm(const FeatureMatrix& train, const ElmConfig& cfg = {});

}  // namespace urldet
