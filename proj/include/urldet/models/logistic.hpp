#pragma once

#include "urldet/models/common.hpp"

namespace urldet {

struct LrConfig {
    int poly_degree = 3;
    double l2 = 1e-4;           // penalty on non-constant weights
    int max_iterations = 500;
    double grad_tol = 1e-6;
    bool gradient_descent = false;  // fallback optimizer instead of L-BFGS
    bool standardize = true;
};

/// Logistic regression over the monomial expansion of the scaled features.
/// The expansion's constant column doubles as the intercept.
class LogisticModel : public Classifier {
public:
    LogisticModel(FeatureSetId set_id, int degree, Eigen::VectorXd weights)
        : Classifier(ModelKind::LR, set_id), degree_(degree), weights_(std::move(weights)) {}

    int degree() const { return degree_; }
    const Eigen::VectorXd& weights() const { return weights_; }

protected:
    Eigen::VectorXd proba_scaled(const Eigen::MatrixXd& scaled_rows) const override;
    nlohmann::json params_to_json() const override;

private:
    int degree_;
    Eigen::VectorXd weights_;
};

std::unique_ptr<Classifier> train_lr(const FeatureMatrix& train, const LrConfig& cfg = {});

}  // namespace urldet
