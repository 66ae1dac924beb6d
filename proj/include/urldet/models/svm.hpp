#pragma once

#include "urldet/models/common.hpp"

namespace urldet {

struct SvmConfig {
    double gamma = 2.0;
    double c = 1.0;       // box constraint
    double tol = 1e-3;    // KKT violating-pair gap
    std::int64_t max_iterations = 2000000;
    // gamma = 2 assumes unit-box geometry; z-scored features push pairwise
    // distances far enough apart that the kernel matrix degenerates towards
    // the identity, so the SVM pipeline rescales each column to [0, 1]
    // instead of standardizing.
    bool minmax_scaling = true;
};

double rbf_kernel(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b, double gamma);

/// Dual SMO solution on y in {-1, +1}; alpha is indexed like the training
/// rows, bias completes the decision function f(x) = sum a_i y_i K(x_i, x) + b.
struct SmoResult {
    Eigen::VectorXd alpha;
    double bias = 0.0;
    std::int64_t iterations = 0;
};

/// Maximal-violating-pair SMO with second-order working-set selection.
SmoResult solve_smo(const Eigen::MatrixXd& x, const Eigen::VectorXd& y_signed, double gamma, double c,
                    double tol, std::int64_t max_iterations);

/// RBF kernel classifier. The decision value is mapped to a probability by a
/// logistic link fitted on the training decision values (Platt scaling).
class SvmModel : public Classifier {
public:
    SvmModel(FeatureSetId set_id, double gamma, Eigen::MatrixXd support_vectors, Eigen::VectorXd alpha_y,
             double bias, double platt_a, double platt_b)
        : Classifier(ModelKind::SVM, set_id),
          gamma_(gamma),
          support_vectors_(std::move(support_vectors)),
          alpha_y_(std::move(alpha_y)),
          bias_(bias),
          platt_a_(platt_a),
          platt_b_(platt_b) {}

    /// Raw decision values on scaled rows.
    Eigen::VectorXd decision(const Eigen::MatrixXd& scaled_rows) const;

    double gamma() const { return gamma_; }
    double bias() const { return bias_; }
    Eigen::Index support_vector_count() const { return support_vectors_.rows(); }

protected:
    Eigen::VectorXd proba_scaled(const Eigen::MatrixXd& scaled_rows) const override;
    nlohmann::json params_to_json() const override;

private:
    double gamma_;
    Eigen::MatrixXd support_vectors_;  // scaled space
    Eigen::VectorXd alpha_y_;
    double bias_;
    double platt_a_;
    double platt_b_;
};

std::unique_ptr<Classifier> train_svm(const FeatureMatrix& train, const SvmConfig& cfg = {});

/// Logistic link fit for mapping decision values to probabilities
/// (Platt 1999 with Lin's numerically stable updates).
std::pair<double, double> fit_platt_link(const Eigen::VectorXd& decision_values, const std::vector<int>& labels);

}  // namespace urldet
