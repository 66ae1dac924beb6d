#pragma once

#include "urldet/models/common.hpp"
#include "urldet/rng.hpp"

namespace urldet {

struct AnnConfig {
    std::vector<int> hidden_widths{64, 32, 16};
    int batch_size = 150;
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    int epochs = 100;
    double leaky_slope = 0.01;
    std::uint64_t seed = 1;
    int patience = 10;         // epochs without improvement before stopping
    double plateau_tol = 1e-6;
    // share of the training rows held out to drive the plateau stop; the
    // weights snap back to the best epoch seen there. 0 monitors the
    // training loss instead.
    double validation_fraction = 0.15;
    bool standardize = true;
};

/// Plain feed-forward net: ReLU on every hidden layer except the last one,
/// which is LeakyReLU, then a sigmoid output unit. Double precision
/// throughout so that gradients can be checked against finite differences.
class AnnNetwork {
public:
    AnnNetwork(int inputs, std::vector<int> hidden_widths, double leaky_slope);

    void init_random(Rng& rng);

    /// Output probabilities, one per input row.
    Eigen::VectorXd forward(const Eigen::MatrixXd& x) const;

    /// Mean binary cross-entropy of the forward pass.
    double loss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) const;

    struct Gradients {
        std::vector<Eigen::MatrixXd> w;
        std::vector<Eigen::RowVectorXd> b;
    };
    std::pair<double, Gradients> loss_and_gradients(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) const;

    std::vector<Eigen::MatrixXd>& weights() { return w_; }
    std::vector<Eigen::RowVectorXd>& biases() { return b_; }
    const std::vector<Eigen::MatrixXd>& weights() const { return w_; }
    const std::vector<Eigen::RowVectorXd>& biases() const { return b_; }
    double leaky_slope() const { return leaky_slope_; }
    int inputs() const { return inputs_; }

private:
    int inputs_;
    std::vector<int> hidden_widths_;
    double leaky_slope_;
    std::vector<Eigen::MatrixXd> w_;     // layer l: fan_in x fan_out
    std::vector<Eigen::RowVectorXd> b_;
};

class AnnModel : public Classifier {
public:
    AnnModel(FeatureSetId set_id, AnnNetwork net) : Classifier(ModelKind::ANN, set_id), net_(std::move(net)) {}

    const AnnNetwork& network() const { return net_; }

protected:
    Eigen::VectorXd proba_scaled(const Eigen::MatrixXd& scaled_rows) const override;
    nlohmann::json params_to_json() const override;

private:
    AnnNetwork net_;
};

/// Mini-batch Adam on the cross-entropy loss. Throws DataError naming the
/// epoch if the loss goes non-finite.
std::unique_ptr<Classifier> train_ann(const FeatureMatrix& train, const AnnConfig& cfg = {});

}  // namespace urldet
