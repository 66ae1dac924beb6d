#include "urldet/models/elm.hpp"

#include <cmath>

#include "urldet/rng.hpp"

namespace urldet {

Eigen::MatrixXd ElmModel::hidden(const Eigen::MatrixXd& scaled_rows) const {
    Eigen::MatrixXd h = scaled_rows * w_in_;
    h.rowwise() += b_in_;
    return h.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

Eigen::VectorXd ElmModel::proba_scaled(const Eigen::MatrixXd& scaled_rows) const {
    const Eigen::VectorXd raw = hidden(scaled_rows) * beta_;
    // monotone squash centered at the 0.5 decision point
    return raw.unaryExpr([](double r) { return 1.0 / (1.0 + std::exp(-4.0 * (r - 0.5))); });
}

nlohmann::json ElmModel::params_to_json() const {
    std::vector<std::vector<double>> w(static_cast<std::size_t>(w_in_.rows()));
    for (Eigen::Index i = 0; i < w_in_.rows(); ++i) {
        w[static_cast<std::size_t>(i)].assign(w_in_.row(i).begin(), w_in_.row(i).end());
    }
    return nlohmann::json{{"input_weights", w},
                          {"input_bias", std::vector<double>(b_in_.begin(), b_in_.end())},
                          {"output_weights", std::vector<double>(beta_.begin(), beta_.end())}};
}

std::unique_ptr<Classifier> train_elm(const FeatureMatrix& train, const ElmConfig& cfg) {
    require_both_classes(train.labels, "train_elm");
    if (cfg.hidden_width < 1) throw ConfigError("train_elm: hidden width must be >= 1");

    const Scaler scaler = cfg.standardize ? fit_scaler(train.values)
                                          : Scaler{Eigen::VectorXd::Zero(train.cols()),
                                                   Eigen::VectorXd::Ones(train.cols())};
    const Eigen::MatrixXd xs = scaler.transform(train.values);

    Rng rng(cfg.seed);
    Eigen::MatrixXd w_in(xs.cols(), cfg.hidden_width);
    for (Eigen::Index i = 0; i < w_in.rows(); ++i) {
        for (Eigen::Index j = 0; j < w_in.cols(); ++j) w_in(i, j) = rng.uniform(-1.0, 1.0);
    }
    Eigen::RowVectorXd b_in(cfg.hidden_width);
    for (Eigen::Index j = 0; j < b_in.size(); ++j) b_in[j] = rng.uniform(0.0, 1.0);

    auto model = std::make_unique<ElmModel>(train.set_id, std::move(w_in), std::move(b_in),
                                            Eigen::VectorXd::Zero(cfg.hidden_width));
    const Eigen::MatrixXd h = model->hidden(xs);
    const Eigen::VectorXd y = labels_to_vector(train.labels);

    // (H'H + ridge*I) beta = H'y
    Eigen::MatrixXd gram = h.transpose() * h;
    gram.diagonal().array() += cfg.ridge;
    const Eigen::VectorXd beta = gram.ldlt().solve(h.transpose() * y);

    auto fitted = std::make_unique<ElmModel>(train.set_id, model->input_weights(), model->input_bias(), beta);
    fitted->set_scaler(scaler);
    fitted->meta().seed = cfg.seed;
    return fitted;
}

}  // namespace urldet
