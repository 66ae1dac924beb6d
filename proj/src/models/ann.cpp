#include "urldet/models/ann.hpp"

#include <cmath>
#include <numeric>

namespace urldet {

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

Eigen::MatrixXd relu(const Eigen::MatrixXd& z) { return z.cwiseMax(0.0); }

Eigen::MatrixXd leaky_relu(const Eigen::MatrixXd& z, double slope) {
    return z.unaryExpr([slope](double v) { return v > 0.0 ? v : slope * v; });
}

}  // namespace

AnnNetwork::AnnNetwork(int inputs, std::vector<int> hidden_widths, double leaky_slope)
    : inputs_(inputs), hidden_widths_(std::move(hidden_widths)), leaky_slope_(leaky_slope) {
    if (hidden_widths_.empty()) throw ConfigError("ann: needs at least one hidden layer");
    std::vector<int> sizes{inputs_};
    sizes.insert(sizes.end(), hidden_widths_.begin(), hidden_widths_.end());
    sizes.push_back(1);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        w_.emplace_back(Eigen::MatrixXd::Zero(sizes[l], sizes[l + 1]));
        b_.emplace_back(Eigen::RowVectorXd::Zero(sizes[l + 1]));
    }
}

void AnnNetwork::init_random(Rng& rng) {
    for (std::size_t l = 0; l < w_.size(); ++l) {
        const bool output_layer = l + 1 == w_.size();
        const double scale = std::sqrt((output_layer ? 1.0 : 2.0) / static_cast<double>(w_[l].rows()));
        for (Eigen::Index i = 0; i < w_[l].rows(); ++i) {
            for (Eigen::Index j = 0; j < w_[l].cols(); ++j) w_[l](i, j) = rng.normal(0.0, scale);
        }
        // a small offset keeps pre-activations away from the exact relu kink
        // (dead inputs would otherwise pin them at zero)
        b_[l].setConstant(0.01);
    }
}

Eigen::VectorXd AnnNetwork::forward(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd a = x;
    const std::size_t n_hidden = hidden_widths_.size();
    for (std::size_t l = 0; l < n_hidden; ++l) {
        Eigen::MatrixXd z = a * w_[l];
        z.rowwise() += b_[l];
        a = (l + 1 == n_hidden) ? leaky_relu(z, leaky_slope_) : relu(z);
    }
    Eigen::VectorXd z_out = a * w_.back();
    z_out.array() += b_.back()[0];
    return z_out.unaryExpr([](double z) { return 1.0 / (1.0 + std::exp(-z)); });
}

double AnnNetwork::loss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) const {
    Eigen::MatrixXd a = x;
    const std::size_t n_hidden = hidden_widths_.size();
    for (std::size_t l = 0; l < n_hidden; ++l) {
        Eigen::MatrixXd z = a * w_[l];
        z.rowwise() += b_[l];
        a = (l + 1 == n_hidden) ? leaky_relu(z, leaky_slope_) : relu(z);
    }
    Eigen::VectorXd z_out = a * w_.back();
    z_out.array() += b_.back()[0];

    double acc = 0.0;
    for (Eigen::Index i = 0; i < z_out.size(); ++i) {
        acc += y[i] > 0.5 ? softplus(-z_out[i]) : softplus(z_out[i]);
    }
    return acc / static_cast<double>(z_out.size());
}

std::pair<double, AnnNetwork::Gradients> AnnNetwork::loss_and_gradients(const Eigen::MatrixXd& x,
                                                                        const Eigen::VectorXd& y) const {
    const std::size_t n_hidden = hidden_widths_.size();
    std::vector<Eigen::MatrixXd> pre(n_hidden);   // z per hidden layer
    std::vector<Eigen::MatrixXd> act(n_hidden + 1);
    act[0] = x;
    for (std::size_t l = 0; l < n_hidden; ++l) {
        pre[l] = act[l] * w_[l];
        pre[l].rowwise() += b_[l];
        act[l + 1] = (l + 1 == n_hidden) ? leaky_relu(pre[l], leaky_slope_) : relu(pre[l]);
    }
    Eigen::VectorXd z_out = act[n_hidden] * w_.back();
    z_out.array() += b_.back()[0];

    const double n = static_cast<double>(x.rows());
    double loss_acc = 0.0;
    Eigen::VectorXd delta_out(z_out.size());
    for (Eigen::Index i = 0; i < z_out.size(); ++i) {
        loss_acc += y[i] > 0.5 ? softplus(-z_out[i]) : softplus(z_out[i]);
        const double p = 1.0 / (1.0 + std::exp(-z_out[i]));
        delta_out[i] = (p - y[i]) / n;
    }

    Gradients g;
    g.w.resize(w_.size());
    g.b.resize(b_.size());
    g.w.back() = act[n_hidden].transpose() * delta_out;
    g.b.back() = Eigen::RowVectorXd::Constant(1, delta_out.sum());

    Eigen::MatrixXd delta = delta_out * w_.back().transpose();  // n x last_hidden
    for (std::size_t l = n_hidden; l-- > 0;) {
        const bool leaky = l + 1 == n_hidden;
        const double slope = leaky_slope_;
        delta = delta.array() * pre[l].unaryExpr([leaky, slope](double z) {
            return z > 0.0 ? 1.0 : (leaky ? slope : 0.0);
        }).array();
        g.w[l] = act[l].transpose() * delta;
        g.b[l] = delta.colwise().sum();
        if (l > 0) delta = (delta * w_[l].transpose()).eval();
    }
    return {loss_acc / n, std::move(g)};
}

Eigen::VectorXd AnnModel::proba_scaled(const Eigen::MatrixXd& scaled_rows) const {
    return net_.forward(scaled_rows);
}

nlohmann::json AnnModel::params_to_json() const {
    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t l = 0; l < net_.weights().size(); ++l) {
        const auto& w = net_.weights()[l];
        std::vector<std::vector<double>> rows(static_cast<std::size_t>(w.rows()));
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            rows[static_cast<std::size_t>(i)].assign(w.row(i).begin(), w.row(i).end());
        }
        layers.push_back(nlohmann::json{
            {"w", rows}, {"b", std::vector<double>(net_.biases()[l].begin(), net_.biases()[l].end())}});
    }
    return nlohmann::json{{"leaky_slope", net_.leaky_slope()}, {"layers", layers}};
}

std::unique_ptr<Classifier> train_ann(const FeatureMatrix& train, const AnnConfig& cfg) {
    require_both_classes(train.labels, "train_ann");
    if (cfg.batch_size < 1) throw ConfigError("train_ann: batch size must be >= 1");

    const Scaler scaler = cfg.standardize ? fit_scaler(train.values)
                                          : Scaler{Eigen::VectorXd::Zero(train.cols()),
                                                   Eigen::VectorXd::Ones(train.cols())};
    const Eigen::MatrixXd all_x = scaler.transform(train.values);
    const Eigen::VectorXd all_y = labels_to_vector(train.labels);

    AnnNetwork net(static_cast<int>(all_x.cols()), cfg.hidden_widths, cfg.leaky_slope);
    Rng init_rng(mix_seed(cfg.seed, 0));
    net.init_random(init_rng);
    Rng shuffle_rng(mix_seed(cfg.seed, 1));

    // stratified validation carve that drives the plateau stop
    Eigen::MatrixXd xs = all_x;
    Eigen::VectorXd y = all_y;
    Eigen::MatrixXd val_x;
    Eigen::VectorXd val_y;
    if (cfg.validation_fraction > 0.0 && train.rows() >= 20) {
        std::vector<int> benign, malicious;
        for (Eigen::Index i = 0; i < all_y.size(); ++i) {
            (all_y[i] > 0.5 ? malicious : benign).push_back(static_cast<int>(i));
        }
        shuffle_rng.shuffle(benign);
        shuffle_rng.shuffle(malicious);
        std::vector<int> fit_idx, val_idx;
        for (const auto* cls : {&benign, &malicious}) {
            const auto cut = static_cast<std::size_t>(std::llround(cfg.validation_fraction *
                                                                   static_cast<double>(cls->size())));
            for (std::size_t i = 0; i < cls->size(); ++i) (i < cut ? val_idx : fit_idx).push_back((*cls)[i]);
        }
        if (!val_idx.empty() && !fit_idx.empty()) {
            const auto gather = [&](const std::vector<int>& idx, Eigen::MatrixXd& mx, Eigen::VectorXd& my) {
                mx.resize(static_cast<Eigen::Index>(idx.size()), all_x.cols());
                my.resize(static_cast<Eigen::Index>(idx.size()));
                for (std::size_t i = 0; i < idx.size(); ++i) {
                    mx.row(static_cast<Eigen::Index>(i)) = all_x.row(idx[i]);
                    my[static_cast<Eigen::Index>(i)] = all_y[idx[i]];
                }
            };
            gather(fit_idx, xs, y);
            gather(val_idx, val_x, val_y);
        }
    }

    // Adam state
    std::vector<Eigen::MatrixXd> mw, vw;
    std::vector<Eigen::RowVectorXd> mb, vb;
    for (std::size_t l = 0; l < net.weights().size(); ++l) {
        mw.push_back(Eigen::MatrixXd::Zero(net.weights()[l].rows(), net.weights()[l].cols()));
        vw.push_back(Eigen::MatrixXd::Zero(net.weights()[l].rows(), net.weights()[l].cols()));
        mb.push_back(Eigen::RowVectorXd::Zero(net.biases()[l].size()));
        vb.push_back(Eigen::RowVectorXd::Zero(net.biases()[l].size()));
    }

    constexpr double kAdamEps = 1e-8;
    std::vector<int> order(static_cast<std::size_t>(xs.rows()));
    std::iota(order.begin(), order.end(), 0);

    double best_loss = std::numeric_limits<double>::infinity();
    std::vector<Eigen::MatrixXd> best_w = net.weights();
    std::vector<Eigen::RowVectorXd> best_b = net.biases();
    int since_best = 0;
    long step = 0;
    int epoch = 0;
    for (; epoch < cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t count = std::min(order.size() - start, static_cast<std::size_t>(cfg.batch_size));
            Eigen::MatrixXd xb(static_cast<Eigen::Index>(count), xs.cols());
            Eigen::VectorXd yb(static_cast<Eigen::Index>(count));
            for (std::size_t i = 0; i < count; ++i) {
                xb.row(static_cast<Eigen::Index>(i)) = xs.row(order[start + i]);
                yb[static_cast<Eigen::Index>(i)] = y[order[start + i]];
            }

            auto [loss, grads] = net.loss_and_gradients(xb, yb);
            if (!std::isfinite(loss)) {
                throw DataError("ann training diverged at epoch " + std::to_string(epoch));
            }
            epoch_loss += loss * static_cast<double>(count);

            ++step;
            const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
            for (std::size_t l = 0; l < net.weights().size(); ++l) {
                mw[l] = cfg.beta1 * mw[l] + (1.0 - cfg.beta1) * grads.w[l];
                vw[l] = cfg.beta2 * vw[l] + (1.0 - cfg.beta2) * grads.w[l].cwiseProduct(grads.w[l]);
                net.weights()[l] -= cfg.learning_rate *
                                    (mw[l] / bc1).cwiseQuotient(((vw[l] / bc2).cwiseSqrt().array() + kAdamEps).matrix());
                mb[l] = cfg.beta1 * mb[l] + (1.0 - cfg.beta1) * grads.b[l];
                vb[l] = cfg.beta2 * vb[l] + (1.0 - cfg.beta2) * grads.b[l].cwiseProduct(grads.b[l]);
                net.biases()[l] -= cfg.learning_rate *
                                   (mb[l] / bc1).cwiseQuotient(((vb[l] / bc2).cwiseSqrt().array() + kAdamEps).matrix());
            }
        }
        epoch_loss /= static_cast<double>(order.size());

        const double monitored = val_x.rows() > 0 ? net.loss(val_x, val_y) : epoch_loss;
        if (!std::isfinite(monitored)) {
            throw DataError("ann training diverged at epoch " + std::to_string(epoch));
        }
        if (monitored < best_loss - cfg.plateau_tol) {
            best_loss = monitored;
            best_w = net.weights();
            best_b = net.biases();
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            ++epoch;
            break;
        }
    }
    net.weights() = std::move(best_w);
    net.biases() = std::move(best_b);

    auto model = std::make_unique<AnnModel>(train.set_id, std::move(net));
    model->set_scaler(scaler);
    model->meta().seed = cfg.seed;
    model->meta().iterations = epoch;
    return model;
}

}  // namespace urldet
