#include "urldet/models/logistic.hpp"

#include <cmath>
#include <deque>

#include "urldet/models/poly.hpp"

namespace urldet {

namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& z) {
    return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

struct Objective {
    const Eigen::MatrixXd& phi;  // expanded design matrix
    const Eigen::VectorXd& y;
    double l2;

    // mean log loss + 0.5*l2*||w||^2 over the non-constant columns
    double value(const Eigen::VectorXd& w) const {
        const Eigen::VectorXd z = phi * w;
        // log(1 + exp(-|z|)) + max(0, -margin) form keeps the loss finite
        double loss = 0.0;
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            const double margin = (y[i] > 0.5 ? 1.0 : -1.0) * z[i];
            loss += margin > 0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
        }
        loss /= static_cast<double>(z.size());
        double penalty = 0.0;
        for (Eigen::Index j = 1; j < w.size(); ++j) penalty += w[j] * w[j];
        return loss + 0.5 * l2 * penalty;
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& w) const {
        const Eigen::VectorXd p = sigmoid(phi * w);
        Eigen::VectorXd g = phi.transpose() * (p - y) / static_cast<double>(y.size());
        for (Eigen::Index j = 1; j < w.size(); ++j) g[j] += l2 * w[j];
        return g;
    }
};

// L-BFGS two-loop recursion with Armijo backtracking.
int minimize_lbfgs(const Objective& obj, Eigen::VectorXd& w, int max_iterations, double grad_tol) {
    constexpr int kHistory = 10;
    constexpr double kArmijo = 1e-4;
    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;

    Eigen::VectorXd g = obj.gradient(w);
    double f = obj.value(w);
    int iter = 0;
    for (; iter < max_iterations; ++iter) {
        if (g.norm() < grad_tol) break;

        Eigen::VectorXd q = g;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t i = s_hist.size(); i-- > 0;) {
            alpha[i] = rho_hist[i] * s_hist[i].dot(q);
            q -= alpha[i] * y_hist[i];
        }
        if (!s_hist.empty()) {
            const auto& s = s_hist.back();
            const auto& yv = y_hist.back();
            q *= s.dot(yv) / yv.squaredNorm();
        }
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            const double beta = rho_hist[i] * y_hist[i].dot(q);
            q += (alpha[i] - beta) * s_hist[i];
        }
        Eigen::VectorXd direction = -q;
        double dir_deriv = g.dot(direction);
        if (dir_deriv >= 0.0) {  // fall back to steepest descent
            direction = -g;
            dir_deriv = -g.squaredNorm();
        }

        double step = 1.0;
        Eigen::VectorXd w_next;
        double f_next = f;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            w_next = w + step * direction;
            f_next = obj.value(w_next);
            if (f_next <= f + kArmijo * step * dir_deriv) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        const Eigen::VectorXd g_next = obj.gradient(w_next);
        const Eigen::VectorXd s = w_next - w;
        const Eigen::VectorXd yv = g_next - g;
        const double sy = s.dot(yv);
        if (sy > 1e-12) {
            s_hist.push_back(s);
            y_hist.push_back(yv);
            rho_hist.push_back(1.0 / sy);
            if (s_hist.size() > kHistory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        w = std::move(w_next);
        g = g_next;
        f = f_next;
    }
    return iter;
}

int minimize_gradient_descent(const Objective& obj, Eigen::VectorXd& w, int max_iterations, double grad_tol) {
    constexpr double kArmijo = 1e-4;
    double f = obj.value(w);
    int iter = 0;
    for (; iter < max_iterations; ++iter) {
        const Eigen::VectorXd g = obj.gradient(w);
        if (g.norm() < grad_tol) break;
        double step = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            const Eigen::VectorXd w_next = w - step * g;
            const double f_next = obj.value(w_next);
            if (f_next <= f - kArmijo * step * g.squaredNorm()) {
                w = w_next;
                f = f_next;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }
    return iter;
}

}  // namespace

Eigen::VectorXd LogisticModel::proba_scaled(const Eigen::MatrixXd& scaled_rows) const {
    return sigmoid(poly_expand(scaled_rows, degree_) * weights_);
}

nlohmann::json LogisticModel::params_to_json() const {
    return nlohmann::json{{"degree", degree_},
                          {"weights", std::vector<double>(weights_.begin(), weights_.end())}};
}

std::unique_ptr<Classifier> train_lr(const FeatureMatrix& train, const LrConfig& cfg) {
    if (train.rows() < 2) throw DataError("train_lr: needs at least two rows");
    require_both_classes(train.labels, "train_lr");
    if (cfg.poly_degree < 1) throw ConfigError("train_lr: poly degree must be >= 1");

    const Scaler scaler = cfg.standardize ? fit_scaler(train.values)
                                          : Scaler{Eigen::VectorXd::Zero(train.cols()),
                                                   Eigen::VectorXd::Ones(train.cols())};
    const Eigen::MatrixXd phi = poly_expand(scaler.transform(train.values), cfg.poly_degree);
    const Eigen::VectorXd y = labels_to_vector(train.labels);

    Eigen::VectorXd w = Eigen::VectorXd::Zero(phi.cols());
    const Objective obj{phi, y, cfg.l2};
    const int iterations = cfg.gradient_descent
                               ? minimize_gradient_descent(obj, w, cfg.max_iterations, cfg.grad_tol)
                               : minimize_lbfgs(obj, w, cfg.max_iterations, cfg.grad_tol);

    auto model = std::make_unique<LogisticModel>(train.set_id, cfg.poly_degree, std::move(w));
    model->set_scaler(scaler);
    model->meta().iterations = iterations;
    return model;
}

}  // namespace urldet
