#include "urldet/models/svm.hpp"

#include <cmath>
#include <limits>

namespace urldet {

double rbf_kernel(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b, double gamma) {
    return std::exp(-gamma * (a - b).squaredNorm());
}

namespace {

constexpr Eigen::Index kKernelCacheLimit = 4096;

/// Serves kernel rows, from a precomputed Gram matrix when it fits.
class KernelSource {
public:
    KernelSource(const Eigen::MatrixXd& x, double gamma) : x_(x), gamma_(gamma) {
        diag_ = Eigen::VectorXd::Ones(x.rows());  // k(x, x) = 1 for RBF
        if (x.rows() <= kKernelCacheLimit) {
            const Eigen::VectorXd sq = x.rowwise().squaredNorm();
            Eigen::MatrixXd d2 = (-2.0 * x * x.transpose());
            d2.colwise() += sq;
            d2.rowwise() += sq.transpose();
            cache_ = (-gamma * d2.cwiseMax(0.0)).array().exp();
        }
    }

    Eigen::VectorXd row(Eigen::Index i) const {
        if (cache_.size() > 0) return cache_.row(i);
        Eigen::VectorXd out(x_.rows());
        for (Eigen::Index t = 0; t < x_.rows(); ++t) out[t] = rbf_kernel(x_.row(i), x_.row(t), gamma_);
        return out;
    }

    double diagonal(Eigen::Index i) const { return diag_[i]; }

private:
    const Eigen::MatrixXd& x_;
    double gamma_;
    Eigen::VectorXd diag_;
    Eigen::MatrixXd cache_;
};

}  // namespace

SmoResult solve_smo(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double gamma, double c, double tol,
                    std::int64_t max_iterations) {
    const Eigen::Index n = x.rows();
    const KernelSource kernel(x, gamma);

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);  // of 1/2 a'Qa - e'a

    const auto in_up = [&](Eigen::Index t) { return y[t] > 0 ? alpha[t] < c : alpha[t] > 0; };
    const auto in_low = [&](Eigen::Index t) { return y[t] > 0 ? alpha[t] > 0 : alpha[t] < c; };

    double bias = 0.0;
    std::int64_t iter = 0;
    for (; iter < max_iterations; ++iter) {
        Eigen::Index i = -1;
        double m_up = -std::numeric_limits<double>::infinity();
        double m_low = std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < n; ++t) {
            const double v = -y[t] * grad[t];
            if (in_up(t) && v > m_up) {
                m_up = v;
                i = t;
            }
            if (in_low(t) && v < m_low) m_low = v;
        }
        bias = (m_up + m_low) / 2.0;
        if (i < 0 || m_up - m_low < tol) break;

        const Eigen::VectorXd k_i = kernel.row(i);

        // second-order selection of the partner index
        Eigen::Index j = -1;
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index t = 0; t < n; ++t) {
            if (!in_low(t)) continue;
            const double b_t = m_up + y[t] * grad[t];
            if (b_t <= 0.0) continue;
            const double a_t = std::max(kernel.diagonal(i) + kernel.diagonal(t) - 2.0 * k_i[t], 1e-12);
            const double obj = -(b_t * b_t) / a_t;
            if (obj < best) {
                best = obj;
                j = t;
            }
        }
        if (j < 0) break;

        const Eigen::VectorXd k_j = kernel.row(j);
        const double a = std::max(kernel.diagonal(i) + kernel.diagonal(j) - 2.0 * k_i[j], 1e-12);
        const double step = (-y[i] * grad[i] + y[j] * grad[j]) / a;

        const double old_ai = alpha[i];
        const double old_aj = alpha[j];
        alpha[i] += y[i] * step;
        alpha[j] -= y[j] * step;

        // clip to the box while preserving y_i a_i + y_j a_j
        const double sum = y[i] * old_ai + y[j] * old_aj;
        alpha[i] = std::clamp(alpha[i], 0.0, c);
        alpha[j] = y[j] * (sum - y[i] * alpha[i]);
        alpha[j] = std::clamp(alpha[j], 0.0, c);
        alpha[i] = y[i] * (sum - y[j] * alpha[j]);

        const double delta_i = (alpha[i] - old_ai) * y[i];
        const double delta_j = (alpha[j] - old_aj) * y[j];
        grad.array() += y.array() * (k_i.array() * delta_i + k_j.array() * delta_j);
    }

    return SmoResult{std::move(alpha), bias, iter};
}

Eigen::VectorXd SvmModel::decision(const Eigen::MatrixXd& scaled_rows) const {
    Eigen::VectorXd out(scaled_rows.rows());
    for (Eigen::Index r = 0; r < scaled_rows.rows(); ++r) {
        double f = bias_;
        for (Eigen::Index s = 0; s < support_vectors_.rows(); ++s) {
            f += alpha_y_[s] * rbf_kernel(support_vectors_.row(s), scaled_rows.row(r), gamma_);
        }
        out[r] = f;
    }
    return out;
}

Eigen::VectorXd SvmModel::proba_scaled(const Eigen::MatrixXd& scaled_rows) const {
    const Eigen::VectorXd f = decision(scaled_rows);
    return f.unaryExpr([this](double v) { return 1.0 / (1.0 + std::exp(platt_a_ * v + platt_b_)); });
}

nlohmann::json SvmModel::params_to_json() const {
    std::vector<std::vector<double>> sv(static_cast<std::size_t>(support_vectors_.rows()));
    for (Eigen::Index i = 0; i < support_vectors_.rows(); ++i) {
        sv[static_cast<std::size_t>(i)].assign(support_vectors_.row(i).begin(), support_vectors_.row(i).end());
    }
    return nlohmann::json{{"gamma", gamma_},
                          {"support_vectors", sv},
                          {"alpha_y", std::vector<double>(alpha_y_.begin(), alpha_y_.end())},
                          {"bias", bias_},
                          {"platt_a", platt_a_},
                          {"platt_b", platt_b_}};
}

std::pair<double, double> fit_platt_link(const Eigen::VectorXd& f, const std::vector<int>& labels) {
    const auto n = static_cast<std::size_t>(f.size());
    double prior1 = 0.0;
    for (const int y : labels) prior1 += (y == 1);
    const double prior0 = static_cast<double>(n) - prior1;

    const double hi = (prior1 + 1.0) / (prior1 + 2.0);
    const double lo = 1.0 / (prior0 + 2.0);
    std::vector<double> target(n);
    for (std::size_t i = 0; i < n; ++i) target[i] = labels[i] == 1 ? hi : lo;

    double a = 0.0;
    double b = std::log((prior0 + 1.0) / (prior1 + 1.0));

    const auto objective = [&](double av, double bv) {
        double obj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double z = f[static_cast<Eigen::Index>(i)] * av + bv;
            obj += z >= 0 ? target[i] * z + std::log1p(std::exp(-z))
                          : (target[i] - 1.0) * z + std::log1p(std::exp(z));
        }
        return obj;
    };

    constexpr double kMinStep = 1e-10;
    constexpr double kSigma = 1e-12;
    double fval = objective(a, b);
    for (int it = 0; it < 100; ++it) {
        double h11 = kSigma, h22 = kSigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double z = f[static_cast<Eigen::Index>(i)] * a + b;
            const double p = z >= 0 ? std::exp(-z) / (1.0 + std::exp(-z)) : 1.0 / (1.0 + std::exp(z));
            const double q = 1.0 - p;
            const double d1 = target[i] - p;
            const double d2 = p * q;
            const double fi = f[static_cast<Eigen::Index>(i)];
            h11 += fi * fi * d2;
            h22 += d2;
            h21 += fi * d2;
            g1 += fi * d1;
            g2 += d1;
        }
        if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;

        const double det = h11 * h22 - h21 * h21;
        const double da = -(h22 * g1 - h21 * g2) / det;
        const double db = -(-h21 * g1 + h11 * g2) / det;
        const double gd = g1 * da + g2 * db;

        double step = 1.0;
        while (step >= kMinStep) {
            const double na = a + step * da;
            const double nb = b + step * db;
            const double nf = objective(na, nb);
            if (nf < fval + 1e-4 * step * gd) {
                a = na;
                b = nb;
                fval = nf;
                break;
            }
            step /= 2.0;
        }
        if (step < kMinStep) break;
    }
    return {a, b};
}

namespace {

Scaler fit_minmax_scaler(const Eigen::MatrixXd& rows) {
    Scaler s;
    s.mean = rows.colwise().minCoeff().transpose();
    s.std = (rows.colwise().maxCoeff().transpose() - s.mean).cwiseMax(Scaler::kStdFloor);
    return s;
}

}  // namespace

std::unique_ptr<Classifier> train_svm(const FeatureMatrix& train, const SvmConfig& cfg) {
    require_both_classes(train.labels, "train_svm");

    const Scaler scaler = cfg.minmax_scaling ? fit_minmax_scaler(train.values) : fit_scaler(train.values);
    const Eigen::MatrixXd xs = scaler.transform(train.values);

    Eigen::VectorXd y(xs.rows());
    for (Eigen::Index i = 0; i < xs.rows(); ++i) y[i] = train.labels[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;

    const SmoResult smo = solve_smo(xs, y, cfg.gamma, cfg.c, cfg.tol, cfg.max_iterations);

    std::vector<Eigen::Index> sv;
    for (Eigen::Index i = 0; i < xs.rows(); ++i) {
        if (smo.alpha[i] > 1e-12) sv.push_back(i);
    }
    Eigen::MatrixXd support(static_cast<Eigen::Index>(sv.size()), xs.cols());
    Eigen::VectorXd alpha_y(static_cast<Eigen::Index>(sv.size()));
    for (std::size_t s = 0; s < sv.size(); ++s) {
        support.row(static_cast<Eigen::Index>(s)) = xs.row(sv[s]);
        alpha_y[static_cast<Eigen::Index>(s)] = smo.alpha[sv[s]] * y[sv[s]];
    }

    Eigen::VectorXd decisions(xs.rows());
    for (Eigen::Index r = 0; r < xs.rows(); ++r) {
        double f = smo.bias;
        for (Eigen::Index s = 0; s < support.rows(); ++s) f += alpha_y[s] * rbf_kernel(support.row(s), xs.row(r), cfg.gamma);
        decisions[r] = f;
    }
    const auto [pa, pb] = fit_platt_link(decisions, train.labels);

    auto model = std::make_unique<SvmModel>(train.set_id, cfg.gamma, std::move(support), std::move(alpha_y),
                                            smo.bias, pa, pb);
    model->set_scaler(scaler);
    model->meta().iterations = static_cast<int>(smo.iterations);
    return model;
}

}  // namespace urldet
