#include "urldet/models/poly.hpp"

#include "urldet/types.hpp"

namespace urldet {

std::size_t poly_width(int n_features, int degree) {
    if (degree < 0 || n_features < 0) throw ConfigError("poly_width: negative arguments");
    // C(n + d, d) built incrementally to avoid overflow for sane inputs
    std::size_t width = 1;
    for (int i = 1; i <= degree; ++i) {
        width = width * static_cast<std::size_t>(n_features + i) / static_cast<std::size_t>(i);
    }
    return width;
}

namespace {

void enumerate(int n_features, int var, int remaining, std::vector<int>& current,
               std::vector<std::vector<int>>& out) {
    if (var == n_features - 1) {
        current[static_cast<std::size_t>(var)] = remaining;
        out.push_back(current);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        current[static_cast<std::size_t>(var)] = e;
        enumerate(n_features, var + 1, remaining - e, current, out);
    }
}

}  // namespace

std::vector<std::vector<int>> monomial_exponents(int n_features, int degree) {
    if (degree < 1) throw ConfigError("monomial_exponents: degree must be >= 1");
    std::vector<std::vector<int>> out;
    out.reserve(poly_width(n_features, degree));
    out.emplace_back(static_cast<std::size_t>(n_features), 0);  // constant term
    std::vector<int> current(static_cast<std::size_t>(n_features), 0);
    for (int total = 1; total <= degree; ++total) {
        enumerate(n_features, 0, total, current, out);
    }
    return out;
}

Eigen::MatrixXd poly_expand(const Eigen::MatrixXd& rows, int degree) {
    const int n = static_cast<int>(rows.cols());
    const std::size_t width = poly_width(n, degree);
    if (width > 100000) {
        throw ConfigError("poly_expand: expanded width " + std::to_string(width) + " exceeds the 100000 guard");
    }
    const auto exponents = monomial_exponents(n, degree);

    Eigen::MatrixXd out(rows.rows(), static_cast<Eigen::Index>(width));
    for (std::size_t j = 0; j < exponents.size(); ++j) {
        Eigen::VectorXd col = Eigen::VectorXd::Ones(rows.rows());
        for (int v = 0; v < n; ++v) {
            for (int e = 0; e < exponents[j][static_cast<std::size_t>(v)]; ++e) {
                col.array() *= rows.col(v).array();
            }
        }
        out.col(static_cast<Eigen::Index>(j)) = col;
    }
    return out;
}

}  // namespace urldet
