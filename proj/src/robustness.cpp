#include "urldet/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace urldet {

std::string to_string(SweepVerdict v) {
    switch (v) {
        case SweepVerdict::Robust: return "robust";
        case SweepVerdict::SemiRobust: return "semi-robust";
        case SweepVerdict::NonRobust: return "non-robust";
        case SweepVerdict::NotInSet: return "not-in-set";
    }
    throw ConfigError("unknown sweep verdict");
}

double SweepResult::min_rate() const {
    return detection_rates.empty() ? baseline_rate
                                   : *std::min_element(detection_rates.begin(), detection_rates.end());
}

namespace {

std::vector<double> linear_grid(double lo, double hi, double step) {
    std::vector<double> out;
    for (double v = lo; v <= hi + step * 1e-9; v += step) out.push_back(v);
    return out;
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

double rank_grid_ceiling(const std::string& feature, const FeatureMatrix* training) {
    if (training != nullptr) {
        const int col = training->column_of(feature);
        if (col >= 0) {
            std::vector<double> column(training->values.col(col).begin(), training->values.col(col).end());
            const double p99 = percentile(std::move(column), 0.99);
            if (p99 > 0.0) return p99;
        }
    }
    return 100.0;
}

}  // namespace

std::vector<double> default_grid(const std::string& feature, const FeatureMatrix* training) {
    if (feature == "length") return linear_grid(4, 60, 1);
    if (feature == "consecutive") return linear_grid(1, 15, 1);
    if (feature == "entropy") return linear_grid(0.0, 6.0, 0.1);
    if (feature == "ip_count" || feature == "geo_count") return linear_grid(0, 50, 1);
    if (feature == "ttl_mean" || feature == "ttl_std") return linear_grid(0, 120000, 1000);
    if (feature == "lifetime_years" || feature == "active_years") return linear_grid(0, 30, 1);
    if (feature == "pdns_changes") return linear_grid(0, 500, 10);
    if (feature == "ssl_remaining") return linear_grid(0.0, 4e7, 1e6);
    if (feature == "ccr" || feature == "car") {
        const double hi = rank_grid_ceiling(feature, training);
        return linear_grid(0.0, hi, hi / 50.0);
    }
    throw std::invalid_argument("unknown feature name: " + feature);
}

SweepSpec default_sweep(const std::string& feature, const FeatureMatrix* training) {
    return SweepSpec{feature, default_grid(feature, training)};
}

namespace {

double detection_rate(const Classifier& model, const Eigen::MatrixXd& rows) {
    const auto predictions = model.predict(rows);
    if (predictions.empty()) return 0.0;
    double hits = 0.0;
    for (const int p : predictions) hits += p;
    return hits / static_cast<double>(predictions.size());
}

bool known_feature(const std::string& name) {
    const auto& all = feature_names(FeatureSetId::BTCP);  // the 13-feature universe
    return std::find(all.begin(), all.end(), name) != all.end();
}

}  // namespace

SweepResult sweep(const Classifier& model, const FeatureMatrix& malicious_rows, const SweepSpec& spec,
                  double robust_floor, double semirobust_floor) {
    if (!known_feature(spec.feature_name)) {
        throw std::invalid_argument("sweep: unknown feature name: " + spec.feature_name);
    }
    if (spec.values.empty()) throw std::invalid_argument("sweep: empty value grid");
    if (model.set_id() != malicious_rows.set_id) {
        throw std::invalid_argument("sweep: model and matrix feature sets differ");
    }

    SweepResult result;
    result.feature_name = spec.feature_name;
    result.values = spec.values;
    result.baseline_rate = detection_rate(model, malicious_rows.values);

    const int col = malicious_rows.column_of(spec.feature_name);
    Eigen::MatrixXd manipulated = malicious_rows.values;
    for (const double v : spec.values) {
        if (col >= 0) manipulated.col(col).setConstant(v);
        result.detection_rates.push_back(detection_rate(model, manipulated));
    }

    result.verdict = col < 0 ? SweepVerdict::NotInSet : triage(result, robust_floor, semirobust_floor);
    return result;
}

SweepVerdict triage(const SweepResult& result, double robust_floor, double semirobust_floor) {
    if (robust_floor <= 0.0 || robust_floor >= 1.0 || semirobust_floor <= 0.0 || semirobust_floor >= 1.0 ||
        robust_floor < semirobust_floor) {
        throw std::invalid_argument("triage: floors must satisfy 0 < semirobust <= robust < 1");
    }
    const double min_rate = result.min_rate();
    if (min_rate >= robust_floor * result.baseline_rate) return SweepVerdict::Robust;
    if (min_rate >= semirobust_floor * result.baseline_rate) return SweepVerdict::SemiRobust;
    return SweepVerdict::NonRobust;
}

void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "value,detection_rate\n";
    out.precision(17);
    for (std::size_t i = 0; i < result.values.size(); ++i) {
        out << result.values[i] << ',' << result.detection_rates[i] << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace urldet
