#pragma once

#include <cstdint>
#include <span>
#include <string>

#include <json.hpp>

namespace urldet {

/// Malicious is the positive class throughout.
struct ConfusionMatrix {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + fp + tn + fn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(std::span<const int> labels, std::span<const int> predictions);

// Degenerate denominators return 0 (with a stderr warning) so that fold
// aggregation stays total.
double recall(const ConfusionMatrix& c);
double precision(const ConfusionMatrix& c);
double accuracy(const ConfusionMatrix& c);
double f1(const ConfusionMatrix& c);

/// Mean negative log-likelihood, natural log, probabilities clipped to
/// [1e-15, 1 - 1e-15].
double log_loss(std::span<const int> labels, std::span<const double> probabilities);

/// Probability that a random positive outranks a random negative, ties
/// counted one half (rank-sum formulation). Throws std::invalid_argument
/// when only one class is present.
double auc(std::span<const int> labels, std::span<const double> scores);

struct EvaluationReport {
    std::string model;        // lr / svm / elm / ann
    std::string feature_set;  // B / BR / TCP / BRTCP / BTCP
    int fold = -1;            // -1 = pooled or single evaluation
    ConfusionMatrix confusion;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double log_loss = 0.0;
    double auc = 0.0;

    static std::string csv_header();
    std::string csv_row() const;
    nlohmann::json to_json() const;
};

/// Thresholds probabilities at 0.5 and fills a complete report.
EvaluationReport evaluate(std::span<const int> labels, std::span<const double> probabilities,
                          const std::string& model, const std::string& feature_set, int fold = -1);

}  // namespace urldet
