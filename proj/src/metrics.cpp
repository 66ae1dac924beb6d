#include "urldet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace urldet {

namespace {

double safe_div(std::int64_t num, std::int64_t den, const char* what) {
    if (den == 0) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true)) {
            std::cerr << "warning: " << what << " has a zero denominator, returning 0"
                      << " (reported once per process)\n";
        }
        return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> labels, std::span<const int> predictions) {
    if (labels.size() != predictions.size()) throw std::invalid_argument("confusion: length mismatch");
    if (labels.empty()) throw std::invalid_argument("confusion: empty input");
    ConfusionMatrix c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) {
            (predictions[i] == 1 ? c.tp : c.fn)++;
        } else {
            (predictions[i] == 1 ? c.fp : c.tn)++;
        }
    }
    return c;
}

double recall(const ConfusionMatrix& c) { return safe_div(c.tp, c.tp + c.fn, "recall"); }

double precision(const ConfusionMatrix& c) { return safe_div(c.tp, c.tp + c.fp, "precision"); }

double accuracy(const ConfusionMatrix& c) { return safe_div(c.tp + c.tn, c.total(), "accuracy"); }

double f1(const ConfusionMatrix& c) {
    const double p = precision(c);
    const double r = recall(c);
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

double log_loss(std::span<const int> labels, std::span<const double> probabilities) {
    if (labels.size() != probabilities.size()) throw std::invalid_argument("log_loss: length mismatch");
    if (labels.empty()) throw std::invalid_argument("log_loss: empty input");
    constexpr double kClip = 1e-15;
    double acc = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double p = std::clamp(probabilities[i], kClip, 1.0 - kClip);
        acc += labels[i] == 1 ? std::log(p) : std::log(1.0 - p);
    }
    return -acc / static_cast<double>(labels.size());
}

double auc(std::span<const int> labels, std::span<const double> scores) {
    if (labels.size() != scores.size()) throw std::invalid_argument("auc: length mismatch");
    std::int64_t n_pos = 0;
    for (const int y : labels) n_pos += (y == 1);
    const std::int64_t n_neg = static_cast<std::int64_t>(labels.size()) - n_pos;
    if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("auc: needs both classes");

    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // rank-sum with midranks over tied scores
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[order[k]] == 1) pos_rank_sum += midrank;
        }
        i = j + 1;
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

std::string EvaluationReport::csv_header() {
    return "model,feature_set,fold,tp,fp,tn,fn,accuracy,precision,recall,f1,log_loss,auc";
}

std::string EvaluationReport::csv_row() const {
    std::ostringstream out;
    out.precision(17);
    out << model << ',' << feature_set << ',' << fold << ',' << confusion.tp << ',' << confusion.fp << ','
        << confusion.tn << ',' << confusion.fn << ',' << accuracy << ',' << precision << ',' << recall << ',' << f1
        << ',' << log_loss << ',' << auc;
    return out.str();
}

nlohmann::json EvaluationReport::to_json() const {
    return nlohmann::json{{"model", model},
                          {"feature_set", feature_set},
                          {"fold", fold},
                          {"tp", confusion.tp},
                          {"fp", confusion.fp},
                          {"tn", confusion.tn},
                          {"fn", confusion.fn},
                          {"accuracy", accuracy},
                          {"precision", precision},
                          {"recall", recall},
                          {"f1", f1},
                          {"log_loss", log_loss},
                          {"auc", auc}};
}

EvaluationReport evaluate(std::span<const int> labels, std::span<const double> probabilities,
                          const std::string& model, const std::string& feature_set, int fold) {
    std::vector<int> predictions(probabilities.size());
    for (std::size_t i = 0; i < probabilities.size(); ++i) predictions[i] = probabilities[i] >= 0.5 ? 1 : 0;

    EvaluationReport r;
    r.model = model;
    r.feature_set = feature_set;
    r.fold = fold;
    r.confusion = confusion(labels, predictions);
    r.accuracy = accuracy(r.confusion);
    r.precision = precision(r.confusion);
    r.recall = recall(r.confusion);
    r.f1 = f1(r.confusion);
    r.log_loss = log_loss(labels, probabilities);

    bool both_classes = false;
    for (std::size_t i = 1; i < labels.size(); ++i) {
        if (labels[i] != labels[0]) {
            both_classes = true;
            break;
        }
    }
    r.auc = both_classes ? auc(labels, probabilities) : 0.0;
    return r;
}

}  // namespace urldet
