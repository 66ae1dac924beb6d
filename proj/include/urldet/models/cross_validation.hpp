#pragma once

#include <span>

#include "urldet/metrics.hpp"
#include "urldet/models/ann.hpp"
#include "urldet/models/elm.hpp"
#include "urldet/models/logistic.hpp"
#include "urldet/models/svm.hpp"

namespace urldet {

struct FoldPlan {
    int k = 0;
    std::vector<int> assignments;  // per-row fold index in [0, k)
};

/// Stratified fold assignment: per-class shuffles dealt round-robin so fold
/// sizes differ by at most one overall and per class.
FoldPlan kfold(std::span<const int> labels, int k, std::uint64_t seed);

struct TrainConfig {
    LrConfig lr;
    SvmConfig svm;
    ElmConfig elm;
    AnnConfig ann;
};

std::unique_ptr<Classifier> train_model(ModelKind kind, const FeatureMatrix& train, const TrainConfig& cfg = {});

struct CrossValidationResult {
    std::vector<EvaluationReport> fold_reports;
    EvaluationReport pooled;                   // fold = -1, union of test folds
    std::vector<double> pooled_probabilities;  // in original row order
    std::vector<int> labels;
};

/// One report per fold; the per-fold model standardizes on its own training
/// partition only. Seeded models get a per-fold seed derived from `seed`.
CrossValidationResult cross_validate(const FeatureMatrix& matrix, ModelKind kind, const TrainConfig& cfg = {},
                                     int k = 10, std::uint64_t seed = 1, int threads = 1);

}  // namespace urldet
