#include "urldet/models/cross_validation.hpp"

#include <atomic>
#include <numeric>
#include <thread>

#include "urldet/rng.hpp"

namespace urldet {

FoldPlan kfold(std::span<const int> labels, int k, std::uint64_t seed) {
    const int n = static_cast<int>(labels.size());
    if (k < 2 || k > n) throw std::invalid_argument("kfold: need 2 <= k <= rows");

    std::vector<int> negatives, positives;
    for (int i = 0; i < n; ++i) (labels[i] == 1 ? positives : negatives).push_back(i);

    Rng rng(seed);
    rng.shuffle(negatives);
    rng.shuffle(positives);

    // one continuous round-robin over both class blocks keeps totals and
    // per-class counts within one of each other across folds
    FoldPlan plan{k, std::vector<int>(static_cast<std::size_t>(n), -1)};
    int next_fold = 0;
    for (const auto* block : {&negatives, &positives}) {
        for (const int idx : *block) {
            plan.assignments[static_cast<std::size_t>(idx)] = next_fold;
            next_fold = (next_fold + 1) % k;
        }
    }
    return plan;
}

std::unique_ptr<Classifier> train_model(ModelKind kind, const FeatureMatrix& train, const TrainConfig& cfg) {
    switch (kind) {
        case ModelKind::LR: return train_lr(train, cfg.lr);
        case ModelKind::SVM: return train_svm(train, cfg.svm);
        case ModelKind::ELM: return train_elm(train, cfg.elm);
        case ModelKind::ANN: return train_ann(train, cfg.ann);
    }
    throw ConfigError("unknown model kind");
}

CrossValidationResult cross_validate(const FeatureMatrix& matrix, ModelKind kind, const TrainConfig& cfg, int k,
                                     std::uint64_t seed, int threads) {
    const FoldPlan plan = kfold(matrix.labels, k, seed);

    CrossValidationResult result;
    result.fold_reports.resize(static_cast<std::size_t>(k));
    result.pooled_probabilities.assign(matrix.labels.size(), 0.0);
    result.labels = matrix.labels;

    const auto run_fold = [&](int fold) {
        std::vector<int> train_idx, test_idx;
        for (std::size_t i = 0; i < plan.assignments.size(); ++i) {
            (plan.assignments[i] == fold ? test_idx : train_idx).push_back(static_cast<int>(i));
        }
        const FeatureMatrix train = matrix.subset(train_idx);
        const FeatureMatrix test = matrix.subset(test_idx);

        TrainConfig fold_cfg = cfg;
        fold_cfg.elm.seed = mix_seed(seed, 2 * static_cast<std::uint64_t>(fold));
        fold_cfg.ann.seed = mix_seed(seed, 2 * static_cast<std::uint64_t>(fold) + 1);

        const auto model = train_model(kind, train, fold_cfg);
        model->meta().fold_id = fold;

        const Eigen::VectorXd proba = model->predict_proba(test.values);
        for (std::size_t i = 0; i < test_idx.size(); ++i) {
            result.pooled_probabilities[static_cast<std::size_t>(test_idx[i])] = proba[static_cast<Eigen::Index>(i)];
        }
        result.fold_reports[static_cast<std::size_t>(fold)] =
            evaluate(test.labels, std::span<const double>(proba.data(), static_cast<std::size_t>(proba.size())),
                     to_string(kind), to_string(matrix.set_id), fold);
    };

    if (threads <= 1) {
        for (int fold = 0; fold < k; ++fold) run_fold(fold);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        const int workers = std::min(threads, k);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int fold = next.fetch_add(1); fold < k; fold = next.fetch_add(1)) run_fold(fold);
            });
        }
        for (auto& t : pool) t.join();
    }

    result.pooled = evaluate(result.labels, result.pooled_probabilities, to_string(kind), to_string(matrix.set_id), -1);
    return result;
}

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::LR: return "lr";
        case ModelKind::SVM: return "svm";
        case ModelKind::ELM: return "elm";
        case ModelKind::ANN: return "ann";
    }
    throw ConfigError("unknown model kind");
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "lr") return ModelKind::LR;
    if (name == "svm") return ModelKind::SVM;
    if (name == "elm") return ModelKind::ELM;
    if (name == "ann") return ModelKind::ANN;
    throw ConfigError("unknown model kind: " + name);
}

}  // namespace urldet
