#include "urldet/models/common.hpp"

#include <fstream>

#include "urldet/models/ann.hpp"
#include "urldet/models/elm.hpp"
#include "urldet/models/logistic.hpp"
#include "urldet/models/svm.hpp"

namespace urldet {

namespace {
constexpr int kModelFormatVersion = 1;

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    const auto rows = j.get<std::vector<std::vector<double>>>();
    if (rows.empty()) return {};
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t k = 0; k < rows[i].size(); ++k) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
        }
    }
    return m;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void require_both_classes(const std::vector<int>& labels, const char* who) {
    if (labels.empty()) throw DataError(std::string(who) + ": empty training set");
    bool has0 = false, has1 = false;
    for (const int y : labels) (y == 1 ? has1 : has0) = true;
    if (!has0 || !has1) throw DataError(std::string(who) + ": degenerate training set with a single class");
}

Eigen::VectorXd Classifier::predict_proba(const Eigen::MatrixXd& raw_rows) const {
    if (scaler_ && raw_rows.cols() != scaler_->mean.size()) {
        throw std::invalid_argument("predict: row width does not match the model's feature set");
    }
    const Eigen::MatrixXd scaled = scaler_ ? scaler_->transform(raw_rows) : raw_rows;
    return proba_scaled(scaled);
}

std::vector<int> Classifier::predict(const Eigen::MatrixXd& raw_rows) const {
    const Eigen::VectorXd p = predict_proba(raw_rows);
    std::vector<int> out(static_cast<std::size_t>(p.size()));
    for (Eigen::Index i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(i)] = p[i] >= 0.5 ? 1 : 0;
    return out;
}

nlohmann::json Classifier::to_json() const {
    nlohmann::json j{{"format", "urldet.model"},
                     {"version", kModelFormatVersion},
                     {"kind", to_string(kind_)},
                     {"feature_set", to_string(set_id_)},
                     {"params", params_to_json()}};
    if (scaler_) {
        j["scaler"] = {{"mean", std::vector<double>(scaler_->mean.begin(), scaler_->mean.end())},
                       {"std", std::vector<double>(scaler_->std.begin(), scaler_->std.end())}};
    }
    j["meta"] = {{"seed", meta_.seed}, {"iterations", meta_.iterations}, {"fold", meta_.fold_id}};
    return j;
}

std::unique_ptr<Classifier> Classifier::from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "urldet.model") throw IoError("not a model file");
    if (j.value("version", 0) != kModelFormatVersion) throw IoError("model schema version mismatch");

    const ModelKind kind = model_kind_from_string(j.at("kind").get<std::string>());
    const FeatureSetId set_id = feature_set_from_string(j.at("feature_set").get<std::string>());
    const auto& p = j.at("params");

    std::unique_ptr<Classifier> model;
    switch (kind) {
        case ModelKind::LR:
            model = std::make_unique<LogisticModel>(set_id, p.at("degree").get<int>(),
                                                    vector_from_json(p.at("weights")));
            break;
        case ModelKind::SVM:
            model = std::make_unique<SvmModel>(set_id, p.at("gamma").get<double>(),
                                               matrix_from_json(p.at("support_vectors")),
                                               vector_from_json(p.at("alpha_y")), p.at("bias").get<double>(),
                                               p.at("platt_a").get<double>(), p.at("platt_b").get<double>());
            break;
        case ModelKind::ELM: {
            const Eigen::VectorXd bias = vector_from_json(p.at("input_bias"));
            model = std::make_unique<ElmModel>(set_id, matrix_from_json(p.at("input_weights")), bias.transpose(),
                                               vector_from_json(p.at("output_weights")));
            break;
        }
        case ModelKind::ANN: {
            const auto& layers = p.at("layers");
            std::vector<Eigen::MatrixXd> w;
            std::vector<Eigen::RowVectorXd> b;
            for (const auto& layer : layers) {
                w.push_back(matrix_from_json(layer.at("w")));
                const Eigen::VectorXd bias = vector_from_json(layer.at("b"));
                b.push_back(bias.transpose());
            }
            std::vector<int> hidden;
            for (std::size_t l = 0; l + 1 < w.size(); ++l) hidden.push_back(static_cast<int>(w[l].cols()));
            AnnNetwork net(static_cast<int>(w.front().rows()), hidden, p.at("leaky_slope").get<double>());
            net.weights() = std::move(w);
            net.biases() = std::move(b);
            model = std::make_unique<AnnModel>(set_id, std::move(net));
            break;
        }
    }

    if (j.contains("scaler")) {
        Scaler s;
        s.mean = vector_from_json(j.at("scaler").at("mean"));
        s.std = vector_from_json(j.at("scaler").at("std"));
        model->set_scaler(std::move(s));
    }
    if (j.contains("meta")) {
        model->meta().seed = j.at("meta").value("seed", std::uint64_t{0});
        model->meta().iterations = j.at("meta").value("iterations", 0);
        model->meta().fold_id = j.at("meta").value("fold", -1);
    }
    return model;
}

void save_model(const Classifier& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << model.to_json().dump() << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

std::unique_ptr<Classifier> load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed model file " + path.string() + ": " + e.what());
    }
    return Classifier::from_json(j);
}

}  // namespace urldet
