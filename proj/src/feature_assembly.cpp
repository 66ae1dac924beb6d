#include "urldet/feature_assembly.hpp"

#include <fstream>

#include "urldet/base_features.hpp"

namespace urldet {

Eigen::MatrixXd Scaler::transform(const Eigen::MatrixXd& rows) const {
    if (rows.cols() != mean.size()) throw std::invalid_argument("scaler: column count mismatch");
    return (rows.rowwise() - mean.transpose()).array().rowwise() / std.transpose().array();
}

FeatureVector FeatureMatrix::row(Eigen::Index i) const {
    FeatureVector v;
    v.set_id = set_id;
    v.names = names;
    v.values.assign(values.row(i).begin(), values.row(i).end());
    return v;
}

int FeatureMatrix::column_of(const std::string& feature) const {
    for (std::size_t j = 0; j < names.size(); ++j) {
        if (names[j] == feature) return static_cast<int>(j);
    }
    return -1;
}

FeatureMatrix FeatureMatrix::subset(std::span<const int> indices) const {
    FeatureMatrix out;
    out.set_id = set_id;
    out.names = names;
    out.scaler = scaler;
    out.values.resize(static_cast<Eigen::Index>(indices.size()), values.cols());
    out.labels.reserve(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        out.values.row(static_cast<Eigen::Index>(i)) = values.row(indices[i]);
        out.labels.push_back(labels[indices[i]]);
    }
    return out;
}

FeatureMatrix assemble(std::span<const DomainRecord> records, FeatureSetId set_id, const RatioTables* tables,
                       double epsilon, double entropy_log_base) {
    if (needs_ratio_tables(set_id) && tables == nullptr) {
        throw ConfigError("feature set " + to_string(set_id) + " requires ratio tables");
    }

    FeatureMatrix m;
    m.set_id = set_id;
    m.names = feature_names(set_id);
    m.values.resize(static_cast<Eigen::Index>(records.size()), static_cast<Eigen::Index>(m.names.size()));
    m.labels.reserve(records.size());

    const bool base_part = set_id == FeatureSetId::B || set_id == FeatureSetId::BTCP;
    const bool robust_part = set_id == FeatureSetId::BR || set_id == FeatureSetId::BRTCP;
    const bool novel_part = needs_ratio_tables(set_id);

    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        Eigen::Index col = 0;
        auto put = [&](double v) { m.values(static_cast<Eigen::Index>(i), col++) = v; };

        if (base_part) {
            const auto base = extract_base(r, entropy_log_base);
            for (const double v : base.values()) put(v);
        } else if (robust_part) {
            put(max_consecutive(r.domain));
            put(ttl_mean(r.dns));
            if (r.whois) {
                put(lifetime_years(*r.whois));
                put(active_years(*r.whois));
            } else {
                put(0.0);
                put(0.0);
            }
        }
        if (novel_part) {
            const auto novel = extract_novel(r, tables->countries, tables->asns, epsilon);
            put(novel.ssl_remaining);
            put(novel.ccr);
            put(novel.car);
            put(static_cast<double>(novel.pdns_changes));
        }
        m.labels.push_back(label_to_int(r.label));
    }
    return m;
}

Scaler fit_scaler(const Eigen::MatrixXd& rows) {
    Scaler s;
    const auto n = static_cast<double>(rows.rows());
    s.mean = rows.colwise().mean();
    if (rows.rows() <= 1) {
        s.std = Eigen::VectorXd::Ones(rows.cols());
        return s;
    }
    const Eigen::MatrixXd centered = rows.rowwise() - s.mean.transpose();
    s.std = (centered.array().square().colwise().sum() / n).sqrt().transpose();
    s.std = s.std.cwiseMax(Scaler::kStdFloor);
    return s;
}

FeatureMatrix apply_scaler(const FeatureMatrix& m, const Scaler& scaler) {
    FeatureMatrix out = m;
    out.values = scaler.transform(m.values);
    out.scaler = scaler;
    return out;
}

void write_matrix_csv(const FeatureMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    for (const auto& name : m.names) out << name << ',';
    out << "label\n";
    out.precision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << m.values(i, j) << ',';
        out << m.labels[static_cast<std::size_t>(i)] << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace urldet
