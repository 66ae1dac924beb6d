// Acceptance suite: one pass/fail line per criterion, exit 0 only when every
// requested criterion holds.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bayes_oracle.hpp"
#include "test_helpers.hpp"
#include "urldet/base_features.hpp"
#include "urldet/data_io.hpp"
#include "urldet/generator.hpp"
#include "urldet/metrics.hpp"
#include "urldet/models/cross_validation.hpp"
#include "urldet/models/poly.hpp"
#include "urldet/novel_features.hpp"
#include "urldet/robustness.hpp"

using namespace urldet;
using Clock = std::chrono::steady_clock;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// criterion 1: worked-example exactness
// ---------------------------------------------------------------------------
Check criterion1() {
    Check c;
    c.require(domain_length("ariel-cyber.co.il") == 17, "domain_length");
    c.require(max_consecutive("aabbbcccc.com") == 4, "max_consecutive");

    const std::vector<DnsSnapshot> ip_example = {{"1.1.1.1", "australia", 60, 0},
                                                 {"1.1.1.1", "australia", 60, 1},
                                                 {"2.2.2.2", "france", 60, 2}};
    c.require(ip_count(ip_example) == 2, "ip_count");
    c.require(geo_count(ip_example) == 2, "geo_count");

    std::vector<DnsSnapshot> ttl_example;
    for (int i = 0; i < 20; ++i) ttl_example.push_back({"1.1.1.1", "us", 60, i});
    for (int i = 0; i < 10; ++i) ttl_example.push_back({"1.1.1.1", "us", 1200, i});
    c.require(ttl_mean(ttl_example) == 440.0, "ttl_mean == 440 exactly");
    c.require(std::abs(ttl_std(ttl_example) - 537.401) <= 1e-3, "ttl_std 537.401 +- 1e-3");

    const WhoisInfo whois{Date{2015, 5, 14}, Date{2015, 5, 14}, Date{2020, 5, 14}};
    c.require(std::abs(lifetime_years(whois) - 5.0) <= 0.01, "lifetime 5.0 +- 0.01");

    c.require(std::abs(domain_entropy("ddcd.cc") - 3.54) <= 0.01, "entropy(ddcd.cc) 3.54 +- 0.01");
    return c;
}

// ---------------------------------------------------------------------------
// criterion 2: metric oracle equivalence
// ---------------------------------------------------------------------------
ConfusionMatrix brute_confusion(const std::vector<int>& y, const std::vector<int>& p) {
    ConfusionMatrix c;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == 1 && p[i] == 1) c.tp++;
        if (y[i] == 1 && p[i] == 0) c.fn++;
        if (y[i] == 0 && p[i] == 1) c.fp++;
        if (y[i] == 0 && p[i] == 0) c.tn++;
    }
    return c;
}

double brute_log_loss(const std::vector<int>& y, const std::vector<double>& p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double q = std::min(std::max(p[i], 1e-15), 1.0 - 1e-15);
        acc += y[i] * std::log(q) + (1 - y[i]) * std::log(1.0 - q);
    }
    return -acc / static_cast<double>(y.size());
}

double brute_auc(const std::vector<int>& y, const std::vector<double>& s) {
    double wins = 0.0;
    long pairs = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 1) continue;
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (y[j] != 0) continue;
            ++pairs;
            wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
        }
    }
    return wins / static_cast<double>(pairs);
}

Check criterion2() {
    Check c;
    Rng rng(2002);
    for (int trial = 0; trial < 1000 && c.ok; ++trial) {
        const auto n = rng.uniform_int(1, 500);
        std::vector<int> y, pred;
        std::vector<double> proba;
        bool pos = false, neg = false;
        for (int i = 0; i < n; ++i) {
            y.push_back(static_cast<int>(rng.uniform_int(0, 1)));
            pred.push_back(static_cast<int>(rng.uniform_int(0, 1)));
            proba.push_back(rng.uniform_int(0, 40) / 40.0);  // ties on purpose
            pos |= y.back() == 1;
            neg |= y.back() == 0;
        }
        const auto lib = confusion(y, pred);
        const auto ref = brute_confusion(y, pred);
        c.require(lib == ref, "confusion mismatch");

        const auto r = [&](std::int64_t num, std::int64_t den) {
            return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
        };
        c.require(std::abs(recall(lib) - r(ref.tp, ref.tp + ref.fn)) <= 1e-12, "recall");
        c.require(std::abs(precision(lib) - r(ref.tp, ref.tp + ref.fp)) <= 1e-12, "precision");
        c.require(std::abs(accuracy(lib) - r(ref.tp + ref.tn, ref.total())) <= 1e-12, "accuracy");
        const double pr = r(ref.tp, ref.tp + ref.fp);
        const double rc = r(ref.tp, ref.tp + ref.fn);
        const double ref_f1 = pr + rc == 0.0 ? 0.0 : 2.0 * pr * rc / (pr + rc);
        c.require(std::abs(f1(lib) - ref_f1) <= 1e-12, "f1");
        c.require(std::abs(log_loss(y, proba) - brute_log_loss(y, proba)) <= 1e-12, "log_loss");
        if (pos && neg) c.require(std::abs(auc(y, proba) - brute_auc(y, proba)) <= 1e-12, "auc");
    }
    return c;
}

// ---------------------------------------------------------------------------
// criterion 3: Algorithm 1 contract
// ---------------------------------------------------------------------------
Check criterion3() {
    Check c;
    RatioTable table;
    table.kind = RatioKind::Countries;
    table.threshold = 1;
    table.max_occurrences = 100;
    const auto add = [&](const std::string& item, std::int64_t benign, std::int64_t malicious) {
        RatioEntry e{benign, malicious, 0, 0};
        e.benign_ratio = static_cast<double>(benign) / static_cast<double>(benign + malicious);
        e.norm = static_cast<double>(benign + malicious) / 100.0;
        table.entries[item] = e;
    };
    add("a", 90, 10);
    add("b", 30, 30);
    add("c", 1, 39);

    c.require(communication_rank({}, table) == 0.0, "empty list must rank 0");

    const std::vector<std::string> unseen = {"zz"};
    c.require(std::abs(communication_rank(unseen, table, 1e-6) - 0.41504) <= 1e-4,
              "single unseen item 0.41504 +- 1e-4");

    const std::vector<std::string> vocab = {"a", "b", "c", "zz", "other"};
    Rng rng(2003);
    for (int trial = 0; trial < 1000 && c.ok; ++trial) {
        std::vector<std::string> left, right;
        const auto nl = rng.uniform_int(0, 10);
        const auto nr = rng.uniform_int(0, 10);
        for (int i = 0; i < nl; ++i) left.push_back(vocab[static_cast<std::size_t>(rng.uniform_int(0, 4))]);
        for (int i = 0; i < nr; ++i) right.push_back(vocab[static_cast<std::size_t>(rng.uniform_int(0, 4))]);

        std::vector<std::string> both = left;
        both.insert(both.end(), right.begin(), right.end());

        // direct-summation oracle
        double expected = 0.0;
        for (const auto& item : both) {
            double ratio = 0.75, norm = 1.0;
            if (const auto it = table.entries.find(item); it != table.entries.end()) {
                ratio = it->second.benign_ratio;
                norm = it->second.norm;
            }
            expected += std::log(ratio + 1e-6) / std::log(0.5) / norm;
        }
        c.require(std::abs(communication_rank(both, table) - expected) <= 1e-9 * std::max(1.0, std::abs(expected)),
                  "oracle mismatch");
        c.require(std::abs(communication_rank(both, table) -
                           (communication_rank(left, table) + communication_rank(right, table))) <= 1e-9,
                  "additivity");
        rng.shuffle(both);
        c.require(std::abs(communication_rank(both, table) - expected) <= 1e-9 * std::max(1.0, std::abs(expected)),
                  "permutation invariance");
    }
    return c;
}

// ---------------------------------------------------------------------------
// criterion 4: ratio-table properties
// ---------------------------------------------------------------------------
Check criterion4() {
    Check c;
    Rng rng(2004);
    const std::vector<std::string> vocab = {"p", "q", "r", "s", "t", "u"};
    std::vector<DomainRecord> records;
    for (int i = 0; i < 400; ++i) {
        DomainRecord r = testing::sample_record();
        r.label = rng.uniform() < 0.3 ? Label::Malicious : Label::Benign;
        std::vector<std::string> countries;
        const auto k = rng.uniform_int(0, 8);
        for (int j = 0; j < k; ++j) countries.push_back(vocab[static_cast<std::size_t>(rng.uniform_int(0, 5))]);
        r.communication = CommunicationProfile{std::move(countries), {}};
        records.push_back(std::move(r));
    }

    const auto table = build_table(records, RatioKind::Countries, 5);
    c.require(!table.entries.empty(), "table must retain entries");
    for (const auto& [item, e] : table.entries) {
        const double malicious_ratio = static_cast<double>(e.malicious_count) / static_cast<double>(e.total());
        c.require(std::abs(e.benign_ratio + malicious_ratio - 1.0) <= 1e-12, "ratios must sum to one");
        c.require(e.total() >= table.threshold, "threshold exclusion");
    }

    auto swapped_records = records;
    for (auto& r : swapped_records) r.label = r.label == Label::Benign ? Label::Malicious : Label::Benign;
    const auto swapped = build_table(swapped_records, RatioKind::Countries, 5);
    c.require(swapped.entries.size() == table.entries.size(), "label swap keeps the same items");
    for (const auto& [item, e] : table.entries) {
        c.require(std::abs(swapped.entries.at(item).benign_ratio - (1.0 - e.benign_ratio)) <= 1e-12,
                  "label swap complements ratios");
    }

    // exact threshold boundary
    std::vector<DomainRecord> boundary;
    for (int i = 0; i < 4; ++i) {
        DomainRecord r = testing::sample_record();
        r.label = Label::Benign;
        r.communication = CommunicationProfile{{"below"}, {}};
        boundary.push_back(r);
        r.communication = CommunicationProfile{{"at", "at", "at", "at", "at"}, {}};
        boundary.push_back(r);
    }
    const auto edge = build_table(boundary, RatioKind::Countries, 5);
    c.require(edge.entries.count("below") == 0, "below-threshold item excluded");
    c.require(edge.entries.count("at") == 1, "at-threshold item retained");

    const auto path = std::filesystem::temp_directory_path() / "urldet_acceptance_table.tsv";
    save_table(table, path);
    const auto loaded = load_table(path);
    c.require(serialize_table(loaded) == serialize_table(table), "save/load byte-identical");
    std::filesystem::remove(path);
    return c;
}

// ---------------------------------------------------------------------------
// criterion 5: numerical model checks
// ---------------------------------------------------------------------------
FeatureMatrix toy_moons(int n, std::uint64_t seed) {
    Rng rng(seed);
    FeatureMatrix m;
    m.names = {"x", "y"};
    m.values.resize(n, 2);
    for (int i = 0; i < n; ++i) {
        const double t = rng.uniform() * 3.14159265358979;
        if (i % 2 == 0) {
            m.values(i, 0) = std::cos(t) + rng.normal(0.0, 0.2);
            m.values(i, 1) = std::sin(t) + rng.normal(0.0, 0.2);
            m.labels.push_back(0);
        } else {
            m.values(i, 0) = 1.0 - std::cos(t) + rng.normal(0.0, 0.2);
            m.values(i, 1) = 0.5 - std::sin(t) + rng.normal(0.0, 0.2);
            m.labels.push_back(1);
        }
    }
    return m;
}

Check criterion5() {
    Check c;

    // ELM ridge residual against the normal equations
    {
        const auto m = toy_moons(240, 3001);
        ElmConfig cfg;
        cfg.hidden_width = 96;
        const auto model = train_elm(m, cfg);
        const auto* elm = dynamic_cast<const ElmModel*>(model.get());
        const Eigen::MatrixXd h = elm->hidden(model->scaler()->transform(m.values));
        const Eigen::VectorXd y = labels_to_vector(m.labels);
        Eigen::MatrixXd gram = h.transpose() * h;
        gram.diagonal().array() += cfg.ridge;
        const double residual = (gram * elm->output_weights() - h.transpose() * y).norm();
        c.require(residual <= 1e-8, "elm ridge residual " + format_double(residual));
    }

    // ANN gradients against central finite differences, ten random nets
    {
        Rng data_rng(3002);
        double worst = 0.0;
        for (int net_id = 0; net_id < 10; ++net_id) {
            AnnNetwork net(3, {4, 4, 4}, 0.01);
            Rng init(3100 + static_cast<std::uint64_t>(net_id));
            net.init_random(init);
            Eigen::MatrixXd x(10, 3);
            Eigen::VectorXd y(10);
            for (Eigen::Index i = 0; i < 10; ++i) {
                for (Eigen::Index j = 0; j < 3; ++j) x(i, j) = data_rng.normal(0.0, 1.0);
                y[i] = data_rng.uniform() < 0.5 ? 0.0 : 1.0;
            }
            const auto [loss, grads] = net.loss_and_gradients(x, y);
            (void)loss;
            const double h = 1e-6;
            const auto probe = [&](double& param, double analytic) {
                const double saved = param;
                param = saved + h;
                const double up = net.loss(x, y);
                param = saved - h;
                const double down = net.loss(x, y);
                param = saved;
                const double numeric = (up - down) / (2.0 * h);
                worst = std::max(worst, std::abs(numeric - analytic) /
                                            std::max({1.0, std::abs(numeric), std::abs(analytic)}));
            };
            for (std::size_t l = 0; l < net.weights().size(); ++l) {
                for (Eigen::Index r = 0; r < net.weights()[l].rows(); ++r) {
                    for (Eigen::Index k = 0; k < net.weights()[l].cols(); ++k) probe(net.weights()[l](r, k), grads.w[l](r, k));
                }
                for (Eigen::Index k = 0; k < net.biases()[l].size(); ++k) probe(net.biases()[l][k], grads.b[l][k]);
            }
        }
        c.require(worst <= 1e-4, "ann gradient max relative error " + format_double(worst));
    }

    // SVM KKT residuals on every support vector
    {
        const auto m = toy_moons(200, 3003);
        SvmConfig cfg;
        Scaler scaler;
        scaler.mean = m.values.colwise().minCoeff().transpose();
        scaler.std = (m.values.colwise().maxCoeff().transpose() - scaler.mean).cwiseMax(1e-9);
        const Eigen::MatrixXd xs = scaler.transform(m.values);
        Eigen::VectorXd y(xs.rows());
        for (Eigen::Index i = 0; i < xs.rows(); ++i) y[i] = m.labels[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
        const SmoResult smo = solve_smo(xs, y, cfg.gamma, cfg.c, cfg.tol, cfg.max_iterations);

        double worst = 0.0;
        int support_vectors = 0;
        for (Eigen::Index i = 0; i < xs.rows(); ++i) {
            if (smo.alpha[i] <= 1e-12) continue;
            ++support_vectors;
            double f = smo.bias;
            for (Eigen::Index j = 0; j < xs.rows(); ++j) {
                if (smo.alpha[j] > 0.0) f += smo.alpha[j] * y[j] * rbf_kernel(xs.row(j), xs.row(i), cfg.gamma);
            }
            const double margin = y[i] * f;
            const double violation = smo.alpha[i] < cfg.c - 1e-12 ? std::abs(margin - 1.0)
                                                                  : std::max(0.0, margin - 1.0);
            worst = std::max(worst, violation);
        }
        c.require(support_vectors > 0, "svm found no support vectors");
        c.require(worst <= 1e-3, "svm kkt residual " + format_double(worst));
    }

    // monomial counts
    for (int n = 1; n <= 6 && c.ok; ++n) {
        for (int d = 1; d <= 3; ++d) {
            double binom = 1.0;
            for (int i = 1; i <= d; ++i) binom = binom * (n + i) / i;
            c.require(poly_width(n, d) == static_cast<std::size_t>(std::llround(binom)), "poly width C(n+d,d)");
            c.require(monomial_exponents(n, d).size() == poly_width(n, d), "monomial enumeration count");
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// criterion 6: k-fold / split partition properties
// ---------------------------------------------------------------------------
Check criterion6() {
    Check c;
    Rng rng(2006);
    for (int trial = 0; trial < 40 && c.ok; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(30, 400));
        const int pos = static_cast<int>(rng.uniform_int(8, n - 8));
        std::vector<int> labels(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < pos; ++i) labels[static_cast<std::size_t>(i)] = 1;
        rng.shuffle(labels);
        const int k = static_cast<int>(rng.uniform_int(2, 10));

        const auto plan = kfold(labels, k, static_cast<std::uint64_t>(trial));
        std::vector<int> sizes(static_cast<std::size_t>(k), 0);
        std::vector<int> positives(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            c.require(plan.assignments[i] >= 0 && plan.assignments[i] < k, "fold index in range");
            sizes[static_cast<std::size_t>(plan.assignments[i])]++;
            positives[static_cast<std::size_t>(plan.assignments[i])] += labels[i];
        }
        const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
        c.require(*hi - *lo <= 1, "fold sizes differ by at most one");
        for (int f = 0; f < k; ++f) {
            const double share = static_cast<double>(pos) * sizes[static_cast<std::size_t>(f)] / n;
            c.require(std::abs(positives[static_cast<std::size_t>(f)] - share) <= 1.0 + 1e-9,
                      "per-fold class ratio within one sample");
        }
        c.require(kfold(labels, k, static_cast<std::uint64_t>(trial)).assignments == plan.assignments,
                  "kfold deterministic per seed");
    }

    GeneratorSpec spec;
    spec.n_records = 500;
    spec.seed = 2606;
    const auto records = generate(spec);
    const auto a = split(records, 0.75, 99);
    const auto b = split(records, 0.75, 99);
    c.require(a.ratio_pool == b.ratio_pool && a.model_pool == b.model_pool && a.train == b.train && a.test == b.test,
              "split deterministic per seed");
    std::set<int> seen(a.ratio_pool.begin(), a.ratio_pool.end());
    bool disjoint = true;
    for (const int i : a.model_pool) disjoint &= seen.insert(i).second;
    c.require(disjoint, "pools disjoint");
    c.require(seen.size() == records.size(), "pools exhaustive");
    return c;
}

// ---------------------------------------------------------------------------
// criteria 7 and 8: end-to-end synthetic reproduction + determinism
// ---------------------------------------------------------------------------
struct PipelineArtifacts {
    std::string report_csv;     // all fold + pooled reports
    std::string sweep_csv;      // both sweep curves
    std::string dataset_bytes;  // serialized corpus
    std::vector<EvaluationReport> pooled;  // per set/kind, in run order
    SweepResult b_sweep;
    SweepResult br_sweep;
    bool br_predictions_identical = false;
};

constexpr std::uint64_t kE2eGeneratorSeed = 11;
constexpr std::uint64_t kE2eSplitSeed = 12;
constexpr std::uint64_t kE2eCvSeed = 42;

PipelineArtifacts run_pipeline() {
    GeneratorSpec spec;
    spec.seed = kE2eGeneratorSeed;
    const auto records = generate(spec);

    PipelineArtifacts out;
    {
        std::ostringstream buffer;
        buffer << nlohmann::json{{"format", "urldet.records"}, {"version", 1}}.dump() << '\n';
        for (const auto& r : records) buffer << record_to_json(r).dump() << '\n';
        out.dataset_bytes = buffer.str();
    }

    const auto ds = split(records, 0.75, kE2eSplitSeed);
    std::vector<DomainRecord> ratio_pool, model_pool;
    for (const int i : ds.ratio_pool) ratio_pool.push_back(records[static_cast<std::size_t>(i)]);
    for (const int i : ds.model_pool) model_pool.push_back(records[static_cast<std::size_t>(i)]);

    const RatioTables tables{build_table(ratio_pool, RatioKind::Countries, kDefaultRatioThreshold),
                             build_table(ratio_pool, RatioKind::Asns, kDefaultRatioThreshold)};

    TrainConfig cfg;

    std::ostringstream reports;
    reports << EvaluationReport::csv_header() << '\n';
    for (const auto set_id : {FeatureSetId::BR, FeatureSetId::BRTCP}) {
        const auto matrix = assemble(model_pool, set_id, &tables);
        for (const auto kind : {ModelKind::LR, ModelKind::SVM, ModelKind::ELM, ModelKind::ANN}) {
            const auto cv = cross_validate(matrix, kind, cfg, 10, kE2eCvSeed, 1);
            for (const auto& r : cv.fold_reports) reports << r.csv_row() << '\n';
            reports << cv.pooled.csv_row() << '\n';
            out.pooled.push_back(cv.pooled);
        }
    }
    out.report_csv = reports.str();

    // robustness reproduction: one ANN per feature set over the model pool
    const auto sweep_one = [&](FeatureSetId set_id) {
        const auto matrix = assemble(model_pool, set_id, needs_ratio_tables(set_id) ? &tables : nullptr);
        TrainConfig sweep_cfg = cfg;
        sweep_cfg.ann.seed = 5;
        const auto model = train_ann(matrix, sweep_cfg.ann);
        std::vector<int> malicious_idx;
        for (std::size_t i = 0; i < matrix.labels.size(); ++i) {
            if (matrix.labels[i] == 1) malicious_idx.push_back(static_cast<int>(i));
        }
        const auto malicious = matrix.subset(malicious_idx);
        auto result = sweep(*model, malicious, default_sweep("ttl_std"));

        if (set_id == FeatureSetId::BR) {
            // the manipulated feature is absent from BR, so every grid value
            // must reproduce the baseline predictions bit for bit
            const auto baseline = model->predict(malicious.values);
            bool identical = true;
            Eigen::MatrixXd manipulated = malicious.values;
            for (const double v : result.values) {
                (void)v;  // no column to overwrite; predictions recomputed anyway
                identical &= model->predict(manipulated) == baseline;
            }
            return std::pair{result, identical};
        }
        return std::pair{result, true};
    };

    auto [b_sweep, b_identical] = sweep_one(FeatureSetId::B);
    (void)b_identical;
    auto [br_sweep, br_identical] = sweep_one(FeatureSetId::BR);
    out.b_sweep = std::move(b_sweep);
    out.br_sweep = std::move(br_sweep);
    out.br_predictions_identical = br_identical;

    std::ostringstream sweeps;
    sweeps << "set,value,detection_rate\n";
    sweeps.precision(17);
    for (std::size_t i = 0; i < out.b_sweep.values.size(); ++i) {
        sweeps << "B," << out.b_sweep.values[i] << ',' << out.b_sweep.detection_rates[i] << '\n';
    }
    for (std::size_t i = 0; i < out.br_sweep.values.size(); ++i) {
        sweeps << "BR," << out.br_sweep.values[i] << ',' << out.br_sweep.detection_rates[i] << '\n';
    }
    out.sweep_csv = sweeps.str();
    return out;
}

Check criterion7(const PipelineArtifacts& artifacts) {
    Check c;

    GeneratorSpec spec;
    spec.seed = kE2eGeneratorSeed;
    const testing::BayesOracle oracle(spec);
    const double bayes_br = oracle.accuracy(FeatureSetId::BR, 400000, 7001);
    const double bayes_brtcp = oracle.accuracy(FeatureSetId::BRTCP, 400000, 7002);

    // (a) every model within five points of the Bayes reference
    for (std::size_t i = 0; i < artifacts.pooled.size(); ++i) {
        const auto& report = artifacts.pooled[i];
        const double bayes = report.feature_set == "BR" ? bayes_br : bayes_brtcp;
        c.require(std::abs(report.accuracy - bayes) <= 0.05,
                  report.model + "/" + report.feature_set + " accuracy " + format_double(report.accuracy) +
                      " vs bayes " + format_double(bayes));

        // held-out log loss must beat the best constant predictor + 0.05
        const double q = static_cast<double>(report.confusion.tp + report.confusion.fn) /
                         static_cast<double>(report.confusion.total());
        const double constant_loss = -(q * std::log(q) + (1.0 - q) * std::log(1.0 - q));
        c.require(report.log_loss <= constant_loss + 0.05,
                  report.model + "/" + report.feature_set + " log loss " + format_double(report.log_loss) +
                      " vs constant " + format_double(constant_loss));
    }

    // (b) ELM and ANN improve (or hold) F1 when the novel features join BR
    const auto pooled_of = [&](const std::string& model, const std::string& set) -> const EvaluationReport& {
        for (const auto& r : artifacts.pooled) {
            if (r.model == model && r.feature_set == set) return r;
        }
        throw std::runtime_error("missing pooled report");
    };
    c.require(pooled_of("elm", "BRTCP").f1 >= pooled_of("elm", "BR").f1,
              "elm f1 ordering " + format_double(pooled_of("elm", "BRTCP").f1) + " vs " +
                  format_double(pooled_of("elm", "BR").f1));
    c.require(pooled_of("ann", "BRTCP").f1 >= pooled_of("ann", "BR").f1,
              "ann f1 ordering " + format_double(pooled_of("ann", "BRTCP").f1) + " vs " +
                  format_double(pooled_of("ann", "BR").f1));

    // (c) manipulating ttl_std breaks the B model and cannot touch the BR one
    c.require(artifacts.b_sweep.min_rate() < 0.6 * artifacts.b_sweep.baseline_rate,
              "B-set ttl_std sweep min " + format_double(artifacts.b_sweep.min_rate()) + " vs 0.6*baseline " +
                  format_double(0.6 * artifacts.b_sweep.baseline_rate));
    c.require(artifacts.br_sweep.verdict == SweepVerdict::NotInSet, "BR sweep must report not-in-set");
    c.require(artifacts.br_predictions_identical, "BR predictions must stay bit-identical");
    for (const double rate : artifacts.br_sweep.detection_rates) {
        c.require(rate == artifacts.br_sweep.baseline_rate, "BR rates equal baseline");
    }
    return c;
}

Check criterion8(const PipelineArtifacts& first) {
    Check c;
    const PipelineArtifacts second = run_pipeline();
    c.require(second.dataset_bytes == first.dataset_bytes, "dataset bytes differ between runs");
    c.require(second.report_csv == first.report_csv, "report csv differs between runs");
    c.require(second.sweep_csv == first.sweep_csv, "sweep csv differs between runs");
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> wanted = {1, 2, 3, 4, 5, 6, 7, 8};
    for (int i = 1; i + 1 <= argc - 1; ++i) {
        if (std::string(argv[i]) == "--criteria") {
            wanted.clear();
            std::stringstream list(argv[i + 1]);
            std::string token;
            while (std::getline(list, token, ',')) wanted.insert(std::stoi(token));
        }
    }

    bool all_ok = true;
    PipelineArtifacts artifacts;
    bool have_artifacts = false;

    const auto run = [&](int id, const std::string& title, const std::function<Check()>& fn) {
        if (wanted.count(id) == 0) return;
        const auto t0 = Clock::now();
        Check c;
        try {
            c = fn();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
        std::printf("%s  criterion %d: %s  [%.2fs]%s%s\n", c.ok ? "PASS" : "FAIL", id, title.c_str(), dt,
                    c.detail.empty() ? "" : "  -- ", c.detail.c_str());
        std::fflush(stdout);
        all_ok &= c.ok;
    };

    run(1, "worked-example exactness", criterion1);
    run(2, "metric oracle equivalence", criterion2);
    run(3, "communication-rank contract", criterion3);
    run(4, "ratio-table properties", criterion4);
    run(5, "numerical model checks", criterion5);
    run(6, "k-fold and split partition properties", criterion6);
    run(7, "end-to-end synthetic reproduction", [&] {
        artifacts = run_pipeline();
        have_artifacts = true;
        return criterion7(artifacts);
    });
    run(8, "end-to-end determinism", [&] {
        if (!have_artifacts) {
            artifacts = run_pipeline();
            have_artifacts = true;
        }
        return criterion8(artifacts);
    });

    return all_ok ? 0 : 1;
}
