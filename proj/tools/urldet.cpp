#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "urldet/data_io.hpp"
#include "urldet/generator.hpp"
#include "urldet/metrics.hpp"
#include "urldet/models/cross_validation.hpp"
#include "urldet/robustness.hpp"

namespace fs = std::filesystem;
using namespace urldet;

namespace {

constexpr const char* kToolVersion = "1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct GlobalOptions {
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out = ".";
};

fs::path ensure_out_dir(const GlobalOptions& g) {
    fs::path dir(g.out);
    fs::create_directories(dir);
    return dir;
}

void write_manifest(const fs::path& dir, const std::string& command, nlohmann::json options) {
    options["command"] = command;
    options["tool_version"] = kToolVersion;
    options["format_versions"] = {{"records", 1}, {"ratio_table", 1}, {"model", 1}};
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    out << options.dump(2) << '\n';
}

std::vector<DomainRecord> load_dataset(const std::string& path, const fs::path& out_dir) {
    const LoadResult loaded = load_records(path);
    if (!loaded.errors.empty()) {
        const fs::path report = out_dir / "load_errors.txt";
        std::ofstream err(report, std::ios::binary);
        for (const auto& e : loaded.errors) err << "line " << e.line << ": " << e.message << '\n';
        std::cerr << loaded.errors.size() << " line(s) rejected, see " << report.string() << '\n';
    }
    if (loaded.records.empty()) throw DataError("dataset has no usable records: " + path);
    return loaded.records;
}

RatioTables build_tables_for(std::span<const DomainRecord> records, std::span<const int> indices,
                             std::int64_t threshold) {
    std::vector<DomainRecord> pool;
    pool.reserve(indices.size());
    for (const int i : indices) pool.push_back(records[static_cast<std::size_t>(i)]);
    return RatioTables{build_table(pool, RatioKind::Countries, threshold),
                       build_table(pool, RatioKind::Asns, threshold)};
}

RatioTables load_tables_from(const std::string& dir) {
    return RatioTables{load_table(fs::path(dir) / "countries.tsv"), load_table(fs::path(dir) / "asns.tsv")};
}

std::vector<int> all_indices(std::size_t n) {
    std::vector<int> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
    return idx;
}

int cmd_generate(const GlobalOptions& g, const std::string& spec_path, int n_override) {
    const fs::path dir = ensure_out_dir(g);

    GeneratorSpec spec;
    if (!spec_path.empty()) {
        std::ifstream in(spec_path, std::ios::binary);
        if (!in) throw IoError("cannot open spec: " + spec_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("malformed generator spec: ") + e.what());
        }
        spec = GeneratorSpec::from_json(j);
    }
    spec.seed = g.seed;
    if (n_override > 0) spec.n_records = n_override;

    const auto records = generate(spec);
    save_records(records, dir / "records.jsonl");
    write_manifest(dir, "generate", {{"spec", spec.to_json()}, {"records_file", "records.jsonl"}});
    std::cout << "wrote " << records.size() << " records to " << (dir / "records.jsonl").string() << '\n';
    return kExitOk;
}

int cmd_build_tables(const GlobalOptions& g, const std::string& dataset, const std::string& kind,
                     std::int64_t threshold) {
    const fs::path dir = ensure_out_dir(g);
    const auto records = load_dataset(dataset, dir);

    if (kind == "countries" || kind == "both") {
        save_table(build_table(records, RatioKind::Countries, threshold), dir / "countries.tsv");
    }
    if (kind == "asns" || kind == "both") {
        save_table(build_table(records, RatioKind::Asns, threshold), dir / "asns.tsv");
    }
    write_manifest(dir, "build-tables",
                   {{"dataset", dataset}, {"kind", kind}, {"threshold", threshold}, {"seed", g.seed}});
    std::cout << "tables written to " << dir.string() << '\n';
    return kExitOk;
}

int cmd_train(const GlobalOptions& g, const std::string& dataset, const std::string& set_name,
              const std::string& model_name, double ratio_fraction, int k, std::int64_t threshold,
              double epsilon) {
    const fs::path dir = ensure_out_dir(g);
    const auto records = load_dataset(dataset, dir);
    const FeatureSetId set_id = feature_set_from_string(set_name);
    const ModelKind kind = model_kind_from_string(model_name);

    // sets without the novel features use the whole dataset; the others give
    // the ratio pool to table building and keep the remainder for the model
    std::vector<int> model_pool;
    RatioTables tables;
    const RatioTables* tables_ptr = nullptr;
    DatasetSplit ds;
    if (needs_ratio_tables(set_id)) {
        ds = split(records, ratio_fraction, g.seed);
        tables = build_tables_for(records, ds.ratio_pool, threshold);
        tables_ptr = &tables;
        save_table(tables.countries, dir / "countries.tsv");
        save_table(tables.asns, dir / "asns.tsv");
        model_pool = ds.model_pool;
    } else {
        model_pool = all_indices(records.size());
        ds = split(records, 0.75, g.seed);  // still provides the train/test carve
        ds.model_pool = model_pool;
    }

    std::vector<DomainRecord> pool;
    pool.reserve(model_pool.size());
    for (const int i : model_pool) pool.push_back(records[static_cast<std::size_t>(i)]);
    const FeatureMatrix matrix = assemble(pool, set_id, tables_ptr, epsilon);

    TrainConfig cfg;
    cfg.elm.seed = mix_seed(g.seed, 101);
    cfg.ann.seed = mix_seed(g.seed, 102);

    const CrossValidationResult cv = cross_validate(matrix, kind, cfg, k, g.seed, g.threads);
    {
        std::ofstream out(dir / "fold_reports.csv", std::ios::binary);
        out << EvaluationReport::csv_header() << '\n';
        for (const auto& r : cv.fold_reports) out << r.csv_row() << '\n';
        out << cv.pooled.csv_row() << '\n';
    }

    // final artifact: fit on the train carve, report on the held-out carve
    std::vector<int> train_local, test_local;
    {
        std::vector<int> pos_of(records.size(), -1);
        for (std::size_t i = 0; i < model_pool.size(); ++i) pos_of[static_cast<std::size_t>(model_pool[i])] = static_cast<int>(i);
        for (const int i : ds.train) {
            if (pos_of[static_cast<std::size_t>(i)] >= 0) train_local.push_back(pos_of[static_cast<std::size_t>(i)]);
        }
        for (const int i : ds.test) {
            if (pos_of[static_cast<std::size_t>(i)] >= 0) test_local.push_back(pos_of[static_cast<std::size_t>(i)]);
        }
    }
    const auto model = train_model(kind, matrix.subset(train_local), cfg);
    save_model(*model, dir / "model.json");

    const FeatureMatrix test = matrix.subset(test_local);
    const Eigen::VectorXd proba = model->predict_proba(test.values);
    const auto report = evaluate(test.labels, {proba.data(), static_cast<std::size_t>(proba.size())},
                                 model_name, set_name, -1);
    {
        std::ofstream out(dir / "test_report.json", std::ios::binary);
        out << report.to_json().dump(2) << '\n';
    }

    write_manifest(dir, "train",
                   {{"dataset", dataset},
                    {"feature_set", set_name},
                    {"model", model_name},
                    {"ratio_fraction", ratio_fraction},
                    {"k", k},
                    {"threshold", threshold},
                    {"epsilon", epsilon},
                    {"seed", g.seed},
                    {"threads", g.threads}});
    std::cout << "cv pooled: " << cv.pooled.csv_row() << '\n';
    std::cout << "held-out:  " << report.csv_row() << '\n';
    return kExitOk;
}

int cmd_evaluate(const GlobalOptions& g, const std::string& model_path, const std::string& dataset,
                 const std::string& tables_dir, double epsilon) {
    const fs::path dir = ensure_out_dir(g);
    const auto records = load_dataset(dataset, dir);
    const auto model = load_model(model_path);

    RatioTables tables;
    const RatioTables* tables_ptr = nullptr;
    if (needs_ratio_tables(model->set_id())) {
        if (tables_dir.empty()) throw ConfigError("this model's feature set needs --tables");
        tables = load_tables_from(tables_dir);
        tables_ptr = &tables;
    }

    const FeatureMatrix matrix = assemble(records, model->set_id(), tables_ptr, epsilon);
    const Eigen::VectorXd proba = model->predict_proba(matrix.values);
    const auto report = evaluate(matrix.labels, {proba.data(), static_cast<std::size_t>(proba.size())},
                                 to_string(model->kind()), to_string(model->set_id()), -1);

    {
        std::ofstream out(dir / "report.json", std::ios::binary);
        out << report.to_json().dump(2) << '\n';
    }
    {
        std::ofstream out(dir / "report.csv", std::ios::binary);
        out << EvaluationReport::csv_header() << '\n' << report.csv_row() << '\n';
    }
    write_manifest(dir, "evaluate",
                   {{"model", model_path}, {"dataset", dataset}, {"tables", tables_dir}, {"epsilon", epsilon}});
    std::cout << report.csv_row() << '\n';
    return kExitOk;
}

int cmd_sweep(const GlobalOptions& g, const std::string& model_path, const std::string& dataset,
              const std::string& tables_dir, const std::string& feature, double grid_min, double grid_max,
              double grid_step, double epsilon) {
    const fs::path dir = ensure_out_dir(g);
    const auto records = load_dataset(dataset, dir);
    const auto model = load_model(model_path);

    RatioTables tables;
    const RatioTables* tables_ptr = nullptr;
    if (needs_ratio_tables(model->set_id())) {
        if (tables_dir.empty()) throw ConfigError("this model's feature set needs --tables");
        tables = load_tables_from(tables_dir);
        tables_ptr = &tables;
    }

    const FeatureMatrix matrix = assemble(records, model->set_id(), tables_ptr, epsilon);
    std::vector<int> malicious_idx;
    for (std::size_t i = 0; i < matrix.labels.size(); ++i) {
        if (matrix.labels[i] == 1) malicious_idx.push_back(static_cast<int>(i));
    }
    if (malicious_idx.empty()) throw DataError("sweep: dataset has no malicious records");
    const FeatureMatrix malicious = matrix.subset(malicious_idx);

    SweepSpec spec;
    spec.feature_name = feature;
    if (grid_step > 0.0 && grid_max >= grid_min) {
        for (double v = grid_min; v <= grid_max + grid_step * 1e-9; v += grid_step) spec.values.push_back(v);
    } else {
        spec.values = default_grid(feature, &matrix);
    }

    const SweepResult result = sweep(*model, malicious, spec);
    write_sweep_csv(result, dir / "sweep.csv");
    {
        std::ofstream out(dir / "verdict.json", std::ios::binary);
        out << nlohmann::json{{"feature", result.feature_name},
                              {"baseline_rate", result.baseline_rate},
                              {"min_rate", result.min_rate()},
                              {"verdict", to_string(result.verdict)}}
                   .dump(2)
            << '\n';
    }
    write_manifest(dir, "sweep",
                   {{"model", model_path},
                    {"dataset", dataset},
                    {"tables", tables_dir},
                    {"feature", feature},
                    {"grid_min", grid_min},
                    {"grid_max", grid_max},
                    {"grid_step", grid_step},
                    {"epsilon", epsilon}});
    std::cout << "feature=" << result.feature_name << " baseline=" << result.baseline_rate
              << " min_rate=" << result.min_rate() << " verdict=" << to_string(result.verdict) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"malicious-domain detection pipeline"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --seed/--threads/--out appear after the subcommand

    GlobalOptions g;
    app.add_option("--seed", g.seed, "global RNG seed");
    app.add_option("--threads", g.threads, "worker threads (default 1 for determinism)");
    app.add_option("--out", g.out, "output directory");

    std::string spec_path, dataset, kind = "both", set_name = "B", model_name = "lr";
    std::string model_path, tables_dir, feature;
    std::int64_t threshold = kDefaultRatioThreshold;
    double ratio_fraction = 0.75, epsilon = kDefaultRankEpsilon;
    double grid_min = 0.0, grid_max = -1.0, grid_step = 0.0;
    int k = 10, n_override = 0;

    auto* generate_cmd = app.add_subcommand("generate", "synthesize a labeled dataset");
    generate_cmd->add_option("--spec", spec_path, "generator spec JSON (defaults inline when omitted)");
    generate_cmd->add_option("--n", n_override, "override the record count");

    auto* tables_cmd = app.add_subcommand("build-tables", "build communication ratio tables");
    tables_cmd->add_option("--dataset", dataset, "records file")->required();
    tables_cmd->add_option("--kind", kind, "countries | asns | both");
    tables_cmd->add_option("--threshold", threshold, "insertion threshold");

    auto* train_cmd = app.add_subcommand("train", "cross-validate and fit one model");
    train_cmd->add_option("--dataset", dataset, "records file")->required();
    train_cmd->add_option("--feature-set", set_name, "B | BR | TCP | BRTCP | BTCP");
    train_cmd->add_option("--model", model_name, "lr | svm | elm | ann");
    train_cmd->add_option("--ratio-fraction", ratio_fraction, "share of data reserved for ratio tables");
    train_cmd->add_option("--k", k, "cross-validation folds");
    train_cmd->add_option("--threshold", threshold, "ratio-table insertion threshold");
    train_cmd->add_option("--epsilon", epsilon, "rank epsilon");

    auto* eval_cmd = app.add_subcommand("evaluate", "score a saved model on a dataset");
    eval_cmd->add_option("--model", model_path, "model file")->required();
    eval_cmd->add_option("--dataset", dataset, "records file")->required();
    eval_cmd->add_option("--tables", tables_dir, "directory with countries.tsv/asns.tsv");
    eval_cmd->add_option("--epsilon", epsilon, "rank epsilon");

    auto* sweep_cmd = app.add_subcommand("sweep", "single-feature manipulation sweep");
    sweep_cmd->add_option("--model", model_path, "model file")->required();
    sweep_cmd->add_option("--dataset", dataset, "records file")->required();
    sweep_cmd->add_option("--tables", tables_dir, "directory with countries.tsv/asns.tsv");
    sweep_cmd->add_option("--feature", feature, "feature to manipulate")->required();
    sweep_cmd->add_option("--grid-min", grid_min, "grid start (default: built-in grid)");
    sweep_cmd->add_option("--grid-max", grid_max, "grid end");
    sweep_cmd->add_option("--grid-step", grid_step, "grid step");
    sweep_cmd->add_option("--epsilon", epsilon, "rank epsilon");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (generate_cmd->parsed()) return cmd_generate(g, spec_path, n_override);
        if (tables_cmd->parsed()) return cmd_build_tables(g, dataset, kind, threshold);
        if (train_cmd->parsed()) {
            return cmd_train(g, dataset, set_name, model_name, ratio_fraction, k, threshold, epsilon);
        }
        if (eval_cmd->parsed()) return cmd_evaluate(g, model_path, dataset, tables_dir, epsilon);
        if (sweep_cmd->parsed()) {
            return cmd_sweep(g, model_path, dataset, tables_dir, feature, grid_min, grid_max, grid_step, epsilon);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitConfig;
}
