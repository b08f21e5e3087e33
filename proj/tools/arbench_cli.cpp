// arbench: generate -> remap -> evaluate -> score -> report pipeline driver.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "arbench/generator.hpp"
#include "arbench/harness.hpp"
#include "arbench/metrics.hpp"
#include "arbench/remap.hpp"
#include "arbench/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace arbench;

namespace {

void write_snapshot(const fs::path& path, const ordered_json& snapshot) {
    fs::create_directories(path.parent_path());
    write_file(path.string(), snapshot.dump(2) + "\n");
}

std::vector<TaskInstance> load_run_datasets(const std::string& run_dir,
                                            const std::vector<std::string>& names) {
    std::vector<TaskInstance> all;
    fs::path dir = fs::path(run_dir) / "datasets";
    if (!fs::is_directory(dir)) throw std::runtime_error("no datasets directory under " + run_dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        if (!names.empty()) {
            std::string stem = file.stem().string();
            if (std::find(names.begin(), names.end(), stem) == names.end()) continue;
        }
        auto instances = read_instances(file.string());
        all.insert(all.end(), instances.begin(), instances.end());
    }
    if (all.empty()) throw std::runtime_error("no instances loaded from " + run_dir);
    return all;
}

remap::SidecarIndex load_run_sidecars(const std::string& run_dir) {
    remap::SidecarIndex index;
    fs::path dir = fs::path(run_dir) / "mappings";
    if (!fs::is_directory(dir)) return index;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) remap::merge_sidecar(index, file.string());
    return index;
}

int cmd_generate(const std::string& out_dir, uint64_t seed,
                 const std::vector<std::string>& selection, const std::string& ma_file,
                 const std::string& config_file) {
    gen::GenerationConfig config;
    config.global_seed = seed;
    if (!selection.empty()) config.selection = selection;
    config.ma_path = ma_file;
    if (!config_file.empty()) {
        // Reproduce a run from its config snapshot.
        ordered_json j = ordered_json::parse(read_file(config_file));
        config.global_seed = j.at("seed").get<uint64_t>();
        config.selection = j.at("selection").get<std::vector<std::string>>();
        config.ma_path = j.at("ma_file").get<std::string>();
    }

    auto output = gen::generate_run(config, out_dir);

    ordered_json snapshot;
    snapshot["command"] = "generate";
    snapshot["seed"] = config.global_seed;
    snapshot["selection"] = config.selection;
    snapshot["ma_file"] = config.ma_path;
    write_snapshot(fs::path(out_dir) / "config-snapshot.json", snapshot);

    std::cout << "generated " << output.entries.size() << " sub-datasets, "
              << output.manifest.total_instances << " instances total\n";
    return 0;
}

int cmd_remap(const std::string& input, const std::string& strategy_name, uint64_t seed,
              const std::string& out_path, const std::string& sidecar_path,
              const std::string& pool_file) {
    Variant variant = strategy_name == "all"   ? Variant::AllMap
                      : strategy_name == "num" ? Variant::NumMap
                      : strategy_name == "op"
                          ? Variant::OpMap
                          : throw CLI::ValidationError("--strategy must be all, num, or op");
    remap::SymbolPool pool = remap::default_pool();
    if (!pool_file.empty()) {
        std::vector<std::string> vocab;
        std::stringstream ss(read_file(pool_file));
        std::string token;
        while (std::getline(ss, token))
            if (!token.empty()) vocab.push_back(token);
        pool = remap::build_pool(vocab);
    }
    remap::MapStrategy strategy = remap::strategy_for_variant(variant);
    remap::SymbolScope scope = variant == Variant::AllMap   ? remap::SymbolScope::All
                               : variant == Variant::NumMap ? remap::SymbolScope::Operand
                                                            : remap::SymbolScope::Operator;

    auto instances = read_instances(input);
    std::vector<TaskInstance> mapped;
    std::vector<std::pair<std::string, remap::SymbolMap>> sidecar;
    for (const auto& inst : instances) {
        auto originals = remap::extract_symbols(inst, scope);
        auto map = remap::make_bijection(originals, pool, derive_seed(seed, inst.id), strategy);
        TaskInstance m = remap::apply_map(inst, map);
        m.id = inst.id + (variant == Variant::AllMap   ? ".all"
                          : variant == Variant::NumMap ? ".num"
                                                       : ".op");
        sidecar.emplace_back(m.id, std::move(map));
        mapped.push_back(std::move(m));
    }
    write_instances(out_path, mapped);
    if (!sidecar_path.empty()) remap::write_sidecar(sidecar_path, sidecar);
    std::cout << "remapped " << mapped.size() << " instances (" << strategy_name << ")\n";
    return 0;
}

int cmd_evaluate(const std::string& run_dir, const std::string& backend_name,
                 const std::string& endpoint, const std::string& model,
                 const std::string& strategy_name, int concurrency, bool resume,
                 std::string records_path, const std::vector<std::string>& dataset_names,
                 uint64_t seed) {
    auto dataset = load_run_datasets(run_dir, dataset_names);

    std::unique_ptr<eval::Backend> backend;
    if (backend_name == "mock:perfect") {
        backend = eval::make_perfect_backend(load_run_sidecars(run_dir));
    } else if (backend_name == "mock:memorizer") {
        std::vector<TaskInstance> raws;
        for (const auto& inst : load_run_datasets(run_dir, {}))
            if (inst.variant == Variant::Raw) raws.push_back(inst);
        backend = eval::make_memorizer_backend(raws);
    } else if (backend_name == "mock:random") {
        backend = eval::make_random_backend(dataset, seed);
    } else if (backend_name == "http") {
        eval::BackendConfig config;
        config.kind = eval::BackendKind::HttpChat;
        config.endpoint = endpoint;
        config.model_name = model.empty() ? "unknown" : model;
        if (const char* key = std::getenv("ARBENCH_API_KEY")) config.api_key = key;
        backend = eval::make_http_backend(config);
    } else {
        throw CLI::ValidationError(
            "--backend must be mock:perfect, mock:memorizer, mock:random, or http");
    }

    eval::RunOptions options;
    options.strategy = gen::strategy_from_string(strategy_name);
    options.concurrency = concurrency;
    options.resume = resume;
    if (records_path.empty()) {
        fs::create_directories(fs::path(run_dir) / "records");
        std::string safe_name;
        for (char c : backend->model_name()) safe_name.push_back(c == ':' ? '_' : c);
        records_path = (fs::path(run_dir) / "records" /
                        (safe_name + "-" + strategy_name + ".jsonl"))
                           .string();
    }
    options.records_path = records_path;

    ordered_json snapshot;
    snapshot["command"] = "evaluate";
    snapshot["backend"] = backend_name;
    snapshot["endpoint"] = endpoint;
    snapshot["model"] = backend->model_name();
    snapshot["strategy"] = strategy_name;
    snapshot["concurrency"] = concurrency;
    snapshot["resume"] = resume;
    snapshot["records"] = records_path;
    snapshot["datasets"] = dataset_names;
    write_snapshot(fs::path(records_path).parent_path() /
                       (fs::path(records_path).stem().string() + ".config-snapshot.json"),
                   snapshot);

    auto records = eval::run_evaluation(dataset, *backend, options);
    long long correct = 0;
    for (const auto& rec : records) correct += rec.correct ? 1 : 0;
    std::cout << "evaluated " << records.size() << " instances, " << correct << " correct -> "
              << records_path << "\n";
    return 0;
}

int cmd_score(const std::string& run_dir, const std::string& records_path,
              std::string out_dir, double w1, double w2) {
    auto records = eval::read_records(records_path);
    auto index = metrics::build_instance_index(load_run_datasets(run_dir, {}));
    auto report = metrics::aggregate_report(records, index, w1, w2);
    for (const char* cat : {"BC", "EC", "NBR", "MA", "SMA", "SR"})
        if (!report.per_category.count(cat))
            std::cerr << "warning: no records for category " << cat << "; cell left blank\n";

    if (out_dir.empty()) out_dir = (fs::path(run_dir) / "reports").string();
    fs::create_directories(out_dir);
    std::string stem = fs::path(records_path).stem().string();
    write_file((fs::path(out_dir) / (stem + ".report.csv")).string(),
               metrics::report_csv({report}));
    write_file((fs::path(out_dir) / (stem + ".report.json")).string(),
               metrics::report_json(report));
    write_file((fs::path(out_dir) / (stem + ".scatter.csv")).string(),
               metrics::scatter_csv({report}));

    ordered_json snapshot;
    snapshot["command"] = "score";
    snapshot["records"] = records_path;
    snapshot["weights"] = ordered_json::array({w1, w2});
    write_snapshot(fs::path(out_dir) / (stem + ".config-snapshot.json"), snapshot);

    std::cout << "scored " << records.size() << " records -> " << out_dir << "\n";
    return 0;
}

metrics::MetricReport report_from_json_file(const std::string& path) {
    ordered_json j = ordered_json::parse(read_file(path));
    metrics::MetricReport report;
    report.model_name = j.at("model_name").get<std::string>();
    report.strategy = j.at("strategy").get<std::string>();
    for (const auto& [key, value] : j.at("per_category").items())
        report.per_category[key] = value.get<double>();
    for (const auto& [key, value] : j.at("delta").items())
        report.delta[key] = value.get<double>();
    for (const auto& [key, value] : j.at("gamma_mapped").items())
        report.gamma_mapped[key] = value.get<double>();
    if (!j.at("average").is_null()) report.average = j.at("average").get<double>();
    if (!j.at("gamma_raw").is_null()) report.gamma_raw = j.at("gamma_raw").get<double>();
    if (!j.at("combined").is_null()) report.combined = j.at("combined").get<double>();
    return report;
}

int cmd_report(const std::vector<std::string>& report_files, const std::string& reference_file,
               const std::string& out_dir) {
    std::vector<metrics::MetricReport> reports;
    for (const auto& file : report_files) reports.push_back(report_from_json_file(file));
    std::vector<metrics::ReferencePoint> reference;
    if (!reference_file.empty()) reference = metrics::load_reference_points(reference_file);

    fs::create_directories(out_dir);
    write_file((fs::path(out_dir) / "combined.csv").string(), metrics::report_csv(reports));
    write_file((fs::path(out_dir) / "scatter.csv").string(),
               metrics::scatter_csv_with_reference(reports, reference));

    ordered_json snapshot;
    snapshot["command"] = "report";
    snapshot["reports"] = report_files;
    snapshot["reference"] = reference_file;
    write_snapshot(fs::path(out_dir) / "config-snapshot.json", snapshot);

    std::cout << "wrote combined table for " << reports.size() << " report(s) -> " << out_dir
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symbolic abstract-reasoning benchmark: generation, remapping, evaluation, "
                 "and scoring"};
    app.require_subcommand(1);

    // generate
    std::string gen_out = "run";
    uint64_t gen_seed = 42;
    std::vector<std::string> gen_select;
    std::string gen_ma, gen_config;
    bool gen_all = false;
    auto* generate = app.add_subcommand("generate", "Generate benchmark sub-datasets");
    generate->add_option("--out", gen_out, "Run directory to create");
    generate->add_option("--seed", gen_seed, "Global generation seed");
    generate->add_option("--select", gen_select,
                         "Archetype names or categories (BC/EC/NBR/SMA/SR); default all");
    generate->add_flag("--all", gen_all, "Generate the full catalogue (the default)");
    generate->add_option("--ma-file", gen_ma, "External GSM8K-format JSONL to ingest as MA");
    generate->add_option("--config", gen_config,
                         "Reproduce a run from a config-snapshot.json");

    // remap
    std::string remap_input, remap_out, remap_sidecar, remap_pool;
    std::string remap_strategy = "all";
    uint64_t remap_seed = 42;
    auto* remap_cmd = app.add_subcommand("remap", "Remap a dataset file's symbols");
    remap_cmd->add_option("--input", remap_input, "Raw instance JSONL")->required();
    remap_cmd->add_option("--strategy", remap_strategy, "all | num | op");
    remap_cmd->add_option("--seed", remap_seed, "Bijection seed");
    remap_cmd->add_option("--out", remap_out, "Output JSONL")->required();
    remap_cmd->add_option("--sidecar", remap_sidecar, "Mapping sidecar JSONL path");
    remap_cmd->add_option("--pool-file", remap_pool, "Replacement vocabulary (one token per line)");

    // evaluate
    std::string eval_run = "run", eval_backend = "mock:perfect", eval_endpoint, eval_model;
    std::string eval_strategy = "dp", eval_records;
    std::vector<std::string> eval_datasets;
    int eval_concurrency = 4;
    bool eval_resume = false;
    uint64_t eval_seed = 42;
    auto* evaluate = app.add_subcommand("evaluate", "Run a model over generated datasets");
    evaluate->add_option("--run", eval_run, "Run directory (from generate)");
    evaluate->add_option("--backend", eval_backend,
                         "mock:perfect | mock:memorizer | mock:random | http");
    evaluate->add_option("--endpoint", eval_endpoint, "Chat-completions URL (http backend)");
    evaluate->add_option("--model", eval_model, "Model name sent to the endpoint");
    evaluate->add_option("--strategy", eval_strategy, "dp | cot");
    evaluate->add_option("--concurrency", eval_concurrency, "Max in-flight requests");
    evaluate->add_flag("--resume", eval_resume, "Skip instances already in the records file");
    evaluate->add_option("--out", eval_records, "Records JSONL path");
    evaluate->add_option("--datasets", eval_datasets, "Restrict to these sub-dataset names");
    evaluate->add_option("--seed", eval_seed, "Seed for the random mock");

    // score
    std::string score_run = "run", score_records, score_out;
    double score_w1 = 0.5, score_w2 = 0.5;
    auto* score = app.add_subcommand("score", "Compute metric report from records");
    score->add_option("--run", score_run, "Run directory (for instance metadata)");
    score->add_option("--records", score_records, "Records JSONL")->required();
    score->add_option("--out", score_out, "Report output directory");
    score->add_option("--w1", score_w1, "Weight on the reasoning score");
    score->add_option("--w2", score_w2, "Weight on (1 - memory dependence)");

    // report
    std::vector<std::string> report_files;
    std::string report_reference, report_out = "reports";
    auto* report = app.add_subcommand("report", "Merge scored reports into combined tables");
    report->add_option("--reports", report_files, "Report JSON files from score")->required();
    report->add_option("--reference", report_reference,
                       "Reference scores CSV to overlay on the scatter data");
    report->add_option("--out", report_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            if (gen_all) gen_select = {"all"};
            return cmd_generate(gen_out, gen_seed, gen_select, gen_ma, gen_config);
        }
        if (remap_cmd->parsed())
            return cmd_remap(remap_input, remap_strategy, remap_seed, remap_out, remap_sidecar,
                             remap_pool);
        if (evaluate->parsed())
            return cmd_evaluate(eval_run, eval_backend, eval_endpoint, eval_model, eval_strategy,
                                eval_concurrency, eval_resume, eval_records, eval_datasets,
                                eval_seed);
        if (score->parsed())
            return cmd_score(score_run, score_records, score_out, score_w1, score_w2);
        if (report->parsed())
            return cmd_report(report_files, report_reference, report_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
