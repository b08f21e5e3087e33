#include "arbench/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace arbench::metrics {

using nlohmann::ordered_json;

double compute_gamma(const std::vector<eval::EvaluationRecord>& records,
                     const std::function<bool(const eval::EvaluationRecord&)>& selector) {
    long long n = 0, correct = 0;
    for (const auto& rec : records) {
        if (!selector(rec)) continue;
        ++n;
        if (rec.correct) ++correct;
    }
    if (n == 0) throw EmptySelection("no records selected");
    return static_cast<double>(correct) / static_cast<double>(n);
}

double compute_gamma(const std::vector<eval::EvaluationRecord>& records) {
    return compute_gamma(records, [](const eval::EvaluationRecord&) { return true; });
}

namespace {

std::string lineage_of(const std::string& instance_id) {
    size_t dot = instance_id.find('.');
    return dot == std::string::npos ? instance_id : instance_id.substr(0, dot);
}

}  // namespace

double compute_delta(const std::vector<eval::EvaluationRecord>& raw_records,
                     const std::vector<eval::EvaluationRecord>& mapped_records) {
    if (raw_records.empty() || mapped_records.empty())
        throw EmptySelection("delta needs non-empty record sets");
    std::unordered_set<std::string> raw_lineages, mapped_lineages;
    for (const auto& rec : raw_records) raw_lineages.insert(lineage_of(rec.instance_id));
    for (const auto& rec : mapped_records) mapped_lineages.insert(lineage_of(rec.instance_id));
    if (raw_lineages != mapped_lineages)
        throw PairingMismatch("raw and mapped records do not cover the same task lineages");
    if (raw_records.size() != mapped_records.size())
        throw PairingMismatch("raw and mapped record counts differ");
    return compute_gamma(raw_records) - compute_gamma(mapped_records);
}

double compute_combined(double gamma, double delta, double w1, double w2) {
    if (w1 < 0 || w2 < 0 || std::abs(w1 + w2 - 1.0) > 1e-12)
        throw InvalidWeights("weights must be non-negative and sum to 1");
    double d = std::clamp(delta, 0.0, 1.0);
    return w1 * gamma + w2 * (1.0 - d);
}

InstanceIndex build_instance_index(const std::vector<TaskInstance>& instances) {
    InstanceIndex index;
    extend_instance_index(index, instances);
    return index;
}

void extend_instance_index(InstanceIndex& index, const std::vector<TaskInstance>& instances) {
    for (const auto& inst : instances)
        index[inst.id] = {inst.category, inst.sub_dataset, inst.variant, lineage_of(inst.id)};
}

namespace {

const char* variant_key(Variant v) {
    switch (v) {
        case Variant::OpMap: return "op";
        case Variant::NumMap: return "num";
        case Variant::AllMap: return "all";
        case Variant::Raw: break;
    }
    return "raw";
}

}  // namespace

MetricReport aggregate_report(const std::vector<eval::EvaluationRecord>& records,
                              const InstanceIndex& index, double w1, double w2) {
    if (w1 < 0 || w2 < 0 || std::abs(w1 + w2 - 1.0) > 1e-12)
        throw InvalidWeights("weights must be non-negative and sum to 1");
    MetricReport report;
    report.weights = {w1, w2};
    if (!records.empty()) {
        report.model_name = records.front().model_name;
        report.strategy = records.front().strategy;
    }

    std::map<std::string, std::pair<long long, long long>> by_category;  // n, correct
    // EC raws that have SR twins, and the SR records keyed by strategy.
    std::unordered_map<std::string, const eval::EvaluationRecord*> by_lineage_raw;
    std::map<std::string, std::vector<const eval::EvaluationRecord*>> mapped_by_strategy;
    std::unordered_set<std::string> paired_lineages;

    for (const auto& rec : records) {
        auto it = index.find(rec.instance_id);
        if (it == index.end()) continue;
        const InstanceInfo& info = it->second;
        auto& cell = by_category[to_string(info.category)];
        ++cell.first;
        cell.second += rec.correct ? 1 : 0;
        if (info.category == Category::SR) {
            mapped_by_strategy[variant_key(info.variant)].push_back(&rec);
            paired_lineages.insert(info.lineage);
        } else if (info.category == Category::EC && info.variant == Variant::Raw) {
            by_lineage_raw[info.lineage] = &rec;
        }
    }

    for (const auto& [cat, cell] : by_category) {
        report.per_category[cat] = static_cast<double>(cell.second) / cell.first;
        report.sample_counts[cat] = static_cast<int>(cell.first);
    }

    // Gamma over the raw EC instances that have SR counterparts in this run.
    long long raw_n = 0, raw_correct = 0;
    for (const auto& lineage : paired_lineages) {
        auto it = by_lineage_raw.find(lineage);
        if (it == by_lineage_raw.end()) continue;
        ++raw_n;
        raw_correct += it->second->correct ? 1 : 0;
    }
    if (raw_n > 0) report.gamma_raw = static_cast<double>(raw_correct) / raw_n;

    for (const auto& [strategy, mapped] : mapped_by_strategy) {
        long long n = 0, correct = 0, paired = 0, paired_correct = 0;
        for (const auto* rec : mapped) {
            ++n;
            correct += rec->correct ? 1 : 0;
            auto it = by_lineage_raw.find(lineage_of(rec->instance_id));
            if (it != by_lineage_raw.end()) {
                ++paired;
                paired_correct += it->second->correct ? 1 : 0;
            }
        }
        report.gamma_mapped[strategy] = static_cast<double>(correct) / n;
        report.sample_counts["SR_" + strategy] = static_cast<int>(n);
        // Delta uses the lineage pairing: raw twins of exactly these tasks.
        if (paired == n && n > 0) {
            double gamma_raw_paired = static_cast<double>(paired_correct) / paired;
            report.delta[strategy] = gamma_raw_paired - report.gamma_mapped[strategy];
        }
    }

    if (!report.per_category.empty()) {
        double sum = 0;
        for (const auto& [_, gamma] : report.per_category) sum += gamma;
        report.average = sum / static_cast<double>(report.per_category.size());
    }
    if (report.average && report.delta.count("all"))
        report.combined = compute_combined(*report.average, report.delta.at("all"), w1, w2);
    return report;
}

namespace {

std::string cell(std::optional<double> value) {
    if (!value) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *value);
    return buf;
}

std::optional<double> lookup(const std::map<std::string, double>& m, const std::string& key) {
    auto it = m.find(key);
    if (it == m.end()) return std::nullopt;
    return it->second;
}

std::string full_precision(double v) {
    return ordered_json(v).dump();  // shortest round-trip form
}

}  // namespace

std::string report_csv(const std::vector<MetricReport>& reports) {
    std::string csv =
        "Model,Strategy,BC,EC,NBR,MA,SMA,SR,Avg,MemDep_op,MemDep_num,MemDep_all\n";
    for (const auto& r : reports) {
        csv += r.model_name + "," + r.strategy;
        for (const char* cat : {"BC", "EC", "NBR", "MA", "SMA", "SR"})
            csv += "," + cell(lookup(r.per_category, cat));
        csv += "," + cell(r.average);
        for (const char* strategy : {"op", "num", "all"})
            csv += "," + cell(lookup(r.delta, strategy));
        csv += "\n";
    }
    return csv;
}

std::string report_json(const MetricReport& report) {
    ordered_json j;
    j["model_name"] = report.model_name;
    j["strategy"] = report.strategy;
    j["per_category"] = report.per_category;
    if (report.gamma_raw)
        j["gamma_raw"] = *report.gamma_raw;
    else
        j["gamma_raw"] = nullptr;
    j["gamma_mapped"] = report.gamma_mapped;
    j["delta"] = report.delta;
    if (report.combined)
        j["combined"] = *report.combined;
    else
        j["combined"] = nullptr;
    j["weights"] = ordered_json::array({report.weights.first, report.weights.second});
    if (report.average)
        j["average"] = *report.average;
    else
        j["average"] = nullptr;
    j["sample_counts"] = report.sample_counts;
    j["notes"] = ordered_json::array(
        {"average = unweighted mean over the categories present",
         "delta computed on EC/SR lineage pairs",
         "combined = w1*average + w2*(1-delta_all)"});
    return j.dump(2) + "\n";
}

std::string scatter_csv(const std::vector<MetricReport>& reports) {
    return scatter_csv_with_reference(reports, {});
}

std::vector<ReferencePoint> load_reference_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open reference data: " + path);
    std::vector<ReferencePoint> points;
    std::string line;
    bool header_skipped = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_skipped) {
            header_skipped = true;
            if (line.rfind("model", 0) == 0) continue;
        }
        std::stringstream ss(line);
        ReferencePoint p;
        std::string memdep, avg;
        if (!std::getline(ss, p.model, ',') || !std::getline(ss, p.strategy, ',') ||
            !std::getline(ss, memdep, ',') || !std::getline(ss, avg, ','))
            throw std::runtime_error("malformed reference row: " + line);
        p.memdep_all = std::stod(memdep);
        p.avg = std::stod(avg);
        points.push_back(std::move(p));
    }
    return points;
}

std::string scatter_csv_with_reference(const std::vector<MetricReport>& reports,
                                       const std::vector<ReferencePoint>& reference) {
    std::string csv = "model,strategy,memdep_all,avg,source\n";
    for (const auto& r : reports) {
        auto memdep = lookup(r.delta, "all");
        if (!memdep || !r.average) continue;
        csv += r.model_name + "," + r.strategy + "," + full_precision(*memdep) + "," +
               full_precision(*r.average) + ",measured\n";
    }
    for (const auto& p : reference)
        csv += p.model + "," + p.strategy + "," + full_precision(p.memdep_all) + "," +
               full_precision(p.avg) + ",reference\n";
    return csv;
}

}  // namespace arbench::metrics
