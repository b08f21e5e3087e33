#ifndef ARBENCH_METRICS_HPP
#define ARBENCH_METRICS_HPP

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arbench/core.hpp"
#include "arbench/harness.hpp"

namespace arbench::metrics {

struct EmptySelection final : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PairingMismatch final : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidWeights final : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Mean of the correctness indicator over the selected records.
/// Throws EmptySelection when the filter selects nothing.
double compute_gamma(const std::vector<eval::EvaluationRecord>& records,
                     const std::function<bool(const eval::EvaluationRecord&)>& selector);
double compute_gamma(const std::vector<eval::EvaluationRecord>& records);

/// Gamma(raw) - Gamma(mapped) over lineage-paired record sets. The mapped
/// records must cover exactly the paired counterparts of the raw records
/// (ids share the raw id root); throws PairingMismatch otherwise.
double compute_delta(const std::vector<eval::EvaluationRecord>& raw_records,
                     const std::vector<eval::EvaluationRecord>& mapped_records);

/// Combined score w1*Gamma + w2*(1-Delta), with Delta clamped into [0,1]
/// so the score stays a [0,1] ability measure. Weights must be
/// non-negative and sum to 1.
double compute_combined(double gamma, double delta, double w1 = 0.5, double w2 = 0.5);

struct MetricReport {
    std::string model_name;
    std::string strategy;  // "dp" | "cot"
    std::map<std::string, double> per_category;          // "BC".."SR" -> Gamma
    std::optional<double> gamma_raw;                     // over SR-paired EC raws
    std::map<std::string, double> gamma_mapped;          // "op"|"num"|"all" -> Gamma_M
    std::map<std::string, double> delta;                 // "op"|"num"|"all"
    std::optional<double> combined;                      // F(Avg, delta_all)
    std::pair<double, double> weights{0.5, 0.5};
    std::optional<double> average;                       // unweighted category mean
    std::map<std::string, int> sample_counts;
};

/// Metadata needed to place a record: looked up by instance id.
struct InstanceInfo {
    Category category = Category::BC;
    std::string sub_dataset;
    Variant variant = Variant::Raw;
    std::string lineage;  // raw id root shared by the variants
};
using InstanceIndex = std::unordered_map<std::string, InstanceInfo>;

InstanceIndex build_instance_index(const std::vector<TaskInstance>& instances);
void extend_instance_index(InstanceIndex& index, const std::vector<TaskInstance>& instances);

/// Per-category Gamma, per-strategy Delta over EC/SR lineage pairs, Avg
/// (unweighted mean of the categories present), and F. Cells with no
/// records stay empty rather than failing the whole report.
MetricReport aggregate_report(const std::vector<eval::EvaluationRecord>& records,
                              const InstanceIndex& index, double w1 = 0.5, double w2 = 0.5);

/// CSV row set in the published column order:
/// Model,Strategy,BC,EC,NBR,MA,SMA,SR,Avg,MemDep_op,MemDep_num,MemDep_all.
/// Values rounded to 2 decimals; empty cells stay blank.
std::string report_csv(const std::vector<MetricReport>& reports);

/// Full-precision JSON rendering of one report.
std::string report_json(const MetricReport& report);

/// Scatter data (model,strategy,memdep_all,avg), one row per report, for
/// memory-dependence vs average-score plots.
std::string scatter_csv(const std::vector<MetricReport>& reports);

struct ReferencePoint {
    std::string model;
    std::string strategy;
    double memdep_all = 0.0;
    double avg = 0.0;
};

/// Published reference scores for overlaying on scatter plots
/// (CSV: model,strategy,memdep_all,avg; '#' comments allowed).
std::vector<ReferencePoint> load_reference_points(const std::string& path);
std::string scatter_csv_with_reference(const std::vector<MetricReport>& reports,
                                       const std::vector<ReferencePoint>& reference);

}  // namespace arbench::metrics

#endif
