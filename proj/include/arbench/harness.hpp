#ifndef ARBENCH_HARNESS_HPP
#define ARBENCH_HARNESS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "arbench/core.hpp"
#include "arbench/generator.hpp"
#include "arbench/remap.hpp"

namespace arbench::eval {

struct FatalTransport final : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RequestParams {
    double temperature = 1e-7;
    int max_new_tokens = 2096;
};

enum class BackendKind { HttpChat, MockPerfect, MockMemorizer, MockRandom };

struct BackendConfig {
    BackendKind kind = BackendKind::MockPerfect;
    std::string endpoint;    // http_chat only
    std::string model_name = "mock";
    std::string api_key;     // read from the environment by the CLI
    RequestParams params;
    long retry_base_delay_ms = 500;  // exponential backoff base
};

/// One model transaction.
struct EvaluationRecord {
    std::string instance_id;
    std::string model_name;
    std::string strategy;  // "dp" | "cot"
    std::string prompt;
    std::string raw_output;
    std::optional<std::string> extracted_answer;
    bool correct = false;
    std::string grader = "exact";
    double latency_ms = 0.0;
    std::string timestamp;
    std::string error;  // note for failed-after-retry instances
};

std::string record_to_json_line(const EvaluationRecord& rec);
EvaluationRecord record_from_json_line(std::string_view line);
void append_records(const std::string& path, const std::vector<EvaluationRecord>& records);
std::vector<EvaluationRecord> read_records(const std::string& path);

/// Deterministic answer extraction; total over arbitrary byte strings.
/// Takes the payload of the last "The answer is ..." or \boxed{...}
/// occurrence (whichever appears last), with markup stripped; falls back to
/// the final non-empty line when it looks like a bare answer token.
std::optional<std::string> extract_answer(std::string_view raw_output);

/// Normalized string-identity grading. Case-sensitive on payload symbols;
/// whitespace runs collapse, emphasis/boxing markup and one trailing period
/// are stripped. A missing extraction never grades correct.
bool grade(const std::optional<std::string>& extracted, std::string_view truth);

/// A model endpoint: prompt in, raw completion out. Implementations must be
/// safe to call from multiple threads.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string complete(const TaskInstance& inst, const std::string& prompt) = 0;
    virtual const std::string& model_name() const = 0;
};

/// Oracle-backed idealized model: inverse-maps remapped instances through
/// the sidecar, recomputes the raw answer, and re-maps it. Symbol-invariant
/// by construction.
std::unique_ptr<Backend> make_perfect_backend(remap::SidecarIndex sidecars,
                                              std::string model_name = "mock-perfect");

/// Lookup table keyed on exact raw question strings; answers "I don't know"
/// on anything unseen. Brackets the memorization end of the metric space.
std::unique_ptr<Backend> make_memorizer_backend(const std::vector<TaskInstance>& raw_instances,
                                                std::string model_name = "mock-memorizer");

/// Answers with a seeded uniform draw from the sub-dataset's distinct
/// ground-truth answers.
std::unique_ptr<Backend> make_random_backend(const std::vector<TaskInstance>& instances,
                                             uint64_t seed, std::string model_name = "mock-random");

/// OpenAI-style chat-completions client over HTTP(S) with retry/backoff.
std::unique_ptr<Backend> make_http_backend(const BackendConfig& config);

struct RunOptions {
    gen::Strategy strategy = gen::Strategy::DP;
    int concurrency = 4;
    std::string records_path;  // empty: keep records in memory only
    bool resume = false;
};

/// One record per instance, bounded in-flight calls, append-only
/// persistence, resumable. Transient transport errors retry inside the
/// backend; an instance that still fails is recorded incorrect with an error
/// note. FatalTransport aborts the run with partial records intact.
std::vector<EvaluationRecord> run_evaluation(const std::vector<TaskInstance>& dataset,
                                             Backend& backend, const RunOptions& options);

/// Optional second-model grader. Asks the judge backend to compare a model
/// answer against the ground truth; reports agreement with the exact grader
/// rather than silently overriding it.
struct JudgeOutcome {
    bool correct = false;
    bool agrees_with_exact = true;
};
JudgeOutcome judge_grade(Backend& judge, const TaskInstance& inst,
                         const EvaluationRecord& record);

}  // namespace arbench::eval

#endif
