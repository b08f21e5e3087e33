#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "arbench/generator.hpp"
#include "arbench/harness.hpp"
#include "arbench/metrics.hpp"

using namespace arbench;
namespace fs = std::filesystem;

TEST_CASE("answer extraction handles the published raw outputs") {
    // Abbreviated failure-case output: markdown headers, bold payload.
    std::string failure =
        "### Step 3: Write the final result\n"
        "Combining all the digits from left to right, the result is:\n\n"
        "**422211**.\n\n"
        "### Final Answer:\n"
        "The answer is **422211**.\n";
    CHECK(eval::extract_answer(failure) == std::string("422211"));

    // Abbreviated success-case output: scaffold early, boxed form last.
    std::string success =
        "Answer: The answer is ZZZ3ZZZZ.\n\n"
        "**Step-by-step reasoning:**\n"
        "3. The binary result 00010000 becomes ZZZ3ZZZZ.\n\n"
        "Final Answer: The final answer is $\\boxed{ZZZ3ZZZZ}$\n";
    CHECK(eval::extract_answer(success) == std::string("ZZZ3ZZZZ"));
}

TEST_CASE("answer extraction corner cases") {
    CHECK(eval::extract_answer("") == std::nullopt);
    CHECK(eval::extract_answer("   \n\n  ") == std::nullopt);
    // Last occurrence wins.
    CHECK(eval::extract_answer("The answer is 1. No wait. The answer is 2.") ==
          std::string("2"));
    // Sentence continues on the same line.
    CHECK(eval::extract_answer("The answer is 15844. Let me double check.") ==
          std::string("15844"));
    // Decimal points survive payload capture.
    CHECK(eval::extract_answer("The answer is 4.5.") == std::string("4.5"));
    CHECK(eval::extract_answer("the ANSWER is yes") == std::string("yes"));
    // Bare-token fallback.
    CHECK(eval::extract_answer("thinking...\n42\n") == std::string("42"));
    CHECK(eval::extract_answer("final line\n[10, 8]") == std::string("[10, 8]"));
    CHECK(eval::extract_answer("I don't know.") == std::nullopt);
    // Quoted and emphasised payloads.
    CHECK(eval::extract_answer("The answer is `mhtirogla`.") == std::string("mhtirogla"));
    CHECK(eval::extract_answer("The answer is \"0\".") == std::string("0"));
}

TEST_CASE("extraction is total over arbitrary bytes") {
    std::string noise;
    for (int i = 0; i < 2048; ++i) noise.push_back(static_cast<char>(i % 251));
    CHECK_NOTHROW(eval::extract_answer(noise));
    CHECK_NOTHROW(eval::extract_answer("\\boxed{"));
    CHECK_NOTHROW(eval::extract_answer("The answer is"));
}

TEST_CASE("grading is normalized string identity") {
    CHECK_FALSE(eval::grade(std::string("422211"), "422111"));
    CHECK(eval::grade(std::string("ZZZ3ZZZZ"), "ZZZ3ZZZZ"));
    CHECK_FALSE(eval::grade(std::nullopt, "anything"));
    CHECK(eval::grade(std::string("**42**"), "42"));
    CHECK(eval::grade(std::string("[10,  8]"), "[10, 8]"));
    CHECK(eval::grade(std::string("15844."), "15844"));
    // Case matters: remapped symbols are case-significant.
    CHECK_FALSE(eval::grade(std::string("zzz3zzzz"), "ZZZ3ZZZZ"));
}

namespace {

struct SmallRun {
    std::vector<TaskInstance> raws;
    std::vector<TaskInstance> mapped;
    std::vector<TaskInstance> everything;
    remap::SidecarIndex sidecars;
};

SmallRun small_run(uint64_t seed = 42) {
    SmallRun run;
    for (const char* name :
         {"fixed_len_chat_bit_raw_dataset", "var_len_chat_list_raw_dataset",
          "chat_add_base3_raw_dataset", "chat_linear_dataset", "chat_mul_dataset"}) {
        auto spec = *gen::find_archetype(name);
        spec.instances = 8;
        auto dataset = gen::generate_subdataset(spec, gen::spec_seed(spec, seed));
        run.raws.insert(run.raws.end(), dataset.instances.begin(), dataset.instances.end());
    }
    for (const char* name : {"fixed_len_chat_bit_dataset", "fixed_len_chat_bit_num_dataset",
                             "fixed_len_chat_bit_op_dataset"}) {
        auto spec = *gen::find_archetype(name);
        spec.instances = 8;
        auto dataset = gen::generate_subdataset(spec, gen::spec_seed(spec, seed));
        run.mapped.insert(run.mapped.end(), dataset.instances.begin(), dataset.instances.end());
        for (auto& [id, map] : dataset.mappings) run.sidecars[id] = map;
    }
    // Their raw EC parent must be present for memorizer lookups.
    auto parent = *gen::find_archetype("fixed_len_chat_bit_raw_dataset");
    parent.instances = 8;
    auto parent_data = gen::generate_subdataset(parent, gen::spec_seed(parent, seed));
    // Note: already in raws above (same spec and seed).
    (void)parent_data;
    run.everything = run.raws;
    run.everything.insert(run.everything.end(), run.mapped.begin(), run.mapped.end());
    return run;
}

}  // namespace

TEST_CASE("perfect mock answers every variant correctly") {
    SmallRun run = small_run();
    auto backend = eval::make_perfect_backend(run.sidecars);
    eval::RunOptions options;
    options.concurrency = 4;
    auto records = eval::run_evaluation(run.everything, *backend, options);
    REQUIRE(records.size() == run.everything.size());
    for (const auto& rec : records) {
        INFO(rec.instance_id, " -> ", rec.raw_output);
        CHECK(rec.correct);
    }
}

TEST_CASE("memorizer mock is perfect on raw and lost on remapped text") {
    SmallRun run = small_run();
    auto backend = eval::make_memorizer_backend(run.raws);
    eval::RunOptions options;
    options.concurrency = 2;

    auto raw_records = eval::run_evaluation(run.raws, *backend, options);
    for (const auto& rec : raw_records) CHECK(rec.correct);

    auto mapped_records = eval::run_evaluation(run.mapped, *backend, options);
    int correct = 0;
    for (const auto& rec : mapped_records) correct += rec.correct ? 1 : 0;
    CHECK(correct == 0);  // no accidental key collisions at this seed
}

TEST_CASE("random mock scores near chance level") {
    SmallRun run = small_run();
    auto backend = eval::make_random_backend(run.raws, 11);
    eval::RunOptions options;
    options.concurrency = 4;
    auto records = eval::run_evaluation(run.raws, *backend, options);
    int correct = 0;
    for (const auto& rec : records) correct += rec.correct ? 1 : 0;
    double gamma = static_cast<double>(correct) / static_cast<double>(records.size());
    // Uniform draw over each sub-dataset's distinct answers: chance level.
    CHECK(gamma < 0.5);
}

TEST_CASE("random mock is deterministic per instance") {
    SmallRun run = small_run();
    auto backend = eval::make_random_backend(run.raws, 7);
    eval::RunOptions options;
    auto first = eval::run_evaluation(run.raws, *backend, options);
    auto second = eval::run_evaluation(run.raws, *backend, options);
    REQUIRE(first.size() == second.size());
    std::map<std::string, std::string> outputs;
    for (const auto& rec : first) outputs[rec.instance_id] = rec.raw_output;
    for (const auto& rec : second) CHECK(outputs[rec.instance_id] == rec.raw_output);
}

TEST_CASE("record json round-trips") {
    eval::EvaluationRecord rec;
    rec.instance_id = "abc.num";
    rec.model_name = "mock-perfect";
    rec.strategy = "cot";
    rec.prompt = "Question: 1 + 1 =\n\n";
    rec.raw_output = "Answer: The answer is 2.";
    rec.extracted_answer = "2";
    rec.correct = true;
    rec.latency_ms = 0.25;
    rec.timestamp = "2026-01-01T00:00:00Z";
    std::string line = eval::record_to_json_line(rec);
    auto back = eval::record_from_json_line(line);
    CHECK(back.instance_id == rec.instance_id);
    CHECK(back.extracted_answer == rec.extracted_answer);
    CHECK(back.correct == rec.correct);
    CHECK(eval::record_to_json_line(back) == line);
}

TEST_CASE("runs persist, resume, and are concurrency-invariant") {
    SmallRun run = small_run();
    auto backend = eval::make_memorizer_backend(run.raws);

    fs::path dir = fs::temp_directory_path() / "arbench_harness_test";
    fs::create_directories(dir);
    fs::path records_path = dir / "records.jsonl";
    fs::remove(records_path);

    // Interrupt simulation: first evaluate only a prefix.
    std::vector<TaskInstance> prefix(run.raws.begin(), run.raws.begin() + 10);
    eval::RunOptions options;
    options.concurrency = 3;
    options.records_path = records_path.string();
    eval::run_evaluation(prefix, *backend, options);
    CHECK(eval::read_records(records_path.string()).size() == 10);

    // Resume over the full set: prefix instances are not re-run.
    options.resume = true;
    auto resumed = eval::run_evaluation(run.raws, *backend, options);
    CHECK(resumed.size() == run.raws.size());
    std::set<std::string> ids;
    for (const auto& rec : resumed) CHECK(ids.insert(rec.instance_id).second);

    // Concurrency never changes the record content, only timing.
    eval::RunOptions seq;
    seq.concurrency = 1;
    eval::RunOptions par;
    par.concurrency = 8;
    auto a = eval::run_evaluation(run.raws, *backend, seq);
    auto b = eval::run_evaluation(run.raws, *backend, par);
    auto key = [](const eval::EvaluationRecord& r) {
        return r.instance_id + "|" + r.raw_output + "|" + (r.correct ? "1" : "0") + "|" +
               r.extracted_answer.value_or("<none>");
    };
    std::vector<std::string> ka, kb;
    for (const auto& r : a) ka.push_back(key(r));
    for (const auto& r : b) kb.push_back(key(r));
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    CHECK(ka == kb);

    fs::remove_all(dir);
}

namespace {

class ScriptedJudge final : public eval::Backend {
public:
    explicit ScriptedJudge(std::string verdict) : verdict_(std::move(verdict)) {}
    std::string complete(const TaskInstance&, const std::string&) override { return verdict_; }
    const std::string& model_name() const override { return name_; }

private:
    std::string verdict_;
    std::string name_ = "scripted-judge";
};

}  // namespace

TEST_CASE("judge grading reports agreement with the exact grader") {
    TaskInstance inst;
    inst.question = "1 + 1 =";
    inst.answer = "2";
    eval::EvaluationRecord rec;
    rec.extracted_answer = "2";
    rec.correct = true;

    ScriptedJudge yes("yes");
    auto outcome = eval::judge_grade(yes, inst, rec);
    CHECK(outcome.correct);
    CHECK(outcome.agrees_with_exact);

    ScriptedJudge no("no");
    outcome = eval::judge_grade(no, inst, rec);
    CHECK_FALSE(outcome.correct);
    CHECK_FALSE(outcome.agrees_with_exact);
}
