#ifndef ARBENCH_GENERATOR_HPP
#define ARBENCH_GENERATOR_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arbench/core.hpp"
#include "arbench/remap.hpp"

namespace arbench::gen {

struct UnknownArchetype final : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ExhaustedSpace final : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// All 81 generated sub-dataset archetypes (BC 4, EC 16, NBR 12, SMA 7,
/// SR 42). The external GSM8K-format file supplies the one MA sub-dataset.
const std::vector<SubDatasetSpec>& all_archetypes();

std::optional<SubDatasetSpec> find_archetype(std::string_view name);

/// Resolves selection tokens ("all", category names, or sub-dataset names)
/// to archetypes. Throws UnknownArchetype on anything unrecognized.
std::vector<SubDatasetSpec> select_archetypes(const std::vector<std::string>& selection);

/// Per-spec seed: the global seed mixed with the spec name. SR specs reuse
/// their parent EC spec's seed so lineage pairs share instance content.
uint64_t spec_seed(const SubDatasetSpec& spec, uint64_t global_seed);

struct GeneratedDataset {
    std::vector<TaskInstance> instances;
    // Sidecar entries (mapped instance id -> bijection); empty for raw specs.
    std::vector<std::pair<std::string, remap::SymbolMap>> mappings;
};

/// Deterministic, duplicate-free generation. Every answer is the oracle
/// output for its question; question strings are pairwise distinct within
/// the sub-dataset and disjoint from their own few-shot examples.
GeneratedDataset generate_subdataset(const SubDatasetSpec& spec, uint64_t seed);

enum class Strategy { DP, CoT };

std::string to_string(Strategy s);
Strategy strategy_from_string(std::string_view s);

struct PromptTemplate {
    std::string instruction;
    std::string example_format;   // slots: {question}, {answer}
    std::string question_format;  // slot: {question}
    std::string cot_suffix;
};

PromptTemplate template_for(Category category);

/// Instruction + rendered few-shot block + hint line (when rule_text is
/// set) + question; CoT appends the suffix. MA under CoT uses the stored
/// 8-shot worked-example block. Byte-deterministic.
std::string assemble_prompt(const TaskInstance& inst, Strategy strategy);

/// The fixed 8-shot worked-example block used for MA chain-of-thought runs.
const std::string& ma_cot_fewshot_block();

/// Reads a GSM8K-format JSONL file ({"question", "answer"} per line; the
/// final answer follows "####"). Returns MA instances.
std::vector<TaskInstance> read_ma_file(const std::string& path);

struct GenerationConfig {
    std::vector<std::string> selection{"all"};
    uint64_t global_seed = 42;
    std::string ma_path;  // optional external MA file
};

/// Manifest of the selected specs with derived seeds and instance counts
/// (96 per generated spec; the MA file's line count when ingested).
DatasetManifest build_manifest(const GenerationConfig& config);

/// Category resolved from a sub-dataset name; SR names resolve via their
/// parent EC archetype for oracle purposes.
struct FamilyInfo {
    Category category = Category::EC;
    std::string operation;
    int base = 10;
};
FamilyInfo family_of(std::string_view sub_dataset);

struct RunOutput {
    DatasetManifest manifest;
    std::vector<ManifestEntry> entries;
};

/// Generates every selected sub-dataset into <dir>/datasets (plus
/// <dir>/mappings for SR sidecars) and writes <dir>/manifest.json.
RunOutput generate_run(const GenerationConfig& config, const std::string& dir);

}  // namespace arbench::gen

#endif
