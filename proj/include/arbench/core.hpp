#ifndef ARBENCH_CORE_HPP
#define ARBENCH_CORE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace arbench {

enum class Category { BC, EC, NBR, MA, SMA, SR };
enum class Variant { Raw, OpMap, NumMap, AllMap };

std::string to_string(Category c);
std::string to_string(Variant v);
Category category_from_string(std::string_view s);
Variant variant_from_string(std::string_view s);

enum class SpanKind { Operand, Operator };

/// Half-open byte range [begin, end) inside a question string.
struct Span {
    size_t begin = 0;
    size_t end = 0;
    SpanKind kind = SpanKind::Operand;

    bool operator==(const Span&) const = default;
};

/// One few-shot demonstration: a question with its span annotations and the
/// expected answer payload (scaffold text lives in the prompt template).
struct Example {
    std::string question;
    std::string answer;
    std::vector<Span> question_spans;

    bool operator==(const Example&) const = default;
};

/// One benchmark item. Immutable after construction; safe to share.
struct TaskInstance {
    std::string id;
    Category category = Category::BC;
    std::string sub_dataset;
    Variant variant = Variant::Raw;
    std::vector<Example> examples;
    std::string rule_text;   // hint text; stays in original symbols always
    std::string question;
    std::string answer;
    std::vector<Span> question_spans;
    std::optional<std::string> mapping_id;
    uint64_t seed = 0;

    bool operator==(const TaskInstance&) const = default;
};

struct LengthLimits {
    size_t max_question = 4096;
    size_t max_rule = 2048;
    size_t max_answer = 4096;
};

/// Structural checks; returns the list of violated invariants (empty = ok).
/// Never mutates and never throws.
std::vector<std::string> validate_instance(const TaskInstance& inst,
                                           const LengthLimits& limits = {});

enum class LengthMode { Fixed, Variable };

/// Generator configuration for one sub-dataset archetype.
struct SubDatasetSpec {
    std::string name;
    Category category = Category::EC;
    std::string operation;  // family tag, see generator.cpp archetype table
    LengthMode length_mode = LengthMode::Variable;
    std::pair<int, int> operand_length_range{4, 16};
    std::pair<long long, long long> value_range{0, 99999};
    int base = 10;
    int example_count = 8;
    int instances = 96;
    // For SR specs: the EC archetype this one remaps, and how.
    std::string derived_from;
    Variant map_strategy = Variant::Raw;
};

struct ManifestEntry {
    std::string name;
    Category category = Category::EC;
    uint64_t seed = 0;
    int instances = 0;
    std::string file;
    std::string content_hash;
};

struct DatasetManifest {
    std::vector<SubDatasetSpec> specs;
    uint64_t global_seed = 0;
    int total_instances = 0;
};

// --- JSONL instance format (External Interface) ---
// One object per line, UTF-8, fixed field order:
// id, category, sub_dataset, variant, examples, rule_text, question, answer,
// question_spans, mapping_id, seed.

std::string instance_to_json_line(const TaskInstance& inst);
TaskInstance instance_from_json_line(std::string_view line);

void write_instances(const std::string& path, const std::vector<TaskInstance>& instances);
std::vector<TaskInstance> read_instances(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace arbench

#endif
