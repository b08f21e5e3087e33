#ifndef ARBENCH_REMAP_HPP
#define ARBENCH_REMAP_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "arbench/core.hpp"

namespace arbench::remap {

struct EmptyPool final : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PoolTooSmall final : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingSpans final : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ScopeMismatch final : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Candidate replacement symbols: single-character alphanumerics, ordered,
/// duplicate-free.
struct SymbolPool {
    std::string symbols;
};

enum class MapStrategy { All, OperandOnly, OperatorOnly };

std::string to_string(MapStrategy s);
MapStrategy strategy_from_string(std::string_view s);
MapStrategy strategy_for_variant(Variant v);
Variant variant_for_strategy(MapStrategy s);

/// A bijective character substitution. Originals are pairwise distinct and
/// so are replacements; make_bijection additionally guarantees replacements
/// are drawn outside the original set.
struct SymbolMap {
    MapStrategy strategy = MapStrategy::All;
    std::vector<std::pair<char, char>> pairs;
    std::string id;
};

/// Filters a vocabulary down to single-character alphanumeric tokens,
/// first-appearance order, duplicates dropped. Throws EmptyPool when nothing
/// qualifies.
SymbolPool build_pool(const std::vector<std::string>& vocabulary);

/// The embedded default vocabulary; filtering it yields the 62-symbol pool
/// [a-z][A-Z][0-9].
std::vector<std::string> default_vocabulary();
SymbolPool default_pool();

enum class SymbolScope { All, Operand, Operator };

/// Unique characters of the instance in first-appearance order. All: every
/// non-whitespace character of example questions, example answers, the
/// question, and the answer. Operand: characters inside operand spans plus
/// all answer characters. Operator: characters inside operator spans.
/// Throws MissingSpans when a scoped request finds no spans at all.
std::vector<char> extract_symbols(const TaskInstance& inst, SymbolScope scope);

/// Seeded draw of a collision-free bijection: each original maps to a
/// distinct pool symbol outside the original set. Deterministic for
/// (originals, pool, seed).
SymbolMap make_bijection(const std::vector<char>& originals, const SymbolPool& pool,
                         uint64_t seed, MapStrategy strategy);

/// Identity map over the given originals. Bypasses the collision-free rule;
/// intended for metric-validation controls, not dataset production.
SymbolMap make_identity_map(const std::vector<char>& originals, MapStrategy strategy);

SymbolMap invert(const SymbolMap& map);

/// Character-wise substitution within the map's scope across example
/// questions/answers, the question, and the answer. Rule text, whitespace
/// positions, and string lengths are untouched. Sets variant and mapping_id.
TaskInstance apply_map(const TaskInstance& inst, const SymbolMap& map);

struct VariantSet {
    TaskInstance raw;
    TaskInstance all_map;
    TaskInstance num_map;
    TaskInstance op_map;
    SymbolMap map_all;
    SymbolMap map_num;
    SymbolMap map_op;
};

/// The four aligned variants of a raw instance. The three bijections are
/// independent seeded draws; ids extend the raw id with the variant tag.
VariantSet derive_variants(const TaskInstance& raw_inst, const SymbolPool& pool, uint64_t seed);

// --- Mapping sidecar (External Interface) ---
// JSONL, one object per mapped instance: {"id", "strategy", "pairs"}.
// Sufficient to reproduce or invert any variant offline.

std::string sidecar_line(const std::string& instance_id, const SymbolMap& map);
void write_sidecar(const std::string& path,
                   const std::vector<std::pair<std::string, SymbolMap>>& entries);

/// instance id -> map, loaded from one or more sidecar files.
using SidecarIndex = std::unordered_map<std::string, SymbolMap>;
SidecarIndex read_sidecar(const std::string& path);
void merge_sidecar(SidecarIndex& index, const std::string& path);

}  // namespace arbench::remap

#endif
