#include "arbench/remap.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>

#include <json.hpp>

#include "arbench/rng.hpp"

namespace arbench::remap {

using nlohmann::ordered_json;

std::string to_string(MapStrategy s) {
    switch (s) {
        case MapStrategy::All: return "all";
        case MapStrategy::OperandOnly: return "operand_only";
        case MapStrategy::OperatorOnly: return "operator_only";
    }
    throw std::logic_error("bad strategy");
}

MapStrategy strategy_from_string(std::string_view s) {
    if (s == "all") return MapStrategy::All;
    if (s == "operand_only") return MapStrategy::OperandOnly;
    if (s == "operator_only") return MapStrategy::OperatorOnly;
    throw std::invalid_argument("unknown strategy: " + std::string(s));
}

MapStrategy strategy_for_variant(Variant v) {
    switch (v) {
        case Variant::AllMap: return MapStrategy::All;
        case Variant::NumMap: return MapStrategy::OperandOnly;
        case Variant::OpMap: return MapStrategy::OperatorOnly;
        case Variant::Raw: break;
    }
    throw std::invalid_argument("raw variant has no map strategy");
}

Variant variant_for_strategy(MapStrategy s) {
    switch (s) {
        case MapStrategy::All: return Variant::AllMap;
        case MapStrategy::OperandOnly: return Variant::NumMap;
        case MapStrategy::OperatorOnly: return Variant::OpMap;
    }
    throw std::logic_error("bad strategy");
}

SymbolPool build_pool(const std::vector<std::string>& vocabulary) {
    SymbolPool pool;
    std::array<bool, 256> seen{};
    for (const auto& token : vocabulary) {
        if (token.size() != 1) continue;
        unsigned char c = static_cast<unsigned char>(token[0]);
        if (!std::isalnum(c) || seen[c]) continue;
        seen[c] = true;
        pool.symbols.push_back(token[0]);
    }
    if (pool.symbols.empty()) throw EmptyPool("no single-character alphanumeric tokens");
    return pool;
}

std::vector<std::string> default_vocabulary() {
    std::vector<std::string> vocab;
    for (char c = 'a'; c <= 'z'; ++c) vocab.emplace_back(1, c);
    for (char c = 'A'; c <= 'Z'; ++c) vocab.emplace_back(1, c);
    for (char c = '0'; c <= '9'; ++c) vocab.emplace_back(1, c);
    return vocab;
}

SymbolPool default_pool() { return build_pool(default_vocabulary()); }

namespace {

bool is_whitespace(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

void collect(std::string_view text, std::array<bool, 256>& seen, std::vector<char>& out) {
    for (char c : text) {
        if (is_whitespace(c)) continue;
        auto idx = static_cast<unsigned char>(c);
        if (!seen[idx]) {
            seen[idx] = true;
            out.push_back(c);
        }
    }
}

void collect_spans(std::string_view text, const std::vector<Span>& spans, SpanKind kind,
                   std::array<bool, 256>& seen, std::vector<char>& out) {
    for (const auto& span : spans) {
        if (span.kind != kind) continue;
        collect(text.substr(span.begin, span.end - span.begin), seen, out);
    }
}

bool has_spans_of(const TaskInstance& inst, SpanKind kind) {
    auto any = [kind](const std::vector<Span>& spans) {
        return std::any_of(spans.begin(), spans.end(),
                           [kind](const Span& s) { return s.kind == kind; });
    };
    if (any(inst.question_spans)) return true;
    for (const auto& ex : inst.examples)
        if (any(ex.question_spans)) return true;
    return false;
}

}  // namespace

std::vector<char> extract_symbols(const TaskInstance& inst, SymbolScope scope) {
    std::array<bool, 256> seen{};
    std::vector<char> out;
    if (scope == SymbolScope::All) {
        for (const auto& ex : inst.examples) {
            collect(ex.question, seen, out);
            collect(ex.answer, seen, out);
        }
        collect(inst.question, seen, out);
        collect(inst.answer, seen, out);
        return out;
    }
    SpanKind kind = scope == SymbolScope::Operand ? SpanKind::Operand : SpanKind::Operator;
    if (!has_spans_of(inst, kind))
        throw MissingSpans("instance lacks " +
                           std::string(kind == SpanKind::Operand ? "operand" : "operator") +
                           " span annotations");
    for (const auto& ex : inst.examples) {
        collect_spans(ex.question, ex.question_spans, kind, seen, out);
        if (scope == SymbolScope::Operand) collect(ex.answer, seen, out);
    }
    collect_spans(inst.question, inst.question_spans, kind, seen, out);
    if (scope == SymbolScope::Operand) collect(inst.answer, seen, out);
    return out;
}

namespace {

std::string map_id(const std::vector<std::pair<char, char>>& pairs, MapStrategy strategy) {
    std::string key = to_string(strategy);
    for (auto [from, to] : pairs) {
        key.push_back(from);
        key.push_back(to);
    }
    return to_hex(fnv1a64(key));
}

}  // namespace

SymbolMap make_bijection(const std::vector<char>& originals, const SymbolPool& pool,
                         uint64_t seed, MapStrategy strategy) {
    std::array<bool, 256> is_original{};
    for (char c : originals) is_original[static_cast<unsigned char>(c)] = true;
    std::vector<char> candidates;
    for (char c : pool.symbols)
        if (!is_original[static_cast<unsigned char>(c)]) candidates.push_back(c);
    if (candidates.size() < originals.size())
        throw PoolTooSmall("pool leaves " + std::to_string(candidates.size()) +
                           " candidates for " + std::to_string(originals.size()) + " originals");
    SplitMix64 rng(seed);
    rng.shuffle(candidates);
    SymbolMap map;
    map.strategy = strategy;
    for (size_t i = 0; i < originals.size(); ++i) map.pairs.emplace_back(originals[i], candidates[i]);
    map.id = map_id(map.pairs, strategy);
    return map;
}

SymbolMap make_identity_map(const std::vector<char>& originals, MapStrategy strategy) {
    SymbolMap map;
    map.strategy = strategy;
    for (char c : originals) map.pairs.emplace_back(c, c);
    map.id = map_id(map.pairs, strategy);
    return map;
}

SymbolMap invert(const SymbolMap& map) {
    SymbolMap inv;
    inv.strategy = map.strategy;
    for (auto [from, to] : map.pairs) inv.pairs.emplace_back(to, from);
    inv.id = map_id(inv.pairs, inv.strategy);
    return inv;
}

namespace {

struct Table {
    std::array<char, 256> to;
    Table() {
        for (size_t i = 0; i < to.size(); ++i) to[i] = static_cast<char>(i);
    }
    explicit Table(const SymbolMap& map) : Table() {
        for (auto [from, rep] : map.pairs) to[static_cast<unsigned char>(from)] = rep;
    }
    char operator()(char c) const { return to[static_cast<unsigned char>(c)]; }
};

void substitute_all(std::string& text, const Table& table) {
    for (char& c : text)
        if (!is_whitespace(c)) c = table(c);
}

void substitute_spans(std::string& text, const std::vector<Span>& spans, SpanKind kind,
                      const Table& table) {
    for (const auto& span : spans) {
        if (span.kind != kind) continue;
        for (size_t i = span.begin; i < span.end && i < text.size(); ++i)
            if (!is_whitespace(text[i])) text[i] = table(text[i]);
    }
}

}  // namespace

TaskInstance apply_map(const TaskInstance& inst, const SymbolMap& map) {
    if (map.strategy != MapStrategy::All) {
        SpanKind kind =
            map.strategy == MapStrategy::OperandOnly ? SpanKind::Operand : SpanKind::Operator;
        if (!has_spans_of(inst, kind))
            throw ScopeMismatch("map strategy " + to_string(map.strategy) +
                                " needs span annotations the instance lacks");
    }
    Table table(map);
    TaskInstance out = inst;
    auto apply_question = [&](std::string& q, const std::vector<Span>& spans) {
        switch (map.strategy) {
            case MapStrategy::All: substitute_all(q, table); break;
            case MapStrategy::OperandOnly:
                substitute_spans(q, spans, SpanKind::Operand, table);
                break;
            case MapStrategy::OperatorOnly:
                substitute_spans(q, spans, SpanKind::Operator, table);
                break;
        }
    };
    for (auto& ex : out.examples) {
        apply_question(ex.question, ex.question_spans);
        // Answers carry operand-class content; operator maps leave them alone.
        if (map.strategy != MapStrategy::OperatorOnly) substitute_all(ex.answer, table);
    }
    apply_question(out.question, out.question_spans);
    if (map.strategy != MapStrategy::OperatorOnly) substitute_all(out.answer, table);
    out.variant = variant_for_strategy(map.strategy);
    out.mapping_id = map.id;
    return out;
}

VariantSet derive_variants(const TaskInstance& raw_inst, const SymbolPool& pool, uint64_t seed) {
    VariantSet set;
    set.raw = raw_inst;
    set.map_all = make_bijection(extract_symbols(raw_inst, SymbolScope::All), pool,
                                 derive_seed(seed, "map_all"), MapStrategy::All);
    set.map_num = make_bijection(extract_symbols(raw_inst, SymbolScope::Operand), pool,
                                 derive_seed(seed, "map_operand"), MapStrategy::OperandOnly);
    set.map_op = make_bijection(extract_symbols(raw_inst, SymbolScope::Operator), pool,
                                derive_seed(seed, "map_operator"), MapStrategy::OperatorOnly);
    set.all_map = apply_map(raw_inst, set.map_all);
    set.num_map = apply_map(raw_inst, set.map_num);
    set.op_map = apply_map(raw_inst, set.map_op);
    set.all_map.id = raw_inst.id + ".all";
    set.num_map.id = raw_inst.id + ".num";
    set.op_map.id = raw_inst.id + ".op";
    return set;
}

std::string sidecar_line(const std::string& instance_id, const SymbolMap& map) {
    ordered_json j;
    j["id"] = instance_id;
    j["strategy"] = to_string(map.strategy);
    ordered_json pairs = ordered_json::array();
    for (auto [from, to] : map.pairs)
        pairs.push_back(ordered_json::array({std::string(1, from), std::string(1, to)}));
    j["pairs"] = std::move(pairs);
    return j.dump();
}

void write_sidecar(const std::string& path,
                   const std::vector<std::pair<std::string, SymbolMap>>& entries) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& [id, map] : entries) out << sidecar_line(id, map) << '\n';
}

void merge_sidecar(SidecarIndex& index, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ordered_json j = ordered_json::parse(line);
        SymbolMap map;
        map.strategy = strategy_from_string(j.at("strategy").get<std::string>());
        for (const auto& pair : j.at("pairs")) {
            std::string from = pair.at(0).get<std::string>();
            std::string to = pair.at(1).get<std::string>();
            map.pairs.emplace_back(from.at(0), to.at(0));
        }
        map.id = map_id(map.pairs, map.strategy);
        index[j.at("id").get<std::string>()] = std::move(map);
    }
}

SidecarIndex read_sidecar(const std::string& path) {
    SidecarIndex index;
    merge_sidecar(index, path);
    return index;
}

}  // namespace arbench::remap
