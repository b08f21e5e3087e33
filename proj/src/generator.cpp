#include "arbench/generator.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "arbench/oracle.hpp"
#include "arbench/rng.hpp"

namespace arbench::gen {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kRedrawCap = 1000;

SubDatasetSpec make_spec(std::string name, Category cat, std::string operation,
                         LengthMode mode = LengthMode::Variable,
                         std::pair<int, int> len = {4, 16},
                         std::pair<long long, long long> values = {0, 99999}, int base = 10,
                         int examples = 8) {
    SubDatasetSpec spec;
    spec.name = std::move(name);
    spec.category = cat;
    spec.operation = std::move(operation);
    spec.length_mode = mode;
    spec.operand_length_range = len;
    spec.value_range = values;
    spec.base = base;
    spec.example_count = examples;
    return spec;
}

// The 14 EC archetypes with SR derivatives, listing order. chat_square
// (sqrt) and var_len_chat_data (dates) stay EC-only.
struct SrParent {
    const char* stem;  // SR names are <stem>_dataset / <stem>_{num,op}_dataset
    const char* parent;
};

const std::vector<SrParent>& sr_parents() {
    static const std::vector<SrParent> parents = {
        {"var_len_chat_list_cnt", "var_len_chat_list_cnt_raw_dataset"},
        {"var_len_chat_strop", "var_len_chat_strop_raw_dataset"},
        {"fixed_len_chat_substr", "fixed_len_chat_substr_raw_dataset"},
        {"fixed_len_chat_bit", "fixed_len_chat_bit_raw_dataset"},
        {"fixed_len_chat_str", "fixed_len_chat_str_raw_dataset"},
        {"var_len_chat_bitop", "var_len_chat_bitop_raw_dataset"},
        {"var_len_chat_str", "var_len_chat_str_raw_dataset"},
        {"var_len_chat_bit_shift", "var_len_chat_bit_shift_raw_dataset"},
        {"var_len_chat_list", "var_len_chat_list_raw_dataset"},
        {"fixed_len_chat_bitop", "fixed_len_chat_bitop_raw_dataset"},
        {"var_len_chat_bit", "var_len_chat_bit_raw_dataset"},
        {"var_len_chat_set", "var_len_chat_set_raw_dataset"},
        {"fixed_len_chat_strop", "fixed_len_chat_strop_raw_dataset"},
        {"fixed_len_chat_bit_shift", "fixed_len_chat_bit_shift_raw_dataset"},
    };
    return parents;
}

std::vector<SubDatasetSpec> build_archetypes() {
    std::vector<SubDatasetSpec> specs;

    // BC: decimal arithmetic, no few-shot block.
    specs.push_back(make_spec("chat_add_dataset", Category::BC, "decimal_add",
                              LengthMode::Variable, {1, 5}, {0, 99999}, 10, 0));
    specs.push_back(make_spec("chat_div_dataset", Category::BC, "decimal_div",
                              LengthMode::Variable, {1, 5}, {0, 99999}, 10, 0));
    specs.push_back(make_spec("chat_sub_dataset", Category::BC, "decimal_sub",
                              LengthMode::Variable, {1, 5}, {0, 99999}, 10, 0));
    specs.push_back(make_spec("chat_mul_dataset", Category::BC, "decimal_mul",
                              LengthMode::Variable, {1, 5}, {0, 99999}, 10, 0));

    // EC, listing order.
    specs.push_back(make_spec("var_len_chat_list_cnt_raw_dataset", Category::EC, "list_stat",
                              LengthMode::Variable, {4, 10}, {0, 99}));
    specs.push_back(make_spec("var_len_chat_strop_raw_dataset", Category::EC, "string_op",
                              LengthMode::Variable, {4, 16}));
    specs.push_back(make_spec("fixed_len_chat_substr_raw_dataset", Category::EC, "substring",
                              LengthMode::Fixed, {8, 8}));
    specs.push_back(make_spec("fixed_len_chat_bit_raw_dataset", Category::EC, "bitwise",
                              LengthMode::Fixed, {8, 8}));
    specs.push_back(make_spec("fixed_len_chat_str_raw_dataset", Category::EC, "string",
                              LengthMode::Fixed, {8, 8}));
    specs.push_back(make_spec("var_len_chat_bitop_raw_dataset", Category::EC, "bit_manip",
                              LengthMode::Variable, {4, 16}));
    specs.push_back(make_spec("var_len_chat_str_raw_dataset", Category::EC, "string",
                              LengthMode::Variable, {4, 16}));
    specs.push_back(make_spec("var_len_chat_bit_shift_raw_dataset", Category::EC, "bit_shift",
                              LengthMode::Variable, {4, 16}));
    specs.push_back(make_spec("var_len_chat_list_raw_dataset", Category::EC, "list_op",
                              LengthMode::Variable, {4, 10}, {0, 99}));
    specs.push_back(make_spec("fixed_len_chat_bitop_raw_dataset", Category::EC, "bit_manip",
                              LengthMode::Fixed, {8, 8}));
    specs.push_back(make_spec("chat_square_dataset", Category::EC, "square",
                              LengthMode::Variable, {1, 4}, {2, 9999}));
    specs.push_back(make_spec("var_len_chat_bit_raw_dataset", Category::EC, "bitwise",
                              LengthMode::Variable, {4, 16}));
    specs.push_back(make_spec("var_len_chat_data_raw_dataset", Category::EC, "date_diff",
                              LengthMode::Variable, {4, 16}, {1970, 2030}));
    specs.push_back(make_spec("var_len_chat_set_raw_dataset", Category::EC, "set_op",
                              LengthMode::Variable, {3, 6}, {0, 9}));
    specs.push_back(make_spec("fixed_len_chat_strop_raw_dataset", Category::EC, "string_op",
                              LengthMode::Fixed, {8, 8}));
    specs.push_back(make_spec("fixed_len_chat_bit_shift_raw_dataset", Category::EC, "bit_shift",
                              LengthMode::Fixed, {8, 8}));

    // NBR, listing order. Operands are 1..8 digits in the task base.
    auto nbr = [&](std::string name, std::string op, int base) {
        specs.push_back(make_spec(std::move(name), Category::NBR, std::move(op),
                                  LengthMode::Variable, {1, 8}, {0, 0}, base));
    };
    nbr("chat_add_base3_raw_dataset", "base_add", 3);
    nbr("chat_add_base4_raw_dataset", "base_add", 4);
    nbr("chat_base5_raw_dataset", "base_convert", 5);
    nbr("chat_sub_base4_raw_dataset", "base_sub", 4);
    nbr("chat_mul_base3_raw_dataset", "base_mul", 3);
    nbr("chat_base3_raw_dataset", "base_convert", 3);
    nbr("chat_mul_base4_raw_dataset", "base_mul", 4);
    nbr("chat_base4_raw_dataset", "base_convert", 4);
    nbr("chat_add_base5_raw_dataset", "base_add", 5);
    nbr("chat_sub_base3_raw_dataset", "base_sub", 3);
    nbr("chat_mul_base5_raw_dataset", "base_mul", 5);
    nbr("chat_sub_base5_raw_dataset", "base_sub", 5);

    // SMA, listing order.
    auto sma = [&](std::string name, std::string op) {
        specs.push_back(make_spec(std::move(name), Category::SMA, std::move(op)));
    };
    sma("chat_quadratic_dataset", "func_quadratic");
    sma("chat_triangle_wave_dataset", "func_triangle");
    sma("chat_sawtooth_wave_dataset", "func_sawtooth");
    sma("chat_square_wave_dataset", "func_square");
    sma("chat_cosine_dataset", "func_cosine");
    sma("chat_linear_dataset", "func_linear");
    sma("chat_sine_dataset", "func_sine");

    // SR: each eligible EC archetype under the three map strategies.
    // Suffix convention: op -> operator map, num -> operand map, no suffix ->
    // combined map.
    auto lookup = [&specs](std::string_view name) -> const SubDatasetSpec& {
        for (const auto& spec : specs)
            if (spec.name == name) return spec;
        throw std::logic_error("SR parent missing from archetype table");
    };
    for (const auto& parent : sr_parents()) {
        for (auto [suffix, variant] :
             {std::pair<const char*, Variant>{"_num", Variant::NumMap},
              {"_op", Variant::OpMap},
              {"", Variant::AllMap}}) {
            SubDatasetSpec spec = lookup(parent.parent);
            spec.name = std::string(parent.stem) + suffix + "_dataset";
            spec.category = Category::SR;
            spec.derived_from = parent.parent;
            spec.map_strategy = variant;
            specs.push_back(std::move(spec));
        }
    }
    return specs;
}

}  // namespace

const std::vector<SubDatasetSpec>& all_archetypes() {
    static const std::vector<SubDatasetSpec> specs = build_archetypes();
    return specs;
}

std::optional<SubDatasetSpec> find_archetype(std::string_view name) {
    for (const auto& spec : all_archetypes())
        if (spec.name == name) return spec;
    return std::nullopt;
}

std::vector<SubDatasetSpec> select_archetypes(const std::vector<std::string>& selection) {
    std::vector<SubDatasetSpec> out;
    auto add_category = [&](Category cat) {
        for (const auto& spec : all_archetypes())
            if (spec.category == cat) out.push_back(spec);
    };
    for (const auto& token : selection) {
        if (token == "all") {
            out = all_archetypes();
            return out;
        }
        bool is_category = false;
        for (Category cat : {Category::BC, Category::EC, Category::NBR, Category::SMA,
                             Category::SR}) {
            if (token == to_string(cat)) {
                add_category(cat);
                is_category = true;
                break;
            }
        }
        if (is_category) continue;
        auto spec = find_archetype(token);
        if (!spec) throw UnknownArchetype("unknown archetype or category: " + token);
        out.push_back(*spec);
    }
    return out;
}

uint64_t spec_seed(const SubDatasetSpec& spec, uint64_t global_seed) {
    const std::string& key = spec.derived_from.empty() ? spec.name : spec.derived_from;
    return derive_seed(global_seed, key);
}

// --- rendering -------------------------------------------------------------

namespace {

struct QuestionBuilder {
    std::string text;
    std::vector<Span> spans;

    void lit(std::string_view s) { text += s; }
    void operand(std::string_view s) { mark(s, SpanKind::Operand); }
    void op(std::string_view s) { mark(s, SpanKind::Operator); }

private:
    void mark(std::string_view s, SpanKind kind) {
        spans.push_back({text.size(), text.size() + s.size(), kind});
        text += s;
    }
};

struct Rendered {
    std::string question;
    std::vector<Span> spans;
    std::string answer;
};

// String payloads draw from a small alphabet so that a whole instance's
// symbol set (examples included) always fits a collision-free image inside
// the 62-symbol replacement pool.
constexpr std::string_view kStringAlphabet = "abcdefgh";

std::string random_digits(SplitMix64& rng, int len, int base) {
    std::string s;
    s.reserve(len);
    for (int i = 0; i < len; ++i) {
        int lo = (i == 0 && len > 1) ? 1 : 0;
        s.push_back(static_cast<char>('0' + rng.range(lo, base - 1)));
    }
    return s;
}

std::string random_bits(SplitMix64& rng, int len) {
    std::string s;
    s.reserve(len);
    for (int i = 0; i < len; ++i) s.push_back(rng.range(0, 1) ? '1' : '0');
    return s;
}

std::string random_word(SplitMix64& rng, int len, std::string_view alphabet) {
    std::string s;
    s.reserve(len);
    for (int i = 0; i < len; ++i) s.push_back(rng.pick(alphabet));
    return s;
}

int draw_len(const SubDatasetSpec& spec, SplitMix64& rng) {
    if (spec.length_mode == LengthMode::Fixed) return 8;
    return static_cast<int>(rng.range(spec.operand_length_range.first,
                                      spec.operand_length_range.second));
}

Rendered finish(QuestionBuilder&& qb, std::string answer) {
    return {std::move(qb.text), std::move(qb.spans), std::move(answer)};
}

std::string render_list(const std::vector<std::string>& xs) {
    std::string s = "[";
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ", ";
        s += xs[i];
    }
    return s + "]";
}

std::string render_set(const std::vector<std::string>& xs) {
    std::string s = "{";
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ", ";
        s += xs[i];
    }
    return s + "}";
}

void build_elements(QuestionBuilder& qb, const std::vector<std::string>& xs, char open,
                    char close) {
    qb.lit(std::string(1, open));
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) qb.lit(", ");
        qb.operand(xs[i]);
    }
    qb.lit(std::string(1, close));
}

std::vector<std::string> draw_set(SplitMix64& rng, const SubDatasetSpec& spec) {
    int size = static_cast<int>(
        rng.range(spec.operand_length_range.first, spec.operand_length_range.second));
    std::vector<std::string> pool;
    for (long long v = spec.value_range.first; v <= spec.value_range.second; ++v)
        pool.push_back(std::to_string(v));
    rng.shuffle(pool);
    pool.resize(static_cast<size_t>(size));
    std::sort(pool.begin(), pool.end());
    return pool;
}

oracle::Date draw_date(SplitMix64& rng, const SubDatasetSpec& spec) {
    oracle::Date d;
    d.year = static_cast<int>(rng.range(spec.value_range.first, spec.value_range.second));
    d.month = static_cast<int>(rng.range(1, 12));
    d.day = static_cast<int>(rng.range(1, 28));
    return d;
}

void build_date(QuestionBuilder& qb, const oracle::Date& d) {
    char buf[16];
    qb.lit("[");
    std::snprintf(buf, sizeof buf, "%04d", d.year);
    qb.operand(buf);
    qb.lit(", ");
    std::snprintf(buf, sizeof buf, "%02d", d.month);
    qb.operand(buf);
    qb.lit(", ");
    std::snprintf(buf, sizeof buf, "%02d", d.day);
    qb.operand(buf);
    qb.lit("]");
}

std::string quarter_turns_str(long long q) {
    if (q == 0) return "0";
    if (q % 2 == 0) {
        long long h = q / 2;
        return h == 1 ? "pi" : std::to_string(h) + "pi";
    }
    return q == 1 ? "pi/2" : std::to_string(q) + "pi/2";
}

using oracle::FunctionFamily;
using oracle::FunctionParams;

struct FunctionTask {
    FunctionFamily family = FunctionFamily::Linear;
    FunctionParams params;
    bool trig = false;
};

FunctionTask draw_function(const SubDatasetSpec& spec, SplitMix64& rng) {
    FunctionTask task;
    if (spec.operation == "func_linear") {
        task.family = FunctionFamily::Linear;
        task.params.a = rng.range(1, 9);
        task.params.c = rng.range(0, 9);
    } else if (spec.operation == "func_quadratic") {
        task.family = FunctionFamily::Quadratic;
        task.params.a = rng.range(1, 3);
        task.params.b = rng.range(0, 3);
        task.params.c = rng.range(0, 9);
    } else if (spec.operation == "func_sine") {
        task.family = FunctionFamily::Sine;
        task.params.a = rng.range(1, 9);
        task.trig = true;
    } else if (spec.operation == "func_cosine") {
        task.family = FunctionFamily::Cosine;
        task.params.a = rng.range(1, 9);
        task.trig = true;
    } else if (spec.operation == "func_triangle") {
        task.family = FunctionFamily::TriangleWave;
        task.params.a = rng.range(1, 9);
        task.params.period = rng.range(2, 5);
    } else if (spec.operation == "func_sawtooth") {
        task.family = FunctionFamily::SawtoothWave;
        task.params.a = rng.range(1, 9);
        task.params.period = rng.range(2, 5);
    } else if (spec.operation == "func_square") {
        task.family = FunctionFamily::SquareWave;
        task.params.a = rng.range(1, 9);
        task.params.period = rng.range(2, 5);
    } else {
        throw std::logic_error("not a function spec: " + spec.operation);
    }
    return task;
}

Rendered render_function_at(const FunctionTask& task, long long x) {
    QuestionBuilder qb;
    qb.op("fun");
    qb.lit("(");
    qb.operand(task.trig ? quarter_turns_str(x) : std::to_string(x));
    qb.lit(") ");
    qb.op("=");
    return finish(std::move(qb), oracle::eval_function(task.family, task.params, x));
}

// Surface operation tokens cycled across a sub-dataset's instances.
const std::vector<std::string>& ops_for(const std::string& operation) {
    static const std::unordered_map<std::string, std::vector<std::string>> table = {
        {"decimal_add", {"+"}},
        {"decimal_sub", {"-"}},
        {"decimal_mul", {"*"}},
        {"decimal_div", {"/"}},
        {"square", {"sqrt"}},
        {"bitwise", {"binary_and", "binary_or", "binary_xor", "binary_not"}},
        {"bit_shift",
         {"bit_shift_left", "bit_shift_right", "circular_left_shift", "circular_right_shift"}},
        {"bit_manip", {"check_bit", "set_bit", "toggle_bit"}},
        {"string", {"reverse", "repeat"}},
        {"string_op", {"concatenate", "get_length"}},
        {"substring", {"contains(in order)"}},
        {"set_op", {"union", "intersection", "difference"}},
        {"list_op", {"sort", "filter", "deduplicate"}},
        {"list_stat", {"max", "min", "median", "mode"}},
        {"date_diff", {"days_between_dates"}},
        {"base_add", {"+"}},
        {"base_sub", {"-"}},
        {"base_mul", {"*"}},
        {"base_convert", {"to_base"}},
    };
    auto it = table.find(operation);
    if (it == table.end()) throw std::logic_error("no op table for: " + operation);
    return it->second;
}

Rendered render_item(const SubDatasetSpec& spec, const std::string& op, SplitMix64& rng) {
    using namespace oracle;
    QuestionBuilder qb;
    const std::string& fam = spec.operation;

    if (fam == "decimal_add" || fam == "decimal_sub" || fam == "decimal_mul") {
        long long a = rng.range(spec.value_range.first, spec.value_range.second);
        long long b = rng.range(spec.value_range.first, spec.value_range.second);
        if (fam == "decimal_sub" && a < b) std::swap(a, b);
        qb.operand(std::to_string(a));
        qb.lit(" ");
        qb.op(op);
        qb.lit(" ");
        qb.operand(std::to_string(b));
        qb.lit(" ");
        qb.op("=");
        DecimalOp dop = fam == "decimal_add" ? DecimalOp::Add
                        : fam == "decimal_sub" ? DecimalOp::Sub
                                               : DecimalOp::Mul;
        return finish(std::move(qb),
                      eval_decimal(std::to_string(a), std::to_string(b), dop));
    }
    if (fam == "decimal_div") {
        long long d = rng.range(1, 999);
        long long q = rng.range(0, spec.value_range.second / d);
        long long a = d * q;
        qb.operand(std::to_string(a));
        qb.lit(" ");
        qb.op("/");
        qb.lit(" ");
        qb.operand(std::to_string(d));
        qb.lit(" ");
        qb.op("=");
        return finish(std::move(qb), std::to_string(q));
    }
    if (fam == "square") {
        long long root = rng.range(spec.value_range.first, spec.value_range.second);
        qb.op("sqrt");
        qb.lit("(");
        qb.operand(std::to_string(root * root));
        qb.lit(") ");
        qb.op("=");
        return finish(std::move(qb), std::to_string(root));
    }
    if (fam == "bitwise") {
        int len = draw_len(spec, rng);
        std::string a = random_bits(rng, len);
        if (op == "binary_not") {
            qb.op(op);
            qb.lit(" ");
            qb.operand(a);
            qb.lit(" ");
            qb.op("=");
            return finish(std::move(qb), eval_bitwise(a, std::nullopt, BitwiseOp::Not));
        }
        std::string b = random_bits(rng, len);
        qb.operand(a);
        qb.lit(" ");
        qb.op(op);
        qb.lit(" ");
        qb.operand(b);
        qb.lit(" ");
        qb.op("=");
        BitwiseOp bop = op == "binary_and" ? BitwiseOp::And
                        : op == "binary_or" ? BitwiseOp::Or
                                            : BitwiseOp::Xor;
        return finish(std::move(qb), eval_bitwise(a, b, bop));
    }
    if (fam == "bit_shift") {
        int len = draw_len(spec, rng);
        std::string a = random_bits(rng, len);
        long long k = rng.range(0, len);
        qb.operand(a);
        qb.lit(" ");
        qb.op(op);
        qb.lit(" ");
        qb.operand(std::to_string(k));
        qb.lit(" ");
        qb.op("=");
        ShiftOp sop = op == "bit_shift_left"       ? ShiftOp::Shl
                      : op == "bit_shift_right"    ? ShiftOp::Shr
                      : op == "circular_left_shift" ? ShiftOp::Rotl
                                                    : ShiftOp::Rotr;
        return finish(std::move(qb), eval_bit_shift(a, k, sop));
    }
    if (fam == "bit_manip") {
        int len = draw_len(spec, rng);
        std::string a = random_bits(rng, len);
        long long pos = rng.range(0, len - 1);
        qb.operand(a);
        qb.lit(" ");
        qb.op(op);
        qb.lit(" ");
        qb.operand(std::to_string(pos));
        qb.lit(" ");
        qb.op("=");
        BitManipOp mop = op == "check_bit" ? BitManipOp::Check
                         : op == "set_bit" ? BitManipOp::Set
                                           : BitManipOp::Toggle;
        return finish(std::move(qb), eval_bit_manip(a, pos, mop));
    }
    if (fam == "string") {
        int len = draw_len(spec, rng);
        std::string s = random_word(rng, len, kStringAlphabet);
        if (op == "reverse") {
            qb.op("reverse");
            qb.lit("('");
            qb.operand(s);
            qb.lit("') ");
            qb.op("=");
            return finish(std::move(qb), reverse_string(s));
        }
        long long count = rng.range(2, 4);
        qb.op("repeat");
        qb.lit("('");
        qb.operand(s);
        qb.lit("', ");
        qb.operand(std::to_string(count));
        qb.lit(") ");
        qb.op("=");
        return finish(std::move(qb), repeat(s, count));
    }
    if (fam == "string_op") {
        int len = draw_len(spec, rng);
        std::string a = random_word(rng, len, kStringAlphabet);
        if (op == "concatenate") {
            std::string b = random_word(rng, draw_len(spec, rng), kStringAlphabet);
            qb.op("concatenate");
            qb.lit("('");
            qb.operand(a);
            qb.lit("', '");
            qb.operand(b);
            qb.lit("') ");
            qb.op("=");
            return finish(std::move(qb), concatenate(a, b));
        }
        qb.op("get_length");
        qb.lit("('");
        qb.operand(a);
        qb.lit("') ");
        qb.op("=");
        return finish(std::move(qb), get_length(a));
    }
    if (fam == "substring") {
        int len = draw_len(spec, rng);
        std::string haystack = random_word(rng, len, "abcdefgh");
        std::string needle = random_word(rng, static_cast<int>(rng.range(2, 4)), "abcdefgh");
        qb.operand(haystack);
        qb.lit(" ");
        qb.op("contains(in order)");
        qb.lit(" ");
        qb.operand(needle);
        qb.lit(" ");
        qb.op("=");
        return finish(std::move(qb), eval_substring_in_order(haystack, needle));
    }
    if (fam == "set_op") {
        auto a = draw_set(rng, spec);
        auto b = draw_set(rng, spec);
        qb.op(op);
        qb.lit("(");
        build_elements(qb, a, '{', '}');
        qb.lit(", ");
        build_elements(qb, b, '{', '}');
        qb.lit(") ");
        qb.op("=");
        SetOp sop = op == "union"          ? SetOp::Union
                    : op == "intersection" ? SetOp::Intersection
                                           : SetOp::Difference;
        return finish(std::move(qb), render_set(eval_set_op(a, b, sop)));
    }
    if (fam == "list_op" || fam == "list_stat") {
        int len = static_cast<int>(
            rng.range(spec.operand_length_range.first, spec.operand_length_range.second));
        bool letters = op == "deduplicate" || op == "mode";
        std::vector<std::string> xs;
        for (int i = 0; i < len; ++i) {
            if (letters)
                xs.emplace_back(1, static_cast<char>('a' + rng.range(0, 4)));
            else
                xs.push_back(std::to_string(
                    rng.range(spec.value_range.first, spec.value_range.second)));
        }
        long long k = 0;
        qb.op(op);
        qb.lit("(");
        build_elements(qb, xs, '[', ']');
        if (op == "filter") {
            k = rng.range(1, 50);
            qb.lit(", ");
            qb.operand(std::to_string(k));
        }
        qb.lit(") ");
        qb.op("=");
        ListOp lop = op == "sort"          ? ListOp::Sort
                     : op == "filter"      ? ListOp::FilterGt
                     : op == "deduplicate" ? ListOp::Deduplicate
                     : op == "max"         ? ListOp::Max
                     : op == "min"         ? ListOp::Min
                     : op == "median"      ? ListOp::Median
                                           : ListOp::Mode;
        auto result = eval_list_op(xs, lop, k);
        bool scalar = fam == "list_stat";
        return finish(std::move(qb), scalar ? result.at(0) : render_list(result));
    }
    if (fam == "date_diff") {
        oracle::Date d1 = draw_date(rng, spec);
        oracle::Date d2 = draw_date(rng, spec);
        qb.op("days_between_dates");
        qb.lit("(");
        build_date(qb, d1);
        qb.lit(", ");
        build_date(qb, d2);
        qb.lit(") ");
        qb.op("=");
        return finish(std::move(qb), eval_date_diff(d1, d2));
    }
    if (fam == "base_add" || fam == "base_sub" || fam == "base_mul") {
        int la = static_cast<int>(
            rng.range(spec.operand_length_range.first, spec.operand_length_range.second));
        int lb = static_cast<int>(
            rng.range(spec.operand_length_range.first, spec.operand_length_range.second));
        std::string a = random_digits(rng, la, spec.base);
        std::string b = random_digits(rng, lb, spec.base);
        if (fam == "base_sub" && radix::compare(a, b, spec.base) < 0) std::swap(a, b);
        qb.operand(a);
        qb.lit(" ");
        qb.op(op);
        qb.lit(" ");
        qb.operand(b);
        qb.lit(" ");
        qb.op("=");
        ArithOp aop = fam == "base_add" ? ArithOp::Add
                      : fam == "base_sub" ? ArithOp::Sub
                                          : ArithOp::Mul;
        return finish(std::move(qb), eval_base_arith(a, b, aop, spec.base));
    }
    if (fam == "base_convert") {
        long long max = 1;
        for (int i = 0; i < 8; ++i) max *= spec.base;
        long long v = rng.range(0, max - 1);
        qb.operand(std::to_string(v));
        qb.lit(" (base10) to base " + std::to_string(spec.base) + " ");
        qb.op("=");
        return finish(std::move(qb), convert_base(std::to_string(v), 10, spec.base));
    }
    throw std::logic_error("no renderer for family: " + fam);
}

std::string instance_id(const SubDatasetSpec& spec, uint64_t seed, int index) {
    return to_hex(fnv1a64(spec.name + "|" + to_hex(seed) + "|" + std::to_string(index)));
}

std::string rule_text_for(const SubDatasetSpec& spec) {
    if (spec.category != Category::NBR) return "";
    if (spec.operation == "base_convert")
        return "This is base " + std::to_string(spec.base) + " conversion.";
    return "This is base " + std::to_string(spec.base) + " operation.";
}

GeneratedDataset generate_raw(const SubDatasetSpec& spec, uint64_t seed) {
    GeneratedDataset out;
    SplitMix64 rng(seed);
    std::unordered_set<std::string> used_questions;
    bool function_family = spec.operation.rfind("func_", 0) == 0;

    std::vector<Rendered> items;
    std::vector<FunctionTask> tasks;  // function families only
    std::vector<std::string> item_ops;

    const std::vector<std::string>* ops = function_family ? nullptr : &ops_for(spec.operation);

    for (int i = 0; i < spec.instances; ++i) {
        Rendered item;
        FunctionTask task;
        int attempts = 0;
        while (true) {
            if (++attempts > kRedrawCap)
                throw ExhaustedSpace(spec.name + ": cannot draw " +
                                     std::to_string(spec.instances) + " distinct questions");
            if (function_family) {
                task = draw_function(spec, rng);
                long long x = rng.range(9, 500);
                if (task.trig) x = rng.range(8, 499);
                item = render_function_at(task, x);
            } else {
                item = render_item(spec, (*ops)[i % ops->size()], rng);
            }
            if (used_questions.insert(item.question).second) break;
        }
        items.push_back(std::move(item));
        if (function_family) tasks.push_back(task);
        if (!function_family) item_ops.push_back((*ops)[i % ops->size()]);
    }

    std::string rule = rule_text_for(spec);
    for (int i = 0; i < spec.instances; ++i) {
        TaskInstance inst;
        inst.id = instance_id(spec, seed, i);
        inst.category = spec.category;
        inst.sub_dataset = spec.name;
        inst.variant = Variant::Raw;
        inst.rule_text = rule;
        inst.question = items[i].question;
        inst.question_spans = items[i].spans;
        inst.answer = items[i].answer;
        inst.seed = derive_seed(seed, "inst" + std::to_string(i));

        if (spec.example_count > 0) {
            if (function_family) {
                // The few-shot block samples the same hidden function at
                // x = 1..m (quarter turns 0..m-1 for trig).
                for (int j = 0; j < spec.example_count; ++j) {
                    long long x = tasks[i].trig ? j : j + 1;
                    Rendered ex = render_function_at(tasks[i], x);
                    inst.examples.push_back({ex.question, ex.answer, ex.spans});
                }
            } else {
                std::unordered_set<std::string> local;
                for (int j = 0; j < spec.example_count; ++j) {
                    int attempts = 0;
                    while (true) {
                        if (++attempts > kRedrawCap)
                            throw ExhaustedSpace(spec.name + ": cannot draw distinct examples");
                        Rendered ex = render_item(spec, item_ops[i], rng);
                        if (used_questions.count(ex.question) || local.count(ex.question))
                            continue;
                        local.insert(ex.question);
                        inst.examples.push_back({ex.question, ex.answer, ex.spans});
                        break;
                    }
                }
            }
        }
        out.instances.push_back(std::move(inst));
    }
    return out;
}

const char* variant_id_suffix(Variant v) {
    switch (v) {
        case Variant::AllMap: return ".all";
        case Variant::NumMap: return ".num";
        case Variant::OpMap: return ".op";
        case Variant::Raw: break;
    }
    throw std::logic_error("raw variant has no suffix");
}

const char* map_seed_tag(Variant v) {
    switch (v) {
        case Variant::AllMap: return "map_all";
        case Variant::NumMap: return "map_operand";
        case Variant::OpMap: return "map_operator";
        case Variant::Raw: break;
    }
    throw std::logic_error("raw variant has no map");
}

GeneratedDataset generate_sr(const SubDatasetSpec& spec, uint64_t seed) {
    auto parent = find_archetype(spec.derived_from);
    if (!parent) throw UnknownArchetype("missing SR parent: " + spec.derived_from);
    SubDatasetSpec parent_spec = *parent;
    parent_spec.instances = spec.instances;
    GeneratedDataset raw = generate_raw(parent_spec, seed);

    remap::SymbolPool pool = remap::default_pool();
    remap::MapStrategy strategy = remap::strategy_for_variant(spec.map_strategy);
    remap::SymbolScope scope = spec.map_strategy == Variant::AllMap ? remap::SymbolScope::All
                               : spec.map_strategy == Variant::NumMap
                                   ? remap::SymbolScope::Operand
                                   : remap::SymbolScope::Operator;

    GeneratedDataset out;
    for (const auto& raw_inst : raw.instances) {
        auto originals = remap::extract_symbols(raw_inst, scope);
        auto map = remap::make_bijection(
            originals, pool, derive_seed(raw_inst.seed, map_seed_tag(spec.map_strategy)),
            strategy);
        TaskInstance mapped = remap::apply_map(raw_inst, map);
        mapped.id = raw_inst.id + variant_id_suffix(spec.map_strategy);
        mapped.sub_dataset = spec.name;
        mapped.category = Category::SR;
        out.mappings.emplace_back(mapped.id, std::move(map));
        out.instances.push_back(std::move(mapped));
    }
    return out;
}

}  // namespace

GeneratedDataset generate_subdataset(const SubDatasetSpec& spec, uint64_t seed) {
    if (spec.category == Category::SR) return generate_sr(spec, seed);
    return generate_raw(spec, seed);
}

// --- prompts ----------------------------------------------------------------

std::string to_string(Strategy s) { return s == Strategy::DP ? "dp" : "cot"; }

Strategy strategy_from_string(std::string_view s) {
    if (s == "dp" || s == "DP") return Strategy::DP;
    if (s == "cot" || s == "CoT" || s == "COT") return Strategy::CoT;
    throw std::invalid_argument("unknown strategy: " + std::string(s));
}

namespace {

constexpr const char* kAnswerFormatClause =
    "providing your final answer in the format: \"Answer: The answer is {your answer}.\"";

const char* instruction_for(Category category) {
    switch (category) {
        case Category::EC:
        case Category::SR:
            return "The task is to identify patterns and discover rules from the provided "
                   "examples, then answer a question. The symbols in the question may not have "
                   "their usual meanings, so carefully analyze the rules and expressions before "
                   "providing your final answer in the format: \"Answer: The answer is {your "
                   "answer}.\"";
        case Category::NBR:
        case Category::SMA:
            return "The task is to identify patterns and discover rules from the provided "
                   "examples, then answer a question. Carefully analyze the rules and "
                   "expressions before providing your final answer in the format: \"Answer: The "
                   "answer is {your answer}.\"";
        case Category::BC:
            return "Solve the following problem and provide your final answer in the format: "
                   "\"Answer: The answer is {your answer}.\"";
        case Category::MA:
            return "Solve the following math word problem and provide your final answer in the "
                   "format: \"Answer: The answer is {your answer}.\"";
    }
    throw std::logic_error("bad category");
}

std::string replace_slot(std::string text, std::string_view slot, std::string_view value) {
    size_t pos = text.find(slot);
    while (pos != std::string::npos) {
        text.replace(pos, slot.size(), value);
        pos = text.find(slot, pos + value.size());
    }
    return text;
}

}  // namespace

PromptTemplate template_for(Category category) {
    PromptTemplate t;
    t.instruction = instruction_for(category);
    t.example_format = "Question: {question}\nAnswer: The answer is {answer}.\n\n";
    t.question_format = "Question: {question}\n\n";
    t.cot_suffix = "Let's think step by step.\n\n";
    return t;
}

const std::string& ma_cot_fewshot_block() {
    // Eight worked word problems shown before MA questions under CoT.
    static const std::string block =
        "Question: A baker made 48 rolls and sold 19 of them in the morning. He sold 12 more in "
        "the afternoon. How many rolls are left?\n"
        "Answer: The baker started with 48 rolls. He sold 19 + 12 = 31 rolls in total. So 48 - "
        "31 = 17 rolls are left. The answer is 17.\n\n"
        "Question: Mia has 3 boxes of crayons with 24 crayons in each box. She gives 10 crayons "
        "to her friend. How many crayons does she have now?\n"
        "Answer: Mia starts with 3 * 24 = 72 crayons. After giving away 10, she has 72 - 10 = "
        "62 crayons. The answer is 62.\n\n"
        "Question: A train travels 60 miles per hour for 2 hours and then 40 miles per hour for "
        "3 hours. How far does it travel in total?\n"
        "Answer: The first leg covers 60 * 2 = 120 miles. The second leg covers 40 * 3 = 120 "
        "miles. In total the train travels 120 + 120 = 240 miles. The answer is 240.\n\n"
        "Question: Sam buys 4 notebooks for 3 dollars each and a pen for 2 dollars. He pays "
        "with a 20 dollar bill. How much change does he get?\n"
        "Answer: The notebooks cost 4 * 3 = 12 dollars. With the pen the total is 12 + 2 = 14 "
        "dollars. The change is 20 - 14 = 6 dollars. The answer is 6.\n\n"
        "Question: A farm has 15 cows and twice as many chickens. How many animals are on the "
        "farm?\n"
        "Answer: There are 15 * 2 = 30 chickens. Together with the cows that is 15 + 30 = 45 "
        "animals. The answer is 45.\n\n"
        "Question: Lena reads 12 pages every weekday and 20 pages on each weekend day. How many "
        "pages does she read in one week?\n"
        "Answer: On weekdays she reads 12 * 5 = 60 pages. On the weekend she reads 20 * 2 = 40 "
        "pages. In one week she reads 60 + 40 = 100 pages. The answer is 100.\n\n"
        "Question: A parking lot has 6 rows with 18 spaces each. If 75 spaces are taken, how "
        "many spaces are free?\n"
        "Answer: The lot has 6 * 18 = 108 spaces. With 75 taken, 108 - 75 = 33 spaces are free. "
        "The answer is 33.\n\n"
        "Question: Tom had 95 marbles. He lost 17 and then bought 3 bags with 25 marbles each. "
        "How many marbles does he have now?\n"
        "Answer: After losing 17 he had 95 - 17 = 78 marbles. The bags add 3 * 25 = 75 marbles, "
        "so he has 78 + 75 = 153 marbles. The answer is 153.\n\n";
    return block;
}

std::string assemble_prompt(const TaskInstance& inst, Strategy strategy) {
    PromptTemplate t = template_for(inst.category);
    std::string prompt = t.instruction;
    prompt += "\n\n";
    if (inst.category == Category::MA && strategy == Strategy::CoT)
        prompt += ma_cot_fewshot_block();
    for (const auto& ex : inst.examples) {
        std::string block = replace_slot(t.example_format, "{question}", ex.question);
        prompt += replace_slot(std::move(block), "{answer}", ex.answer);
    }
    if (!inst.rule_text.empty()) prompt += "Hint: " + inst.rule_text + "\n";
    prompt += replace_slot(t.question_format, "{question}", inst.question);
    if (strategy == Strategy::CoT) prompt += t.cot_suffix;
    return prompt;
}

// --- MA ingestion -----------------------------------------------------------

std::vector<TaskInstance> read_ma_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open MA file: " + path);
    std::vector<TaskInstance> out;
    std::string line;
    int index = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ordered_json j = ordered_json::parse(line);
        TaskInstance inst;
        inst.category = Category::MA;
        inst.sub_dataset = "dataset_gsm8k";
        inst.variant = Variant::Raw;
        inst.question = j.at("question").get<std::string>();
        std::string answer = j.at("answer").get<std::string>();
        size_t marker = answer.rfind("####");
        if (marker != std::string::npos) answer = answer.substr(marker + 4);
        // Final answers are plain numbers; strip commas and whitespace.
        std::string cleaned;
        for (char c : answer)
            if (c != ',' && c != ' ' && c != '\n' && c != '\r' && c != '\t') cleaned.push_back(c);
        inst.answer = cleaned;
        inst.id = to_hex(fnv1a64("dataset_gsm8k|" + std::to_string(index)));
        inst.seed = 0;
        out.push_back(std::move(inst));
        ++index;
    }
    return out;
}

// --- manifest & run assembly ------------------------------------------------

DatasetManifest build_manifest(const GenerationConfig& config) {
    DatasetManifest manifest;
    manifest.global_seed = config.global_seed;
    manifest.specs = select_archetypes(config.selection);
    int total = 0;
    for (const auto& spec : manifest.specs) total += spec.instances;
    if (!config.ma_path.empty()) {
        SubDatasetSpec ma;
        ma.name = "dataset_gsm8k";
        ma.category = Category::MA;
        ma.operation = "gsm8k";
        ma.example_count = 0;
        ma.instances = static_cast<int>(read_ma_file(config.ma_path).size());
        total += ma.instances;
        manifest.specs.push_back(std::move(ma));
    }
    manifest.total_instances = total;
    return manifest;
}

FamilyInfo family_of(std::string_view sub_dataset) {
    if (sub_dataset == "dataset_gsm8k") return {Category::MA, "gsm8k", 10};
    auto spec = find_archetype(sub_dataset);
    if (!spec) throw UnknownArchetype("unknown sub-dataset: " + std::string(sub_dataset));
    if (spec->category == Category::SR) {
        auto parent = find_archetype(spec->derived_from);
        return {Category::SR, parent->operation, parent->base};
    }
    return {spec->category, spec->operation, spec->base};
}

RunOutput generate_run(const GenerationConfig& config, const std::string& dir) {
    RunOutput out;
    out.manifest = build_manifest(config);
    fs::create_directories(fs::path(dir) / "datasets");
    fs::create_directories(fs::path(dir) / "mappings");

    for (const auto& spec : out.manifest.specs) {
        uint64_t seed = spec_seed(spec, config.global_seed);
        std::vector<TaskInstance> instances;
        std::vector<std::pair<std::string, remap::SymbolMap>> mappings;
        if (spec.category == Category::MA) {
            instances = read_ma_file(config.ma_path);
            seed = 0;
        } else {
            auto generated = generate_subdataset(spec, seed);
            instances = std::move(generated.instances);
            mappings = std::move(generated.mappings);
        }
        std::string rel = "datasets/" + spec.name + ".jsonl";
        std::string path = (fs::path(dir) / rel).string();
        write_instances(path, instances);
        if (!mappings.empty())
            remap::write_sidecar((fs::path(dir) / "mappings" / (spec.name + ".jsonl")).string(),
                                 mappings);
        ManifestEntry entry;
        entry.name = spec.name;
        entry.category = spec.category;
        entry.seed = seed;
        entry.instances = static_cast<int>(instances.size());
        entry.file = rel;
        entry.content_hash = to_hex(fnv1a64(read_file(path)));
        out.entries.push_back(std::move(entry));
    }

    ordered_json j;
    j["global_seed"] = out.manifest.global_seed;
    j["total_instances"] = out.manifest.total_instances;
    ordered_json datasets = ordered_json::array();
    for (const auto& e : out.entries) {
        ordered_json d;
        d["name"] = e.name;
        d["category"] = to_string(e.category);
        d["seed"] = e.seed;
        d["instances"] = e.instances;
        d["file"] = e.file;
        d["content_hash"] = e.content_hash;
        datasets.push_back(std::move(d));
    }
    j["datasets"] = std::move(datasets);
    write_file((fs::path(dir) / "manifest.json").string(), j.dump(2) + "\n");
    return out;
}

}  // namespace arbench::gen
