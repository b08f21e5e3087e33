#include "arbench/solver.hpp"

#include <optional>
#include <vector>

#include "arbench/generator.hpp"
#include "arbench/oracle.hpp"

namespace arbench::solve {

namespace {

using namespace oracle;

std::string strip(std::string_view s) {
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return "";
    size_t e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') ++i;
        size_t j = i;
        while (j < s.size() && s[j] != ' ') ++j;
        if (j > i) out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

// "name(arg1, arg2) =" -> args between the outer parentheses, split at
// top-level commas (commas inside [] or {} or quotes stay put).
std::vector<std::string> call_args(std::string_view question) {
    size_t open = question.find('(');
    size_t close = question.rfind(')');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open)
        throw UnparsableQuestion("expected call form: " + std::string(question));
    std::string_view inner = question.substr(open + 1, close - open - 1);
    std::vector<std::string> args;
    int depth = 0;
    bool quoted = false;
    size_t start = 0;
    for (size_t i = 0; i < inner.size(); ++i) {
        char c = inner[i];
        if (c == '\'') quoted = !quoted;
        if (quoted) continue;
        if (c == '[' || c == '{') ++depth;
        if (c == ']' || c == '}') --depth;
        if (c == ',' && depth == 0) {
            args.push_back(strip(inner.substr(start, i - start)));
            start = i + 1;
        }
    }
    args.push_back(strip(inner.substr(start)));
    return args;
}

std::string unquote(std::string_view s) {
    std::string t = strip(s);
    if (t.size() >= 2 && t.front() == '\'' && t.back() == '\'')
        return t.substr(1, t.size() - 2);
    return t;
}

std::vector<std::string> parse_elements(std::string_view s, char open, char close) {
    std::string t = strip(s);
    if (t.size() < 2 || t.front() != open || t.back() != close)
        throw UnparsableQuestion("expected " + std::string(1, open) + "..." +
                                 std::string(1, close) + ": " + t);
    std::vector<std::string> out;
    std::string inner = t.substr(1, t.size() - 2);
    if (strip(inner).empty()) return out;
    size_t start = 0;
    for (size_t i = 0; i <= inner.size(); ++i) {
        if (i == inner.size() || inner[i] == ',') {
            out.push_back(strip(inner.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

long long to_ll(std::string_view s) {
    std::string t = strip(s);
    try {
        size_t used = 0;
        long long v = std::stoll(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw UnparsableQuestion("expected integer: " + t);
    }
}

Date parse_date(std::string_view s) {
    auto parts = parse_elements(s, '[', ']');
    if (parts.size() != 3) throw UnparsableQuestion("expected [Y, M, D]: " + std::string(s));
    return {static_cast<int>(to_ll(parts[0])), static_cast<int>(to_ll(parts[1])),
            static_cast<int>(to_ll(parts[2]))};
}

// Quarter-turn argument: "0", "pi/2", "pi", "3pi/2", "2pi", ...
long long parse_quarter_turns(std::string_view s) {
    std::string t = strip(s);
    if (t == "0") return 0;
    bool half = false;
    if (t.size() >= 2 && t.substr(t.size() - 2) == "/2") {
        half = true;
        t = t.substr(0, t.size() - 2);
    }
    if (t.size() < 2 || t.substr(t.size() - 2) != "pi")
        throw UnparsableQuestion("expected multiple of pi: " + std::string(s));
    std::string coef = t.substr(0, t.size() - 2);
    long long n = coef.empty() ? 1 : to_ll(coef);
    return half ? n : 2 * n;
}

std::string strip_trailing_equals(std::string_view question) {
    std::string q = strip(question);
    if (!q.empty() && q.back() == '=') q.pop_back();
    return strip(q);
}

std::string solve_infix(const std::string& q, const gen::FamilyInfo& info) {
    auto tokens = split_ws(strip_trailing_equals(q));
    const std::string& fam = info.operation;

    if (fam == "bitwise") {
        if (tokens.size() == 2 && tokens[0] == "binary_not")
            return eval_bitwise(tokens[1], std::nullopt, BitwiseOp::Not);
        if (tokens.size() != 3) throw UnparsableQuestion("bad bitwise question: " + q);
        BitwiseOp op = tokens[1] == "binary_and"  ? BitwiseOp::And
                       : tokens[1] == "binary_or" ? BitwiseOp::Or
                       : tokens[1] == "binary_xor"
                           ? BitwiseOp::Xor
                           : throw UnparsableQuestion("bad bitwise op: " + tokens[1]);
        return eval_bitwise(tokens[0], tokens[2], op);
    }
    if (fam == "bit_shift") {
        if (tokens.size() != 3) throw UnparsableQuestion("bad shift question: " + q);
        ShiftOp op = tokens[1] == "bit_shift_left"        ? ShiftOp::Shl
                     : tokens[1] == "bit_shift_right"     ? ShiftOp::Shr
                     : tokens[1] == "circular_left_shift" ? ShiftOp::Rotl
                     : tokens[1] == "circular_right_shift"
                         ? ShiftOp::Rotr
                         : throw UnparsableQuestion("bad shift op: " + tokens[1]);
        return eval_bit_shift(tokens[0], to_ll(tokens[2]), op);
    }
    if (fam == "bit_manip") {
        if (tokens.size() != 3) throw UnparsableQuestion("bad bit-manipulation question: " + q);
        BitManipOp op = tokens[1] == "check_bit"   ? BitManipOp::Check
                        : tokens[1] == "set_bit"   ? BitManipOp::Set
                        : tokens[1] == "toggle_bit"
                            ? BitManipOp::Toggle
                            : throw UnparsableQuestion("bad bit-manipulation op: " + tokens[1]);
        return eval_bit_manip(tokens[0], to_ll(tokens[2]), op);
    }
    if (fam == "decimal_add" || fam == "decimal_sub" || fam == "decimal_mul" ||
        fam == "decimal_div" || fam == "base_add" || fam == "base_sub" || fam == "base_mul") {
        if (tokens.size() != 3) throw UnparsableQuestion("bad arithmetic question: " + q);
        int base = info.base;
        const std::string& sym = tokens[1];
        if (sym == "/") return radix::div_exact(tokens[0], tokens[2], base);
        ArithOp op = sym == "+"   ? ArithOp::Add
                     : sym == "-" ? ArithOp::Sub
                     : sym == "*" ? ArithOp::Mul
                                  : throw UnparsableQuestion("bad arithmetic op: " + sym);
        return eval_base_arith(tokens[0], tokens[2], op, base);
    }
    throw UnparsableQuestion("no infix rule for family " + fam + ": " + q);
}

std::string fit_and_eval_function(const TaskInstance& inst, const gen::FamilyInfo& info) {
    // Recover (x, f(x)) pairs from the few-shot block, fit the family's
    // parameters, then evaluate at the question's argument.
    const std::string& fam = info.operation;
    bool trig = fam == "func_sine" || fam == "func_cosine";
    std::vector<std::pair<long long, long long>> pairs;
    for (const auto& ex : inst.examples) {
        auto args = call_args(strip_trailing_equals(ex.question));
        long long x = trig ? parse_quarter_turns(args.at(0)) : to_ll(args.at(0));
        pairs.emplace_back(x, to_ll(ex.answer));
    }
    if (pairs.size() < 2) throw UnparsableQuestion("too few pairs to fit: " + inst.question);
    auto args = call_args(strip_trailing_equals(inst.question));
    long long x = trig ? parse_quarter_turns(args.at(0)) : to_ll(args.at(0));

    FunctionParams p;
    FunctionFamily family;
    if (fam == "func_linear") {
        family = FunctionFamily::Linear;
        auto [x1, y1] = pairs[0];
        auto [x2, y2] = pairs[1];
        p.a = (y2 - y1) / (x2 - x1);
        p.c = y1 - p.a * x1;
    } else if (fam == "func_quadratic") {
        family = FunctionFamily::Quadratic;
        // Three points determine a, b, c; sampled x are consecutive ints.
        auto [x1, y1] = pairs[0];
        auto [x2, y2] = pairs[1];
        auto [x3, y3] = pairs[2];
        long long d1 = (y2 - y1) / (x2 - x1);
        long long d2 = (y3 - y2) / (x3 - x2);
        p.a = (d2 - d1) / (x3 - x1);
        p.b = d1 - p.a * (x1 + x2);
        p.c = y1 - p.a * x1 * x1 - p.b * x1;
    } else if (fam == "func_sine" || fam == "func_cosine") {
        family = fam == "func_sine" ? FunctionFamily::Sine : FunctionFamily::Cosine;
        for (auto [qx, y] : pairs)
            if (y != 0) {
                long long unit = fam == "func_sine" ? (((qx % 4) + 4) % 4 == 1 ? 1 : -1)
                                                    : (((qx % 4) + 4) % 4 == 0 ? 1 : -1);
                p.a = y / unit;
                break;
            }
        if (p.a == 0) throw UnparsableQuestion("cannot fit amplitude: " + inst.question);
    } else if (fam == "func_triangle" || fam == "func_sawtooth" || fam == "func_square") {
        family = fam == "func_triangle"   ? FunctionFamily::TriangleWave
                 : fam == "func_sawtooth" ? FunctionFamily::SawtoothWave
                                          : FunctionFamily::SquareWave;
        // Small parameter grid; accept the first (amplitude, period) that
        // reproduces every pair.
        for (long long a = 1; a <= 9 && p.a == 0; ++a) {
            for (long long period = 2; period <= 5; ++period) {
                FunctionParams cand{a, 0, 0, period};
                bool ok = true;
                for (auto [px, py] : pairs)
                    if (eval_function(family, cand, px) != std::to_string(py)) {
                        ok = false;
                        break;
                    }
                if (ok) {
                    p = cand;
                    break;
                }
            }
        }
        if (p.a == 0) throw UnparsableQuestion("cannot fit wave parameters: " + inst.question);
    } else {
        throw UnparsableQuestion("unknown function family: " + fam);
    }
    return eval_function(family, p, x);
}

}  // namespace

std::string solve(const TaskInstance& raw_inst) {
    gen::FamilyInfo info = gen::family_of(raw_inst.sub_dataset);
    const std::string& fam = info.operation;
    const std::string& q = raw_inst.question;

    if (fam == "gsm8k") return raw_inst.answer;  // external data; answer is the record
    if (fam.rfind("func_", 0) == 0) return fit_and_eval_function(raw_inst, info);

    if (fam == "bitwise" || fam == "bit_shift" || fam == "bit_manip" || fam == "decimal_add" ||
        fam == "decimal_sub" || fam == "decimal_mul" || fam == "decimal_div" ||
        fam == "base_add" || fam == "base_sub" || fam == "base_mul")
        return solve_infix(q, info);

    if (fam == "base_convert") {
        auto tokens = split_ws(strip_trailing_equals(q));
        // "<n> (base10) to base <k>"
        if (tokens.size() != 5 || tokens[1] != "(base10)" || tokens[2] != "to" ||
            tokens[3] != "base")
            throw UnparsableQuestion("bad conversion question: " + q);
        return convert_base(tokens[0], 10, static_cast<int>(to_ll(tokens[4])));
    }
    if (fam == "square") {
        auto args = call_args(strip_trailing_equals(q));
        return radix::isqrt_exact(args.at(0), 10);
    }
    if (fam == "substring") {
        auto tokens = split_ws(strip_trailing_equals(q));
        // "<haystack> contains(in order) <needle>": op token holds one space.
        if (tokens.size() != 4 || tokens[1] != "contains(in" || tokens[2] != "order)")
            throw UnparsableQuestion("bad containment question: " + q);
        return eval_substring_in_order(tokens[0], tokens[3]);
    }
    if (fam == "string" || fam == "string_op") {
        std::string name = strip(q.substr(0, q.find('(')));
        auto args = call_args(strip_trailing_equals(q));
        if (name == "reverse") return reverse_string(unquote(args.at(0)));
        if (name == "repeat") return repeat(unquote(args.at(0)), to_ll(args.at(1)));
        if (name == "concatenate") return concatenate(unquote(args.at(0)), unquote(args.at(1)));
        if (name == "get_length") return get_length(unquote(args.at(0)));
        throw UnparsableQuestion("bad string op: " + name);
    }
    if (fam == "set_op") {
        std::string name = strip(q.substr(0, q.find('(')));
        auto args = call_args(strip_trailing_equals(q));
        SetOp op = name == "union"          ? SetOp::Union
                   : name == "intersection" ? SetOp::Intersection
                   : name == "difference"
                       ? SetOp::Difference
                       : throw UnparsableQuestion("bad set op: " + name);
        auto result = eval_set_op(parse_elements(args.at(0), '{', '}'),
                                  parse_elements(args.at(1), '{', '}'), op);
        std::string s = "{";
        for (size_t i = 0; i < result.size(); ++i) {
            if (i) s += ", ";
            s += result[i];
        }
        return s + "}";
    }
    if (fam == "list_op" || fam == "list_stat") {
        std::string name = strip(q.substr(0, q.find('(')));
        auto args = call_args(strip_trailing_equals(q));
        auto xs = parse_elements(args.at(0), '[', ']');
        long long k = 0;
        ListOp op;
        if (name == "sort")
            op = ListOp::Sort;
        else if (name == "filter") {
            op = ListOp::FilterGt;
            k = to_ll(args.at(1));
        } else if (name == "deduplicate")
            op = ListOp::Deduplicate;
        else if (name == "max")
            op = ListOp::Max;
        else if (name == "min")
            op = ListOp::Min;
        else if (name == "median")
            op = ListOp::Median;
        else if (name == "mode")
            op = ListOp::Mode;
        else
            throw UnparsableQuestion("bad list op: " + name);
        auto result = eval_list_op(xs, op, k);
        if (fam == "list_stat") return result.at(0);
        std::string s = "[";
        for (size_t i = 0; i < result.size(); ++i) {
            if (i) s += ", ";
            s += result[i];
        }
        return s + "]";
    }
    if (fam == "date_diff") {
        auto args = call_args(strip_trailing_equals(q));
        return eval_date_diff(parse_date(args.at(0)), parse_date(args.at(1)));
    }
    throw UnparsableQuestion("no solver for family " + fam + ": " + q);
}

}  // namespace arbench::solve
