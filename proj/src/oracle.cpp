#include "arbench/oracle.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

namespace arbench::oracle {

namespace {

void check_bits(std::string_view s) {
    if (s.empty()) throw InvalidBit("empty bit string");
    for (char c : s)
        if (c != '0' && c != '1') throw InvalidBit(std::string("invalid bit '") + c + "'");
}

long long parse_ll(std::string_view s) {
    size_t pos = 0;
    bool neg = !s.empty() && s[0] == '-';
    if (neg) pos = 1;
    if (pos >= s.size()) throw std::invalid_argument("not a number: " + std::string(s));
    long long v = 0;
    for (; pos < s.size(); ++pos) {
        if (s[pos] < '0' || s[pos] > '9')
            throw std::invalid_argument("not a number: " + std::string(s));
        v = v * 10 + (s[pos] - '0');
    }
    return neg ? -v : v;
}

}  // namespace

std::string eval_base_arith(std::string_view a, std::string_view b, ArithOp op, int base) {
    switch (op) {
        case ArithOp::Add: return radix::add(a, b, base);
        case ArithOp::Sub: return radix::sub(a, b, base);
        case ArithOp::Mul: return radix::mul(a, b, base);
    }
    throw std::logic_error("bad arith op");
}

std::string convert_base(std::string_view n, int from_base, int to_base) {
    return radix::convert(n, from_base, to_base);
}

std::string eval_decimal(std::string_view a, std::string_view b, DecimalOp op) {
    switch (op) {
        case DecimalOp::Add: return radix::add(a, b, 10);
        case DecimalOp::Sub: return radix::sub(a, b, 10);
        case DecimalOp::Mul: return radix::mul(a, b, 10);
        case DecimalOp::Div: return radix::div_exact(a, b, 10);
        case DecimalOp::Square: return radix::mul(a, a, 10);
        case DecimalOp::Sqrt: return radix::isqrt_exact(a, 10);
    }
    throw std::logic_error("bad decimal op");
}

std::string eval_bitwise(std::string_view a, std::optional<std::string_view> b, BitwiseOp op) {
    check_bits(a);
    if (op == BitwiseOp::Not) {
        if (b) throw std::invalid_argument("binary_not takes one operand");
        std::string out(a);
        for (char& c : out) c = (c == '0') ? '1' : '0';
        return out;
    }
    if (!b) throw std::invalid_argument("binary op needs two operands");
    check_bits(*b);
    if (a.size() != b->size()) throw LengthMismatch("bit strings differ in length");
    std::string out(a.size(), '0');
    for (size_t i = 0; i < a.size(); ++i) {
        bool x = a[i] == '1';
        bool y = (*b)[i] == '1';
        bool r = false;
        switch (op) {
            case BitwiseOp::And: r = x && y; break;
            case BitwiseOp::Or: r = x || y; break;
            case BitwiseOp::Xor: r = x != y; break;
            case BitwiseOp::Not: break;
        }
        out[i] = r ? '1' : '0';
    }
    return out;
}

std::string eval_bit_shift(std::string_view a, long long k, ShiftOp op) {
    check_bits(a);
    if (k < 0) throw std::invalid_argument("shift amount must be non-negative");
    auto n = static_cast<long long>(a.size());
    std::string out(a.size(), '0');
    switch (op) {
        case ShiftOp::Shl:
            for (long long i = 0; i + k < n; ++i) out[i] = a[i + k];
            break;
        case ShiftOp::Shr:
            for (long long i = 0; i + k < n; ++i) out[i + k] = a[i];
            break;
        case ShiftOp::Rotl:
            for (long long i = 0; i < n; ++i) out[i] = a[(i + k) % n];
            break;
        case ShiftOp::Rotr:
            for (long long i = 0; i < n; ++i) out[(i + k) % n] = a[i];
            break;
    }
    return out;
}

std::string eval_bit_manip(std::string_view a, long long pos, BitManipOp op) {
    check_bits(a);
    if (pos < 0 || pos >= static_cast<long long>(a.size()))
        throw PositionOutOfRange("bit position out of range");
    // Position 0 is the rightmost character.
    size_t idx = a.size() - 1 - static_cast<size_t>(pos);
    if (op == BitManipOp::Check) return std::string(1, a[idx]);
    std::string out(a);
    if (op == BitManipOp::Set)
        out[idx] = '1';
    else
        out[idx] = (out[idx] == '0') ? '1' : '0';
    return out;
}

std::string reverse_string(std::string_view s) { return {s.rbegin(), s.rend()}; }

std::string concatenate(std::string_view a, std::string_view b) {
    return std::string(a) + std::string(b);
}

std::string repeat(std::string_view s, long long count) {
    if (count < 0) throw std::invalid_argument("repeat count must be non-negative");
    std::string out;
    out.reserve(s.size() * static_cast<size_t>(count));
    for (long long i = 0; i < count; ++i) out += s;
    return out;
}

std::string get_length(std::string_view s) { return std::to_string(s.size()); }

bool is_subsequence(std::string_view haystack, std::string_view needle) {
    size_t j = 0;
    for (size_t i = 0; i < haystack.size() && j < needle.size(); ++i)
        if (haystack[i] == needle[j]) ++j;
    return j == needle.size();
}

std::string eval_substring_in_order(std::string_view haystack, std::string_view needle) {
    if (haystack.empty() || needle.empty())
        throw std::invalid_argument("substring check needs non-empty strings");
    return is_subsequence(haystack, needle) ? "yes" : "no";
}

std::vector<std::string> eval_set_op(std::vector<std::string> a, std::vector<std::string> b,
                                     SetOp op) {
    auto canonicalize = [](std::vector<std::string>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    canonicalize(a);
    canonicalize(b);
    std::vector<std::string> out;
    switch (op) {
        case SetOp::Union:
            std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
            break;
        case SetOp::Intersection:
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(out));
            break;
        case SetOp::Difference:
            std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
            break;
    }
    return out;
}

std::vector<std::string> eval_list_op(const std::vector<std::string>& xs, ListOp op,
                                      long long k) {
    if (xs.empty()) throw EmptyList("list is empty");
    switch (op) {
        case ListOp::Sort: {
            std::vector<long long> nums;
            for (const auto& x : xs) nums.push_back(parse_ll(x));
            std::sort(nums.begin(), nums.end());
            std::vector<std::string> out;
            for (auto n : nums) out.push_back(std::to_string(n));
            return out;
        }
        case ListOp::FilterGt: {
            std::vector<std::string> out;
            for (const auto& x : xs)
                if (parse_ll(x) > k) out.push_back(x);
            return out;
        }
        case ListOp::Deduplicate: {
            std::vector<std::string> out;
            std::unordered_set<std::string> seen;
            for (const auto& x : xs)
                if (seen.insert(x).second) out.push_back(x);
            return out;
        }
        case ListOp::Max:
        case ListOp::Min: {
            long long best = parse_ll(xs[0]);
            for (const auto& x : xs) {
                long long v = parse_ll(x);
                if (op == ListOp::Max ? v > best : v < best) best = v;
            }
            return {std::to_string(best)};
        }
        case ListOp::Median: {
            std::vector<long long> nums;
            for (const auto& x : xs) nums.push_back(parse_ll(x));
            std::sort(nums.begin(), nums.end());
            size_t n = nums.size();
            if (n % 2 == 1) return {std::to_string(nums[n / 2])};
            long long sum = nums[n / 2 - 1] + nums[n / 2];
            if (sum % 2 == 0) return {std::to_string(sum / 2)};
            // Non-integer mean of the middles: render with ".5".
            bool neg = sum < 0;
            long long whole = (neg ? -sum : sum) / 2;
            return {(neg ? "-" : "") + std::to_string(whole) + ".5"};
        }
        case ListOp::Mode: {
            std::map<std::string, int> counts;
            for (const auto& x : xs) counts[x]++;
            int best = 0;
            for (auto& [_, c] : counts) best = std::max(best, c);
            for (const auto& x : xs)
                if (counts[x] == best) return {x};
            throw std::logic_error("unreachable");
        }
    }
    throw std::logic_error("bad list op");
}

namespace {

bool valid_date(const Date& d) {
    if (d.month < 1 || d.month > 12 || d.day < 1) return false;
    static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int dim = days[d.month - 1];
    bool leap = (d.year % 4 == 0 && d.year % 100 != 0) || d.year % 400 == 0;
    if (d.month == 2 && leap) dim = 29;
    return d.day <= dim;
}

// Days since 1970-01-01, proleptic Gregorian (Howard Hinnant's civil-days).
long long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    long long era = (y >= 0 ? y : y - 399) / 400;
    unsigned yoe = static_cast<unsigned>(y - era * 400);
    unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

}  // namespace

std::string eval_date_diff(const Date& d1, const Date& d2) {
    if (!valid_date(d1) || !valid_date(d2)) throw InvalidDate("invalid calendar date");
    long long diff = days_from_civil(d1.year, d1.month, d1.day) -
                     days_from_civil(d2.year, d2.month, d2.day);
    return std::to_string(diff < 0 ? -diff : diff);
}

std::string eval_function(FunctionFamily family, const FunctionParams& p, long long x) {
    auto mod = [](long long v, long long m) { return ((v % m) + m) % m; };
    switch (family) {
        case FunctionFamily::Linear: return std::to_string(p.a * x + p.c);
        case FunctionFamily::Quadratic: return std::to_string(p.a * x * x + p.b * x + p.c);
        case FunctionFamily::Exponential: {
            if (x < 0) throw DomainError("negative exponent");
            long long v = 1;
            for (long long i = 0; i < x; ++i) v *= p.b;
            return std::to_string(p.a * v);
        }
        case FunctionFamily::Logarithmic: {
            if (x <= 0) throw DomainError("log of non-positive value");
            long long v = x, k = 0;
            while (v > 1 && v % p.b == 0) {
                v /= p.b;
                ++k;
            }
            if (v != 1) throw DomainError("argument is not an exact power of the base");
            return std::to_string(p.a * k);
        }
        case FunctionFamily::Sine: {
            // x in quarter turns: sin cycles 0, a, 0, -a.
            static const long long table[] = {0, 1, 0, -1};
            return std::to_string(p.a * table[mod(x, 4)]);
        }
        case FunctionFamily::Cosine: {
            static const long long table[] = {1, 0, -1, 0};
            return std::to_string(p.a * table[mod(x, 4)]);
        }
        case FunctionFamily::TriangleWave: {
            long long d = mod(x, 2 * p.period);
            long long t = d < p.period ? d : 2 * p.period - d;
            return std::to_string(p.a * t);
        }
        case FunctionFamily::SawtoothWave: return std::to_string(p.a * mod(x, p.period));
        case FunctionFamily::SquareWave: {
            // High value on [0, period), including the rising-edge boundary.
            long long d = mod(x, 2 * p.period);
            return std::to_string(d < p.period ? p.a : -p.a);
        }
    }
    throw std::logic_error("bad function family");
}

}  // namespace arbench::oracle
