#ifndef ARBENCH_ORACLE_HPP
#define ARBENCH_ORACLE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arbench/radix.hpp"

namespace arbench::oracle {

// Radix errors (InvalidDigit, NegativeResult, InexactDivision,
// NotPerfectSquare) propagate from arbench::radix.
struct LengthMismatch final : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvalidBit final : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct PositionOutOfRange final : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct EmptyList final : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvalidDate final : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DomainError final : std::domain_error {
    using std::domain_error::domain_error;
};

enum class ArithOp { Add, Sub, Mul };
enum class DecimalOp { Add, Sub, Mul, Div, Square, Sqrt };
enum class BitwiseOp { And, Or, Xor, Not };
enum class ShiftOp { Shl, Shr, Rotl, Rotr };
enum class BitManipOp { Check, Set, Toggle };
enum class SetOp { Union, Intersection, Difference };
enum class ListOp { Sort, FilterGt, Deduplicate, Max, Min, Median, Mode };
enum class FunctionFamily {
    Linear,
    Quadratic,
    Exponential,
    Logarithmic,
    Sine,
    Cosine,
    TriangleWave,
    SawtoothWave,
    SquareWave,
};

/// Exact base-N arithmetic on digit strings (canonical output, arbitrary
/// precision). For Sub the caller guarantees value(a) >= value(b).
std::string eval_base_arith(std::string_view a, std::string_view b, ArithOp op, int base);

/// Canonical re-encoding between bases 2..10.
std::string convert_base(std::string_view n, int from_base, int to_base);

/// Exact decimal integer arithmetic; Div only on exact divisors, Sqrt only
/// on perfect squares. Square and Sqrt are unary (b ignored).
std::string eval_decimal(std::string_view a, std::string_view b, DecimalOp op);

/// Element-wise fixed-width bit-string logic; b absent iff op == Not.
std::string eval_bitwise(std::string_view a, std::optional<std::string_view> b, BitwiseOp op);

/// Fixed-width logical shifts (zero fill) and rotations (modulo width).
std::string eval_bit_shift(std::string_view a, long long k, ShiftOp op);

/// Single-bit operations. Position 0 is the rightmost (least significant)
/// bit. Check returns "0"/"1"; Set/Toggle return the full modified string.
std::string eval_bit_manip(std::string_view a, long long pos, BitManipOp op);

std::string reverse_string(std::string_view s);
std::string concatenate(std::string_view a, std::string_view b);
std::string repeat(std::string_view s, long long count);
std::string get_length(std::string_view s);

/// "yes" iff needle is a (not necessarily contiguous) subsequence of
/// haystack, by greedy two-pointer scan.
std::string eval_substring_in_order(std::string_view haystack, std::string_view needle);
bool is_subsequence(std::string_view haystack, std::string_view needle);

/// Canonical set semantics: output sorted ascending, deduplicated.
std::vector<std::string> eval_set_op(std::vector<std::string> a, std::vector<std::string> b,
                                     SetOp op);

/// List operations; numeric elements required for order statistics.
/// FilterGt keeps elements strictly greater than k in original order;
/// Deduplicate keeps first occurrences; Median of an even-length list is the
/// mean of the two middles (".5" rendered when non-integer); Mode ties break
/// by first occurrence. Result is a list for Sort/FilterGt/Deduplicate and a
/// single element otherwise.
std::vector<std::string> eval_list_op(const std::vector<std::string>& xs, ListOp op,
                                      long long k = 0);

struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;
};

/// Absolute day difference between two proleptic Gregorian dates.
std::string eval_date_diff(const Date& d1, const Date& d2);

/// Parameters for function-inference tasks. All families are sampled so the
/// output is an exact integer; trig arguments are given in quarter turns.
struct FunctionParams {
    long long a = 0;  // slope / leading coefficient / amplitude / factor
    long long b = 0;  // linear coefficient / exponent base
    long long c = 0;  // constant term
    long long period = 1;
};

/// Exact f(x). For Sine/Cosine, x counts quarter turns (x=1 means pi/2).
/// For Logarithmic, x must be an exact power of params.b.
std::string eval_function(FunctionFamily family, const FunctionParams& params, long long x);

}  // namespace arbench::oracle

#endif
