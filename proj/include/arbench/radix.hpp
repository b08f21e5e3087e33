#ifndef ARBENCH_RADIX_HPP
#define ARBENCH_RADIX_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace arbench::radix {

struct InvalidDigit final : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NegativeResult final : std::domain_error {
    using std::domain_error::domain_error;
};
struct InexactDivision final : std::domain_error {
    using std::domain_error::domain_error;
};
struct NotPerfectSquare final : std::domain_error {
    using std::domain_error::domain_error;
};

/// Exact arithmetic on digit strings in bases 2..10, arbitrary precision.
/// Inputs are strings over '0'..(base-1) with no sign; outputs are canonical
/// (no leading zeros except "0" itself).

std::string add(std::string_view a, std::string_view b, int base);

/// Requires value(a) >= value(b); throws NegativeResult otherwise.
std::string sub(std::string_view a, std::string_view b, int base);

std::string mul(std::string_view a, std::string_view b, int base);

/// Exact quotient; throws InexactDivision on a nonzero remainder and
/// std::domain_error on division by zero.
std::string div_exact(std::string_view a, std::string_view b, int base);

/// Exact integer square root; throws NotPerfectSquare unless n is one.
std::string isqrt_exact(std::string_view n, int base = 10);

/// Re-encodes n from one base to another. Round-trips to canonical form.
std::string convert(std::string_view n, int from_base, int to_base);

/// Canonical form of a digit string (leading zeros stripped). Validates.
std::string canonical(std::string_view n, int base);

/// -1, 0, or 1 as value(a) <=> value(b).
int compare(std::string_view a, std::string_view b, int base);

}  // namespace arbench::radix

#endif
