#include "arbench/radix.hpp"

#include <algorithm>
#include <vector>

namespace arbench::radix {

namespace {

// Little-endian digit vector (units digit first).
using Digits = std::vector<int>;

Digits parse(std::string_view s, int base) {
    if (base < 2 || base > 10) throw std::invalid_argument("base out of range 2..10");
    if (s.empty()) throw InvalidDigit("empty digit string");
    Digits d;
    d.reserve(s.size());
    for (auto it = s.rbegin(); it != s.rend(); ++it) {
        int v = *it - '0';
        if (v < 0 || v >= base)
            throw InvalidDigit("invalid digit '" + std::string(1, *it) + "' for base " +
                               std::to_string(base));
        d.push_back(v);
    }
    return d;
}

void trim(Digits& d) {
    while (d.size() > 1 && d.back() == 0) d.pop_back();
}

std::string render(const Digits& d) {
    std::string s;
    s.reserve(d.size());
    for (auto it = d.rbegin(); it != d.rend(); ++it) s.push_back(static_cast<char>('0' + *it));
    return s;
}

int compare(const Digits& a, const Digits& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

Digits add(const Digits& a, const Digits& b, int base) {
    Digits out;
    out.reserve(std::max(a.size(), b.size()) + 1);
    int carry = 0;
    for (size_t i = 0; i < std::max(a.size(), b.size()) || carry; ++i) {
        int v = carry;
        if (i < a.size()) v += a[i];
        if (i < b.size()) v += b[i];
        out.push_back(v % base);
        carry = v / base;
    }
    if (out.empty()) out.push_back(0);
    return out;
}

Digits sub(const Digits& a, const Digits& b, int base) {
    if (compare(a, b) < 0) throw NegativeResult("subtraction would be negative");
    Digits out;
    out.reserve(a.size());
    int borrow = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        int v = a[i] - borrow - (i < b.size() ? b[i] : 0);
        borrow = v < 0;
        if (borrow) v += base;
        out.push_back(v);
    }
    trim(out);
    return out;
}

Digits mul(const Digits& a, const Digits& b, int base) {
    Digits out(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        int carry = 0;
        for (size_t j = 0; j < b.size() || carry; ++j) {
            long long v = out[i + j] + carry;
            if (j < b.size()) v += static_cast<long long>(a[i]) * b[j];
            out[i + j] = static_cast<int>(v % base);
            carry = static_cast<int>(v / base);
        }
    }
    trim(out);
    return out;
}

bool is_zero(const Digits& d) { return d.size() == 1 && d[0] == 0; }

// Schoolbook long division; quotient digit found by trial multiply
// (at most base-1 candidates, base <= 10).
std::pair<Digits, Digits> divmod(const Digits& a, const Digits& b, int base) {
    if (is_zero(b)) throw std::domain_error("division by zero");
    Digits quot(a.size(), 0);
    Digits rem{0};
    for (size_t i = a.size(); i-- > 0;) {
        rem.insert(rem.begin(), a[i]);
        trim(rem);
        int q = 0;
        while (q + 1 < base) {
            Digits trial = mul(b, Digits{q + 1}, base);
            if (compare(trial, rem) > 0) break;
            ++q;
        }
        quot[i] = q;
        if (q > 0) rem = sub(rem, mul(b, Digits{q}, base), base);
    }
    trim(quot);
    return {quot, rem};
}

// Small-divisor fast path used by base conversion.
std::pair<Digits, int> divmod_small(const Digits& a, int m, int base) {
    Digits quot(a.size(), 0);
    int rem = 0;
    for (size_t i = a.size(); i-- > 0;) {
        int cur = rem * base + a[i];
        quot[i] = cur / m;
        rem = cur % m;
    }
    trim(quot);
    return {quot, rem};
}

}  // namespace

std::string add(std::string_view a, std::string_view b, int base) {
    return render(add(parse(a, base), parse(b, base), base));
}

std::string sub(std::string_view a, std::string_view b, int base) {
    return render(sub(parse(a, base), parse(b, base), base));
}

std::string mul(std::string_view a, std::string_view b, int base) {
    return render(mul(parse(a, base), parse(b, base), base));
}

std::string div_exact(std::string_view a, std::string_view b, int base) {
    auto [quot, rem] = divmod(parse(a, base), parse(b, base), base);
    if (!is_zero(rem)) throw InexactDivision("division leaves remainder");
    return render(quot);
}

std::string isqrt_exact(std::string_view n, int base) {
    Digits target = parse(n, base);
    // Binary search over candidate roots: render-free compare on digit vectors.
    Digits lo{0};
    Digits hi(target.size() / 2 + 1, 0);
    hi.push_back(1);  // base^(d/2+1) > sqrt(target)
    Digits one{1};
    while (compare(lo, hi) < 0) {
        Digits sum = add(add(lo, hi, base), one, base);
        Digits mid = divmod_small(sum, 2, base).first;
        if (compare(mul(mid, mid, base), target) <= 0)
            lo = mid;
        else
            hi = sub(mid, one, base);
    }
    if (compare(mul(lo, lo, base), target) != 0)
        throw NotPerfectSquare("not a perfect square: " + std::string(n));
    return render(lo);
}

std::string convert(std::string_view n, int from_base, int to_base) {
    Digits src = parse(n, from_base);
    if (to_base < 2 || to_base > 10) throw std::invalid_argument("base out of range 2..10");
    if (is_zero(src)) return "0";
    Digits out;
    while (!is_zero(src)) {
        auto [quot, rem] = divmod_small(src, to_base, from_base);
        out.push_back(rem);
        src = std::move(quot);
    }
    return render(out);
}

std::string canonical(std::string_view n, int base) { return render(parse(n, base)); }

int compare(std::string_view a, std::string_view b, int base) {
    return compare(parse(a, base), parse(b, base));
}

}  // namespace arbench::radix
