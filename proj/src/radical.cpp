#include "friendsim/radical.hpp"

#include "friendsim/error.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace friendsim {

namespace {

using Radicand = RadicalScalar::Radicand;

Radicand checked_mul(Radicand a, Radicand b) {
    Radicand out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw Error(ErrorCode::Overflow,
                    "radicand product " + std::to_string(a) + " * " + std::to_string(b) + " overflows 64 bits");
    }
    return out;
}

Radicand to_radicand(const BigInt &value) {
    if (value < 0 || value > BigInt(std::numeric_limits<Radicand>::max())) {
        throw Error(ErrorCode::Overflow, "radicand " + value.str() + " does not fit in 64 bits");
    }
    return value.convert_to<Radicand>();
}

}  // namespace

SquareSplit split_square(Radicand n) {
    if (n == 0) {
        return {0, 1};
    }
    Radicand root = 1;
    Radicand free = 1;
    for (Radicand p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
        unsigned exponent = 0;
        while (n % p == 0) {
            n /= p;
            ++exponent;
        }
        for (unsigned i = 0; i < exponent / 2; ++i) {
            root *= p;
        }
        if (exponent % 2 == 1) {
            free *= p;
        }
    }
    return {root, checked_mul(free, n)};
}

bool is_squarefree(Radicand n) { return n != 0 && split_square(n).root == 1; }

std::string rational_str(const Rational &value) { return value.str(); }

RadicalScalar::RadicalScalar(const Rational &value) {
    if (value != 0) {
        terms_.emplace(1, value);
    }
}

RadicalScalar::RadicalScalar(long long value) : RadicalScalar(Rational(value)) {}

RadicalScalar RadicalScalar::monomial(const Rational &coefficient, Radicand radicand) {
    if (radicand == 0) {
        return {};
    }
    const auto [root, free] = split_square(radicand);
    RadicalScalar out;
    out.accumulate(free, coefficient * Rational(root));
    return out;
}

RadicalScalar RadicalScalar::sqrt_int(Radicand n) { return monomial(Rational(1), n); }

RadicalScalar RadicalScalar::sqrt_rational(const Rational &value) {
    if (value < 0) {
        throw Error(ErrorCode::NonMonomialNorm, "square root of negative rational " + rational_str(value));
    }
    const BigInt num = value.numerator();
    const BigInt den = value.denominator();
    return monomial(Rational(BigInt(1), den), to_radicand(num * den));
}

bool RadicalScalar::is_rational() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
}

std::optional<Rational> RadicalScalar::rational_value() const {
    if (terms_.empty()) {
        return Rational(0);
    }
    if (is_rational()) {
        return terms_.begin()->second;
    }
    return std::nullopt;
}

RadicalScalar RadicalScalar::invert_monomial() const {
    if (terms_.size() != 1) {
        throw Error(ErrorCode::NotMonomial,
                    "cannot invert " + (terms_.empty() ? std::string("zero") : str()) + ": not a single radical term");
    }
    const auto &[key, q] = *terms_.begin();
    // 1/(q*sqrt(k)) = sqrt(k)/(q*k)
    RadicalScalar out;
    out.terms_.emplace(key, Rational(1) / (q * Rational(key)));
    return out;
}

double RadicalScalar::to_double() const {
    double total = 0.0;
    for (const auto &[key, q] : terms_) {
        total += q.to_double() * std::sqrt(static_cast<double>(key));
    }
    return total;
}

std::string RadicalScalar::str() const {
    if (terms_.empty()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (const auto &[key, q] : terms_) {
        const bool negative = q < 0;
        const Rational magnitude = negative ? Rational(-q) : q;
        if (first) {
            out += negative ? "-" : "";
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;
        if (key == 1) {
            out += rational_str(magnitude);
        } else if (magnitude == 1) {
            out += "sqrt(" + std::to_string(key) + ")";
        } else {
            out += rational_str(magnitude) + "*sqrt(" + std::to_string(key) + ")";
        }
    }
    return out;
}

void RadicalScalar::accumulate(Radicand key, const Rational &coefficient) {
    if (coefficient == 0) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(key, coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (it->second == 0) {
            terms_.erase(it);
        }
    }
}

RadicalScalar RadicalScalar::operator-() const {
    RadicalScalar out = *this;
    for (auto &[key, q] : out.terms_) {
        q = -q;
    }
    return out;
}

RadicalScalar &RadicalScalar::operator+=(const RadicalScalar &other) {
    for (const auto &[key, q] : other.terms_) {
        accumulate(key, q);
    }
    return *this;
}

RadicalScalar &RadicalScalar::operator-=(const RadicalScalar &other) {
    for (const auto &[key, q] : other.terms_) {
        accumulate(key, -q);
    }
    return *this;
}

RadicalScalar &RadicalScalar::operator*=(const RadicalScalar &other) { return *this = *this * other; }

RadicalScalar operator*(const RadicalScalar &a, const RadicalScalar &b) {
    RadicalScalar out;
    for (const auto &[ka, qa] : a.terms_) {
        for (const auto &[kb, qb] : b.terms_) {
            const Radicand g = std::gcd(ka, kb);
            Rational q = qa * qb;
            if (g != 1) {
                q *= g;
            }
            out.accumulate(checked_mul(ka / g, kb / g), q);
        }
    }
    return out;
}

RadicalScalar sqrt_int(RadicalScalar::Radicand n) { return RadicalScalar::sqrt_int(n); }
RadicalScalar add(const RadicalScalar &a, const RadicalScalar &b) { return a + b; }
RadicalScalar mul(const RadicalScalar &a, const RadicalScalar &b) { return a * b; }
RadicalScalar negate(const RadicalScalar &a) { return -a; }
RadicalScalar invert_monomial(const RadicalScalar &a) { return a.invert_monomial(); }
double to_float(const RadicalScalar &a) { return a.to_double(); }

}  // namespace friendsim
