#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <compare>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>

namespace friendsim {

using BigInt = boost::multiprecision::mpz_int;
using BigRational = boost::multiprecision::mpq_rational;

/*
 * Exact rational number. Values whose reduced numerator and denominator fit
 * in int64 are held inline and combined with 128-bit intermediates; anything
 * larger moves to a shared, immutable GMP rational. The representation is
 * canonical (small whenever it fits), so equality compares fields directly.
 */
class Rational {
public:
    Rational() = default;

    template <std::integral T>
    Rational(T value) {  // NOLINT(google-explicit-constructor)
        if constexpr (std::is_signed_v<T>) {
            if (static_cast<std::int64_t>(value) != std::numeric_limits<std::int64_t>::min()) {
                num_ = value;
                return;
            }
        } else if (value <= static_cast<std::uint64_t>(kMax)) {
            num_ = static_cast<std::int64_t>(value);
            return;
        }
        *this = Rational(BigInt(value));
    }

    template <std::integral N, std::integral D>
    Rational(N numerator, D denominator) : Rational(Rational(numerator) / Rational(denominator)) {}

    explicit Rational(const BigInt &value);
    Rational(const BigInt &numerator, const BigInt &denominator);
    explicit Rational(const BigRational &value);

    BigInt numerator() const;
    BigInt denominator() const;
    BigRational big() const;

    int sign() const noexcept;
    bool is_integer() const noexcept;
    double to_double() const;
    /// "p" or "p/q" in lowest terms.
    std::string str() const;

    Rational operator-() const;
    Rational &operator+=(const Rational &other) { return *this = *this + other; }
    Rational &operator-=(const Rational &other) { return *this = *this - other; }
    Rational &operator*=(const Rational &other) { return *this = *this * other; }
    Rational &operator/=(const Rational &other) { return *this = *this / other; }

    friend Rational operator+(const Rational &a, const Rational &b);
    friend Rational operator-(const Rational &a, const Rational &b);
    friend Rational operator*(const Rational &a, const Rational &b);
    friend Rational operator/(const Rational &a, const Rational &b);

    friend bool operator==(const Rational &a, const Rational &b);
    friend std::strong_ordering operator<=>(const Rational &a, const Rational &b);

private:
    static constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

    static Rational reduce(__int128 numerator, __int128 denominator);
    /// Arguments already coprime with a positive denominator.
    static Rational lowest(__int128 numerator, __int128 denominator);
    static Rational from_big(BigRational value);

    bool small() const noexcept { return big_ == nullptr; }

    // Small form: den_ > 0, gcd(num_, den_) == 1, num_ != INT64_MIN.
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::shared_ptr<const BigRational> big_;
};

std::ostream &operator<<(std::ostream &os, const Rational &value);

}  // namespace friendsim
