#include "friendsim/rational.hpp"

#include <numeric>
#include <ostream>
#include <stdexcept>

namespace friendsim {

namespace {

using U128 = unsigned __int128;

U128 magnitude(__int128 x) { return x < 0 ? -static_cast<U128>(x) : static_cast<U128>(x); }

U128 gcd128(U128 a, U128 b) {
    if (a >> 64 == 0 && b >> 64 == 0) {
        auto x = static_cast<std::uint64_t>(a);
        auto y = static_cast<std::uint64_t>(b);
        while (y != 0) {
            x %= y;
            std::swap(x, y);
        }
        return x;
    }
    while (b != 0) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

BigInt to_big(__int128 x) {
    const U128 m = magnitude(x);
    BigInt out(static_cast<std::uint64_t>(m >> 64));
    out <<= 64;
    out += static_cast<std::uint64_t>(m);
    return x < 0 ? BigInt(-out) : out;
}

bool fits(const mpz_t z) { return mpz_fits_slong_p(z) && mpz_cmp_si(z, std::numeric_limits<long>::min()) != 0; }

}  // namespace

Rational::Rational(const BigInt &value) : Rational(from_big(BigRational(value))) {}

Rational::Rational(const BigInt &numerator, const BigInt &denominator) {
    if (denominator == 0) {
        throw std::domain_error("rational with zero denominator");
    }
    *this = from_big(BigRational(numerator, denominator));
}

Rational::Rational(const BigRational &value) : Rational(from_big(value)) {}

Rational Rational::from_big(BigRational value) {
    const auto *q = value.backend().data();
    if (fits(mpq_numref(q)) && fits(mpq_denref(q))) {
        Rational out;
        out.num_ = mpz_get_si(mpq_numref(q));
        out.den_ = mpz_get_si(mpq_denref(q));
        return out;
    }
    Rational out;
    out.big_ = std::make_shared<const BigRational>(std::move(value));
    return out;
}

Rational Rational::reduce(__int128 numerator, __int128 denominator) {
    if (denominator < 0) {
        numerator = -numerator;
        denominator = -denominator;
    }
    if (numerator == 0) {
        return {};
    }
    if (denominator != 1) {
        const U128 g = gcd128(magnitude(numerator), static_cast<U128>(denominator));
        if (g != 1) {
            numerator /= static_cast<__int128>(g);
            denominator /= static_cast<__int128>(g);
        }
    }
    return lowest(numerator, denominator);
}

Rational Rational::lowest(__int128 numerator, __int128 denominator) {
    if (numerator > -static_cast<__int128>(kMax) - 1 && numerator <= kMax && denominator <= kMax) {
        Rational out;
        out.num_ = static_cast<std::int64_t>(numerator);
        out.den_ = static_cast<std::int64_t>(denominator);
        return out;
    }
    Rational out;
    out.big_ = std::make_shared<const BigRational>(to_big(numerator), to_big(denominator));
    return out;
}

BigInt Rational::numerator() const { return small() ? BigInt(num_) : boost::multiprecision::numerator(*big_); }

BigInt Rational::denominator() const { return small() ? BigInt(den_) : boost::multiprecision::denominator(*big_); }

BigRational Rational::big() const { return small() ? BigRational(BigInt(num_), BigInt(den_)) : *big_; }

int Rational::sign() const noexcept {
    if (small()) {
        return (num_ > 0) - (num_ < 0);
    }
    return big_->sign();
}

bool Rational::is_integer() const noexcept { return small() && den_ == 1; }

double Rational::to_double() const {
    constexpr std::int64_t exact = std::int64_t{1} << 53;
    if (small() && num_ < exact && num_ > -exact && den_ < exact) {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }
    return big().convert_to<double>();
}

std::string Rational::str() const {
    if (small()) {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }
    const BigInt den = denominator();
    return den == 1 ? numerator().str() : numerator().str() + "/" + den.str();
}

Rational Rational::operator-() const {
    if (small()) {
        Rational out = *this;
        out.num_ = -num_;
        return out;
    }
    return from_big(-*big_);
}

Rational operator+(const Rational &a, const Rational &b) {
    if (a.small() && b.small()) {
        if (a.den_ == b.den_) {
            return Rational::reduce(static_cast<__int128>(a.num_) + b.num_, a.den_);
        }
        if (std::gcd(a.den_, b.den_) == 1) {
            // Coprime denominators: the cross sum is already in lowest terms.
            return Rational::lowest(
                static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                static_cast<__int128>(a.den_) * b.den_);
        }
        return Rational::reduce(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                                static_cast<__int128>(a.den_) * b.den_);
    }
    return Rational::from_big(a.big() + b.big());
}

Rational operator-(const Rational &a, const Rational &b) { return a + (-b); }

Rational operator*(const Rational &a, const Rational &b) {
    if (a.small() && b.small()) {
        if (a.num_ == 0 || b.num_ == 0) {
            return {};
        }
        // Cancelling across first leaves the product in lowest terms.
        const std::int64_t g1 = std::gcd(a.num_, b.den_);
        const std::int64_t g2 = std::gcd(b.num_, a.den_);
        return Rational::lowest(static_cast<__int128>(a.num_ / g1) * (b.num_ / g2),
                                static_cast<__int128>(a.den_ / g2) * (b.den_ / g1));
    }
    return Rational::from_big(a.big() * b.big());
}

Rational operator/(const Rational &a, const Rational &b) {
    if (b.sign() == 0) {
        throw std::domain_error("rational division by zero");
    }
    if (a.small() && b.small()) {
        return Rational::reduce(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    }
    return Rational::from_big(a.big() / b.big());
}

bool operator==(const Rational &a, const Rational &b) {
    if (a.small() != b.small()) {
        return false;
    }
    return a.small() ? a.num_ == b.num_ && a.den_ == b.den_ : *a.big_ == *b.big_;
}

std::strong_ordering operator<=>(const Rational &a, const Rational &b) {
    if (a.small() && b.small()) {
        return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
    }
    const int c = a.big().compare(b.big());
    return c <=> 0;
}

std::ostream &operator<<(std::ostream &os, const Rational &value) { return os << value.str(); }

}  // namespace friendsim
