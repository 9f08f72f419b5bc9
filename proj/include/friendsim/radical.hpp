#pragma once

#include "friendsim/rational.hpp"

#include <boost/container/flat_map.hpp>
#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace friendsim {

/*
 * Exact real scalar of the form
 *
 *     sum_k q_k * sqrt(k),    q_k rational, k squarefree positive integer.
 *
 * The term map is kept canonical: every key squarefree, no zero coefficient.
 * Since square roots of distinct squarefree integers are linearly
 * independent over Q, two canonical maps are equal iff the values are.
 *
 * Products of radicals reduce without factoring: for squarefree a, b with
 * g = gcd(a, b), sqrt(a) * sqrt(b) = g * sqrt((a/g) * (b/g)), and the cofactor
 * is again squarefree because a/g and b/g are coprime.
 */
class RadicalScalar {
public:
    using Radicand = std::uint64_t;
    // Sorted by radicand; scalars rarely carry more than a few terms.
    using TermMap = boost::container::flat_map<Radicand, Rational, std::less<>,
                                               boost::container::small_vector<std::pair<Radicand, Rational>, 4>>;

    RadicalScalar() = default;
    RadicalScalar(const Rational &value);  // NOLINT(google-explicit-constructor)
    RadicalScalar(long long value);        // NOLINT(google-explicit-constructor)

    /// q * sqrt(radicand); the radicand need not be squarefree.
    static RadicalScalar monomial(const Rational &coefficient, Radicand radicand);

    /// Exact sqrt(n) as c * sqrt(d) with d squarefree.
    static RadicalScalar sqrt_int(Radicand n);

    /// Exact square root of a non-negative rational: sqrt(p/q) = sqrt(p*q)/q.
    static RadicalScalar sqrt_rational(const Rational &value);

    const TermMap &terms() const noexcept { return terms_; }

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_monomial() const noexcept { return terms_.size() == 1; }
    bool is_rational() const noexcept;
    /// The value as a rational, if it has no irrational part.
    std::optional<Rational> rational_value() const;

    /// Exact reciprocal of a single-term scalar; throws NotMonomial otherwise.
    RadicalScalar invert_monomial() const;

    double to_double() const;

    /// Canonical text: terms by ascending radicand, e.g. "1/2 - 1/6*sqrt(3)".
    std::string str() const;

    RadicalScalar operator-() const;
    RadicalScalar &operator+=(const RadicalScalar &other);
    RadicalScalar &operator-=(const RadicalScalar &other);
    RadicalScalar &operator*=(const RadicalScalar &other);

    friend RadicalScalar operator+(RadicalScalar a, const RadicalScalar &b) { return a += b; }
    friend RadicalScalar operator-(RadicalScalar a, const RadicalScalar &b) { return a -= b; }
    friend RadicalScalar operator*(const RadicalScalar &a, const RadicalScalar &b);
    friend bool operator==(const RadicalScalar &a, const RadicalScalar &b) { return a.terms_ == b.terms_; }

private:
    void accumulate(Radicand key, const Rational &coefficient);

    TermMap terms_;
};

RadicalScalar sqrt_int(RadicalScalar::Radicand n);
RadicalScalar add(const RadicalScalar &a, const RadicalScalar &b);
RadicalScalar mul(const RadicalScalar &a, const RadicalScalar &b);
RadicalScalar negate(const RadicalScalar &a);
RadicalScalar invert_monomial(const RadicalScalar &a);
double to_float(const RadicalScalar &a);

/// Largest s with s*s dividing n, together with the squarefree cofactor.
struct SquareSplit {
    RadicalScalar::Radicand root;
    RadicalScalar::Radicand squarefree;
};
SquareSplit split_square(RadicalScalar::Radicand n);

bool is_squarefree(RadicalScalar::Radicand n);

std::string rational_str(const Rational &value);

}  // namespace friendsim
