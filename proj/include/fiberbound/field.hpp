#pragma once

/*
 * Coefficient fields.
 *
 * A field object is a small value (the prime for F_p, nothing for Q) that
 * knows how to operate on its `value_type`.  Polynomials carry their field
 * by value, so every operation has the modulus at hand without globals.
 */

#include "fiberbound/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <random>
#include <string>

namespace fiberbound {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

/* splitmix64 finalizer, used to derive independent sub-seeds. */
inline std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace detail

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index)
{
    return detail::mix64(detail::mix64(seed) ^ (index * 0xd1342543de82ef95ULL + 1));
}

/** Deterministic Miller-Rabin, exact for every 64-bit input. */
inline bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % small == 0) return n == small;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

/** Largest prime strictly below `n`. */
inline std::uint64_t previous_prime(std::uint64_t n)
{
    if (n <= 3) throw Error(Errc::InvalidField, "no odd prime below " + std::to_string(n));
    for (std::uint64_t c = n - 1; c > 2; --c) {
        if (is_prime(c)) return c;
    }
    throw Error(Errc::InvalidField, "no odd prime below " + std::to_string(n));
}

/** The prime field F_p for an odd prime p < 2^63. */
class PrimeField
{
  public:
    using value_type = std::uint64_t;

    static constexpr std::uint64_t kDefaultPrime = 2147483647ULL;

    explicit PrimeField(std::uint64_t p = kDefaultPrime) : p_(p)
    {
        if (p < 3 || p >= (1ULL << 63) || !is_prime(p))
            throw Error(Errc::InvalidField, std::to_string(p) + " is not an odd prime below 2^63");
    }

    std::uint64_t characteristic() const { return p_; }
    bool is_prime_field() const { return true; }

    value_type zero() const { return 0; }
    value_type one() const { return 1; }

    value_type from_int(std::int64_t v) const
    {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        return static_cast<value_type>(r < 0 ? r + static_cast<std::int64_t>(p_) : r);
    }

    value_type from_integer(const BigInt& v) const
    {
        BigInt r = v % p_;
        if (r < 0) r += p_;
        return r.convert_to<std::uint64_t>();
    }

    value_type from_rational(const BigRational& v) const
    {
        value_type den = from_integer(boost::multiprecision::denominator(v));
        if (den == 0)
            throw Error(Errc::InvalidField,
                        "denominator of " + v.str() + " vanishes modulo " + std::to_string(p_));
        return div(from_integer(boost::multiprecision::numerator(v)), den);
    }

    value_type add(value_type a, value_type b) const
    {
        value_type s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
    value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
    value_type mul(value_type a, value_type b) const { return detail::mulmod(a, b, p_); }
    value_type pow(value_type a, std::uint64_t e) const { return detail::powmod(a, e, p_); }

    value_type inv(value_type a) const
    {
        if (a == 0) throw std::domain_error("inverse of zero in F_p");
        // extended Euclid on signed 128-bit to stay exact for p near 2^63
        __int128 t = 0, new_t = 1, r = p_, new_r = a;
        while (new_r != 0) {
            __int128 q = r / new_r;
            __int128 tmp = t - q * new_t; t = new_t; new_t = tmp;
            tmp = r - q * new_r; r = new_r; new_r = tmp;
        }
        if (t < 0) t += p_;
        return static_cast<value_type>(t);
    }
    value_type div(value_type a, value_type b) const { return mul(a, inv(b)); }

    bool is_zero(value_type a) const { return a == 0; }
    bool is_one(value_type a) const { return a == 1; }
    bool equal(value_type a, value_type b) const { return a == b; }
    std::strong_ordering compare(value_type a, value_type b) const { return a <=> b; }

    /** Representative in (-p/2, p/2], the form used for printing. */
    std::int64_t signed_value(value_type a) const
    {
        return a > p_ / 2 ? -static_cast<std::int64_t>(p_ - a) : static_cast<std::int64_t>(a);
    }

    bool is_negative(value_type a) const { return a > p_ / 2; }
    std::string to_string(value_type a) const { return std::to_string(signed_value(a)); }

    template <class Rng>
    value_type random(Rng& rng) const { return rng() % p_; }

    /** Integer multiple k·1 of the identity, used for exponent factors in derivatives. */
    value_type from_count(std::uint64_t k) const { return k % p_; }

    bool divides_count(std::uint64_t k) const { return k % p_ == 0; }

    std::string name() const { return "GF(" + std::to_string(p_) + ")"; }

    friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

  private:
    std::uint64_t p_;
};

/** The rationals, exact, with values kept in lowest terms by the backend. */
class RationalField
{
  public:
    using value_type = BigRational;

    std::uint64_t characteristic() const { return 0; }
    bool is_prime_field() const { return false; }

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    value_type from_int(std::int64_t v) const { return v; }
    value_type from_integer(const BigInt& v) const { return value_type(v); }
    value_type from_rational(const BigRational& v) const { return v; }

    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type pow(value_type a, std::uint64_t e) const
    {
        value_type r = 1;
        while (e) {
            if (e & 1) r *= a;
            a *= a;
            e >>= 1;
        }
        return r;
    }
    value_type inv(const value_type& a) const
    {
        if (a == 0) throw std::domain_error("inverse of zero in Q");
        return 1 / a;
    }
    value_type div(const value_type& a, const value_type& b) const { return a / b; }

    bool is_zero(const value_type& a) const { return a == 0; }
    bool is_one(const value_type& a) const { return a == 1; }
    bool equal(const value_type& a, const value_type& b) const { return a == b; }
    std::strong_ordering compare(const value_type& a, const value_type& b) const
    {
        if (a < b) return std::strong_ordering::less;
        if (b < a) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    bool is_negative(const value_type& a) const { return a < 0; }
    std::string to_string(const value_type& a) const { return a.str(); }

    /* small integers; enough for generic-point tests over Q */
    template <class Rng>
    value_type random(Rng& rng) const { return value_type(static_cast<std::int64_t>(rng() % 201) - 100); }

    value_type from_count(std::uint64_t k) const { return value_type(k); }
    bool divides_count(std::uint64_t) const { return false; }

    std::string name() const { return "QQ"; }

    friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

} // namespace fiberbound
