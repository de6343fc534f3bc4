#pragma once

/*
 * Dense univariate polynomials over F_p: root finding by gcd with t^p - t
 * and randomized equal-degree splitting, plus the residue fields
 * F_p[s]/(q) used to look at points of small extension degree.
 */

#include "fiberbound/errors.hpp"
#include "fiberbound/field.hpp"
#include "fiberbound/mvpoly.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace fiberbound {

class UPoly
{
  public:
    UPoly() = default;
    explicit UPoly(PrimeField field) : field_(field) { }
    UPoly(PrimeField field, std::vector<std::uint64_t> coeffs) : field_(field), c_(std::move(coeffs)) { trim(); }

    static UPoly constant(PrimeField field, std::uint64_t v) { return UPoly(field, {v}); }
    static UPoly x(PrimeField field) { return UPoly(field, {0, 1}); }

    const PrimeField& field() const { return field_; }
    const std::vector<std::uint64_t>& coeffs() const { return c_; }
    std::uint64_t operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0; }

    bool is_zero() const { return c_.empty(); }
    /** -1 for zero. */
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    std::uint64_t lead() const { return c_.back(); }

    UPoly monic() const
    {
        if (is_zero() || lead() == 1) return *this;
        auto inv = field_.inv(lead());
        UPoly r = *this;
        for (auto& v : r.c_) v = field_.mul(v, inv);
        return r;
    }

    UPoly scaled(std::uint64_t s) const
    {
        UPoly r = *this;
        for (auto& v : r.c_) v = field_.mul(v, s);
        r.trim();
        return r;
    }

    std::uint64_t evaluate(std::uint64_t t) const
    {
        std::uint64_t acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = field_.add(field_.mul(acc, t), *it);
        return acc;
    }

    friend UPoly operator+(const UPoly& a, const UPoly& b)
    {
        UPoly r(a.field_);
        r.c_.resize(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.field_.add(a[i], b[i]);
        r.trim();
        return r;
    }

    friend UPoly operator-(const UPoly& a, const UPoly& b)
    {
        UPoly r(a.field_);
        r.c_.resize(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.field_.sub(a[i], b[i]);
        r.trim();
        return r;
    }

    friend UPoly operator*(const UPoly& a, const UPoly& b)
    {
        UPoly r(a.field_);
        if (a.is_zero() || b.is_zero()) return r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r.c_[i + j] = a.field_.add(r.c_[i + j], a.field_.mul(a.c_[i], b.c_[j]));
        }
        r.trim();
        return r;
    }

    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

    /** Quotient and remainder; `b` nonzero. */
    static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b)
    {
        if (b.is_zero()) throw std::domain_error("univariate division by zero");
        const auto& F = a.field_;
        UPoly r = a, q(F);
        if (a.degree() < b.degree()) return {q, r};
        q.c_.assign(static_cast<std::size_t>(a.degree() - b.degree() + 1), 0);
        auto inv = F.inv(b.lead());
        for (int k = a.degree() - b.degree(); k >= 0; --k) {
            auto coef = F.mul(r[static_cast<std::size_t>(k + b.degree())], inv);
            q.c_[static_cast<std::size_t>(k)] = coef;
            if (coef == 0) continue;
            for (int j = 0; j <= b.degree(); ++j) {
                auto idx = static_cast<std::size_t>(k + j);
                r.c_[idx] = F.sub(r.c_[idx], F.mul(coef, b.c_[static_cast<std::size_t>(j)]));
            }
        }
        r.trim();
        q.trim();
        return {q, r};
    }

    friend UPoly operator%(const UPoly& a, const UPoly& b) { return divmod(a, b).second; }
    friend UPoly operator/(const UPoly& a, const UPoly& b) { return divmod(a, b).first; }

  private:
    void trim()
    {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    PrimeField field_{};
    std::vector<std::uint64_t> c_;
};

/** Monic gcd; gcd(0, 0) = 0. */
inline UPoly gcd(UPoly a, UPoly b)
{
    while (!b.is_zero()) {
        auto r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/** base^e mod m. */
inline UPoly powmod(UPoly base, std::uint64_t e, const UPoly& m)
{
    UPoly r = UPoly::constant(m.field(), 1) % m;
    base = base % m;
    while (e) {
        if (e & 1) r = (r * base) % m;
        e >>= 1;
        if (e) base = (base * base) % m;
    }
    return r;
}

/** Inverse of `a` modulo `m`, or std::nullopt when they share a factor. */
inline std::optional<UPoly> invmod(const UPoly& a, const UPoly& m)
{
    const auto& F = m.field();
    UPoly r0 = m, r1 = a % m;
    UPoly s0(F), s1 = UPoly::constant(F, 1);
    while (!r1.is_zero()) {
        auto [q, r] = UPoly::divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        auto s = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    if (r0.degree() != 0) return std::nullopt;
    return (s0.scaled(F.inv(r0.lead()))) % m;
}

namespace detail {

inline UPoly random_below(const PrimeField& F, int degree, std::mt19937_64& rng)
{
    std::vector<std::uint64_t> c(static_cast<std::size_t>(degree));
    for (auto& v : c) v = F.random(rng);
    return UPoly(F, std::move(c));
}

/* Splits a monic product of distinct degree-k irreducibles into its factors. */
inline void equal_degree_split(const UPoly& g, int k, std::mt19937_64& rng, std::vector<UPoly>& out)
{
    if (g.degree() <= 0) return;
    if (g.degree() == k) {
        out.push_back(g.monic());
        return;
    }
    const auto& F = g.field();
    const std::uint64_t p = F.characteristic();
    for (;;) {
        UPoly r = random_below(F, g.degree(), rng);
        if (r.degree() <= 0) continue;
        // r^((p^k - 1)/2) = (r^(1 + p + ... + p^(k-1)))^((p-1)/2)
        UPoly u = r % g, t = r % g;
        for (int i = 1; i < k; ++i) {
            u = powmod(u, p, g);
            t = (t * u) % g;
        }
        t = powmod(t, (p - 1) / 2, g);
        UPoly h = gcd(g, t - UPoly::constant(F, 1));
        if (h.degree() > 0 && h.degree() < g.degree()) {
            equal_degree_split(h, k, rng, out);
            equal_degree_split(g / h, k, rng, out);
            return;
        }
    }
}

} // namespace detail

/** Monic irreducible factors of degree exactly k, for each k = 1..max_degree.
 * Result indexed by k (entry 0 unused).  Deterministic given `seed`. */
inline std::vector<std::vector<UPoly>> low_degree_factors(const UPoly& a, int max_degree, std::uint64_t seed)
{
    std::vector<std::vector<UPoly>> out(static_cast<std::size_t>(max_degree) + 1);
    if (a.degree() <= 0) return out;
    const auto& F = a.field();
    std::mt19937_64 rng(seed);
    // square-free part over F_p with p > deg: a / gcd(a, a')
    std::vector<std::uint64_t> dc;
    for (std::size_t i = 1; i < a.coeffs().size(); ++i) dc.push_back(F.mul(a.coeffs()[i], F.from_count(i)));
    UPoly f = a.monic();
    UPoly g0 = gcd(f, UPoly(F, dc));
    if (g0.degree() > 0) f = f / g0;
    UPoly x = UPoly::x(F);
    UPoly w = x % f;
    for (int k = 1; k <= max_degree && f.degree() >= k; ++k) {
        w = powmod(w, F.characteristic(), f);
        UPoly g = gcd(f, w - x);
        if (g.degree() <= 0) continue;
        detail::equal_degree_split(g, k, rng, out[static_cast<std::size_t>(k)]);
        f = f / g;
        w = w % f;
    }
    for (auto& v : out)
        std::sort(v.begin(), v.end(), [](const UPoly& l, const UPoly& r) { return l.coeffs() < r.coeffs(); });
    return out;
}

/** Roots in F_p, ascending. */
inline std::vector<std::uint64_t> univariate_roots(const UPoly& a, std::uint64_t seed)
{
    if (a.is_zero()) throw std::invalid_argument("roots of the zero polynomial");
    std::vector<std::uint64_t> roots;
    auto lin = low_degree_factors(a, 1, seed);
    for (const auto& l : lin[1]) roots.push_back(a.field().neg(l[0]));
    std::sort(roots.begin(), roots.end());
    return roots;
}

/** Converts an MvPoly in at most one variable to dense form. */
inline UPoly to_univariate(const MvPoly<PrimeField>& a)
{
    int v = a.highest_variable();
    for (int j = 0; j < v; ++j)
        if (a.degree_in(static_cast<std::size_t>(j)) > 0)
            throw Error(Errc::ArityMismatch, "polynomial is not univariate");
    std::vector<std::uint64_t> c(a.is_zero() ? 0 : (v < 0 ? 1 : a.degree_in(static_cast<std::size_t>(v)) + 1), 0);
    for (const auto& t : a.terms()) c[v < 0 ? 0 : t.monomial[static_cast<std::size_t>(v)]] = t.coeff;
    return UPoly(a.field(), std::move(c));
}

inline std::vector<std::uint64_t> univariate_roots(const MvPoly<PrimeField>& a, std::uint64_t seed)
{
    return univariate_roots(to_univariate(a), seed);
}

inline std::vector<BigRational> univariate_roots(const MvPoly<RationalField>&, std::uint64_t)
{
    throw Error(Errc::RationalModeUnsupported, "univariate root finding needs a prime field");
}

/** The field F_p[s]/(q) for monic irreducible q. */
class ExtensionField
{
  public:
    using value_type = UPoly;

    explicit ExtensionField(UPoly modulus) : modulus_(modulus.monic()), base_(modulus.field()) { }

    int degree() const { return modulus_.degree(); }
    const UPoly& modulus() const { return modulus_; }
    const PrimeField& base() const { return base_; }

    value_type zero() const { return UPoly(base_); }
    value_type one() const { return UPoly::constant(base_, 1); }
    value_type generator() const { return UPoly::x(base_) % modulus_; }
    value_type embed(std::uint64_t c) const { return UPoly::constant(base_, c); }

    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type mul(const value_type& a, const value_type& b) const { return (a * b) % modulus_; }
    value_type inv(const value_type& a) const
    {
        auto r = invmod(a, modulus_);
        if (!r) throw std::domain_error("non-invertible element of extension field");
        return *r;
    }
    bool is_zero(const value_type& a) const { return a.is_zero(); }
    /** True when `a` lies in the prime subfield. */
    bool in_base(const value_type& a) const { return a.degree() <= 0; }
    std::uint64_t base_value(const value_type& a) const { return a[0]; }

  private:
    UPoly modulus_;
    PrimeField base_;
};

} // namespace fiberbound
