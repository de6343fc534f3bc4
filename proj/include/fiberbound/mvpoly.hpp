#pragma once

/*
 * Sparse multivariate polynomials over a coefficient field.
 *
 * Terms are kept sorted by descending graded-lex monomial with no zero
 * coefficients, so the zero polynomial is the empty term list and the
 * leading term is always terms().front().
 */

#include "fiberbound/errors.hpp"
#include "fiberbound/field.hpp"
#include "fiberbound/monomial.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fiberbound {

template <class Field>
class MvPoly
{
  public:
    using field_type = Field;
    using scalar_type = typename Field::value_type;

    struct Term
    {
        Monomial monomial;
        scalar_type coeff;
    };

    MvPoly() = default;
    MvPoly(Field field, std::size_t nvars) : field_(std::move(field)), nvars_(nvars)
    {
        if (nvars > kMaxVariables)
            throw Error(Errc::ArityMismatch, "at most " + std::to_string(kMaxVariables) + " variables supported");
    }

    static MvPoly constant(const Field& field, std::size_t nvars, const scalar_type& c)
    {
        MvPoly p(field, nvars);
        if (!field.is_zero(c)) p.terms_.push_back({Monomial{}, c});
        return p;
    }

    static MvPoly one(const Field& field, std::size_t nvars) { return constant(field, nvars, field.one()); }

    static MvPoly variable(const Field& field, std::size_t nvars, std::size_t j)
    {
        if (j >= nvars) throw Error(Errc::ArityMismatch, "variable index out of range");
        return term(field, nvars, Monomial::variable(j), field.one());
    }

    static MvPoly term(const Field& field, std::size_t nvars, const Monomial& m, const scalar_type& c)
    {
        MvPoly p(field, nvars);
        if (!field.is_zero(c)) p.terms_.push_back({m, c});
        return p;
    }

    /** Builds a polynomial from unsorted terms, merging duplicates and dropping zeros. */
    static MvPoly from_terms(const Field& field, std::size_t nvars, std::vector<Term> terms)
    {
        MvPoly p(field, nvars);
        std::sort(terms.begin(), terms.end(),
                  [](const Term& a, const Term& b) { return a.monomial > b.monomial; });
        p.terms_.reserve(terms.size());
        for (auto& t : terms) {
            if (!p.terms_.empty() && p.terms_.back().monomial == t.monomial) {
                p.terms_.back().coeff = field.add(p.terms_.back().coeff, t.coeff);
            } else {
                if (!p.terms_.empty() && field.is_zero(p.terms_.back().coeff)) p.terms_.pop_back();
                p.terms_.push_back(std::move(t));
            }
        }
        if (!p.terms_.empty() && field.is_zero(p.terms_.back().coeff)) p.terms_.pop_back();
        return p;
    }

    const Field& field() const { return field_; }
    std::size_t nvars() const { return nvars_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one()); }
    bool is_one() const { return is_constant() && !is_zero() && field_.is_one(terms_[0].coeff); }

    /** Total degree; -1 for the zero polynomial. */
    std::int64_t total_degree() const
    {
        return terms_.empty() ? -1 : static_cast<std::int64_t>(terms_.front().monomial.degree());
    }

    std::uint32_t degree_in(std::size_t j) const
    {
        std::uint32_t d = 0;
        for (const auto& t : terms_) d = std::max(d, t.monomial[j]);
        return d;
    }

    /** Highest variable index that occurs, or -1 for constants. */
    int highest_variable() const
    {
        for (int j = static_cast<int>(nvars_) - 1; j >= 0; --j)
            if (degree_in(static_cast<std::size_t>(j)) > 0) return j;
        return -1;
    }

    const Term& leading_term() const { return terms_.front(); }
    const scalar_type& leading_coefficient() const { return terms_.front().coeff; }

    bool is_homogeneous() const
    {
        for (const auto& t : terms_)
            if (t.monomial.degree() != terms_.front().monomial.degree()) return false;
        return true;
    }

    Monomial monomial_content() const
    {
        if (terms_.empty()) return Monomial{};
        Monomial g = terms_.front().monomial;
        for (const auto& t : terms_) g = Monomial::gcd(g, t.monomial);
        return g;
    }

    scalar_type coefficient(const Monomial& m) const
    {
        for (const auto& t : terms_)
            if (t.monomial == m) return t.coeff;
        return field_.zero();
    }

    MvPoly scaled(const scalar_type& c) const
    {
        if (field_.is_zero(c)) return MvPoly(field_, nvars_);
        MvPoly r = *this;
        for (auto& t : r.terms_) t.coeff = field_.mul(t.coeff, c);
        return r;
    }

    /** Scales so the graded-lex leading coefficient is 1; zero stays zero. */
    MvPoly monic() const
    {
        if (terms_.empty() || field_.is_one(leading_coefficient())) return *this;
        return scaled(field_.inv(leading_coefficient()));
    }

    MvPoly mul_term(const Monomial& m, const scalar_type& c) const
    {
        if (field_.is_zero(c)) return MvPoly(field_, nvars_);
        MvPoly r = *this;
        for (auto& t : r.terms_) {
            t.monomial = t.monomial * m;
            t.coeff = field_.mul(t.coeff, c);
        }
        return r;
    }

    MvPoly operator-() const
    {
        MvPoly r = *this;
        for (auto& t : r.terms_) t.coeff = field_.neg(t.coeff);
        return r;
    }

    MvPoly& operator+=(const MvPoly& b) { return *this = combine(*this, b, false); }
    MvPoly& operator-=(const MvPoly& b) { return *this = combine(*this, b, true); }
    MvPoly& operator*=(const MvPoly& b) { return *this = multiply(*this, b); }

    friend MvPoly operator+(const MvPoly& a, const MvPoly& b) { return combine(a, b, false); }
    friend MvPoly operator-(const MvPoly& a, const MvPoly& b) { return combine(a, b, true); }
    friend MvPoly operator*(const MvPoly& a, const MvPoly& b) { return multiply(a, b); }

    friend bool operator==(const MvPoly& a, const MvPoly& b)
    {
        if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i) {
            if (!(a.terms_[i].monomial == b.terms_[i].monomial)) return false;
            if (!a.field_.equal(a.terms_[i].coeff, b.terms_[i].coeff)) return false;
        }
        return true;
    }

    static void check_compatible(const MvPoly& a, const MvPoly& b)
    {
        if (a.nvars_ != b.nvars_)
            throw Error(Errc::ArityMismatch, std::to_string(a.nvars_) + " vs " + std::to_string(b.nvars_) + " variables");
        if (!(a.field_ == b.field_)) throw Error(Errc::ArityMismatch, "polynomials over different fields");
    }

    /** r = r - c * m * b, in one merge pass.  Used by division. */
    void subtract_scaled(const MvPoly& b, const Monomial& m, const scalar_type& c)
    {
        std::vector<Term> out;
        out.reserve(terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size()) {
                out.push_back(std::move(terms_[i++]));
                continue;
            }
            Monomial bm = b.terms_[j].monomial * m;
            if (i == terms_.size() || terms_[i].monomial < bm) {
                out.push_back({bm, field_.neg(field_.mul(c, b.terms_[j].coeff))});
                ++j;
            } else if (bm < terms_[i].monomial) {
                out.push_back(std::move(terms_[i++]));
            } else {
                auto v = field_.sub(terms_[i].coeff, field_.mul(c, b.terms_[j].coeff));
                if (!field_.is_zero(v)) out.push_back({bm, std::move(v)});
                ++i;
                ++j;
            }
        }
        terms_ = std::move(out);
    }

  private:
    static MvPoly combine(const MvPoly& a, const MvPoly& b, bool subtract)
    {
        check_compatible(a, b);
        const Field& f = a.field_;
        MvPoly r(f, a.nvars_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() || (i < a.terms_.size() && b.terms_[j].monomial < a.terms_[i].monomial)) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || a.terms_[i].monomial < b.terms_[j].monomial) {
                r.terms_.push_back({b.terms_[j].monomial, subtract ? f.neg(b.terms_[j].coeff) : b.terms_[j].coeff});
                ++j;
            } else {
                auto v = subtract ? f.sub(a.terms_[i].coeff, b.terms_[j].coeff) : f.add(a.terms_[i].coeff, b.terms_[j].coeff);
                if (!f.is_zero(v)) r.terms_.push_back({a.terms_[i].monomial, std::move(v)});
                ++i;
                ++j;
            }
        }
        return r;
    }

    static MvPoly multiply(const MvPoly& a, const MvPoly& b)
    {
        check_compatible(a, b);
        if (a.is_zero() || b.is_zero()) return MvPoly(a.field_, a.nvars_);
        if (a.terms_.size() == 1) return b.mul_term(a.terms_[0].monomial, a.terms_[0].coeff);
        if (b.terms_.size() == 1) return a.mul_term(b.terms_[0].monomial, b.terms_[0].coeff);
        std::vector<Term> prod;
        prod.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& s : a.terms_)
            for (const auto& t : b.terms_) prod.push_back({s.monomial * t.monomial, a.field_.mul(s.coeff, t.coeff)});
        return from_terms(a.field_, a.nvars_, std::move(prod));
    }

    Field field_{};
    std::size_t nvars_ = 0;
    std::vector<Term> terms_;
};

template <class Field>
MvPoly<Field> pow(const MvPoly<Field>& a, unsigned e)
{
    auto r = MvPoly<Field>::one(a.field(), a.nvars());
    auto base = a;
    while (e) {
        if (e & 1) r *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return r;
}

/** Quotient of `a` by `b` when the division is exact, std::nullopt otherwise. */
template <class Field>
std::optional<MvPoly<Field>> try_exact_div(const MvPoly<Field>& a, const MvPoly<Field>& b)
{
    MvPoly<Field>::check_compatible(a, b);
    if (b.is_zero()) throw Error(Errc::NotDivisible, "division by the zero polynomial");
    const Field& f = a.field();
    const auto& lead = b.leading_term();
    auto lc_inv = f.inv(lead.coeff);
    MvPoly<Field> rem = a;
    std::vector<typename MvPoly<Field>::Term> quot;
    while (!rem.is_zero()) {
        const auto& lt = rem.leading_term();
        if (!lead.monomial.divides(lt.monomial)) return std::nullopt;
        Monomial m = lt.monomial / lead.monomial;
        auto c = f.mul(lt.coeff, lc_inv);
        quot.push_back({m, c});
        rem.subtract_scaled(b, m, c);
    }
    return MvPoly<Field>::from_terms(f, a.nvars(), std::move(quot));
}

template <class Field>
MvPoly<Field> exact_div(const MvPoly<Field>& a, const MvPoly<Field>& b)
{
    auto q = try_exact_div(a, b);
    if (!q) throw Error(Errc::NotDivisible, "nonzero remainder in exact division");
    return std::move(*q);
}

template <class Field>
bool divides(const MvPoly<Field>& b, const MvPoly<Field>& a)
{
    return try_exact_div(a, b).has_value();
}

template <class Field>
MvPoly<Field> partial_derivative(const MvPoly<Field>& a, std::size_t j)
{
    if (j >= a.nvars()) throw Error(Errc::ArityMismatch, "derivative variable out of range");
    const Field& f = a.field();
    std::vector<typename MvPoly<Field>::Term> out;
    for (const auto& t : a.terms()) {
        auto e = t.monomial[j];
        if (e == 0) continue;
        auto c = f.mul(t.coeff, f.from_count(e));
        if (f.is_zero(c)) continue;
        Monomial m = t.monomial;
        m.set(j, e - 1);
        out.push_back({m, c});
    }
    // lowering one exponent of distinct monomials keeps them distinct, but may reorder
    return MvPoly<Field>::from_terms(f, a.nvars(), std::move(out));
}

/** Evaluates `a` at `point` inside `ring`, a field-like type with `embed`. */
template <class Ring, class Field>
typename Ring::value_type evaluate_in(const Ring& ring, const MvPoly<Field>& a,
                                      std::span<const typename Ring::value_type> point)
{
    if (point.size() != a.nvars()) throw Error(Errc::ArityMismatch, "evaluation point has wrong length");
    std::vector<std::vector<typename Ring::value_type>> powers(a.nvars());
    for (std::size_t j = 0; j < a.nvars(); ++j) {
        auto top = a.degree_in(j);
        powers[j].reserve(top + 1);
        powers[j].push_back(ring.one());
        for (std::uint32_t e = 1; e <= top; ++e) powers[j].push_back(ring.mul(powers[j].back(), point[j]));
    }
    auto acc = ring.zero();
    for (const auto& t : a.terms()) {
        auto v = ring.embed(t.coeff);
        for (std::size_t j = 0; j < a.nvars(); ++j)
            if (t.monomial[j]) v = ring.mul(v, powers[j][t.monomial[j]]);
        acc = ring.add(acc, v);
    }
    return acc;
}

namespace detail {
template <class Field>
struct SelfRing : Field
{
    explicit SelfRing(const Field& f) : Field(f) { }
    typename Field::value_type embed(const typename Field::value_type& c) const { return c; }
    bool in_base(const typename Field::value_type&) const { return true; }
    typename Field::value_type base_value(const typename Field::value_type& v) const { return v; }
};
} // namespace detail

template <class Field>
typename Field::value_type evaluate(const MvPoly<Field>& a, std::span<const typename Field::value_type> point)
{
    return evaluate_in(detail::SelfRing<Field>(a.field()), a, point);
}

/** Coefficients of `a` viewed as a polynomial in variable `v`; index = exponent. */
template <class Field>
std::vector<MvPoly<Field>> coefficients_in(const MvPoly<Field>& a, std::size_t v)
{
    std::vector<std::vector<typename MvPoly<Field>::Term>> buckets(a.is_zero() ? 0 : a.degree_in(v) + 1);
    for (const auto& t : a.terms()) {
        Monomial m = t.monomial;
        auto e = m[v];
        m.set(v, 0);
        buckets[e].push_back({m, t.coeff});
    }
    std::vector<MvPoly<Field>> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) out.push_back(MvPoly<Field>::from_terms(a.field(), a.nvars(), std::move(b)));
    return out;
}

template <class Field>
MvPoly<Field> from_coefficients(const std::vector<MvPoly<Field>>& coeffs, std::size_t v, const Field& field,
                                std::size_t nvars)
{
    std::vector<typename MvPoly<Field>::Term> terms;
    for (std::size_t e = 0; e < coeffs.size(); ++e)
        for (const auto& t : coeffs[e].terms()) {
            Monomial m = t.monomial;
            m.set(v, static_cast<Monomial::exponent_type>(e));
            terms.push_back({m, t.coeff});
        }
    return MvPoly<Field>::from_terms(field, nvars, std::move(terms));
}

/** Maps coefficients into another field (for instance Q -> F_p). */
template <class To, class From>
MvPoly<To> change_field(const MvPoly<From>& a, const To& to)
{
    std::vector<typename MvPoly<To>::Term> terms;
    terms.reserve(a.size());
    for (const auto& t : a.terms()) terms.push_back({t.monomial, to.from_rational(BigRational(t.coeff))});
    return MvPoly<To>::from_terms(to, a.nvars(), std::move(terms));
}

inline std::vector<std::string> default_variable_names(std::size_t nvars)
{
    std::vector<std::string> names;
    for (std::size_t j = 0; j < nvars; ++j) names.push_back("X" + std::to_string(j));
    return names;
}

/** Prints in descending graded-lex order, e.g. `3*X0^2*X1 - X2^3 + 1`. */
template <class Field>
std::string to_string(const MvPoly<Field>& a, const std::vector<std::string>& names)
{
    if (a.is_zero()) return "0";
    const Field& f = a.field();
    std::ostringstream os;
    bool first = true;
    for (const auto& t : a.terms()) {
        bool neg = f.is_negative(t.coeff);
        auto mag = neg ? f.neg(t.coeff) : t.coeff;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        bool unit = f.is_one(mag);
        bool wrote = false;
        if (!unit || t.monomial.is_one()) {
            os << f.to_string(mag);
            wrote = true;
        }
        for (std::size_t j = 0; j < a.nvars(); ++j) {
            auto e = t.monomial[j];
            if (e == 0) continue;
            if (wrote) os << '*';
            os << names.at(j);
            if (e > 1) os << '^' << e;
            wrote = true;
        }
    }
    return os.str();
}

template <class Field>
std::string to_string(const MvPoly<Field>& a)
{
    return to_string(a, default_variable_names(a.nvars()));
}

} // namespace fiberbound
