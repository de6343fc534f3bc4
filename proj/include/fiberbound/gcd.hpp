#pragma once

/*
 * Multivariate GCD by recursive primitive polynomial remainder sequences,
 * and square-free decomposition built on top of it.
 *
 * A polynomial is viewed as univariate in its highest occurring variable
 * with coefficients in the remaining ones.  The gcd splits into
 *   gcd(content(a), content(b)) * pp(last nonzero pseudo-remainder),
 * where content is itself a gcd of fewer-variable polynomials.
 */

#include "fiberbound/errors.hpp"
#include "fiberbound/mvpoly.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace fiberbound {

template <class Field>
MvPoly<Field> gcd(const MvPoly<Field>& a, const MvPoly<Field>& b);

namespace detail {

template <class Field>
using UnivariateView = std::vector<MvPoly<Field>>;

template <class Field>
void trim(UnivariateView<Field>& p)
{
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

/* gcd of a list of polynomials, smallest first, stopping at 1. */
template <class Field>
MvPoly<Field> gcd_of_list(std::vector<MvPoly<Field>> polys, const Field& field, std::size_t nvars)
{
    std::erase_if(polys, [](const MvPoly<Field>& p) { return p.is_zero(); });
    if (polys.empty()) return MvPoly<Field>(field, nvars);
    std::sort(polys.begin(), polys.end(), [](const MvPoly<Field>& x, const MvPoly<Field>& y) {
        if (x.total_degree() != y.total_degree()) return x.total_degree() < y.total_degree();
        return x.size() < y.size();
    });
    MvPoly<Field> g = polys.front().monic();
    for (std::size_t i = 1; i < polys.size() && !g.is_constant(); ++i) g = gcd(g, polys[i]);
    return g.is_constant() ? MvPoly<Field>::one(field, nvars) : g;
}

template <class Field>
MvPoly<Field> content_of(const UnivariateView<Field>& p, const Field& field, std::size_t nvars)
{
    return gcd_of_list(std::vector<MvPoly<Field>>(p.begin(), p.end()), field, nvars);
}

template <class Field>
UnivariateView<Field> divide_view(const UnivariateView<Field>& p, const MvPoly<Field>& c)
{
    UnivariateView<Field> out;
    out.reserve(p.size());
    if (c.is_constant()) {
        auto inv = c.field().inv(c.leading_coefficient());
        for (const auto& x : p) out.push_back(x.scaled(inv));
        return out;
    }
    for (const auto& x : p) out.push_back(exact_div(x, c));
    return out;
}

/* Sparse pseudo-remainder of a by b in the main variable: no final lc power,
 * since the caller only keeps the primitive part. */
template <class Field>
UnivariateView<Field> pseudo_remainder(UnivariateView<Field> a, const UnivariateView<Field>& b)
{
    const std::size_t db = b.size() - 1;
    const auto& lcb = b.back();
    const Field& field = lcb.field();
    while (a.size() >= b.size()) {
        auto lca = a.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i + 1 < a.size(); ++i) a[i] = a[i] * lcb;
        for (std::size_t i = 0; i < db; ++i) a[i + shift] -= lca * b[i];
        a.pop_back();
        trim(a);
        // keep coefficients from growing: remove the scalar content of the leading piece
        if (!a.empty()) {
            auto s = field.inv(a.back().leading_coefficient());
            for (auto& x : a) x = x.scaled(s);
        }
    }
    return a;
}

template <class Field>
MvPoly<Field> gcd_nonzero(const MvPoly<Field>& a0, const MvPoly<Field>& b0)
{
    const Field& field = a0.field();
    const std::size_t nvars = a0.nvars();
    if (a0.is_constant() || b0.is_constant()) return MvPoly<Field>::one(field, nvars);

    // monomial factors split off cheaply
    Monomial ma = a0.monomial_content(), mb = b0.monomial_content();
    Monomial mg = Monomial::gcd(ma, mb);
    MvPoly<Field> a = ma.is_one() ? a0 : exact_div(a0, MvPoly<Field>::term(field, nvars, ma, field.one()));
    MvPoly<Field> b = mb.is_one() ? b0 : exact_div(b0, MvPoly<Field>::term(field, nvars, mb, field.one()));
    MvPoly<Field> mono = MvPoly<Field>::term(field, nvars, mg, field.one());
    if (a.is_constant() || b.is_constant()) return mono;

    int va = a.highest_variable(), vb = b.highest_variable();
    int v = std::max(va, vb);
    auto sv = static_cast<std::size_t>(v);
    if (va != v) return mono * gcd(a, content_of(coefficients_in(b, sv), field, nvars));
    if (vb != v) return mono * gcd(b, content_of(coefficients_in(a, sv), field, nvars));

    auto A = coefficients_in(a, sv);
    auto B = coefficients_in(b, sv);
    auto ca = content_of(A, field, nvars);
    auto cb = content_of(B, field, nvars);
    auto cg = gcd(ca, cb);
    A = divide_view(A, ca);
    B = divide_view(B, cb);
    if (A.size() < B.size()) std::swap(A, B);
    while (B.size() > 1) {
        auto R = pseudo_remainder(std::move(A), B);
        if (R.empty()) break;
        if (R.size() == 1) {
            B = {MvPoly<Field>::one(field, nvars)};
            break;
        }
        A = std::move(B);
        B = divide_view(R, content_of(R, field, nvars));
    }
    MvPoly<Field> g = (B.size() > 1) ? from_coefficients(B, sv, field, nvars) : MvPoly<Field>::one(field, nvars);
    return (mono * cg * g).monic();
}

} // namespace detail

/** Monic (graded-lex) greatest common divisor.  gcd(0, 0) is rejected. */
template <class Field>
MvPoly<Field> gcd(const MvPoly<Field>& a, const MvPoly<Field>& b)
{
    MvPoly<Field>::check_compatible(a, b);
    if (a.is_zero() && b.is_zero()) throw std::invalid_argument("gcd(0, 0) is undefined");
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    return detail::gcd_nonzero(a, b).monic();
}

template <class Field>
MvPoly<Field> gcd(std::span<const MvPoly<Field>> polys)
{
    if (polys.empty()) throw std::invalid_argument("gcd of an empty list");
    auto g = detail::gcd_of_list(std::vector<MvPoly<Field>>(polys.begin(), polys.end()), polys.front().field(),
                                 polys.front().nvars());
    if (g.is_zero()) throw std::invalid_argument("gcd of zero polynomials");
    return g;
}

/** Content of `a` with respect to variable `v`. */
template <class Field>
MvPoly<Field> content(const MvPoly<Field>& a, std::size_t v)
{
    return detail::content_of(coefficients_in(a, v), a.field(), a.nvars());
}

template <class Field>
struct SquarefreePart
{
    MvPoly<Field> factor;
    unsigned multiplicity;
};

namespace detail {

/* Yun's algorithm in variable v on a polynomial primitive in v. */
template <class Field>
std::vector<SquarefreePart<Field>> yun(const MvPoly<Field>& f, std::size_t v)
{
    std::vector<SquarefreePart<Field>> out;
    auto fp = partial_derivative(f, v);
    auto g = gcd(f, fp);
    auto c = exact_div(f, g);
    auto d = exact_div(fp, g) - partial_derivative(c, v);
    for (unsigned i = 1; !c.is_constant(); ++i) {
        auto a = gcd(c, d);
        if (!a.is_constant()) out.push_back({a, i});
        c = exact_div(c, a);
        d = exact_div(d, a) - partial_derivative(c, v);
    }
    return out;
}

template <class Field>
std::vector<SquarefreePart<Field>> squarefree_monic(const MvPoly<Field>& a)
{
    if (a.is_constant()) return {};
    auto v = static_cast<std::size_t>(a.highest_variable());
    auto c = content(a, v);
    auto pp = c.is_constant() ? a : exact_div(a, c);
    auto parts = squarefree_monic(c.monic());
    auto top = yun(pp.monic(), v);
    // parts of the content are free of v, parts of pp have no v-free factor: coprime
    for (auto& t : top) {
        auto it = std::find_if(parts.begin(), parts.end(), [&](const auto& p) { return p.multiplicity == t.multiplicity; });
        if (it == parts.end())
            parts.push_back(std::move(t));
        else
            it->factor = (it->factor * t.factor).monic();
    }
    std::sort(parts.begin(), parts.end(), [](const auto& x, const auto& y) { return x.multiplicity < y.multiplicity; });
    return parts;
}

} // namespace detail

/** Square-free decomposition a = lc * prod P_e^e, parts monic, multiplicities ascending.
 *
 * Over F_p the characteristic must exceed deg(a); otherwise p-th powers
 * would be invisible to differentiation. */
template <class Field>
std::vector<SquarefreePart<Field>> squarefree_decompose(const MvPoly<Field>& a)
{
    if (a.is_zero()) throw std::invalid_argument("square-free decomposition of zero");
    auto p = a.field().characteristic();
    if (p != 0 && p <= static_cast<std::uint64_t>(a.total_degree()))
        throw Error(Errc::PthPowerHazard, "characteristic " + std::to_string(p) + " does not exceed degree " +
                                              std::to_string(a.total_degree()));
    return detail::squarefree_monic(a.monic());
}

/** Product of the square-free parts, i.e. the radical up to scalar. */
template <class Field>
MvPoly<Field> squarefree_part(const MvPoly<Field>& a)
{
    auto r = MvPoly<Field>::one(a.field(), a.nvars());
    for (const auto& part : squarefree_decompose(a)) r *= part.factor;
    return r;
}

/** sum over parts of (2e - 1) * deg(P_e). */
template <class Field>
std::int64_t weighted_degree(const std::vector<SquarefreePart<Field>>& parts)
{
    std::int64_t s = 0;
    for (const auto& p : parts) s += (2 * static_cast<std::int64_t>(p.multiplicity) - 1) * p.factor.total_degree();
    return s;
}

} // namespace fiberbound
