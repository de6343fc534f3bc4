#pragma once

/*
 * Graded pieces of Syz(f_0..f_n) by exact linear algebra.
 *
 * In degree nu the unknowns are the coefficients of (a_0..a_n) in (R_nu)^(n+1);
 * the equations are the coefficients of sum a_i f_i in R_(nu+d).
 */

#include "fiberbound/jacobian.hpp"
#include "fiberbound/linalg.hpp"
#include "fiberbound/mvpoly.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fiberbound {

/** All monomials of total degree `deg` in `nvars` variables, descending graded-lex. */
inline std::vector<Monomial> monomials_of_degree(std::size_t nvars, unsigned deg)
{
    std::vector<Monomial> out;
    Monomial cur;
    auto rec = [&](auto&& self, std::size_t var, unsigned left) -> void {
        if (var + 1 == nvars) {
            cur.set(var, left);
            out.push_back(cur);
            cur.set(var, 0);
            return;
        }
        for (unsigned e = left + 1; e-- > 0;) {
            cur.set(var, e);
            self(self, var + 1, left - e);
        }
        cur.set(var, 0);
    };
    if (nvars == 0) return out;
    rec(rec, 0, deg);
    return out;
}

template <class Field>
struct GradedKernelBasis
{
    unsigned degree = 0;
    std::vector<std::vector<MvPoly<Field>>> basis; ///< each entry an (n+1)-tuple of forms of degree `degree`
    std::size_t dimension = 0;
};

template <class Field>
GradedKernelBasis<Field> graded_syzygy_kernel(const RationalMapInput<Field>& in, unsigned nu)
{
    const auto src = monomials_of_degree(in.nvars(), nu);
    const auto dst = monomials_of_degree(in.nvars(), nu + in.d);
    std::map<Monomial, std::size_t, std::greater<>> row_of;
    for (std::size_t r = 0; r < dst.size(); ++r) row_of.emplace(dst[r], r);

    const std::size_t forms = in.n + 1;
    Matrix<Field> mat(in.field, dst.size(), forms * src.size());
    for (std::size_t i = 0; i < forms; ++i)
        for (std::size_t k = 0; k < src.size(); ++k)
            for (const auto& t : in.f[i].terms())
                mat(row_of.at(t.monomial * src[k]), i * src.size() + k) = t.coeff;

    GradedKernelBasis<Field> out;
    out.degree = nu;
    for (const auto& v : kernel_basis(mat)) {
        std::vector<MvPoly<Field>> tuple;
        auto check = MvPoly<Field>(in.field, in.nvars());
        for (std::size_t i = 0; i < forms; ++i) {
            std::vector<typename MvPoly<Field>::Term> terms;
            for (std::size_t k = 0; k < src.size(); ++k)
                if (!in.field.is_zero(v[i * src.size() + k])) terms.push_back({src[k], v[i * src.size() + k]});
            tuple.push_back(MvPoly<Field>::from_terms(in.field, in.nvars(), std::move(terms)));
            check += tuple.back() * in.f[i];
        }
        if (!check.is_zero()) throw std::logic_error("syzygy kernel vector fails sum a_i f_i = 0");
        out.basis.push_back(std::move(tuple));
    }
    out.dimension = out.basis.size();
    return out;
}

struct IndegResult
{
    std::optional<unsigned> indeg; ///< empty means no syzygy up to searched_up_to
    unsigned searched_up_to = 0;
};

/** Smallest nu <= cap with a nonzero syzygy of degree nu.  The default cap
 * is d, where the Koszul relations f_j e_i - f_i e_j always live. */
template <class Field>
IndegResult indeg_syzygy(const RationalMapInput<Field>& in, std::optional<unsigned> cap = std::nullopt)
{
    const unsigned limit = cap.value_or(in.d);
    IndegResult res;
    for (unsigned nu = 0; nu <= limit; ++nu) {
        res.searched_up_to = nu;
        if (graded_syzygy_kernel(in, nu).dimension > 0) {
            res.indeg = nu;
            return res;
        }
    }
    if (!cap && in.n >= 1) throw std::logic_error("no syzygy found up to degree d despite the Koszul relations");
    return res;
}

} // namespace fiberbound
