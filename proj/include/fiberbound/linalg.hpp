#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace fiberbound {

/** Dense row-major matrix of field scalars. */
template <class Field>
struct Matrix
{
    using scalar_type = typename Field::value_type;

    Matrix(Field f, std::size_t r, std::size_t c) : field(std::move(f)), rows(r), cols(c), data(r * c, field.zero()) { }

    scalar_type& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const scalar_type& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    Field field;
    std::size_t rows;
    std::size_t cols;
    std::vector<scalar_type> data;
};

/** Reduced row echelon form in place; returns the pivot columns. */
template <class Field>
std::vector<std::size_t> reduce_to_rref(Matrix<Field>& m)
{
    const Field& F = m.field;
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t sel = row;
        while (sel < m.rows && F.is_zero(m(sel, col))) ++sel;
        if (sel == m.rows) continue;
        if (sel != row)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(sel, j), m(row, j));
        auto inv = F.inv(m(row, col));
        for (std::size_t j = col; j < m.cols; ++j) m(row, j) = F.mul(m(row, j), inv);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row || F.is_zero(m(i, col))) continue;
            auto factor = m(i, col);
            for (std::size_t j = col; j < m.cols; ++j) m(i, j) = F.sub(m(i, j), F.mul(factor, m(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class Field>
std::size_t rank(Matrix<Field> m)
{
    return reduce_to_rref(m).size();
}

/** Kernel basis from the RREF: one vector per free column, with that entry 1. */
template <class Field>
std::vector<std::vector<typename Field::value_type>> kernel_basis(Matrix<Field> m)
{
    const Field& F = m.field;
    auto pivots = reduce_to_rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<typename Field::value_type>> basis;
    for (std::size_t free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<typename Field::value_type> v(m.cols, F.zero());
        v[free] = F.one();
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = F.neg(m(r, free));
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace fiberbound
