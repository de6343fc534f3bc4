#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>

namespace fiberbound {

inline constexpr std::size_t kMaxVariables = 8;

/** Exponent vector of a monomial in at most `kMaxVariables` variables.
 *
 * Unused slots stay zero, so monomials of different arity still compare
 * consistently.  Ordering is graded-lexicographic with X0 > X1 > ... */
class Monomial
{
  public:
    using exponent_type = std::uint32_t;

    Monomial() = default;

    explicit Monomial(std::span<const exponent_type> exps)
    {
        if (exps.size() > kMaxVariables) throw std::invalid_argument("too many variables in monomial");
        for (std::size_t i = 0; i < exps.size(); ++i) {
            exps_[i] = exps[i];
            degree_ += exps[i];
        }
    }

    Monomial(std::initializer_list<exponent_type> exps)
        : Monomial(std::span<const exponent_type>(exps.begin(), exps.size()))
    { }

    static Monomial variable(std::size_t j, exponent_type e = 1)
    {
        Monomial m;
        m.set(j, e);
        return m;
    }

    exponent_type operator[](std::size_t i) const { return exps_[i]; }

    void set(std::size_t i, exponent_type e)
    {
        degree_ = degree_ - exps_[i] + e;
        exps_[i] = e;
    }

    std::uint64_t degree() const { return degree_; }
    bool is_one() const { return degree_ == 0; }

    bool divides(const Monomial& other) const
    {
        for (std::size_t i = 0; i < kMaxVariables; ++i)
            if (exps_[i] > other.exps_[i]) return false;
        return true;
    }

    friend Monomial operator*(Monomial a, const Monomial& b)
    {
        for (std::size_t i = 0; i < kMaxVariables; ++i) a.exps_[i] += b.exps_[i];
        a.degree_ += b.degree_;
        return a;
    }

    /** Requires `b.divides(a)`. */
    friend Monomial operator/(Monomial a, const Monomial& b)
    {
        for (std::size_t i = 0; i < kMaxVariables; ++i) a.exps_[i] -= b.exps_[i];
        a.degree_ -= b.degree_;
        return a;
    }

    static Monomial gcd(const Monomial& a, const Monomial& b)
    {
        Monomial g;
        for (std::size_t i = 0; i < kMaxVariables; ++i) g.set(i, std::min(a.exps_[i], b.exps_[i]));
        return g;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps_ == b.exps_; }

    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b)
    {
        if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
        for (std::size_t i = 0; i < kMaxVariables; ++i)
            if (auto c = a.exps_[i] <=> b.exps_[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }

    std::size_t hash() const
    {
        std::size_t h = 1469598103934665603ULL;
        for (auto e : exps_) h = (h ^ e) * 1099511628211ULL;
        return h;
    }

  private:
    std::array<exponent_type, kMaxVariables> exps_{};
    std::uint64_t degree_ = 0;
};

} // namespace fiberbound
