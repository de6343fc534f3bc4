#pragma once

#include "fiberbound/mapfile.hpp"

#include <string_view>

namespace testing_support {

using fiberbound::MvPoly;
using fiberbound::PrimeField;
using fiberbound::RationalField;

inline MvPoly<RationalField> Q(std::string_view expr, std::size_t nvars = 3)
{
    auto names = fiberbound::default_variable_names(nvars);
    return fiberbound::detail::ExpressionParser(expr, 1, 0, names).parse();
}

inline MvPoly<PrimeField> P(std::string_view expr, std::size_t nvars = 3, PrimeField field = PrimeField{})
{
    return fiberbound::change_field(Q(expr, nvars), field);
}

inline const char* example2_forms[4] = {
    "X1^2*X2^4 - X1^4*X2^2",
    "X0^4*X2^2 - X2^6",
    "X0^2*X1^2*X2^2 - X0^2*X1^4",
    "X0^4*X1^2 - X1^2*X2^4",
};

template <class Field = PrimeField>
fiberbound::RationalMapInput<Field> map_of(std::initializer_list<std::string_view> forms, std::size_t nvars = 3,
                                          Field field = Field{})
{
    std::vector<MvPoly<Field>> f;
    for (auto s : forms) f.push_back(fiberbound::change_field(Q(s, nvars), field));
    return fiberbound::make_rational_map(std::move(f));
}

inline fiberbound::RationalMapInput<PrimeField> example2()
{
    return map_of({example2_forms[0], example2_forms[1], example2_forms[2], example2_forms[3]});
}

inline fiberbound::RationalMapInput<PrimeField> family(unsigned d)
{
    auto x0 = P("X0"), x1 = P("X1"), x2 = P("X2");
    auto a = P("X0^2 - X1^2"), b = P("X1^2 - X2^2");
    auto s0 = pow(x0, d - 3), s1 = pow(x1, d - 3);
    return fiberbound::make_rational_map(std::vector{s0 * x1 * a, s0 * x2 * a, s0 * x2 * b, s1 * x2 * b});
}

} // namespace testing_support
