#pragma once

/*
 * Map files: a line-oriented description of a rational map.
 *
 *     # Example 2
 *     field p=2147483647          (or: field rational)
 *     vars X0 X1 X2
 *     f0 X1^2*X2^4 - X1^4*X2^2
 *     f1 ...
 *
 * Expressions use + - * ^, parentheses, integer literals and declared
 * variables.  Forms are kept with exact rational coefficients and reduced
 * into the session field on load.
 */

#include "fiberbound/errors.hpp"
#include "fiberbound/field.hpp"
#include "fiberbound/jacobian.hpp"
#include "fiberbound/mvpoly.hpp"

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace fiberbound {

struct MapFile
{
    std::optional<std::uint64_t> prime; ///< empty for the rationals
    std::vector<std::string> vars;
    std::vector<MvPoly<RationalField>> forms;
};

namespace detail {

inline Error parse_error(std::size_t line, std::size_t col, const std::string& msg)
{
    return Error(Errc::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

class ExpressionParser
{
  public:
    using Poly = MvPoly<RationalField>;

    ExpressionParser(std::string_view text, std::size_t line, std::size_t col0, const std::vector<std::string>& vars)
        : s_(text), line_(line), col0_(col0), vars_(vars)
    { }

    Poly parse()
    {
        auto p = expression();
        skip_ws();
        if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(line_, col0_ + pos_ + 1, msg); }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Poly expression()
    {
        skip_ws();
        bool neg = false;
        if (accept('-'))
            neg = true;
        else
            accept('+');
        Poly acc = term();
        if (neg) acc = -acc;
        for (;;) {
            if (accept('+'))
                acc += term();
            else if (accept('-'))
                acc -= term();
            else
                return acc;
        }
    }

    Poly term()
    {
        Poly acc = factor();
        while (accept('*')) acc *= factor();
        return acc;
    }

    Poly factor()
    {
        Poly base = primary();
        if (accept('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected a non-negative integer exponent");
            auto e = std::stoul(std::string(s_.substr(start, pos_ - start)));
            if (e > 1000) fail("exponent too large");
            return pow(base, static_cast<unsigned>(e));
        }
        return base;
    }

    Poly primary()
    {
        skip_ws();
        if (pos_ >= s_.size()) fail("expected a term after operator");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Poly inner = expression();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            BigInt v(std::string(s_.substr(start, pos_ - start)));
            return Poly::constant(RationalField{}, vars_.size(), BigRational(v));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name(s_.substr(start, pos_ - start));
            for (std::size_t j = 0; j < vars_.size(); ++j)
                if (vars_[j] == name) return Poly::variable(RationalField{}, vars_.size(), j);
            pos_ = start;
            fail("undeclared variable '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t line_;
    std::size_t col0_;
    const std::vector<std::string>& vars_;
};

inline std::vector<std::string> split_ws(std::string_view s)
{
    std::vector<std::string> out;
    std::istringstream is{std::string(s)};
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

} // namespace detail

/** Syntax-level parse; field and validity checks happen in load_map. */
inline MapFile parse_map_text(std::string_view text)
{
    MapFile mf;
    mf.prime = PrimeField::kDefaultPrime;
    bool have_vars = false;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        std::size_t first = 0;
        while (first < line.size() && std::isspace(static_cast<unsigned char>(line[first]))) ++first;
        if (first == line.size()) {
            if (end == text.size()) break;
            continue;
        }
        std::size_t kw_end = first;
        while (kw_end < line.size() && !std::isspace(static_cast<unsigned char>(line[kw_end]))) ++kw_end;
        std::string kw(line.substr(first, kw_end - first));
        std::string_view rest = line.substr(kw_end);

        if (kw == "field") {
            auto words = detail::split_ws(rest);
            if (words.size() != 1) throw detail::parse_error(line_no, kw_end + 1, "expected 'p=<prime>' or 'rational'");
            if (words[0] == "rational") {
                mf.prime.reset();
            } else if (words[0].rfind("p=", 0) == 0) {
                try {
                    std::size_t used = 0;
                    mf.prime = std::stoull(words[0].substr(2), &used);
                    if (used != words[0].size() - 2) throw std::invalid_argument("trailing");
                } catch (const std::exception&) {
                    throw detail::parse_error(line_no, kw_end + 2, "bad prime '" + words[0].substr(2) + "'");
                }
            } else {
                throw detail::parse_error(line_no, kw_end + 2, "expected 'p=<prime>' or 'rational'");
            }
        } else if (kw == "vars") {
            if (have_vars || !mf.forms.empty()) throw detail::parse_error(line_no, first + 1, "vars must be declared once, before the forms");
            mf.vars = detail::split_ws(rest);
            if (mf.vars.size() < 2 || mf.vars.size() > kMaxVariables)
                throw detail::parse_error(line_no, kw_end + 1, "between 2 and " + std::to_string(kMaxVariables) + " variables required");
            have_vars = true;
        } else if (kw.size() >= 2 && kw[0] == 'f' && std::all_of(kw.begin() + 1, kw.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            if (!have_vars) throw detail::parse_error(line_no, first + 1, "forms must follow a vars line");
            if (std::stoul(kw.substr(1)) != mf.forms.size())
                throw detail::parse_error(line_no, first + 1, "expected label f" + std::to_string(mf.forms.size()));
            detail::ExpressionParser p(rest, line_no, kw_end, mf.vars);
            mf.forms.push_back(p.parse());
        } else {
            throw detail::parse_error(line_no, first + 1, "unknown directive '" + kw + "'");
        }
        if (end == text.size()) break;
    }
    if (!have_vars) throw detail::parse_error(line_no, 1, "missing vars line");
    if (mf.forms.size() < 2) throw detail::parse_error(line_no, 1, "at least two forms f0, f1 required");
    return mf;
}

/** Reduces the forms into `field` and validates the map there. */
template <class Field>
RationalMapInput<Field> load_map(const MapFile& mf, const Field& field)
{
    std::vector<MvPoly<Field>> f;
    for (const auto& g : mf.forms) f.push_back(change_field(g, field));
    return make_rational_map(std::move(f), mf.vars);
}

inline RationalMapInput<PrimeField> load_prime_map(const MapFile& mf)
{
    if (!mf.prime) throw Error(Errc::InvalidField, "map file declares the rationals");
    return load_map(mf, PrimeField(*mf.prime));
}

/** Parses and validates in the file's own field. */
inline MapFile parse_map_file(std::string_view text)
{
    auto mf = parse_map_text(text);
    if (mf.prime)
        (void)load_map(mf, PrimeField(*mf.prime));
    else
        (void)load_map(mf, RationalField{});
    return mf;
}

template <class Field>
std::string field_line(const Field& field)
{
    if constexpr (std::is_same_v<Field, RationalField>)
        return "field rational";
    else
        return "field p=" + std::to_string(field.characteristic());
}

template <class Field>
std::string print_map(const RationalMapInput<Field>& in)
{
    std::ostringstream os;
    os << field_line(in.field) << "\nvars";
    for (const auto& v : in.names) os << ' ' << v;
    os << '\n';
    for (std::size_t i = 0; i < in.f.size(); ++i) os << 'f' << i << ' ' << to_string(in.f[i], in.names) << '\n';
    return os.str();
}

} // namespace fiberbound
