#include "ellipt/algebra_config.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>

namespace ellipt {

namespace {

void link(Eigen::MatrixXi& m, int a, int b)
{
    m(a, b) = -1;
    m(b, a) = -1;
}

std::string series_letter(SeriesType type)
{
    switch (type) {
    case SeriesType::A: return "A";
    case SeriesType::D: return "D";
    case SeriesType::E: return "E";
    }
    return "?";
}

} // namespace

std::string CartanMatrix::label() const { return series_letter(type) + std::to_string(rank); }

CartanMatrix make_cartan(SeriesType type, int rank)
{
    const bool valid = (type == SeriesType::A && rank >= 1) || (type == SeriesType::D && rank >= 4) ||
                       (type == SeriesType::E && rank >= 6 && rank <= 8);
    if (!valid)
        throw ConfigError("invalid Cartan type " + series_letter(type) + std::to_string(rank) +
                          " (A needs rank >= 1, D rank >= 4, E rank 6, 7 or 8)");

    CartanMatrix cartan{type, rank, Eigen::MatrixXi::Zero(rank, rank)};
    cartan.entries.diagonal().setConstant(2);

    switch (type) {
    case SeriesType::A:
        for (int i = 0; i + 1 < rank; ++i)
            link(cartan.entries, i, i + 1);
        break;
    case SeriesType::D:
        for (int i = 0; i + 1 < rank - 1; ++i)
            link(cartan.entries, i, i + 1);
        link(cartan.entries, rank - 3, rank - 1);
        break;
    case SeriesType::E:
        // 1-3-4-5-...-n chain, 2 hangs off 4 (1-based).
        link(cartan.entries, 0, 2);
        for (int i = 2; i + 1 < rank; ++i)
            link(cartan.entries, i, i + 1);
        link(cartan.entries, 1, 3);
        break;
    }
    return cartan;
}

CartanMatrix parse_cartan(std::string_view label)
{
    if (label.size() < 2)
        throw ConfigError("algebra label too short: '" + std::string(label) + "'");
    SeriesType type;
    switch (label.front()) {
    case 'A': case 'a': type = SeriesType::A; break;
    case 'D': case 'd': type = SeriesType::D; break;
    case 'E': case 'e': type = SeriesType::E; break;
    default: throw ConfigError("unsupported algebra label '" + std::string(label) + "' (simply-laced A, D, E only)");
    }
    int rank = 0;
    const auto digits = label.substr(1);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), rank);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
        throw ConfigError("bad rank in algebra label '" + std::string(label) + "'");
    return make_cartan(type, rank);
}

bool satisfies_cartan_invariants(const CartanMatrix& cartan)
{
    const auto& m = cartan.entries;
    if (m.rows() != cartan.rank || m.cols() != cartan.rank)
        return false;
    for (int i = 0; i < cartan.rank; ++i) {
        if (m(i, i) != 2)
            return false;
        for (int j = 0; j < cartan.rank; ++j) {
            if (m(i, j) != m(j, i))
                return false;
            if (i != j && m(i, j) != 0 && m(i, j) != -1)
                return false;
        }
    }
    const Eigen::MatrixXd real = m.cast<double>();
    for (int k = 1; k <= cartan.rank; ++k)
        if (real.topLeftCorner(k, k).determinant() <= 0.5)
            return false;
    return true;
}

std::vector<int> cartan_entry_classes(const CartanMatrix& cartan)
{
    std::set<int, std::greater<>> seen;
    for (int i = 0; i < cartan.rank; ++i)
        for (int j = 0; j < cartan.rank; ++j)
            seen.insert(cartan(i, j));
    return {seen.begin(), seen.end()};
}

Rational::Rational(std::int64_t n, std::int64_t d)
{
    if (d == 0)
        throw ConfigError("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const auto g = std::gcd(n, d);
    num = g == 0 ? 0 : n / g;
    den = g == 0 ? 1 : d / g;
}

std::string Rational::to_string() const
{
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational Rational::parse(std::string_view text)
{
    auto parse_int = [&](std::string_view s) {
        std::int64_t v = 0;
        if (!s.empty() && s.front() == '+')
            s.remove_prefix(1);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
            throw ConfigError("bad rational '" + std::string(text) + "'");
        return v;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_int(text));
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

template <class Real>
DeformationParams<Real> make_params(Complex<Real> p, Complex<Real> q, Rational c)
{
    std::vector<std::string> violated;
    auto describe = [](const char* name, Real value) {
        std::ostringstream os;
        os.precision(6);
        os << name << " (got " << value << ")";
        return os.str();
    };

    if (!(std::abs(q) < Real(1)) || std::abs(q) == Real(0))
        violated.push_back(describe("0 < |q| < 1", std::abs(q)));
    if (!(std::abs(p) < Real(1)) || std::abs(p) == Real(0))
        violated.push_back(describe("0 < |p| < 1", std::abs(p)));
    if (!violated.empty()) {
        std::string msg = "deformation parameters out of range: ";
        for (std::size_t k = 0; k < violated.size(); ++k)
            msg += (k ? "; " : "") + violated[k];
        throw DomainError(msg);
    }

    DeformationParams<Real> params;
    params.p = p;
    params.q = q;
    params.c = c;
    params.log_p = std::log(p);
    params.log_q = std::log(q);
    params.sqrt_p = std::sqrt(p);
    params.sqrt_q = std::sqrt(q);
    params.beta = Real(1) - params.log_p / params.log_q;

    const Real cval = static_cast<Real>(c.num) / static_cast<Real>(c.den);
    params.log_qtilde = cval * params.log_p - params.log_q;
    if (c.is_integer()) {
        params.qtilde = ipow(p, static_cast<long>(c.num)) / q;
        params.sqrt_qtilde = ipow(params.sqrt_p, static_cast<long>(c.num)) / params.sqrt_q;
    } else {
        params.qtilde = std::exp(params.log_qtilde);
        params.sqrt_qtilde = std::exp(params.log_qtilde / Real(2));
    }

    if (!(std::abs(p / q) < Real(1)))
        violated.push_back(describe("|p/q| < 1", std::abs(p / q)));
    if (!(std::abs(params.qtilde) < Real(1)))
        violated.push_back(describe("|qtilde| < 1 (needed for theta_qtilde)", std::abs(params.qtilde)));
    if (!violated.empty()) {
        std::string msg = "deformation parameters out of range: ";
        for (std::size_t k = 0; k < violated.size(); ++k)
            msg += (k ? "; " : "") + violated[k];
        throw DomainError(msg);
    }
    return params;
}

template DeformationParams<double> make_params<double>(Complex<double>, Complex<double>, Rational);
template DeformationParams<long double> make_params<long double>(Complex<long double>, Complex<long double>, Rational);

} // namespace ellipt
