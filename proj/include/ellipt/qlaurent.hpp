#pragma once

// Truncated Laurent series, q-Pochhammer and theta products, and extraction of
// delta-function combs from the difference of two expansions of one function.

#include "ellipt/core.hpp"

#include <algorithm>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ellipt {

inline constexpr int kDefaultOrder = 80;

/// (x|a)_order = prod_{n=0}^{order-1} (1 - x a^n).
template <class Real>
Complex<Real> qpochhammer(const Complex<Real>& x, const Complex<Real>& a, int order = kDefaultOrder)
{
    if (!(std::abs(a) < Real(1)))
        throw DomainError("qpochhammer: |a| < 1 required");
    Complex<Real> result(1);
    Complex<Real> term = x;
    for (int n = 0; n < order; ++n) {
        result *= Complex<Real>(1) - term;
        term *= a;
    }
    return result;
}

/// theta_a(x) = (x|a) (a/x|a) (a|a).
template <class Real>
Complex<Real> theta(const Complex<Real>& x, const Complex<Real>& a, int order = kDefaultOrder)
{
    if (x == Complex<Real>(0))
        throw DomainError("theta: x = 0 is outside the domain (a/x undefined)");
    return qpochhammer(x, a, order) * qpochhammer(a / x, a, order) * qpochhammer(a, a, order);
}

template <class Real>
struct Annulus {
    Real inner = Real(0);
    Real outer = std::numeric_limits<Real>::infinity();
};

/// A Laurent series in one variable x, multiplied by a global x^offset.
///
/// Coefficient k stands for exponent min_exponent + k. Coefficients are known
/// through exponent `order`; anything above is O(x^{order+1}) and is never produced
/// by the arithmetic below.
template <class Real>
class LaurentSeries {
public:
    using C = Complex<Real>;

    LaurentSeries() = default;

    LaurentSeries(int min_exponent, std::vector<C> coefficients, int order, Annulus<Real> annulus = {},
                  C offset = C(0))
        : min_exponent_(min_exponent), coefficients_(std::move(coefficients)), order_(order), annulus_(annulus),
          offset_(offset)
    {
        trim_above_order();
    }

    static LaurentSeries zero(int order) { return LaurentSeries(0, {}, order); }
    static LaurentSeries one(int order) { return LaurentSeries(0, {C(1)}, order); }
    static LaurentSeries monomial(int exponent, C value, int order) { return LaurentSeries(exponent, {value}, order); }

    int min_exponent() const { return min_exponent_; }
    int max_exponent() const { return min_exponent_ + static_cast<int>(coefficients_.size()) - 1; }
    int order() const { return order_; }
    C offset() const { return offset_; }
    const Annulus<Real>& annulus() const { return annulus_; }
    const std::vector<C>& coefficients() const { return coefficients_; }
    bool empty() const { return coefficients_.empty(); }

    void set_annulus(Annulus<Real> a) { annulus_ = a; }

    C coeff(int exponent) const
    {
        if (exponent > order_)
            throw ContractViolation("LaurentSeries::coeff: exponent " + std::to_string(exponent) +
                                    " beyond truncation order " + std::to_string(order_));
        const int k = exponent - min_exponent_;
        if (k < 0 || k >= static_cast<int>(coefficients_.size()))
            return C(0);
        return coefficients_[static_cast<std::size_t>(k)];
    }

    /// Drops explicit zeros at both ends.
    LaurentSeries& canonicalize()
    {
        auto nonzero = [](const C& c) { return c != C(0); };
        const auto first = std::find_if(coefficients_.begin(), coefficients_.end(), nonzero);
        if (first == coefficients_.end()) {
            coefficients_.clear();
            min_exponent_ = 0;
            return *this;
        }
        const auto last = std::find_if(coefficients_.rbegin(), coefficients_.rend(), nonzero).base();
        min_exponent_ += static_cast<int>(first - coefficients_.begin());
        coefficients_ = std::vector<C>(first, last);
        return *this;
    }

    C operator()(const C& x) const
    {
        C sum(0);
        for (int k = static_cast<int>(coefficients_.size()) - 1; k >= 0; --k)
            sum = sum * x + coefficients_[static_cast<std::size_t>(k)];
        sum *= ipow(x, min_exponent_);
        if (offset_ != C(0))
            sum *= principal_pow(x, offset_);
        return sum;
    }

    LaurentSeries operator-() const
    {
        LaurentSeries r = *this;
        for (auto& c : r.coefficients_)
            c = -c;
        return r;
    }

    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b)
    {
        require_same_offset(a, b);
        const int order = std::min(a.order_, b.order_);
        if (a.empty())
            return LaurentSeries(b.min_exponent_, b.coefficients_, order, intersect(a.annulus_, b.annulus_), b.offset_);
        if (b.empty())
            return LaurentSeries(a.min_exponent_, a.coefficients_, order, intersect(a.annulus_, b.annulus_), a.offset_);
        const int lo = std::min(a.min_exponent_, b.min_exponent_);
        const int hi = std::min(std::max(a.max_exponent(), b.max_exponent()), order);
        std::vector<C> coeffs(static_cast<std::size_t>(std::max(0, hi - lo + 1)));
        for (int e = lo; e <= hi; ++e)
            coeffs[static_cast<std::size_t>(e - lo)] = a.raw(e) + b.raw(e);
        return LaurentSeries(lo, std::move(coeffs), order, intersect(a.annulus_, b.annulus_), a.offset_);
    }

    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }

    /// Product; the result is known only up to the smaller of the two truncation
    /// orders shifted by the other factor's lowest exponent.
    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b)
    {
        if (a.empty() || b.empty())
            return LaurentSeries(0, {}, std::min(a.order_ + (b.empty() ? 0 : b.min_exponent_),
                                                 b.order_ + (a.empty() ? 0 : a.min_exponent_)),
                                 intersect(a.annulus_, b.annulus_), a.offset_ + b.offset_);
        const int order = std::min(a.order_ + b.min_exponent_, b.order_ + a.min_exponent_);
        const int lo = a.min_exponent_ + b.min_exponent_;
        const int hi = std::min(a.max_exponent() + b.max_exponent(), order);
        std::vector<C> coeffs(static_cast<std::size_t>(std::max(0, hi - lo + 1)));
        for (std::size_t i = 0; i < a.coefficients_.size(); ++i)
            for (std::size_t j = 0; j < b.coefficients_.size(); ++j) {
                const int e = lo + static_cast<int>(i + j);
                if (e > hi)
                    break;
                coeffs[static_cast<std::size_t>(e - lo)] += a.coefficients_[i] * b.coefficients_[j];
            }
        return LaurentSeries(lo, std::move(coeffs), order, intersect(a.annulus_, b.annulus_),
                             a.offset_ + b.offset_);
    }

    friend LaurentSeries operator*(const C& s, const LaurentSeries& a)
    {
        LaurentSeries r = a;
        for (auto& c : r.coefficients_)
            c *= s;
        return r;
    }

    /// x^k * this.
    LaurentSeries shifted(int k) const
    {
        return LaurentSeries(min_exponent_ + k, coefficients_, order_ + k, annulus_, offset_);
    }

    /// Multiplicative inverse; the lowest stored coefficient must be nonzero.
    LaurentSeries inverse() const
    {
        LaurentSeries a = *this;
        a.canonicalize();
        if (a.empty())
            throw ContractViolation("LaurentSeries::inverse of zero series");
        const int n_terms = a.order_ - a.min_exponent_ + 1;
        std::vector<C> inv(static_cast<std::size_t>(std::max(0, n_terms)));
        const C lead = a.coefficients_.front();
        for (int n = 0; n < n_terms; ++n) {
            C acc = (n == 0) ? C(1) : C(0);
            for (int k = 1; k <= n && k < static_cast<int>(a.coefficients_.size()); ++k)
                acc -= a.coefficients_[static_cast<std::size_t>(k)] * inv[static_cast<std::size_t>(n - k)];
            inv[static_cast<std::size_t>(n)] = acc / lead;
        }
        // (x^m u)^{-1} = x^{-m} u^{-1}; u^{-1} known through the same number of terms as u.
        return LaurentSeries(-a.min_exponent_, std::move(inv), a.order_ - 2 * a.min_exponent_, a.annulus_, -a.offset_);
    }

private:
    C raw(int exponent) const
    {
        const int k = exponent - min_exponent_;
        if (k < 0 || k >= static_cast<int>(coefficients_.size()))
            return C(0);
        return coefficients_[static_cast<std::size_t>(k)];
    }

    void trim_above_order()
    {
        if (!coefficients_.empty() && max_exponent() > order_)
            coefficients_.resize(static_cast<std::size_t>(std::max(0, order_ - min_exponent_ + 1)));
    }

    static Annulus<Real> intersect(const Annulus<Real>& a, const Annulus<Real>& b)
    {
        return {std::max(a.inner, b.inner), std::min(a.outer, b.outer)};
    }

    static void require_same_offset(const LaurentSeries& a, const LaurentSeries& b)
    {
        if (a.offset_ != b.offset_ && !a.empty() && !b.empty())
            throw ContractViolation("LaurentSeries: adding series with different global offsets");
    }

    int min_exponent_ = 0;
    std::vector<C> coefficients_;
    int order_ = kDefaultOrder;
    Annulus<Real> annulus_{};
    C offset_{0};
};

/// Truncated exp of a series with no negative exponents and zero constant term.
template <class Real>
LaurentSeries<Real> series_exp(const LaurentSeries<Real>& log_series)
{
    using C = Complex<Real>;
    if (log_series.offset() != C(0))
        throw ContractViolation("series_exp: series carries a non-integer offset");
    LaurentSeries<Real> f = log_series;
    f.canonicalize();
    if (!f.empty() && f.min_exponent() < 0)
        throw ContractViolation("series_exp: negative exponents present");
    if (!f.empty() && f.min_exponent() == 0 && f.coefficients().front() != C(0))
        throw ContractViolation("series_exp: nonzero constant term");
    const int order = log_series.order();
    std::vector<C> e(static_cast<std::size_t>(order + 1));
    e[0] = C(1);
    // n e_n = sum_{k=1}^n k c_k e_{n-k}
    for (int n = 1; n <= order; ++n) {
        C acc(0);
        for (int k = 1; k <= n; ++k) {
            const C ck = f.empty() ? C(0) : (k <= f.max_exponent() ? f.coeff(k) : C(0));
            if (ck != C(0))
                acc += Real(k) * ck * e[static_cast<std::size_t>(n - k)];
        }
        e[static_cast<std::size_t>(n)] = acc / Real(n);
    }
    return LaurentSeries<Real>(0, std::move(e), order, log_series.annulus());
}

/// Truncated log of a power series with constant term 1.
template <class Real>
LaurentSeries<Real> series_log(const LaurentSeries<Real>& unit)
{
    using C = Complex<Real>;
    if (unit.offset() != C(0) || unit.min_exponent() < 0 || unit.coeff(0) != C(1))
        throw ContractViolation("series_log: argument must be 1 + O(x)");
    const int order = unit.order();
    std::vector<C> l(static_cast<std::size_t>(order + 1));
    // n f_n = sum_{k=1}^n k l_k f_{n-k}
    for (int n = 1; n <= order; ++n) {
        C acc = Real(n) * unit.coeff(n);
        for (int k = 1; k < n; ++k)
            acc -= Real(k) * l[static_cast<std::size_t>(k)] * unit.coeff(n - k);
        l[static_cast<std::size_t>(n)] = acc / Real(n);
    }
    return LaurentSeries<Real>(0, std::move(l), order, unit.annulus());
}

/// Sum_k weight_k * delta(x / point_k), delta(y) = sum_{n in Z} y^n.
template <class Real>
struct DeltaComb {
    struct Term {
        Complex<Real> point;
        Complex<Real> weight;
    };
    std::vector<Term> terms;
    /// Largest row-normalized mismatch after subtracting the fitted comb.
    Real residual = Real(0);
    int window_lo = 0;
    int window_hi = 0;
};

class DeltaCombError : public std::runtime_error {
public:
    DeltaCombError(const std::string& what, double residual, std::vector<double> profile)
        : std::runtime_error(what), residual_(residual), profile_(std::move(profile))
    {}
    double residual() const { return residual_; }
    /// Normalized mismatch per exponent, lowest exponent first.
    const std::vector<double>& profile() const { return profile_; }

private:
    double residual_;
    std::vector<double> profile_;
};

/// Matches inner - outer against sum_k w_k delta(x/x_k) over the common exponent window.
///
/// `inner` is the expansion in x near 0; `outer_reciprocal` is the expansion of the
/// same function near infinity written as a series in y = 1/x. The exponent window is
/// [-min(outer order, max_window), min(inner order, max_window)]. Candidate poles come
/// from the caller; weights with negligible contribution are dropped from the result.
inline constexpr double kPoleMergeTolerance = 1e-10;

template <class Real>
DeltaComb<Real> delta_extract(const LaurentSeries<Real>& inner, const LaurentSeries<Real>& outer_reciprocal,
                              std::span<const Complex<Real>> candidates, Real tolerance = Real(1e-9),
                              int max_window = 40)
{
    using C = Complex<Real>;
    using Mat = MatrixXc<Real>;
    using Vec = VectorXc<Real>;
    if (inner.offset() != C(0) || outer_reciprocal.offset() != C(0))
        throw ContractViolation("delta_extract: offsets must vanish");
    // Coincident candidates would make the basis rank-deficient and split one weight in two.
    // Points closer than kPoleMergeTolerance cannot be told apart by any window of reasonable length.
    std::vector<C> candidate_poles;
    for (const auto& c : candidates)
        if (std::none_of(candidate_poles.begin(), candidate_poles.end(),
                         [&](const C& u) { return relative_difference(u, c) < Real(kPoleMergeTolerance); }))
            candidate_poles.push_back(c);

    const int hi = std::min(inner.order(), max_window);
    const int lo = -std::min(outer_reciprocal.order(), max_window);
    const int rows = hi - lo + 1;
    const int cols = static_cast<int>(candidate_poles.size());

    Vec diff(rows);
    for (int n = lo; n <= hi; ++n)
        diff(n - lo) = inner.coeff(n) - outer_reciprocal.coeff(-n);

    Mat basis(rows, cols);
    Eigen::Matrix<Real, Eigen::Dynamic, 1> row_scale(rows);
    for (int n = lo; n <= hi; ++n) {
        Real scale = std::abs(diff(n - lo));
        for (int k = 0; k < cols; ++k) {
            basis(n - lo, k) = ipow(candidate_poles[static_cast<std::size_t>(k)], -n);
            scale = std::max(scale, std::abs(basis(n - lo, k)));
        }
        row_scale(n - lo) = scale > Real(0) ? Real(1) / scale : Real(1);
    }

    Vec weights = Vec::Zero(cols);
    if (cols > 0) {
        const Mat scaled = row_scale.asDiagonal() * basis;
        const Vec rhs = row_scale.asDiagonal() * diff;
        weights = scaled.colPivHouseholderQr().solve(rhs);
    }

    const Vec fitted = basis * weights;
    std::vector<double> profile(static_cast<std::size_t>(rows));
    Real residual(0);
    for (int r = 0; r < rows; ++r) {
        const Real e = std::abs(diff(r) - fitted(r)) * row_scale(r);
        profile[static_cast<std::size_t>(r)] = static_cast<double>(e);
        residual = std::max(residual, e);
    }
    if (!(residual <= tolerance))
        throw DeltaCombError("difference of expansions is not a delta comb over the candidate poles (residual " +
                                 std::to_string(static_cast<double>(residual)) + ")",
                             static_cast<double>(residual), std::move(profile));

    DeltaComb<Real> comb;
    comb.residual = residual;
    comb.window_lo = lo;
    comb.window_hi = hi;
    for (int k = 0; k < cols; ++k) {
        Real influence(0);
        for (int r = 0; r < rows; ++r)
            influence = std::max(influence, std::abs(weights(k) * basis(r, k)) * row_scale(r));
        if (influence > tolerance)
            comb.terms.push_back({candidate_poles[static_cast<std::size_t>(k)], weights(k)});
    }
    return comb;
}

} // namespace ellipt
