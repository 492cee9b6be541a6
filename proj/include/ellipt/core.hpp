#pragma once

// Scalar aliases, exact integer powers and the error types shared by every module.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace ellipt {

template <class Real>
using Complex = std::complex<Real>;

template <class Real>
using VectorXc = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <class Real>
using MatrixXc = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Input outside the region where the q-products converge.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed configuration (algebra label, rank, config file entry).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Caller broke a documented precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// base^n by repeated squaring. Used for every integer power so that p^{A n/2}
/// and friends stay on the branch fixed by the stored square roots.
template <class T>
T ipow(T base, long n)
{
    if (n < 0)
        return T(1) / ipow(base, -n);
    T result(1);
    while (n != 0) {
        if (n & 1)
            result *= base;
        base *= base;
        n >>= 1;
    }
    return result;
}

template <class Real>
bool is_integral(const Complex<Real>& e, Real tol = Real(0))
{
    return std::abs(e.imag()) <= tol && std::abs(e.real() - std::round(e.real())) <= tol;
}

/// Principal-branch power base^e; integral exponents go through ipow.
template <class Real>
Complex<Real> principal_pow(const Complex<Real>& base, const Complex<Real>& e)
{
    if (is_integral(e))
        return ipow(base, static_cast<long>(std::llround(e.real())));
    return std::exp(e * std::log(base));
}

template <class Real>
Real relative_difference(const Complex<Real>& a, const Complex<Real>& b)
{
    const Real scale = std::max({std::abs(a), std::abs(b), std::numeric_limits<Real>::min()});
    return std::abs(a - b) / scale;
}

/// Tolerance used when matching bases that were computed along different paths.
template <class Real>
Real base_match_tolerance()
{
    return Real(64) * std::numeric_limits<Real>::epsilon();
}

template <class Real>
bool nearly_equal(const Complex<Real>& a, const Complex<Real>& b)
{
    return std::abs(a - b) <= base_match_tolerance<Real>() * std::max<Real>(Real(1), std::max(std::abs(a), std::abs(b)));
}

template <class Real>
constexpr Real pi_v = Real(3.141592653589793238462643383279502884L);

} // namespace ellipt
