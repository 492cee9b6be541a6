#pragma once

// Root-system data and deformation-parameter bookkeeping.
//
// Node ordering follows Bourbaki, with nodes numbered from 0 in code:
//   A_n : chain 1 - 2 - ... - n
//   D_n : chain 1 - ... - (n-2), with n-1 and n both attached to n-2
//   E_n : chain 1 - 3 - 4 - 5 - ... - n, with node 2 attached to node 4
// (1-based labels as in the usual Dynkin tables; subtract one for the index.)

#include "ellipt/core.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ellipt {

enum class SeriesType { A, D, E };

struct CartanMatrix {
    SeriesType type = SeriesType::A;
    int rank = 0;
    Eigen::MatrixXi entries;

    int operator()(int i, int j) const { return entries(i, j); }
    std::string label() const;
};

CartanMatrix make_cartan(SeriesType type, int rank);

/// Parses labels such as "A1", "A2", "D4", "E8".
CartanMatrix parse_cartan(std::string_view label);

/// Symmetric, 2 on the diagonal, 0/-1 off it, leading principal minors positive.
bool satisfies_cartan_invariants(const CartanMatrix& cartan);

/// Distinct values of A_ij over all ordered node pairs, in descending order.
std::vector<int> cartan_entry_classes(const CartanMatrix& cartan);

struct Rational {
    std::int64_t num = 1;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool is_integer() const { return den == 1; }
    std::string to_string() const;

    /// "1", "-3", "3/2".
    static Rational parse(std::string_view text);

    friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
};

/// Deformation parameters p, q with the derived beta and qtilde.
///
/// All fractional powers go through the logarithms stored here:
///   log_p, log_q principal; log_qtilde := c log_p - log_q
/// so that q * qtilde = p^c holds on the nose and qtilde^{1/2} = p^{1/2}/q^{1/2} at c = 1.
template <class Real>
struct DeformationParams {
    Complex<Real> p;
    Complex<Real> q;
    Complex<Real> beta;
    Rational c;
    Complex<Real> qtilde;

    Complex<Real> log_p;
    Complex<Real> log_q;
    Complex<Real> log_qtilde;
    Complex<Real> sqrt_p;
    Complex<Real> sqrt_q;
    Complex<Real> sqrt_qtilde;

    /// (p/q)^{1/2}, the scale in the zero-mode factor of E_i.
    Complex<Real> sqrt_p_over_q() const { return sqrt_p / sqrt_q; }

    /// p/q, the base of the F-side products.
    Complex<Real> p_over_q() const { return p / q; }

    /// p^t; exact integer powers of sqrt_p when 2t is an integer.
    Complex<Real> p_pow(Real t) const { return pow_from(sqrt_p, log_p, t); }
    Complex<Real> q_pow(Real t) const { return pow_from(sqrt_q, log_q, t); }
    Complex<Real> qtilde_pow(Real t) const { return pow_from(sqrt_qtilde, log_qtilde, t); }

private:
    static Complex<Real> pow_from(const Complex<Real>& root, const Complex<Real>& log, Real t)
    {
        const Real twice = Real(2) * t;
        if (twice == std::round(twice))
            return ipow(root, static_cast<long>(std::llround(twice)));
        return std::exp(t * log);
    }
};

/// Builds the parameter set and validates the convergence bounds
/// 0 < |p| < 1, 0 < |q| < 1, |p/q| < 1, |qtilde| < 1. Throws DomainError naming every violated bound.
template <class Real>
DeformationParams<Real> make_params(Complex<Real> p, Complex<Real> q, Rational c = Rational(1));

/// The same p, q at central charge one (the level of the free-field representation).
template <class Real>
DeformationParams<Real> at_level_one(const DeformationParams<Real>& params)
{
    return make_params<Real>(params.p, params.q, Rational(1));
}

extern template DeformationParams<double> make_params<double>(Complex<double>, Complex<double>, Rational);
extern template DeformationParams<long double> make_params<long double>(Complex<long double>, Complex<long double>,
                                                                        Rational);

} // namespace ellipt
