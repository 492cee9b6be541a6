#pragma once

// Structure functions psi, phi, f, g and the theta-ratio exchange factors
// X(z) Y(w) = R(w/z) Y(w) X(z), in the forms they are stated in.

#include "ellipt/currents.hpp"

namespace ellipt {

enum class ExchangePair { SPlusSPlus, SMinusSMinus, EE, FF, HPlusHPlus, HMinusHMinus, HPlusHMinus, HPlusE, HMinusE, HPlusF, HMinusF };

inline std::pair<CurrentKind, CurrentKind> exchange_kinds(ExchangePair pair)
{
    using K = CurrentKind;
    switch (pair) {
    case ExchangePair::SPlusSPlus: return {K::SPlus, K::SPlus};
    case ExchangePair::SMinusSMinus: return {K::SMinus, K::SMinus};
    case ExchangePair::EE: return {K::E, K::E};
    case ExchangePair::FF: return {K::F, K::F};
    case ExchangePair::HPlusHPlus: return {K::HPlus, K::HPlus};
    case ExchangePair::HMinusHMinus: return {K::HMinus, K::HMinus};
    case ExchangePair::HPlusHMinus: return {K::HPlus, K::HMinus};
    case ExchangePair::HPlusE: return {K::HPlus, K::E};
    case ExchangePair::HMinusE: return {K::HMinus, K::E};
    case ExchangePair::HPlusF: return {K::HPlus, K::F};
    case ExchangePair::HMinusF: return {K::HMinus, K::F};
    }
    return {K::E, K::E};
}

/// Theta evaluation that remembers the smallest |theta| seen, so callers can skip
/// samples sitting on a zero or pole.
template <class Real>
class ThetaMeter {
public:
    using C = Complex<Real>;

    explicit ThetaMeter(int order = kDefaultOrder) : order_(order) {}

    C operator()(const C& x, const C& a)
    {
        const C v = theta(x, a, order_);
        smallest_ = std::min(smallest_, std::abs(v) / std::abs(qpochhammer(a, a, order_)));
        return v;
    }

    Real smallest() const { return smallest_; }
    void reset() { smallest_ = std::numeric_limits<Real>::infinity(); }

private:
    int order_;
    Real smallest_ = std::numeric_limits<Real>::infinity();
};

/// (-1)^{A-1} as printed, or a fixed override.
inline int printed_sign(int cartan_entry) { return (cartan_entry - 1) % 2 == 0 ? 1 : -1; }

/// R(x), x = w/z, for the exchange relations at central charge params.c.
/// `sign` replaces the (-1)^{A-1} prefactor of the H-E/H-F forms when nonzero.
template <class Real>
Complex<Real> exchange_structure(ExchangePair pair, int cartan_entry, const Complex<Real>& x,
                                 const DeformationParams<Real>& params, ThetaMeter<Real>& th, int sign = 0)
{
    using C = Complex<Real>;
    const int a = cartan_entry;
    const C q = params.q, qt = params.qtilde;
    const C half = ipow(params.sqrt_p, a); // p^{A/2}
    const Real c = static_cast<Real>(params.c.num) / static_cast<Real>(params.c.den);
    const C s = sign != 0 ? C(Real(sign)) : C(Real(printed_sign(a)));
    const C pm = C(Real(printed_sign(a)));

    switch (pair) {
    case ExchangePair::SPlusSPlus:
        return pm * std::exp((Real(a) - Real(a) * params.beta - Real(1)) * std::log(x)) * th(x * half, q) / th(half / x, q);
    case ExchangePair::SMinusSMinus:
        return pm * std::exp((Real(a) - Real(a) / params.beta - Real(1)) * std::log(x)) * th(x * half, params.p_over_q()) /
               th(half / x, params.p_over_q());
    case ExchangePair::EE: return pm / x * th(x * half, q) / th(half / x, q);
    case ExchangePair::FF: return pm / x * th(x * half, qt) / th(half / x, qt);
    case ExchangePair::HPlusHPlus:
    case ExchangePair::HMinusHMinus:
        return th(x * half, q) * th(x * half, qt) / (x * x * th(half / x, q) * th(half / x, qt));
    case ExchangePair::HPlusHMinus: {
        const C lo = params.p_pow((Real(a) - c) / 2), hi = params.p_pow((Real(a) + c) / 2);
        return th(x * lo, q) * th(x * hi, qt) / (x * x * th(hi / x, q) * th(lo / x, qt));
    }
    case ExchangePair::HPlusE: {
        const C h = params.q_pow(c / 2);
        return s / (x / h) * th(x * half / h, q) / th(half * h / x, q);
    }
    case ExchangePair::HMinusE: {
        const C h = params.qtilde_pow(c / 2);
        return s / (x * h) * th(x * half * h, q) / th(half / (h * x), q);
    }
    case ExchangePair::HPlusF: {
        const C h = params.q_pow(c / 2);
        return s / (x * h) * th(x * half * h, qt) / th(half / (h * x), qt);
    }
    case ExchangePair::HMinusF: {
        const C h = params.qtilde_pow(c / 2);
        return s / (x / h) * th(x * half / h, qt) / th(half * h / x, qt);
    }
    }
    return C(0);
}

/// psi_ij(x) = (-1)^{A-1} x^{-1} theta_a(x p^{A/2}) / theta_a(x^{-1} p^{A/2}), a = q or qtilde.
template <class Real>
Complex<Real> psi(int cartan_entry, const Complex<Real>& x, const Complex<Real>& base,
                  const DeformationParams<Real>& params, ThetaMeter<Real>& th)
{
    const Complex<Real> half = ipow(params.sqrt_p, cartan_entry);
    return Real(printed_sign(cartan_entry)) / x * th(x * half, base) / th(half / x, base);
}

/// phi_ij(x) = theta_a(x p^{A/2}) / theta_a(x a^{A/2}); `root` is a^{1/2}.
template <class Real>
Complex<Real> phi(int cartan_entry, const Complex<Real>& x, const Complex<Real>& base, const Complex<Real>& root,
                  const DeformationParams<Real>& params, ThetaMeter<Real>& th)
{
    const Complex<Real> half = ipow(params.sqrt_p, cartan_entry);
    return th(x * half, base) / th(x * ipow(root, cartan_entry), base);
}

/// Serre coefficient built from psi_ii and psi_ij:
///   (psi_ii(z2/z1) + 1)(psi_ij(w/z1) psi_ij(w/z2) + 1) / (psi_ij(w/z2) + psi_ii(z2/z1) psi_ij(w/z1)).
/// The arguments are the three psi values, so the same formula serves the printed
/// theta form and the engine's exchange ratios.
template <class Real>
Complex<Real> serre_coefficient(const Complex<Real>& psi_ii_21, const Complex<Real>& psi_ij_w1,
                                const Complex<Real>& psi_ij_w2)
{
    return (psi_ii_21 + Real(1)) * (psi_ij_w1 * psi_ij_w2 + Real(1)) / (psi_ij_w2 + psi_ii_21 * psi_ij_w1);
}

} // namespace ellipt
