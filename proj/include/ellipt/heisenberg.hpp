#pragma once

// Deformed Heisenberg algebra: oscillator brackets, the coefficient maps that put
// a_i[m] into the exponent of each current, and the zero-mode lattice (Q_i, P_i).
//
// Zero modes are written in one momentum basis P with [P_i, Q_j] = A_ij. The
// screening-current zero mode a_i[0] equals beta * P_i, so every current's
// zero-mode part becomes e^{c.Q} (scale * x)^{e.P} with complex vectors c, e.

#include "ellipt/algebra_config.hpp"

#include <algorithm>
#include <map>
#include <span>
#include <optional>
#include <vector>

namespace ellipt {

enum class CurrentKind { SPlus, SMinus, E, F, HPlus, HMinus };

inline const char* kind_name(CurrentKind kind)
{
    switch (kind) {
    case CurrentKind::SPlus: return "S+";
    case CurrentKind::SMinus: return "S-";
    case CurrentKind::E: return "E";
    case CurrentKind::F: return "F";
    case CurrentKind::HPlus: return "H+";
    case CurrentKind::HMinus: return "H-";
    }
    return "?";
}

inline bool is_elementary(CurrentKind kind) { return kind != CurrentKind::HPlus && kind != CurrentKind::HMinus; }

/// b(n) = [a_i[n], a_j[-n]] for Cartan entry A, n != 0.
template <class Real>
Complex<Real> bracket_formula(const DeformationParams<Real>& params, int cartan_entry, long n)
{
    using C = Complex<Real>;
    if (n == 0)
        throw ContractViolation("bracket_formula: n = 0 has no oscillator bracket");
    if (cartan_entry == 0)
        return C(0);
    const C half = ipow(params.sqrt_p, static_cast<long>(cartan_entry) * n); // p^{A n/2}
    return (C(1) - ipow(params.q, n)) * (half - C(1) / half) * (C(1) - ipow(params.p_over_q(), n)) /
           (Real(n) * (C(1) - ipow(params.p, n)));
}

/// Memoized brackets for one Cartan matrix. Values depend on (i, j) only through A_ij,
/// so the table is keyed by (A_ij, n). Filled eagerly up to `max_mode`; immutable afterwards.
template <class Real>
class ModeBracketTable {
public:
    using C = Complex<Real>;

    ModeBracketTable(CartanMatrix cartan, DeformationParams<Real> params, int max_mode = 64)
        : cartan_(std::move(cartan)), params_(params), max_mode_(max_mode)
    {
        for (int a : cartan_entry_classes(cartan_))
            for (int n = -max_mode; n <= max_mode; ++n)
                if (n != 0)
                    table_[{a, n}] = bracket_formula(params_, a, n);
    }

    const CartanMatrix& cartan() const { return cartan_; }
    const DeformationParams<Real>& params() const { return params_; }

    /// [a_i[n], a_j[m]].
    C bracket(int i, int j, long n, long m) const
    {
        check_node(i);
        check_node(j);
        if (n + m != 0 || n == 0)
            return C(0);
        return value(cartan_(i, j), n);
    }

    C value(int cartan_entry, long n) const
    {
        if (std::abs(n) <= max_mode_) {
            const auto it = table_.find({cartan_entry, static_cast<int>(n)});
            if (it != table_.end())
                return it->second;
        }
        return bracket_formula(params_, cartan_entry, n);
    }

private:
    void check_node(int i) const
    {
        if (i < 0 || i >= cartan_.rank)
            throw ContractViolation("node index " + std::to_string(i) + " out of range for " + cartan_.label());
    }

    CartanMatrix cartan_;
    DeformationParams<Real> params_;
    int max_mode_;
    std::map<std::pair<int, int>, C> table_;
};

/// Multiplier of a_i[m] inside the exponent of an elementary current.
///   E, S+ :  s+[m] coefficient            1/(q^{-m} - 1)
///   F, S- :  minus the s-[m] coefficient   1/((q/p)^m - 1)
template <class Real>
Complex<Real> osc_coeff(const DeformationParams<Real>& params, CurrentKind kind, long m)
{
    using C = Complex<Real>;
    if (m == 0)
        throw ContractViolation("osc_coeff: m = 0 belongs to the zero-mode word");
    switch (kind) {
    case CurrentKind::E:
    case CurrentKind::SPlus: return C(1) / (ipow(params.q, -m) - C(1));
    case CurrentKind::F:
    case CurrentKind::SMinus: return C(1) / (ipow(params.q / params.p, m) - C(1));
    default: throw ContractViolation(std::string("osc_coeff: composite current ") + kind_name(kind));
    }
}

/// c_m with X(z) Y(w) = exp(sum_{m>=1} c_m (w/z)^m) :X Y: on the oscillator part.
template <class Real>
Complex<Real> contraction_log_coeff(const DeformationParams<Real>& params, CurrentKind kx, CurrentKind ky,
                                    int cartan_entry, long m)
{
    if (m < 1)
        throw ContractViolation("contraction_log_coeff: m >= 1 required");
    return osc_coeff(params, kx, m) * osc_coeff(params, ky, -m) * bracket_formula(params, cartan_entry, m);
}

/// (scale * x_var)^{exponent . P}.
template <class Real>
struct MomentumFactor {
    int var = 0;
    Complex<Real> scale{1};
    VectorXc<Real> exponent;
};

/// (scale * x_var)^{exponent}; var < 0 marks a constant scale^{exponent}.
template <class Real>
struct CNumberMonomial {
    int var = -1;
    Complex<Real> scale{1};
    Complex<Real> exponent{0};
};

/// e^{charge . Q} * prod(momentum factors) * prod(c-number monomials) * scalar, in normal
/// form (all e^Q to the left). The momentum factors commute among themselves.
template <class Real>
struct ZeroModeWord {
    VectorXc<Real> charge;
    std::vector<MomentumFactor<Real>> factors;
    std::vector<CNumberMonomial<Real>> monomials;
    Complex<Real> scalar{1};

    static ZeroModeWord identity(int rank)
    {
        ZeroModeWord w;
        w.charge = VectorXc<Real>::Zero(rank);
        return w;
    }
};

namespace detail {

template <class Real>
Complex<Real> monomial_value(const Complex<Real>& base_scale, const Complex<Real>* var_value,
                             const Complex<Real>& exponent)
{
    const Real tol = base_match_tolerance<Real>() * std::max(Real(1), std::abs(exponent));
    if (is_integral(exponent, tol)) {
        const long n = static_cast<long>(std::llround(exponent.real()));
        return var_value ? ipow(base_scale * *var_value, n) : ipow(base_scale, n);
    }
    // Non-integer powers split the logarithm so that Log(w/z) = Log w - Log z holds
    // for the sampled points; see the branch note in the verifier.
    Complex<Real> log = std::log(base_scale);
    if (var_value)
        log += std::log(*var_value);
    return std::exp(exponent * log);
}

} // namespace detail

/// Merges factors and monomials sharing a base and drops zero exponents.
template <class Real>
ZeroModeWord<Real> canonicalize(ZeroModeWord<Real> word)
{
    std::vector<MomentumFactor<Real>> factors;
    for (auto& f : word.factors) {
        auto it = std::find_if(factors.begin(), factors.end(), [&](const MomentumFactor<Real>& g) {
            return g.var == f.var && nearly_equal(g.scale, f.scale);
        });
        if (it == factors.end())
            factors.push_back(f);
        else
            it->exponent += f.exponent;
    }
    std::erase_if(factors, [](const MomentumFactor<Real>& f) { return f.exponent.isZero(0); });

    std::vector<CNumberMonomial<Real>> monomials;
    for (auto& m : word.monomials) {
        auto it = std::find_if(monomials.begin(), monomials.end(), [&](const CNumberMonomial<Real>& g) {
            return g.var == m.var && nearly_equal(g.scale, m.scale);
        });
        if (it == monomials.end())
            monomials.push_back(m);
        else
            it->exponent += m.exponent;
    }
    std::erase_if(monomials, [](const CNumberMonomial<Real>& m) { return m.exponent == Complex<Real>(0); });

    word.factors = std::move(factors);
    word.monomials = std::move(monomials);
    return word;
}

/// Normal form of w1 * w2: moving (y)^{e.P} of w1 right past e^{c.Q} of w2 leaves y^{e^T A c}.
template <class Real>
ZeroModeWord<Real> zero_mode_reorder(const CartanMatrix& cartan, const ZeroModeWord<Real>& w1,
                                     const ZeroModeWord<Real>& w2)
{
    const MatrixXc<Real> a = cartan.entries.cast<Complex<Real>>();
    ZeroModeWord<Real> out;
    out.charge = w1.charge + w2.charge;
    out.scalar = w1.scalar * w2.scalar;
    out.factors = w1.factors;
    out.factors.insert(out.factors.end(), w2.factors.begin(), w2.factors.end());
    out.monomials = w1.monomials;
    out.monomials.insert(out.monomials.end(), w2.monomials.begin(), w2.monomials.end());
    const VectorXc<Real> shifted = a * w2.charge;
    for (const auto& f : w1.factors) {
        const Complex<Real> e = (f.exponent.transpose() * shifted)(0);
        if (e != Complex<Real>(0))
            out.monomials.push_back({f.var, f.scale, e});
    }
    return canonicalize(std::move(out));
}

/// c-number part of a word at the given variable values.
template <class Real>
Complex<Real> evaluate_cnumber(const ZeroModeWord<Real>& word, std::span<const Complex<Real>> vars)
{
    Complex<Real> value = word.scalar;
    for (const auto& m : word.monomials)
        value *= detail::monomial_value(m.scale, m.var >= 0 ? &vars[static_cast<std::size_t>(m.var)] : nullptr,
                                        m.exponent);
    return value;
}

/// Momentum factors acting on a state with P-eigenvalues `momentum`.
template <class Real>
Complex<Real> evaluate_momentum(const ZeroModeWord<Real>& word, std::span<const Complex<Real>> vars,
                                const VectorXc<Real>& momentum)
{
    Complex<Real> value(1);
    for (const auto& f : word.factors) {
        const Complex<Real> e = (f.exponent.transpose() * momentum)(0);
        value *= detail::monomial_value(f.scale, f.var >= 0 ? &vars[static_cast<std::size_t>(f.var)] : nullptr, e);
    }
    return value;
}

} // namespace ellipt
