#pragma once

// Current specifications and the contraction engine.
//
// For elementary currents X(z), Y(w) the oscillator contraction is
//   C(x) = exp(sum_{m>=1} c_m x^m),  x = w/z,
// with c_m = (1/m) sigma mu^m prod(1 -/+ a^m) / prod(1 - v^m). Expanding the numerator
// into power sums sum_t kappa_t u_t^m (integer kappa_t) gives the global product
//   C(x) = prod_{k in N^d} prod_t (1 - x u_t v^k)^{-kappa_t},
// which is the meromorphic continuation of the series past its radius of convergence.

#include "ellipt/heisenberg.hpp"
#include "ellipt/qlaurent.hpp"

#include <array>
#include <functional>
#include <optional>

namespace ellipt {

template <class Real>
class ContractionProduct {
public:
    using C = Complex<Real>;

    struct Term {
        int kappa;
        C base;
    };

    ContractionProduct() = default;

    ContractionProduct(const DeformationParams<Real>& params, CurrentKind kx, CurrentKind ky, int cartan_entry)
    {
        if (!is_elementary(kx) || !is_elementary(ky))
            throw ContractViolation("ContractionProduct: composite currents are contracted through constituents");
        if (cartan_entry == 0)
            return; // bracket vanishes: C == 1

        const C r = params.p_over_q();
        auto side_base = [&](CurrentKind k) {
            return (k == CurrentKind::E || k == CurrentKind::SPlus) ? params.q : r;
        };
        const C half = ipow(params.sqrt_p, cartan_entry); // p^{A/2}

        // m c_m = (x_b^m/(1-x_b^m)) (-1/(1-y_b^m)) (-half^{-m}(1-q^m)(1-half^{2m})(1-r^m)/(1-p^m))
        int sigma = 1;
        C mu = side_base(kx) / half;
        struct Binomial {
            C base;
            bool plus; // (1 + base^m) instead of (1 - base^m)
        };
        std::vector<Binomial> num{{params.q, false}, {half * half, false}, {r, false}};
        denominators_ = {side_base(kx), side_base(ky), params.p};

        for (auto& b : num)
            if (std::abs(b.base) > Real(1)) { // 1 - a^m = -a^m (1 - a^{-m})
                sigma = -sigma;
                mu *= b.base;
                b.base = C(1) / b.base;
            }

        for (auto& b : num) {
            auto same = std::find_if(denominators_.begin(), denominators_.end(),
                                     [&](const C& v) { return nearly_equal(v, b.base); });
            if (same != denominators_.end()) {
                denominators_.erase(same);
                b.base = C(0); // factor 1
                continue;
            }
            auto root = std::find_if(denominators_.begin(), denominators_.end(),
                                     [&](const C& v) { return nearly_equal(v * v, b.base); });
            if (root != denominators_.end()) { // (1 - v^{2m})/(1 - v^m) = 1 + v^m
                b = {*root, true};
                denominators_.erase(root);
            }
        }

        terms_ = {{sigma, mu}};
        for (const auto& b : num) {
            if (b.base == C(0))
                continue;
            std::vector<Term> next;
            for (const auto& t : terms_) {
                next.push_back(t);
                next.push_back({b.plus ? t.kappa : -t.kappa, t.base * b.base});
            }
            terms_ = merge(std::move(next));
        }
    }

    bool trivial() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }
    const std::vector<C>& denominators() const { return denominators_; }

    /// c_m from the power-sum form.
    C log_coeff(long m) const
    {
        C num(0);
        for (const auto& t : terms_)
            num += Real(t.kappa) * ipow(t.base, m);
        C den{Real(m)};
        for (const auto& v : denominators_)
            den *= C(1) - ipow(v, m);
        return num / den;
    }

    /// The truncated series exp(sum c_m x^m) through x^order.
    LaurentSeries<Real> series(int order) const
    {
        std::vector<C> logc(static_cast<std::size_t>(order + 1));
        for (int m = 1; m <= order; ++m)
            logc[static_cast<std::size_t>(m)] = log_coeff(m);
        LaurentSeries<Real> log(0, std::move(logc), order, {Real(0), radius()});
        auto out = series_exp(log);
        out.set_annulus({Real(0), radius()});
        return out;
    }

    /// Radius of convergence of the series: nearest zero or pole of the product.
    Real radius() const
    {
        Real r = std::numeric_limits<Real>::infinity();
        for (const auto& t : terms_)
            r = std::min(r, Real(1) / std::abs(t.base));
        return r;
    }

    /// Poles (kappa > 0 factors) of C within |x| <= max_radius.
    std::vector<C> poles(Real max_radius) const
    {
        std::vector<C> out;
        visit(max_radius, Real(1), [&](const C& vk) {
            for (const auto& t : terms_) {
                const C pole = C(1) / (t.base * vk);
                if (t.kappa > 0 && std::abs(pole) <= max_radius)
                    out.push_back(pole);
            }
        });
        return out;
    }

    /// Value of the product at x.
    C operator()(const C& x) const
    {
        if (terms_.empty())
            return C(1);
        C value(1);
        visit(std::max(std::abs(x), Real(1)), std::numeric_limits<Real>::epsilon() / Real(16), [&](const C& vk) {
            for (const auto& t : terms_)
                value *= ipow(C(1) - x * t.base * vk, -static_cast<long>(t.kappa));
        });
        return value;
    }

private:
    Real max_base() const
    {
        Real m(0);
        for (const auto& t : terms_)
            m = std::max(m, std::abs(t.base));
        return m;
    }

    /// Calls f(v^k) over multi-indices k in N^d, pruning a branch once
    /// scale * max|u| * |v^k| < cutoff.
    template <class F>
    void visit(Real scale, Real cutoff, F&& f) const
    {
        visit_from(0, C(1), scale * max_base(), cutoff, f);
    }

    template <class F>
    void visit_from(std::size_t axis, C vk, Real scale, Real cutoff, F& f) const
    {
        if (axis == denominators_.size()) {
            f(vk);
            return;
        }
        for (int k = 0; k < 4096; ++k) {
            if (k > 0 && std::abs(vk) * scale < cutoff)
                break;
            visit_from(axis + 1, vk, scale, cutoff, f);
            vk *= denominators_[axis];
        }
    }

    static std::vector<Term> merge(std::vector<Term> in)
    {
        std::vector<Term> out;
        for (const auto& t : in) {
            auto it = std::find_if(out.begin(), out.end(), [&](const Term& u) { return nearly_equal(u.base, t.base); });
            if (it == out.end())
                out.push_back(t);
            else
                it->kappa += t.kappa;
        }
        std::erase_if(out, [](const Term& t) { return t.kappa == 0; });
        return out;
    }

    std::vector<Term> terms_;
    std::vector<C> denominators_;
};

/// An elementary current placed at (scale * X).
template <class Real>
struct Constituent {
    CurrentKind kind;
    Complex<Real> scale{1};
};

template <class Real>
struct CurrentSpec {
    CurrentKind kind = CurrentKind::E;
    int node = 0;
    /// One entry for elementary currents, (E, F) for H+/H-.
    std::vector<Constituent<Real>> constituents;

    bool composite() const { return constituents.size() > 1; }
};

template <class Real>
CurrentSpec<Real> make_current(CurrentKind kind, int node, const DeformationParams<Real>& params)
{
    CurrentSpec<Real> spec{kind, node, {}};
    switch (kind) {
    case CurrentKind::HPlus: // :E(X q^{1/2}) F(X q^{-1/2}):
        spec.constituents = {{CurrentKind::E, params.sqrt_q}, {CurrentKind::F, Complex<Real>(1) / params.sqrt_q}};
        break;
    case CurrentKind::HMinus: // :E(X (p/q)^{-1/2}) F(X (p/q)^{1/2}):
        spec.constituents = {{CurrentKind::E, Complex<Real>(1) / params.sqrt_p_over_q()},
                             {CurrentKind::F, params.sqrt_p_over_q()}};
        break;
    default: spec.constituents = {{kind, Complex<Real>(1)}};
    }
    return spec;
}

/// H+ (sign > 0) or H- at node i.
template <class Real>
CurrentSpec<Real> compose_h(int node, int sign, const DeformationParams<Real>& params)
{
    return make_current(sign > 0 ? CurrentKind::HPlus : CurrentKind::HMinus, node, params);
}

/// Zero-mode word of an elementary current at (scale * x_var).
template <class Real>
ZeroModeWord<Real> elementary_word(CurrentKind kind, int node, const Complex<Real>& scale, int var,
                                   const DeformationParams<Real>& params, int rank)
{
    using C = Complex<Real>;
    ZeroModeWord<Real> w = ZeroModeWord<Real>::identity(rank);
    VectorXc<Real> unit = VectorXc<Real>::Zero(rank);
    unit(node) = C(1);
    switch (kind) {
    case CurrentKind::E: // e^{Q_i} (X (p/q)^{1/2})^{P_i}
        w.charge = unit;
        w.factors.push_back({var, scale * params.sqrt_p_over_q(), unit});
        break;
    case CurrentKind::F: // e^{-Q_i} (X q^{1/2})^{-P_i}
        w.charge = -unit;
        w.factors.push_back({var, scale * params.sqrt_q, -unit});
        break;
    case CurrentKind::SPlus: // e^{Q_i} X^{a_i[0]}, a_i[0] = beta P_i
        w.charge = unit;
        w.factors.push_back({var, scale, params.beta * unit});
        break;
    case CurrentKind::SMinus: // e^{-Q_i/beta} X^{-a_i[0]/beta}
        w.charge = -unit / params.beta;
        w.factors.push_back({var, scale, -unit});
        break;
    default: throw ContractViolation("elementary_word: composite kind");
    }
    return w;
}

/// Normal-ordered zero-mode word of a current at x_var (no contraction monomials).
template <class Real>
ZeroModeWord<Real> current_word(const CurrentSpec<Real>& spec, int var, const DeformationParams<Real>& params,
                                const CartanMatrix& cartan)
{
    ZeroModeWord<Real> w = ZeroModeWord<Real>::identity(cartan.rank);
    for (const auto& c : spec.constituents) {
        w = zero_mode_reorder(cartan, w, elementary_word(c.kind, spec.node, c.scale, var, params, cartan.rank));
        w.monomials.clear();
    }
    return w;
}

/// X(z) Y(w) = monomial(z, w) * prefactor(w/z) * :X(z) Y(w):
template <class Real>
struct OpeResult {
    CurrentKind first;
    CurrentKind second;
    LaurentSeries<Real> prefactor;
    ZeroModeWord<Real> monomial;
};

/// Holds one contraction product per (kind, kind, A_ij). Immutable after construction.
template <class Real>
class OpeEngine {
public:
    using C = Complex<Real>;

    OpeEngine(CartanMatrix cartan, DeformationParams<Real> params)
        : cartan_(std::move(cartan)), params_(params), classes_(cartan_entry_classes(cartan_))
    {
        for (int a : classes_)
            for (auto kx : kElementary)
                for (auto ky : kElementary)
                    products_[key(kx, ky, a)] = ContractionProduct<Real>(params_, kx, ky, a);
    }

    const CartanMatrix& cartan() const { return cartan_; }
    const DeformationParams<Real>& params() const { return params_; }

    const ContractionProduct<Real>& product(CurrentKind kx, CurrentKind ky, int cartan_entry) const
    {
        const auto it = products_.find(key(kx, ky, cartan_entry));
        if (it == products_.end())
            throw ContractViolation("OpeEngine: no contraction for Cartan entry " + std::to_string(cartan_entry));
        return it->second;
    }

    CurrentSpec<Real> current(CurrentKind kind, int node) const { return make_current(kind, node, params_); }

    /// Contraction monomial of X(x_0) Y(x_1): zero modes of X moved past the charge of Y.
    ZeroModeWord<Real> pair_monomial(const CurrentSpec<Real>& x, const CurrentSpec<Real>& y) const
    {
        auto w = zero_mode_reorder(cartan_, current_word(x, 0, params_, cartan_), current_word(y, 1, params_, cartan_));
        w.charge.setZero();
        w.factors.clear();
        return w;
    }

    /// Series route, elementary currents only.
    OpeResult<Real> contract(const CurrentSpec<Real>& x, const CurrentSpec<Real>& y, int order = kDefaultOrder) const
    {
        if (x.composite() || y.composite())
            throw ContractViolation("contract: composite currents go through pair_value");
        const auto& prod = product(x.kind, y.kind, cartan_(x.node, y.node));
        return {x.kind, y.kind, prod.series(order), pair_monomial(x, y)};
    }

    /// The full scalar monomial * C in X(z) Y(w) = scalar * :X(z) Y(w):, product route.
    C pair_value(const CurrentSpec<Real>& x, const C& z, const CurrentSpec<Real>& y, const C& w) const
    {
        const std::array<C, 2> vars{z, w};
        C value = evaluate_cnumber(pair_monomial(x, y), std::span<const C>(vars));
        const int a = cartan_(x.node, y.node);
        for (const auto& cx : x.constituents)
            for (const auto& cy : y.constituents)
                value *= product(cx.kind, cy.kind, a)((w * cy.scale) / (z * cx.scale));
        return value;
    }

    /// Ratio V(X@z, Y@w) / V(Y@w, X@z): the exchange factor in X(z)Y(w) = R Y(w)X(z).
    C exchange_ratio(const CurrentSpec<Real>& x, const C& z, const CurrentSpec<Real>& y, const C& w) const
    {
        return pair_value(x, z, y, w) / pair_value(y, w, x, z);
    }

private:
    static constexpr std::array<CurrentKind, 4> kElementary{CurrentKind::SPlus, CurrentKind::SMinus, CurrentKind::E,
                                                            CurrentKind::F};

    static int key(CurrentKind kx, CurrentKind ky, int a)
    {
        return (static_cast<int>(kx) * 8 + static_cast<int>(ky)) * 16 + (a + 8);
    }

    CartanMatrix cartan_;
    DeformationParams<Real> params_;
    std::vector<int> classes_;
    std::map<int, ContractionProduct<Real>> products_;
};

/// Printed closed forms of X(a) Y(b) = f(a, b) :..: for the cross pairs.
/// Available for (S+,S-), (S-,S+), (E,F), (F,E) with A_ij in {2, -1, 0}.
template <class Real>
std::optional<std::function<Complex<Real>(Complex<Real>, Complex<Real>)>>
closed_form(CurrentKind first, CurrentKind second, int cartan_entry, const DeformationParams<Real>& params)
{
    using C = Complex<Real>;
    using Fn = std::function<C(C, C)>;
    if (cartan_entry == 0) {
        const bool cross = (first == CurrentKind::SPlus && second == CurrentKind::SMinus) ||
                           (first == CurrentKind::SMinus && second == CurrentKind::SPlus) ||
                           (first == CurrentKind::E && second == CurrentKind::F) ||
                           (first == CurrentKind::F && second == CurrentKind::E);
        if (!cross)
            return std::nullopt;
        return Fn([](C, C) { return C(1); });
    }
    if (cartan_entry != 2 && cartan_entry != -1)
        return std::nullopt;

    const C p = params.p, q = params.q, sp = params.sqrt_p, sq = params.sqrt_q, s = params.sqrt_p_over_q();
    const bool diag = cartan_entry == 2;
    if (first == CurrentKind::SPlus && second == CurrentKind::SMinus) {
        if (diag)
            return Fn([=](C a, C b) { return C(1) / ((a - b * q) * (a - b * q / p)); });
        return Fn([=](C a, C b) { return a - b * q / sp; });
    }
    if (first == CurrentKind::SMinus && second == CurrentKind::SPlus) {
        if (diag)
            return Fn([=](C a, C b) { return C(1) / ((a - b / q) * (a - b * p / q)); });
        return Fn([=](C a, C b) { return a - b * sp / q; });
    }
    if (first == CurrentKind::E && second == CurrentKind::F) {
        if (diag)
            return Fn([=](C a, C b) { return C(1) / ((a * s) * (a * s) * (C(1) - b * q / a) * (C(1) - b * q / (p * a))); });
        return Fn([=](C a, C b) { return (a * s) * (C(1) - (b / a) * q / sp); });
    }
    if (first == CurrentKind::F && second == CurrentKind::E) {
        if (diag)
            return Fn([=](C a, C b) { return C(1) / ((a * sq) * (a * sq) * (C(1) - b / (a * q)) * (C(1) - b * p / (a * q))); });
        return Fn([=](C a, C b) { return (a * sq) * (C(1) - (b / a) * sp / q); });
    }
    return std::nullopt;
}

} // namespace ellipt
