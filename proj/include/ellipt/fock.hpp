#pragma once

// Truncated Fock space of the level-one representation and current-mode matrices.
//
// A basis state is prod a_j[-m]^{n_{j,m}} |lambda> with lambda in the root lattice.
// States are polynomials in y_{j,m} = a_j[-m]; an annihilator a_i[m] acts as
// sum_j b_ij(m) d/dy_{j,m}, so the annihilation exponential of a current is a translation
// of the y variables, and no inner product is ever needed.
//
// Every current X(z) maps a state of degree d to components of degree d' with a single
// power z^{rho + d' - d}, rho the zero-mode exponent on the source sector. Hence the
// mode X[n] (coefficient of z^{-n}) is the block d' = d - n - rho of X(1), and every
// entry is exact as long as the output cap covers d'.

#include "ellipt/currents.hpp"

#include <map>
#include <memory>

namespace ellipt {

/// n_{j,m} at index j * max_mode + (m - 1).
using Occupation = std::vector<int>;

template <class Real>
using FockPolynomial = std::map<Occupation, Complex<Real>>;

struct FockBasisState {
    Eigen::VectorXi momentum;
    /// Per node, the mode numbers m of the a_i[-m] present, in descending order.
    std::vector<std::vector<int>> partitions;
    int degree = 0;
};

struct SectorBasis {
    Eigen::VectorXi momentum;
    int cap = 0;
    std::vector<Occupation> states;
    std::map<Occupation, int> index;
};

inline int occupation_degree(const Occupation& occ, int max_mode)
{
    int d = 0;
    for (std::size_t k = 0; k < occ.size(); ++k)
        d += occ[k] * (static_cast<int>(k) % max_mode + 1);
    return d;
}

/// All multi-partitions of total degree <= cap, ordered by degree, then lexicographically.
/// `max_mode` fixes the occupation layout and must be >= cap.
SectorBasis enumerate_sector(const Eigen::VectorXi& momentum, int rank, int cap, int max_mode);

FockBasisState describe_state(const Occupation& occ, const Eigen::VectorXi& momentum, int rank, int max_mode);

template <class Real>
struct ModeMatrix {
    Eigen::VectorXi source;
    Eigen::VectorXi target;
    long mode = 0;
    /// Zero-mode exponent of the current on the source sector.
    long offset = 0;
    MatrixXc<Real> entries; // rows: target basis, cols: source basis
};

template <class Real>
struct CommutatorReport {
    Real max_abs_residual = 0;
    /// Largest entry among X Y, Y X and the expected right-hand side.
    Real max_entry = 0;
    Real relative_residual = 0;
    long blocks = 0;
    std::string worst; // location of the largest residual
};

/// One term w * delta(w / (z x)) * z^{-2} * H(z h) on the right-hand side of [X(z), Y(w)].
template <class Real>
struct DeltaTerm {
    Complex<Real> support;  // x
    Complex<Real> weight;   // w
    CurrentSpec<Real> current;
    Complex<Real> argument_scale; // h
};

template <class Real>
class FockSpace {
public:
    using C = Complex<Real>;

    FockSpace(const OpeEngine<Real>& engine, int max_mode)
        : engine_(engine), rank_(engine.cartan().rank), max_mode_(max_mode),
          brackets_(engine.cartan(), engine.params(), max_mode)
    {}

    int rank() const { return rank_; }
    int max_mode() const { return max_mode_; }

    SectorBasis sector(const Eigen::VectorXi& momentum, int cap) const
    {
        check_cap(cap);
        return enumerate_sector(momentum, rank_, cap, max_mode_);
    }

    /// Target sector lambda + charge; throws for S+/S- (non-integral zero modes).
    Eigen::VectorXi target_sector(const CurrentSpec<Real>& spec, const Eigen::VectorXi& lambda) const
    {
        require_fock_current(spec);
        const auto word = current_word(spec, 0, engine_.params(), engine_.cartan());
        Eigen::VectorXi out = lambda;
        for (int k = 0; k < rank_; ++k)
            out(k) += static_cast<int>(std::llround(word.charge(k).real()));
        return out;
    }

    /// Exponent rho of z in the zero-mode factor on sector lambda.
    long offset(const CurrentSpec<Real>& spec, const Eigen::VectorXi& lambda) const
    {
        require_fock_current(spec);
        const auto word = current_word(spec, 0, engine_.params(), engine_.cartan());
        const VectorXc<Real> momentum = momentum_eigenvalues(lambda);
        C rho(0);
        for (const auto& f : word.factors)
            rho += (f.exponent.transpose() * momentum)(0);
        return std::llround(rho.real());
    }

    /// X(1) applied to one basis monomial of sector lambda, components of degree <= out_cap.
    FockPolynomial<Real> apply_current(const CurrentSpec<Real>& spec, const Eigen::VectorXi& lambda,
                                       const Occupation& state, int out_cap) const
    {
        require_fock_current(spec);
        check_cap(out_cap);
        const auto& params = engine_.params();
        const int i = spec.node;

        // Zero modes at X = 1: prod (scale)^{e . pi}.
        const auto word = current_word(spec, 0, params, engine_.cartan());
        const std::array<C, 1> one{C(1)};
        const C zero_mode = word.scalar * evaluate_momentum(word, std::span<const C>(one), momentum_eigenvalues(lambda));

        std::vector<C> alpha(static_cast<std::size_t>(max_mode_ + 1)), beta(static_cast<std::size_t>(max_mode_ + 1));
        for (int m = 1; m <= max_mode_; ++m)
            for (const auto& c : spec.constituents) {
                alpha[static_cast<std::size_t>(m)] += osc_coeff(params, c.kind, m) * ipow(c.scale, -m);
                beta[static_cast<std::size_t>(m)] += osc_coeff(params, c.kind, -m) * ipow(c.scale, m);
            }

        // Annihilation part: y_{j,m} -> y_{j,m} + alpha_m b_ij(m).
        FockPolynomial<Real> translated;
        translate(state, i, alpha, translated);

        // Creation part: multiply by exp(sum_m beta_m y_{i,m}) up to out_cap.
        FockPolynomial<Real> out;
        for (const auto& [mono, coeff] : translated) {
            const int d = occupation_degree(mono, max_mode_);
            if (d > out_cap)
                continue;
            Occupation occ = mono;
            create(occ, i, 1, out_cap - d, coeff * zero_mode, beta, out);
        }
        std::erase_if(out, [](const auto& kv) { return kv.second == C(0); });
        return out;
    }

    /// Matrix of X[n] from sector lambda at cap D to its target sector at cap D.
    ModeMatrix<Real> current_mode_matrix(const CurrentSpec<Real>& spec, long n, const Eigen::VectorXi& lambda,
                                         int cap) const
    {
        const long rho = offset(spec, lambda);
        const long lo = -rho - cap, hi = -rho + cap;
        if (n < lo || n > hi)
            throw ContractViolation("current_mode_matrix: mode " + std::to_string(n) + " outside exactness window [" +
                                    std::to_string(lo) + ", " + std::to_string(hi) + "] at cap " +
                                    std::to_string(cap));
        const auto src = sector(lambda, cap);
        const auto dst = sector(target_sector(spec, lambda), cap);
        ModeMatrix<Real> mm{lambda, dst.momentum, n, rho, MatrixXc<Real>::Zero(static_cast<Eigen::Index>(dst.states.size()),
                                                                             static_cast<Eigen::Index>(src.states.size()))};
        for (std::size_t col = 0; col < src.states.size(); ++col) {
            const int target_degree = occupation_degree(src.states[col], max_mode_) - static_cast<int>(n + rho);
            if (target_degree < 0 || target_degree > cap)
                continue;
            for (const auto& [occ, v] : apply_current(spec, lambda, src.states[col], target_degree))
                if (occupation_degree(occ, max_mode_) == target_degree)
                    mm.entries(dst.index.at(occ), static_cast<Eigen::Index>(col)) = v;
        }
        return mm;
    }

    /// [X[m], Y[n]] (sign = +1) or {X[m], Y[n]} (sign = -1) against the modes of the
    /// delta-comb right-hand side, for |m|, |n| <= window on each sector, in/out degree <= cap.
    CommutatorReport<Real> commutator_check(const CurrentSpec<Real>& x, const CurrentSpec<Real>& y, int window,
                                            const std::vector<Eigen::VectorXi>& sectors, int cap,
                                            const std::vector<DeltaTerm<Real>>& rhs, int sign = 1) const
    {
        if (x.kind != CurrentKind::E || y.kind != CurrentKind::F)
            throw ContractViolation("commutator_check: only (E, F) pairs close under the commutator");
        CommutatorReport<Real> report;
        for (const auto& lambda : sectors) {
            const auto src = sector(lambda, cap);
            // XY: Y first. Intermediate degrees reach cap + window + |rho|.
            const long rho_y = offset(y, lambda);
            const auto mid_y = target_sector(y, lambda);
            const long rho_xy = offset(x, mid_y);
            const long rho_x = offset(x, lambda);
            const auto mid_x = target_sector(x, lambda);
            const long rho_yx = offset(y, mid_x);
            const auto out_sector = target_sector(x, mid_y);
            const auto dst = sector(out_sector, cap);
            const int mid_cap_y = cap + window + static_cast<int>(std::abs(rho_y));
            const int mid_cap_x = cap + window + static_cast<int>(std::abs(rho_x));
            check_cap(mid_cap_y);
            check_cap(mid_cap_x);

            std::vector<FockPolynomial<Real>> y_out, x_out;
            for (const auto& s : src.states) {
                y_out.push_back(apply_current(y, lambda, s, mid_cap_y));
                x_out.push_back(apply_current(x, lambda, s, mid_cap_x));
            }
            Memo memo_x(*this, x, mid_y, cap), memo_y(*this, y, mid_x, cap);

            std::vector<std::vector<FockPolynomial<Real>>> h_out(rhs.size());
            for (std::size_t t = 0; t < rhs.size(); ++t)
                for (const auto& s : src.states)
                    h_out[t].push_back(apply_current(rhs[t].current, lambda, s, cap));

            for (long m = -window; m <= window; ++m)
                for (long n = -window; n <= window; ++n) {
                    MatrixXc<Real> xy = MatrixXc<Real>::Zero(static_cast<Eigen::Index>(dst.states.size()),
                                                            static_cast<Eigen::Index>(src.states.size()));
                    MatrixXc<Real> yx = xy, expected = xy;
                    for (std::size_t col = 0; col < src.states.size(); ++col) {
                        const int d_in = occupation_degree(src.states[col], max_mode_);
                        accumulate(xy, col, y_out[col], d_in - static_cast<int>(n + rho_y), memo_x, m, rho_xy, dst);
                        accumulate(yx, col, x_out[col], d_in - static_cast<int>(m + rho_x), memo_y, n, rho_yx, dst);
                        const long k = m + n - 2;
                        const int d_out = d_in - static_cast<int>(k);
                        if (d_out < 0 || d_out > cap)
                            continue;
                        for (std::size_t t = 0; t < rhs.size(); ++t) {
                            const C coeff = rhs[t].weight * ipow(rhs[t].support, n) * ipow(rhs[t].argument_scale, -k);
                            for (const auto& [occ, v] : h_out[t][col])
                                if (occupation_degree(occ, max_mode_) == d_out)
                                    expected(dst.index.at(occ), static_cast<Eigen::Index>(col)) += coeff * v;
                        }
                    }
                    const MatrixXc<Real> lhs = xy - Real(sign) * yx;
                    const Real diff = (lhs - expected).cwiseAbs().maxCoeff();
                    const Real scale = std::max({xy.cwiseAbs().maxCoeff(), yx.cwiseAbs().maxCoeff(),
                                                 expected.cwiseAbs().maxCoeff()});
                    ++report.blocks;
                    report.max_entry = std::max(report.max_entry, scale);
                    if (diff > report.max_abs_residual) {
                        report.max_abs_residual = diff;
                        report.worst = "sector (" + format_vector(lambda) + ") m=" + std::to_string(m) +
                                       " n=" + std::to_string(n);
                    }
                }
        }
        report.relative_residual =
            report.max_entry > Real(0) ? report.max_abs_residual / report.max_entry : report.max_abs_residual;
        return report;
    }

    /// <lambda'| X(z) Y(w) |lambda> coefficients of (w/z)^k, k = 0..order: the vacuum
    /// component, divided by the zero-mode factors. Oracle for the contraction series.
    std::vector<C> vacuum_contraction(const CurrentSpec<Real>& x, const CurrentSpec<Real>& y, int order) const
    {
        check_cap(order);
        const auto& params = engine_.params();
        const int a = engine_.cartan()(x.node, y.node);
        std::vector<C> out(static_cast<std::size_t>(order + 1));
        // Y creation on node j up to degree `order` (with w = 1), then X annihilation
        // back to the vacuum (with z = 1): grading makes degree k the x^k coefficient.
        std::vector<C> beta(static_cast<std::size_t>(max_mode_ + 1)), alpha(static_cast<std::size_t>(max_mode_ + 1));
        for (int m = 1; m <= max_mode_; ++m) {
            for (const auto& c : y.constituents)
                beta[static_cast<std::size_t>(m)] += osc_coeff(params, c.kind, -m) * ipow(c.scale, m);
            for (const auto& c : x.constituents)
                alpha[static_cast<std::size_t>(m)] += osc_coeff(params, c.kind, m) * ipow(c.scale, -m);
        }
        FockPolynomial<Real> created;
        Occupation vac(static_cast<std::size_t>(rank_ * max_mode_), 0);
        create(vac, y.node, 1, order, C(1), beta, created);
        for (const auto& [mono, coeff] : created) {
            // Translating then setting y = 0 evaluates the polynomial at the shift.
            C v = coeff;
            for (int m = 1; m <= max_mode_; ++m) {
                const int nocc = mono[static_cast<std::size_t>(y.node * max_mode_ + m - 1)];
                if (nocc)
                    v *= ipow(alpha[static_cast<std::size_t>(m)] * brackets_.value(a, m), nocc);
            }
            out[static_cast<std::size_t>(occupation_degree(mono, max_mode_))] += v;
        }
        return out;
    }

    VectorXc<Real> momentum_eigenvalues(const Eigen::VectorXi& lambda) const
    {
        return (engine_.cartan().entries * lambda).template cast<C>();
    }

private:
    class Memo {
    public:
        Memo(const FockSpace& fs, const CurrentSpec<Real>& spec, Eigen::VectorXi lambda, int cap)
            : fs_(fs), spec_(spec), lambda_(std::move(lambda)), cap_(cap)
        {}
        const FockPolynomial<Real>& operator()(const Occupation& occ)
        {
            auto it = cache_.find(occ);
            if (it == cache_.end())
                it = cache_.emplace(occ, fs_.apply_current(spec_, lambda_, occ, cap_)).first;
            return it->second;
        }

    private:
        const FockSpace& fs_;
        const CurrentSpec<Real>& spec_;
        Eigen::VectorXi lambda_;
        int cap_;
        std::map<Occupation, FockPolynomial<Real>> cache_;
    };

    /// Column col of second[mode] * first[.]: keep the degree-`mid` part of the first-stage
    /// output `stage` and push it through the memoized second operator.
    void accumulate(MatrixXc<Real>& mat, std::size_t col, const FockPolynomial<Real>& stage, int mid, Memo& second,
                    long mode, long rho_second, const SectorBasis& dst) const
    {
        if (mid < 0)
            return;
        for (const auto& [occ, v] : stage) {
            if (occupation_degree(occ, max_mode_) != mid)
                continue;
            const int out_degree = mid - static_cast<int>(mode + rho_second);
            if (out_degree < 0 || out_degree > dst.cap)
                continue;
            for (const auto& [occ2, v2] : second(occ))
                if (occupation_degree(occ2, max_mode_) == out_degree)
                    mat(dst.index.at(occ2), static_cast<Eigen::Index>(col)) += v * v2;
        }
    }

    void translate(const Occupation& state, int node, const std::vector<C>& alpha, FockPolynomial<Real>& out) const
    {
        Occupation current(state.size(), 0);
        translate_from(state, node, alpha, 0, C(1), current, out);
    }

    void translate_from(const Occupation& state, int node, const std::vector<C>& alpha, std::size_t slot, C coeff,
                        Occupation& current, FockPolynomial<Real>& out) const
    {
        if (slot == state.size()) {
            out[current] += coeff;
            return;
        }
        const int nocc = state[slot];
        if (nocc == 0) {
            translate_from(state, node, alpha, slot + 1, coeff, current, out);
            return;
        }
        const int j = static_cast<int>(slot) / max_mode_;
        const int m = static_cast<int>(slot) % max_mode_ + 1;
        const C shift = alpha[static_cast<std::size_t>(m)] * brackets_.value(engine_.cartan()(node, j), m);
        // (y + t)^n = sum_k binom(n, k) y^k t^{n-k}
        Real binom(1);
        for (int k = nocc; k >= 0; --k) {
            const C factor = binom * ipow(shift, nocc - k);
            if (factor != C(0)) {
                current[slot] = k;
                translate_from(state, node, alpha, slot + 1, coeff * factor, current, out);
            }
            binom = binom * Real(k) / Real(nocc - k + 1);
        }
        current[slot] = 0;
    }

    /// out += coeff * occ * prod_{m' >= m} sum_k (beta_{m'} y_{node,m'})^k / k!, degree budget `budget`.
    void create(Occupation& occ, int node, int m, int budget, C coeff, const std::vector<C>& beta,
                FockPolynomial<Real>& out) const
    {
        if (m > budget || m > max_mode_) {
            out[occ] += coeff;
            return;
        }
        const std::size_t slot = static_cast<std::size_t>(node * max_mode_ + m - 1);
        const int base = occ[slot];
        C term = coeff;
        for (int k = 0; k * m <= budget; ++k) {
            if (k > 0)
                term *= beta[static_cast<std::size_t>(m)] / Real(k);
            occ[slot] = base + k;
            create(occ, node, m + 1, budget - k * m, term, beta, out);
        }
        occ[slot] = base;
    }

    void require_fock_current(const CurrentSpec<Real>& spec) const
    {
        for (const auto& c : spec.constituents)
            if (c.kind == CurrentKind::SPlus || c.kind == CurrentKind::SMinus)
                throw ContractViolation("Fock route: S+/S- carry non-integral zero modes; use the series route");
        if (spec.node < 0 || spec.node >= rank_)
            throw ContractViolation("Fock route: node out of range");
    }

    void check_cap(int cap) const
    {
        if (cap < 0 || cap > max_mode_)
            throw ContractViolation("Fock cap " + std::to_string(cap) + " exceeds the occupation layout (" +
                                    std::to_string(max_mode_) + ")");
    }

    static std::string format_vector(const Eigen::VectorXi& v)
    {
        std::string s;
        for (Eigen::Index k = 0; k < v.size(); ++k)
            s += (k ? "," : "") + std::to_string(v(k));
        return s;
    }

    const OpeEngine<Real>& engine_;
    int rank_;
    int max_mode_;
    ModeBracketTable<Real> brackets_;
};

} // namespace ellipt
