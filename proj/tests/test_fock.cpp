#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ellipt/fock.hpp"

using namespace ellipt;
using C = Complex<double>;
using K = CurrentKind;

namespace {

const auto kDefaults = make_params<double>(C(0.09), C(0.3));

Eigen::VectorXi vec(std::initializer_list<int> v)
{
    Eigen::VectorXi out(static_cast<Eigen::Index>(v.size()));
    int k = 0;
    for (int x : v)
        out(k++) = x;
    return out;
}

} // namespace

TEST_CASE("sector sizes follow prod (1 - x^m)^{-rank}")
{
    CHECK(enumerate_sector(vec({0}), 1, 0, 4).states.size() == 1);
    CHECK(enumerate_sector(vec({0}), 1, 2, 4).states.size() == 4);
    // partial sums of 1, 2, 5, 10 and 1, 3, 9, 22, 51
    CHECK(enumerate_sector(vec({0, 0}), 2, 3, 6).states.size() == 18);
    CHECK(enumerate_sector(vec({0, 0, 0}), 3, 4, 6).states.size() == 86);

    const auto basis = enumerate_sector(vec({1, -1}), 2, 3, 6);
    int last = 0;
    for (const auto& occ : basis.states) {
        const int d = occupation_degree(occ, 6);
        CHECK(d >= last);
        last = d;
        CHECK(basis.index.at(occ) >= 0);
    }
    const auto st = describe_state(basis.states.back(), basis.momentum, 2, 6);
    CHECK(st.degree == 3);
}

TEST_CASE("vacuum contraction reproduces the oracle expansion")
{
    const OpeEngine<double> engine(parse_cartan("A2"), kDefaults);
    const FockSpace<double> fock(engine, 8);
    // coefficients of exp(sum c_m x^m), 40 digits
    const double diag[] = {1.0, 3.6333333333333333333, 12.201111111111111111, 40.69737037037037037, 135.66600123456790123,
                           452.22243411522633745, 1507.4088427174211248};
    const auto v = fock.vacuum_contraction(engine.current(K::E, 0), engine.current(K::F, 0), 6);
    for (int k = 0; k <= 6; ++k)
        CHECK(std::abs(v[static_cast<std::size_t>(k)] - C(diag[k])) < 1e-12 * std::max(1.0, diag[k]));
    const auto adj = fock.vacuum_contraction(engine.current(K::E, 0), engine.current(K::F, 1), 3);
    CHECK(std::abs(adj[1] - C(-1)) < 1e-13);
    CHECK(std::abs(adj[2]) < 1e-13);
    CHECK(std::abs(adj[3]) < 1e-13);
}

TEST_CASE("first matrix elements of E_i on the vacuum")
{
    const OpeEngine<double> engine(parse_cartan("A1"), kDefaults);
    const int max_mode = 6;
    const FockSpace<double> fock(engine, max_mode);
    const auto e = engine.current(K::E, 0);
    const auto vacuum = vec({0});
    CHECK(fock.offset(e, vacuum) == 0);
    CHECK(fock.target_sector(e, vacuum) == vec({1}));

    // E[0] |0> = |alpha>, E[-1] |0> = s[-1] a[-1] |alpha> with s[-1] = 1/(q - 1)
    const auto m0 = fock.current_mode_matrix(e, 0, vacuum, 2);
    CHECK(std::abs(m0.entries(0, 0) - C(1)) < 1e-15);
    CHECK(m0.entries.col(0).cwiseAbs().sum() == doctest::Approx(1.0));

    const auto m1 = fock.current_mode_matrix(e, -1, vacuum, 2);
    const auto target = fock.sector(m1.target, 2);
    Occupation one(static_cast<std::size_t>(max_mode), 0);
    one[0] = 1;
    CHECK(std::abs(m1.entries(target.index.at(one), 0) - C(1.0 / (0.3 - 1.0))) < 1e-14);

    CHECK_THROWS_AS(fock.current_mode_matrix(e, 9, vacuum, 2), ContractViolation);
    CHECK_THROWS_AS(fock.target_sector(engine.current(K::SPlus, 0), vacuum), ContractViolation);
}

TEST_CASE("commutator of E and F in the Fock space")
{
    const auto params = make_params<double>(C(0.05), C(0.4));
    const C p = params.p, q = params.q;
    auto rhs_for = [&](int i) {
        return std::vector<DeltaTerm<double>>{
            {C(1) / q, q / (p - C(1)), compose_h(i, +1, params), C(1) / params.sqrt_q},
            {p / q, -q / (p * (p - C(1))), compose_h(i, -1, params), params.sqrt_p_over_q()}};
    };

    SUBCASE("same node closes on H+ and H-")
    {
        const OpeEngine<double> engine(parse_cartan("A1"), params);
        const FockSpace<double> fock(engine, 10);
        const auto rep = fock.commutator_check(engine.current(K::E, 0), engine.current(K::F, 0), 2,
                                               {vec({0}), vec({1}), vec({-1})}, 2, rhs_for(0));
        CHECK(rep.blocks > 0);
        CHECK(rep.relative_residual < 1e-12);
    }
    SUBCASE("orthogonal nodes commute")
    {
        const OpeEngine<double> engine(parse_cartan("A3"), params);
        const FockSpace<double> fock(engine, 10);
        const auto rep = fock.commutator_check(engine.current(K::E, 0), engine.current(K::F, 2), 2,
                                               {vec({0, 0, 0}), vec({1, 0, 0})}, 2, {});
        CHECK(rep.max_abs_residual < 1e-13);
    }
    SUBCASE("adjacent nodes anticommute")
    {
        const OpeEngine<double> engine(parse_cartan("A2"), params);
        const FockSpace<double> fock(engine, 10);
        const auto e = engine.current(K::E, 0), f = engine.current(K::F, 1);
        const std::vector<Eigen::VectorXi> sectors{vec({0, 0}), vec({0, 1})};
        CHECK(fock.commutator_check(e, f, 2, sectors, 2, {}, -1).relative_residual < 1e-12);
        CHECK(fock.commutator_check(e, f, 2, sectors, 2, {}, +1).relative_residual > 0.5);
    }
    SUBCASE("only E, F pairs")
    {
        const OpeEngine<double> engine(parse_cartan("A1"), params);
        const FockSpace<double> fock(engine, 10);
        CHECK_THROWS_AS(fock.commutator_check(engine.current(K::E, 0), engine.current(K::E, 0), 1, {vec({0})}, 1, {}),
                        ContractViolation);
    }
}
