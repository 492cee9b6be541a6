#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ellipt/currents.hpp"

#include <random>

using namespace ellipt;
using C = Complex<double>;
using K = CurrentKind;

namespace {

const auto kComplex = make_params<double>(C(0.08, 0.01), C(0.35, -0.02));
const auto kDefaults = make_params<double>(C(0.09), C(0.3));

struct OracleValue {
    K x, y;
    int a;
    C value;
};

// 40-digit direct summation of exp(sum c_m x^m), x = 0.15 e^{0.7 i}, p = 0.08+0.01i, q = 0.35-0.02i
const OracleValue kOracle[] = {
    {K::E, K::F, 2, {1.507924546516207544, 1.2036642433321220443}},
    {K::E, K::F, -1, {0.84516319622207635044, -0.10160841096148309015}},
    {K::F, K::E, 2, {1.2400464021829838911, 0.56924583577584264098}},
    {K::F, K::E, -1, {0.917050486797364678, -0.088766045041234874824}},
    {K::E, K::E, 2, {1.7528348938185102547, 1.4579309208017105278}},
    {K::E, K::E, -1, {0.81124410315139727308, -0.10132172369829081153}},
    {K::F, K::F, 2, {1.1630176723563520852, 0.48290062047307894251}},
    {K::F, K::F, -1, {0.93642653381176193181, -0.081880419721960195325}},
    {K::SPlus, K::SMinus, 2, {1.507924546516207544, 1.2036642433321220443}},
    {K::SMinus, K::SPlus, -1, {0.917050486797364678, -0.088766045041234874824}},
};

} // namespace

TEST_CASE("contraction product: oracle values on both routes")
{
    const C x = std::polar(0.15, 0.7);
    for (const auto& o : kOracle) {
        const ContractionProduct<double> prod(kComplex, o.x, o.y, o.a);
        CHECK(relative_difference(prod(x), o.value) < 1e-13);
        const auto series = prod.series(120);
        CHECK(relative_difference(series(x), o.value) < 1e-12);
    }
}

TEST_CASE("contraction product: continuation beyond the series radius")
{
    // E_i F_i: 1/((1 - x q)(1 - x q/p)) exactly, with poles at 1/q and p/q
    const ContractionProduct<double> prod(kComplex, K::E, K::F, 2);
    CHECK(std::abs(prod.radius() - std::abs(kComplex.p / kComplex.q)) < 1e-14);
    for (double r : {0.1, 0.5, 2.0, 7.0}) {
        const C x = std::polar(r, 0.4);
        const C expected = C(1) / ((C(1) - x * kComplex.q) * (C(1) - x * kComplex.q / kComplex.p));
        CHECK(relative_difference(prod(x), expected) < 1e-13);
    }
    const ContractionProduct<double> trivial(kComplex, K::E, K::F, 0);
    CHECK(trivial.trivial());
    CHECK(trivial(C(3, 1)) == C(1));
}

TEST_CASE("closed forms at |w/z| = 0.5 for every class")
{
    const auto cartan = parse_cartan("A3"); // has A_ij = 2, -1 and 0
    const OpeEngine<double> engine(cartan, kComplex);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> t(-2.8, 2.8);
    const std::pair<K, K> pairs[] = {{K::SPlus, K::SMinus}, {K::SMinus, K::SPlus}, {K::E, K::F}, {K::F, K::E}};
    const std::pair<int, int> nodes[] = {{0, 0}, {0, 1}, {0, 2}};
    for (auto [kx, ky] : pairs)
        for (auto [i, j] : nodes) {
            const int a = cartan(i, j);
            const auto form = closed_form(kx, ky, a, kComplex);
            REQUIRE(form.has_value());
            const auto x = engine.current(kx, i), y = engine.current(ky, j);
            for (int s = 0; s < 8; ++s) {
                const double tt = t(rng);
                const C z = std::polar(1.1, -tt / 2), w = std::polar(0.55, tt / 2);
                CHECK(relative_difference(engine.pair_value(x, z, y, w), (*form)(z, w)) < 1e-12);
            }
        }
}

TEST_CASE("composite currents: pair value is the product over constituents")
{
    const auto cartan = parse_cartan("A2");
    const OpeEngine<double> engine(cartan, kComplex);
    const C z(0.9, 0.3), w(0.2, -0.35);
    for (K hx : {K::HPlus, K::HMinus})
        for (K hy : {K::HPlus, K::HMinus, K::E, K::F})
            for (int j = 0; j < 2; ++j) {
                const auto x = engine.current(hx, 0), y = engine.current(hy, j);
                C expected(1);
                for (const auto& cx : x.constituents)
                    for (const auto& cy : y.constituents)
                        expected *= engine.pair_value(engine.current(cx.kind, 0), z * cx.scale, engine.current(cy.kind, j),
                                                      w * cy.scale);
                CHECK(relative_difference(engine.pair_value(x, z, y, w), expected) < 1e-12);
            }
}

TEST_CASE("H currents carry no charge")
{
    const auto cartan = parse_cartan("A2");
    for (K kind : {K::HPlus, K::HMinus}) {
        const auto word = current_word(make_current(kind, 1, kDefaults), 0, kDefaults, cartan);
        CHECK(word.charge.isZero(1e-15));
    }
}

TEST_CASE("orthogonal nodes commute and exchange trivially")
{
    const auto cartan = parse_cartan("A3");
    const OpeEngine<double> engine(cartan, kDefaults);
    const C z(1.2, 0.1), w(0.3, 0.5);
    for (K kx : {K::E, K::F, K::HPlus, K::HMinus})
        for (K ky : {K::E, K::F, K::HPlus, K::HMinus}) {
            const auto x = engine.current(kx, 0), y = engine.current(ky, 2);
            CHECK(std::abs(engine.exchange_ratio(x, z, y, w) - C(1)) < 1e-14);
        }
    // E_i F_j = :E_i F_j: for A_ij = 0
    const auto ope = engine.contract(engine.current(K::E, 0), engine.current(K::F, 2), 20);
    CHECK(ope.monomial.monomials.empty());
    CHECK(std::abs(ope.prefactor(C(0.3)) - C(1)) < 1e-15);
}

TEST_CASE("contract rejects composite currents")
{
    const OpeEngine<double> engine(parse_cartan("A1"), kDefaults);
    CHECK_THROWS_AS(engine.contract(engine.current(K::HPlus, 0), engine.current(K::E, 0)), ContractViolation);
    CHECK_THROWS_AS(ContractionProduct<double>(kDefaults, K::HPlus, K::E, 2), ContractViolation);
}
