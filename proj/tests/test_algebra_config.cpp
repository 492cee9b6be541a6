#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ellipt/algebra_config.hpp"

using namespace ellipt;
using C = Complex<double>;

TEST_CASE("make_cartan: small types")
{
    const auto a1 = make_cartan(SeriesType::A, 1);
    CHECK(a1.entries.rows() == 1);
    CHECK(a1(0, 0) == 2);

    const auto a2 = make_cartan(SeriesType::A, 2);
    Eigen::Matrix2i expected;
    expected << 2, -1, -1, 2;
    CHECK(a2.entries == expected);

    // D4: the branch node (second in the usual numbering) touches the other three.
    const auto d4 = make_cartan(SeriesType::D, 4);
    CHECK(d4(1, 0) == -1);
    CHECK(d4(1, 2) == -1);
    CHECK(d4(1, 3) == -1);
    CHECK(d4(0, 2) == 0);
    CHECK(d4(2, 3) == 0);
    CHECK(d4(0, 3) == 0);
}

TEST_CASE("make_cartan: every supported type satisfies the invariants")
{
    for (int n = 1; n <= 9; ++n)
        CHECK(satisfies_cartan_invariants(make_cartan(SeriesType::A, n)));
    for (int n = 4; n <= 9; ++n)
        CHECK(satisfies_cartan_invariants(make_cartan(SeriesType::D, n)));
    for (int n = 6; n <= 8; ++n) {
        const auto e = make_cartan(SeriesType::E, n);
        CHECK(satisfies_cartan_invariants(e));
        // simply-laced tree: rank - 1 edges
        CHECK((e.entries.array() == -1).count() == 2 * (n - 1));
    }
}

TEST_CASE("determinants of the Cartan matrices")
{
    // det A_n = n + 1, det D_n = 4, det E_n = 9 - n
    for (int n = 1; n <= 7; ++n)
        CHECK(make_cartan(SeriesType::A, n).entries.cast<double>().determinant() == doctest::Approx(n + 1));
    for (int n = 4; n <= 7; ++n)
        CHECK(make_cartan(SeriesType::D, n).entries.cast<double>().determinant() == doctest::Approx(4));
    for (int n = 6; n <= 8; ++n)
        CHECK(make_cartan(SeriesType::E, n).entries.cast<double>().determinant() == doctest::Approx(9 - n));
}

TEST_CASE("parse_cartan and rejected labels")
{
    CHECK(parse_cartan("A2").label() == "A2");
    CHECK(parse_cartan("d5").label() == "D5");
    CHECK_THROWS_AS(parse_cartan("B2"), ConfigError);
    CHECK_THROWS_AS(parse_cartan("A0"), ConfigError);
    CHECK_THROWS_AS(parse_cartan("D3"), ConfigError);
    CHECK_THROWS_AS(parse_cartan("E9"), ConfigError);
    CHECK_THROWS_AS(parse_cartan("A2x"), ConfigError);
    CHECK_THROWS_AS(parse_cartan("A"), ConfigError);
}

TEST_CASE("cartan_entry_classes")
{
    CHECK(cartan_entry_classes(parse_cartan("A1")) == std::vector<int>{2});
    CHECK(cartan_entry_classes(parse_cartan("A2")) == std::vector<int>{2, -1});
    CHECK(cartan_entry_classes(parse_cartan("A3")) == std::vector<int>{2, 0, -1});
}

TEST_CASE("Rational")
{
    CHECK(Rational::parse("3/2") == Rational(3, 2));
    CHECK(Rational::parse("-4/6") == Rational(-2, 3));
    CHECK(Rational::parse("2").is_integer());
    CHECK(Rational(6, -4).to_string() == "-3/2");
    CHECK_THROWS_AS(Rational::parse("1/0"), ConfigError);
    CHECK_THROWS_AS(Rational::parse("x"), ConfigError);
}

TEST_CASE("make_params: derived beta and qtilde")
{
    // ln 0.09 = 2 ln 0.3, so beta = 1 - 2 = -1 and qtilde = p/q = 0.3.
    const auto pr = make_params<double>(C(0.09), C(0.3));
    CHECK(std::abs(pr.beta - C(-1)) < 1e-15);
    CHECK(std::abs(pr.qtilde - C(0.3)) < 1e-15);
    CHECK(std::abs(pr.sqrt_p_over_q() * pr.sqrt_p_over_q() - pr.p / pr.q) < 1e-15);

    const auto pr2 = make_params<double>(C(0.09), C(0.3), Rational(2));
    CHECK(std::abs(pr2.qtilde - C(0.027)) < 1e-15);

    // q qtilde = p^c on the nose, also for fractional c and complex parameters
    const auto pr3 = make_params<double>(C(0.05, 0.02), C(0.4, -0.1), Rational(3, 2));
    CHECK(relative_difference(pr3.q * pr3.qtilde, std::exp(1.5 * std::log(pr3.p))) < 1e-14);
}

TEST_CASE("make_params: domain errors name the violated bound")
{
    CHECK_THROWS_AS(make_params<double>(C(0.3), C(0.3)), DomainError); // p = q: qtilde = 1
    CHECK_THROWS_AS(make_params<double>(C(0.09), C(1.2)), DomainError);
    CHECK_THROWS_AS(make_params<double>(C(0), C(0.3)), DomainError);
    CHECK_THROWS_AS(make_params<double>(C(0.5), C(0.3)), DomainError); // |p/q| > 1
    try {
        make_params<double>(C(0.09), C(1.2));
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("|q| < 1") != std::string::npos);
    }
}

TEST_CASE("long double parameters agree with double")
{
    const auto d = make_params<double>(C(0.07, 0.01), C(0.33, 0.02));
    const auto l = make_params<long double>(Complex<long double>(0.07L, 0.01L), Complex<long double>(0.33L, 0.02L));
    CHECK(std::abs(C(static_cast<double>(l.beta.real()), static_cast<double>(l.beta.imag())) - d.beta) < 1e-14);
}
