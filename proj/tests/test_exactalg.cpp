#include <catch_amalgamated.hpp>

#include <random>

#include <hodge/exactalg/filtration.hpp>
#include <hodge/exactalg/series.hpp>

using namespace hodge;

namespace {

scalar gauss(long re, long im, int exp = 0) { return scalar(rational(re), rational(im), exp); }

matrix random_matrix(std::mt19937_64 &rng, std::size_t r, std::size_t c, int range = 3) {
    std::uniform_int_distribution<int> d(-range, range);
    matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) m(i, j) = gauss(d(rng), d(rng));
    }
    return m;
}

} // namespace

TEST_CASE("scalar ring arithmetic and conjugation", "[exactalg]") {
    scalar a = gauss(1, 2) + gauss(0, 1, 1);
    scalar b = gauss(3, -1, -1);
    CHECK(a * b == b * a);
    CHECK((a + b) - b == a);
    CHECK(scalar::tp().conj() == -scalar::tp());
    CHECK(scalar::i().conj() == -scalar::i());
    CHECK((a * b).conj() == a.conj() * b.conj());
    CHECK(real_part(a) + imag_part(a) == a);
    CHECK(real_part(a).is_real());
    CHECK(imag_part(a).conj() == -imag_part(a));
    CHECK(b * b.inverse() == scalar(1));
    CHECK_THROWS_AS(a.inverse(), non_unit_pivot);
    CHECK(gauss(1, -2, 3).to_string() == "1-2i*tp^3");
    CHECK((scalar(1) + scalar::tp(-2) * scalar::frac(-3, 4)).to_string() == "-3/4*tp^-2+1");
}

TEST_CASE("kernel, solve and inverse agree on random systems", "[exactalg]") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        matrix a = random_matrix(rng, 4, 6);
        matrix k = kernel(a);
        CHECK(k.cols() == 6 - rank(a));
        CHECK((a * k).is_zero());
        matrix x = random_matrix(rng, 6, 1);
        auto sol = solve(a, a * x);
        REQUIRE(sol);
        CHECK(a * *sol == a * x);
        matrix s = random_matrix(rng, 4, 4);
        if (auto inv = try_inverse(s)) {
            CHECK(s * *inv == matrix::identity(4));
        }
    }
    matrix z(2, 2);
    z(0, 0) = scalar(1);
    matrix b(2, 1);
    b(1, 0) = scalar(1);
    CHECK_FALSE(solve(z, b).has_value());
}

TEST_CASE("subspace operations are canonical", "[exactalg]") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        matrix a = random_matrix(rng, 5, 2);
        matrix b = random_matrix(rng, 5, 3);
        subspace sa(5, a), sb(5, b);
        subspace sum = sa + sb;
        subspace cap = sa.intersect(sb);
        CHECK(sum.dim() + cap.dim() == sa.dim() + sb.dim());
        CHECK(sum.contains(sa));
        CHECK(sa.contains(cap));
        CHECK(sb.contains(cap));
        // Same span, different generators: identical canonical basis.
        matrix mix = random_matrix(rng, 2, 2);
        if (rank(mix) == 2) CHECK(subspace(5, a * mix) == sa);
        CHECK(sa.conj().conj() == sa);
        matrix m = random_matrix(rng, 5, 5);
        CHECK(sb.contains(sb.preimage(m).image(m)));
    }
    subspace line(2, matrix::column({scalar(1), scalar::i()}));
    CHECK_FALSE(line.is_conj_stable());
    CHECK((line + line.conj()).is_full());
}

TEST_CASE("filtrations are normalized and shift correctly", "[exactalg]") {
    subspace l(3, matrix::column({scalar(1), scalar(0), scalar(0)}));
    increasing_filtration w(3, {{0, l}, {1, l}, {2, subspace::full(3)}});
    CHECK(w.levels().size() == 2);
    CHECK(w.at(-1).is_zero());
    CHECK(w.at(1) == l);
    CHECK(w.at(5).is_full());
    auto sh = w.shift(-3);
    CHECK(sh.at(3) == l);
    CHECK(sh.at(5).is_full());
    decreasing_filtration f(3, {{0, subspace::full(3)}, {2, l}});
    CHECK(f.at(1) == l);
    CHECK(f.at(3).is_zero());
    CHECK(f.at(-4).is_full());
    CHECK_THROWS_AS(increasing_filtration(3, {{0, subspace::full(3)}, {1, l}}), validation_error);
}

TEST_CASE("series calculus in logarithmic coordinates", "[exactalg]") {
    series_scalar f = make_series_scalar(2, 4);
    f.set({1, 0}, scalar(3));
    f.set({1, 2}, scalar::frac(1, 2));
    // d/du_j q^b = tp b_j q^b.
    CHECK(f.derivative(1, derivation::log).coeff({1, 2}) == scalar::tp());
    CHECK(f.derivative(0, derivation::log).coeff({1, 0}) == scalar::tp() * scalar(3));
    auto df = differential(f, derivation::log);
    CHECK_FALSE(closedness_defect(df, derivation::log).has_value());
    CHECK(integrate(df, derivation::log, true) == f);
    auto bad = df;
    bad.comp[0].set({0, 1}, scalar(1));
    CHECK_THROWS_WITH(integrate(bad, derivation::log, true), Catch::Matchers::StartsWith("NotClosed"));
    auto cst = df;
    cst.comp[1][0] = scalar(1);
    CHECK_THROWS_WITH(integrate(cst, derivation::log, true), Catch::Matchers::StartsWith("ConstantObstruction"));
    CHECK(integrate(cst, derivation::log, false) == f);
}

TEST_CASE("series calculus in plain coordinates", "[exactalg]") {
    series_scalar f = make_series_scalar(2, 3);
    f.set({2, 1}, scalar(5));
    f.set({0, 1}, scalar(2));
    CHECK(f.derivative(0, derivation::plain).coeff({1, 1}) == scalar(10));
    CHECK(integrate(differential(f, derivation::plain), derivation::plain, true) == f);
}

TEST_CASE("exp and log of nilpotent matrix series are inverse", "[exactalg]") {
    series_endo x = make_series_endo(1, 5, 3);
    matrix n(3, 3);
    n(1, 0) = scalar(1);
    n(2, 1) = scalar(2);
    x[0] = n;
    x.set({2}, n * scalar::tp(-1));
    series_endo e = exp_nilpotent(x);
    CHECK(log_unipotent(e) == x);
    CHECK(e * inverse(e) == identity_series(1, 5, 3));
    CHECK(exp_nilpotent(-x) == inverse(e));
}

TEST_CASE("coordinate reversion inverts a change of variables", "[exactalg]") {
    std::vector<series_scalar> f(2, make_series_scalar(2, 4));
    f[0].set({1, 0}, scalar(2));
    f[0].set({0, 1}, scalar(1));
    f[0].set({2, 0}, scalar(3));
    f[1].set({0, 1}, scalar(1));
    f[1].set({1, 1}, scalar::frac(-1, 2));
    auto g = reversion(f);
    for (std::size_t j = 0; j < 2; ++j) {
        series_scalar back = compose(f[j], g);
        series_scalar expect = make_series_scalar(2, 4);
        exponent e(2, 0);
        e[j] = 1;
        expect.set(e, scalar(1));
        CHECK(back == expect);
    }
    std::vector<series_scalar> sing(1, make_series_scalar(1, 3));
    sing[0].set({2}, scalar(1));
    CHECK_THROWS_WITH(reversion(sing), Catch::Matchers::StartsWith("SingularJacobian"));
    sing[0][0] = scalar(1);
    CHECK_THROWS_WITH(reversion(sing), Catch::Matchers::StartsWith("NotVanishing"));
}
