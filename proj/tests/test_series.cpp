#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "omega/series.hpp"

using omega::ExactRational;
using omega::TruncSeries;

namespace {

TruncSeries make(std::vector<long> nums, std::vector<long> dens = {}) {
    std::vector<ExactRational> c;
    for (size_t i = 0; i < nums.size(); ++i)
        c.emplace_back(nums[i], dens.empty() ? 1 : dens[i]);
    return TruncSeries(std::move(c));
}

// schoolbook rational multiplication, oracle for the common-denominator path
TruncSeries mul_naive(const TruncSeries& f, const TruncSeries& g) {
    size_t n = std::min(f.order(), g.order());
    TruncSeries r(n);
    for (size_t i = 0; i <= n; ++i)
        for (size_t j = 0; i + j <= n && j <= g.order(); ++j) r[i + j] += f[i] * g[j];
    return r;
}

// term-by-term exponential: sum f^j / j!, independent of the exp recurrence
TruncSeries exp_naive(const TruncSeries& f) {
    size_t n = f.order();
    TruncSeries acc = TruncSeries::constant(ExactRational(1), n);
    TruncSeries p = TruncSeries::constant(ExactRational(1), n);
    ExactRational fact(1);
    for (size_t j = 1; j <= n; ++j) {
        p = mul_naive(p, f);
        fact *= ExactRational(static_cast<long>(j));
        acc = add(acc, scale(p, ExactRational(1) / fact));
    }
    return acc;
}

// undetermined-coefficients reverter, the spec's independent oracle
TruncSeries revert_naive(const TruncSeries& f) {
    size_t n = f.order();
    std::vector<ExactRational> g(n + 1);
    g[1] = ExactRational(1) / f[1];
    for (size_t m = 2; m <= n; ++m) {
        TruncSeries gm(std::vector<ExactRational>(g.begin(), g.begin() + static_cast<long>(m) + 1));
        ExactRational err = compose(f.truncated(m), gm)[m];
        g[m] = -err / f[1];
    }
    return TruncSeries(std::move(g));
}

std::mt19937_64 rng(20240501);

TruncSeries random_series(size_t order, bool unit_linear) {
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 7);
    TruncSeries s(order);
    for (size_t i = 0; i <= order; ++i) s[i] = ExactRational(num(rng), den(rng));
    if (unit_linear) {
        s[0] = 0;
        s[1] = 1;
    }
    return s;
}

}  // namespace

TEST_CASE("multiplication basics") {
    TruncSeries a = make({1, 1, 0});   // 1 + x at order 2
    TruncSeries b = make({1, -1, 0});  // 1 - x at order 2
    CHECK(mul(a, b) == make({1, 0, -1}));

    TruncSeries f = random_series(9, false);
    TruncSeries one = TruncSeries::constant(ExactRational(1), 9);
    CHECK(mul(f, one) == f);
}

TEST_CASE("geometric series times (1 - x) telescopes") {
    TruncSeries geo(5);
    for (size_t i = 0; i <= 5; ++i) geo[i] = 1;
    TruncSeries onemx(5);
    onemx[0] = 1;
    onemx[1] = -1;
    TruncSeries prod = mul(geo, onemx);
    CHECK(prod[0] == ExactRational(1));
    for (size_t i = 1; i <= 5; ++i) CHECK(prod[i] == ExactRational(0));
}

TEST_CASE("fast multiplication matches schoolbook on random series") {
    for (int t = 0; t < 20; ++t) {
        TruncSeries f = random_series(24, false);
        TruncSeries g = random_series(24, false);
        CHECK(mul(f, g) == mul_naive(f, g));
    }
}

TEST_CASE("exp of series") {
    CHECK(exp_series(TruncSeries(4)) == TruncSeries::constant(ExactRational(1), 4));

    TruncSeries x = TruncSeries::x(5);
    TruncSeries e = exp_series(x);
    CHECK(e == TruncSeries(std::vector<ExactRational>{
                   {1}, {1}, {1, 2}, {1, 6}, {1, 24}, {1, 120}}));

    // exp(x + x^2/2 + x^4/4) at order 4, cross-checked with the term-by-term oracle
    TruncSeries f(4);
    f[1] = 1;
    f[2] = ExactRational(1, 2);
    f[4] = ExactRational(1, 4);
    TruncSeries g = exp_series(f);
    CHECK(g == TruncSeries(std::vector<ExactRational>{{1}, {1}, {1}, {2, 3}, {2, 3}}));
    CHECK(g == exp_naive(f));

    TruncSeries bad = TruncSeries::constant(ExactRational(1), 3);
    CHECK_THROWS_AS(exp_series(bad), omega::NonzeroConstantTerm);
}

TEST_CASE("rational powers") {
    TruncSeries onemx(4);
    onemx[0] = 1;
    onemx[1] = -1;
    TruncSeries geo = pow_rational(onemx, ExactRational(-1));
    for (size_t i = 0; i <= 4; ++i) CHECK(geo[i] == ExactRational(1));

    TruncSeries onepx(6);
    onepx[0] = 1;
    onepx[1] = 1;
    TruncSeries root = pow_rational(onepx, ExactRational(1, 2));
    TruncSeries sq = mul(root, root);
    CHECK(sq[0] == ExactRational(1));
    CHECK(sq[1] == ExactRational(1));
    for (size_t i = 2; i <= 6; ++i) CHECK(sq[i] == ExactRational(0));

    // (1 - x^2)^{1/2} against the binomial theorem in y = x^2
    TruncSeries f(4);
    f[0] = 1;
    f[2] = -1;
    TruncSeries h = pow_rational(f, ExactRational(1, 2));
    CHECK(h == TruncSeries(std::vector<ExactRational>{{1}, {0}, {-1, 2}, {0}, {-1, 8}}));

    CHECK_THROWS_AS(pow_rational(TruncSeries(3), ExactRational(1, 2)), omega::ConstantTermNotOne);
}

TEST_CASE("binomial oracle for rational powers") {
    // (1+x)^alpha coefficients are binomial(alpha, k)
    std::uniform_int_distribution<long> an(-7, 7);
    std::uniform_int_distribution<long> ad(1, 5);
    for (int t = 0; t < 10; ++t) {
        ExactRational alpha(an(rng), ad(rng));
        TruncSeries f(12);
        f[0] = 1;
        f[1] = 1;
        TruncSeries g = pow_rational(f, alpha);
        ExactRational binom(1);
        for (size_t k = 0; k <= 12; ++k) {
            CHECK(g[k] == binom);
            binom = binom * (alpha - ExactRational(static_cast<long>(k))) /
                    ExactRational(static_cast<long>(k) + 1);
        }
    }
}

TEST_CASE("composition") {
    TruncSeries f = random_series(8, false);
    CHECK(compose(f, TruncSeries::x(8)) == f);

    TruncSeries e = exp_series(TruncSeries::x(3));
    TruncSeries mx(3);
    mx[1] = -1;
    CHECK(compose(e, mx) ==
          TruncSeries(std::vector<ExactRational>{{1}, {-1}, {1, 2}, {-1, 6}}));

    TruncSeries q(3);
    q[1] = 1;
    q[2] = 1;
    CHECK(compose(q, q) == TruncSeries(std::vector<ExactRational>{{0}, {1}, {2}, {2}}));

    TruncSeries bad = TruncSeries::constant(ExactRational(2), 3);
    CHECK_THROWS_AS(compose(f, bad), omega::CompositionInnerConstantNonzero);
}

TEST_CASE("series inverse") {
    TruncSeries f = random_series(10, false);
    f[0] = ExactRational(3, 2);
    TruncSeries g = inverse(f);
    TruncSeries prod = mul(f, g);
    CHECK(prod[0] == ExactRational(1));
    for (size_t i = 1; i <= 10; ++i) CHECK(prod[i] == ExactRational(0));
    CHECK_THROWS_AS(inverse(TruncSeries(4)), omega::DivisionByNonUnitSeries);
}

TEST_CASE("reversion examples") {
    CHECK(revert(TruncSeries::x(6)) == TruncSeries::x(6));

    // revert(x - x^2) gives the Catalan numbers
    TruncSeries f(4);
    f[1] = 1;
    f[2] = -1;
    CHECK(revert(f) == TruncSeries(std::vector<ExactRational>{{0}, {1}, {1}, {2}, {5}}));
    CHECK(revert(f) == revert_naive(f));

    // revert(x e^x) at order 4
    TruncSeries xex(4);
    ExactRational fact(1);
    for (size_t i = 1; i <= 4; ++i) {
        xex[i] = ExactRational(1) / fact;
        fact *= ExactRational(static_cast<long>(i));
    }
    TruncSeries w = revert(xex);
    CHECK(w == TruncSeries(std::vector<ExactRational>{{0}, {1}, {-1}, {3, 2}, {-8, 3}}));
    CHECK(w == revert_naive(xex));

    TruncSeries nolin(3);
    nolin[2] = 1;
    CHECK_THROWS_AS(revert(nolin), omega::ZeroLinearCoefficient);
}

TEST_CASE("reversion round trip on random unit-linear series") {
    for (size_t order : {8UL, 17UL, 33UL, 64UL}) {
        TruncSeries f = random_series(order, true);
        TruncSeries g = revert(f);
        TruncSeries back = compose(g, f);  // other side of the identity
        CHECK(back[1] == ExactRational(1));
        for (size_t i = 0; i <= order; ++i)
            if (i != 1) CHECK(back[i] == ExactRational(0));
        CHECK(g == revert_naive(f));
    }
}

TEST_CASE("exp and pow agree through the logarithmic derivative") {
    // exp(alpha * L) where L = -log(1 - x^n) integrates the logarithmic derivative
    for (long n : {1L, 2L, 3L}) {
        ExactRational alpha(-2, 3);
        size_t order = 12;
        TruncSeries f(order);
        f[0] = 1;
        f[static_cast<size_t>(n)] = -1;
        TruncSeries direct = pow_rational(f, alpha);
        // L = sum_{k>=1} x^{nk}/k, so alpha*(-L) ... exp(alpha * log f) with log f = -sum x^{nk}/k
        TruncSeries logf(order);
        for (size_t k = 1; n * static_cast<long>(k) <= static_cast<long>(order); ++k)
            logf[static_cast<size_t>(n) * k] = ExactRational(-1, static_cast<long>(k));
        TruncSeries viaexp = exp_series(scale(logf, alpha));
        CHECK(direct == viaexp);
    }
}
