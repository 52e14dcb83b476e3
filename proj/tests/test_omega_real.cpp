#include <catch2/catch_amalgamated.hpp>

#include "omega/omega_real.hpp"

using omega::BallReal;
using omega::BigInt;
using omega::ExactRational;
using omega::OmegaResult;

namespace {

const char* kOmega60 = "0.567143290409783872999968662210355549753815787186512508135131";

// oracle for the first iterate from x0 = 1: 2/(1+e) with e from the exact
// rational Taylor sum (tail in [0, 2/(N+1)!])
std::pair<ExactRational, ExactRational> first_iterate_oracle() {
    ExactRational sum(1), term(1);
    for (long n = 1; n <= 30; ++n) {
        term = term / ExactRational(n);
        sum += term;
    }
    ExactRational e_lo = sum;
    ExactRational e_hi = sum + term / ExactRational(31) * ExactRational(2);
    return {ExactRational(2) / (ExactRational(1) + e_hi), ExactRational(2) / (ExactRational(1) + e_lo)};
}

}  // namespace

TEST_CASE("one iterate from 1 matches the direct formula") {
    omega::detail::assert_root_bracket();
    long bits = 128;
    BallReal x = BallReal::one();
    BallReal ex = exp(x, bits);
    BallReal x1 = div(add(BallReal::one(), x, bits), add(BallReal::one(), ex, bits), bits);
    auto [lo, hi] = first_iterate_oracle();
    CHECK(x1.lo_rational() <= hi);
    CHECK(x1.hi_rational() >= lo);
    CHECK(decimal_string(x1, 12).text.substr(0, 12) == "0.5378828427");
}

TEST_CASE("paper digit string at 60 digits, both methods") {
    OmegaResult it = omega::omega_iterate(60);
    CHECK(it.certified_digits >= 60);
    CHECK(decimal_string(it.value, 60).text == kOmega60);

    OmegaResult nw = omega::omega_newton(60);
    CHECK(nw.certified_digits >= 60);
    CHECK(decimal_string(nw.value, 60).text == kOmega60);

    // residual is certified tiny
    CHECK(it.residual.hi_rational() <
          ExactRational(BigInt(1), omega::detail::pow10(59)));
    CHECK(nw.residual.hi_rational() <
          ExactRational(BigInt(1), omega::detail::pow10(59)));
}

TEST_CASE("seed 0 reaches the same limit") {
    OmegaResult a = omega::omega_iterate(40, ExactRational(0));
    OmegaResult b = omega::omega_iterate(40, ExactRational(1));
    // enclosures overlap
    CHECK(a.value.lo_rational() <= b.value.hi_rational());
    CHECK(b.value.lo_rational() <= a.value.hi_rational());
    CHECK(decimal_string(a.value, 40).text == decimal_string(b.value, 40).text);
}

TEST_CASE("newton certifies a 5 digit request") {
    OmegaResult r = omega::omega_newton(5);
    CHECK(decimal_string(r.value, 5).text == "0.56714");
}

TEST_CASE("cross-solver agreement over a precision ladder") {
    for (unsigned long digits : {10UL, 100UL, 1000UL}) {
        OmegaResult it = omega::omega_iterate(digits);
        OmegaResult nw = omega::omega_newton(digits);
        CHECK(it.value.lo_rational() <= nw.value.hi_rational());
        CHECK(nw.value.lo_rational() <= it.value.hi_rational());
        CHECK(it.residual.lo_rational() <= ExactRational(0));  // contains 0
        CHECK(nw.residual.lo_rational() <= ExactRational(0));
    }
}

TEST_CASE("iteration converges quadratically") {
    // run the map at fixed precision and measure residual exponents
    long bits = omega::detail::bits_for_digits(220);
    BallReal x = BallReal::one();
    std::vector<long> exponents;
    for (int step = 0; step < 12; ++step) {
        BallReal ex = exp(x, bits);
        BallReal res = sub(mul(x, ex, bits), BallReal::one(), bits).abs_ball();
        exponents.push_back(res.upper_magnitude_2exp());
        x = div(add(BallReal::one(), x, bits), add(BallReal::one(), ex, bits), bits);
    }
    // once contraction starts, the residual exponent at least 1.8x per step
    // until the precision floor
    int checked = 0;
    for (size_t k = 2; k + 1 < exponents.size(); ++k) {
        if (exponents[k] > -8) continue;               // not yet in the basin
        if (exponents[k + 1] <= -(bits - 64)) break;   // precision floor
        CHECK(static_cast<double>(-exponents[k + 1]) >=
              1.8 * static_cast<double>(-exponents[k]));
        ++checked;
    }
    CHECK(checked >= 3);
}

TEST_CASE("minus_log_check") {
    OmegaResult r = omega::omega_iterate(60);
    BallReal d = omega::minus_log_check(r.value);
    CHECK(d.lo_rational() <= ExactRational(0));  // contains 0 (abs enclosure)
    CHECK(d.hi_rational() < ExactRational(BigInt(1), omega::detail::pow10(58)));

    // wrong input is rejected by the check, not the precondition
    BallReal half = BallReal::exact(BigInt(1), -1);
    BallReal dw = omega::minus_log_check(half);
    CHECK(dw.lo_rational() > ExactRational(1, 10));  // ~0.193 away from zero

    // inflated radius propagates to the output width
    BallReal fat = r.value;
    fat.add_error_rational(ExactRational(1, 1000));
    BallReal df = omega::minus_log_check(fat);
    CHECK(df.lo_rational() <= ExactRational(0));
    CHECK(df.hi_rational() > ExactRational(1, 1000));
    CHECK(df.hi_rational() < ExactRational(1, 100));

    CHECK_THROWS_AS(omega::minus_log_check(BallReal::exact(BigInt(2))), std::domain_error);
}

TEST_CASE("abel derivative property") {
    OmegaResult r = omega::omega_iterate(60);
    auto vals = omega::abel_check(r.value, 20);
    REQUIRE(vals.size() == 21);
    CHECK(vals[0].is_exact());
    CHECK(vals[0].center_rational() == ExactRational(1));
    for (unsigned n = 1; n <= 20; ++n) CHECK(vals[n].contains(ExactRational(1)));
    // width stays tight: 10^-50 at 60-digit input for n = 20
    CHECK(vals[20].radius_rational() <
          ExactRational(BigInt(1), omega::detail::pow10(50)));
}
