#pragma once

#include <climits>
#include <stdexcept>
#include <vector>

#include "omega/ball.hpp"

namespace omega {

struct NoConvergence : std::runtime_error {
    NoConvergence()
        : std::runtime_error("omega solver: residual stopped shrinking before certification "
                             "(precision-management bug)") {}
};

/// Certified computation of the Omega constant.
struct OmegaResult {
    BallReal value;          // enclosure of the root of x e^x = 1
    unsigned long iterations = 0;
    BallReal residual;       // enclosure of |x e^x - 1| at the returned value's center
    long certified_digits = 0;
};

namespace detail {

inline long bits_for_digits(unsigned long digits) {
    return static_cast<long>(static_cast<double>(digits) * 3.321928094887363) + 8;
}

inline unsigned long guard_digits(unsigned long prec) {
    unsigned long g = 10;
    unsigned long prec_rounded = 1;
    while (prec_rounded < prec) {
        prec_rounded *= 2;
        ++g;
    }
    return g;
}

// decimal digit count guaranteed by an upper bound 2^z: largest d with 2^z <= 10^{1-d}
inline long digits_from_2exp(long z) {
    return static_cast<long>(std::floor(1.0 - static_cast<double>(z) / 3.3219280948873624));
}

// Certification bracket: x e^x - 1 changes sign over [1/2, 5/8] (checked in
// ball arithmetic once), and f' = e^t(1+t) >= e^{1/2} * 3/2 >= 2 there, so
// |t - root| <= |t e^t - 1| / 2 for any t in the bracket.
inline void assert_root_bracket() {
    static const bool ok = [] {
        BallReal half = BallReal::exact(BigInt(1), -1);
        BallReal five8 = BallReal::exact(BigInt(5), -3);
        BallReal fu = mul(half, exp(half, 96), 96);
        BallReal fr = mul(five8, exp(five8, 96), 96);
        return fu.hi_rational() < ExactRational(1) && fr.lo_rational() > ExactRational(1);
    }();
    if (!ok) throw std::logic_error("omega: root bracket [1/2, 5/8] failed its sign check");
}

inline bool in_bracket(const BallReal& x) {
    static const ExactRational lo(1, 2), hi(5, 8);
    return x.inside(lo, hi);
}

// Root enclosure from an in-bracket iterate: center +- residual/2.
inline BallReal root_enclosure(const BallReal& x, const BallReal& residual, Prec bits) {
    BallReal value = BallReal::exact(x.mantissa(), x.exponent());
    value.add_error_2exp(residual.upper_magnitude_2exp() - 1);
    return value.rounded(bits);
}

template <typename StepFn>
OmegaResult solve_omega(unsigned long digits, BallReal x, StepFn step) {
    if (digits < 1) throw std::invalid_argument("omega solver: need digits >= 1");
    assert_root_bracket();
    Prec bits = bits_for_digits(digits + guard_digits(digits));
    long best_rz = LONG_MAX;
    unsigned stale = 0;
    for (unsigned long iter = 0; iter < 100000; ++iter) {
        BallReal ex = exp(x, bits);
        BallReal residual = sub(mul(x, ex, bits), BallReal::one(), bits).abs_ball();
        long rz = residual.upper_magnitude_2exp();
        if (in_bracket(x) && digits_from_2exp(rz) >= static_cast<long>(digits)) {
            BallReal enclosure = root_enclosure(x, residual, bits);
            auto dec = decimal_string(enclosure, static_cast<long>(digits) + 4);
            // reported residual is evaluated over the whole enclosure, so it
            // contains 0 (the root is inside) and stays certified-tiny
            BallReal final_res =
                sub(mul(enclosure, exp(enclosure, bits), bits), BallReal::one(), bits).abs_ball();
            long certified = std::min(dec.certified,
                                      digits_from_2exp(final_res.upper_magnitude_2exp()));
            if (certified >= static_cast<long>(digits))
                return {enclosure, iter, final_res, certified};
        }
        if (rz < best_rz) {
            best_rz = rz;
            stale = 0;
        } else if (++stale >= 16) {
            throw NoConvergence();
        }
        x = step(x, ex, bits);
    }
    throw NoConvergence();
}

}  // namespace detail

/// The iteration x <- (1 + x)/(1 + e^x) from the given seed, run in ball
/// arithmetic at prec + guard digits until the enclosure of |x e^x - 1|
/// certifies prec digits. Guard digit policy: 10 + ceil(log2 prec).
inline OmegaResult omega_iterate(unsigned long digits, const ExactRational& x0 = ExactRational(1)) {
    Prec bits = detail::bits_for_digits(digits + detail::guard_digits(digits));
    return detail::solve_omega(digits, BallReal::from_rational(x0, bits),
                               [](const BallReal& x, const BallReal& ex, Prec b) {
                                   return div(add(BallReal::one(), x, b),
                                              add(BallReal::one(), ex, b), b);
                               });
}

/// Newton's method x <- x - (x e^x - 1)/(e^x (1 + x)) from x0 = 1/2, with the
/// same certification contract as omega_iterate.
inline OmegaResult omega_newton(unsigned long digits) {
    return detail::solve_omega(digits, BallReal::exact(BigInt(1), -1),
                               [](const BallReal& x, const BallReal& ex, Prec b) {
                                   BallReal num = sub(mul(x, ex, b), BallReal::one(), b);
                                   BallReal den = mul(ex, add(BallReal::one(), x, b), b);
                                   return sub(x, div(num, den, b), b);
                               });
}

namespace detail {

// working precision that resolves the input's own radius (96-bit floor;
// exact inputs get the floor plus any requested extra)
inline Prec prec_for_ball(const BallReal& b, long extra = 0) {
    long from_radius = b.is_exact() ? 0 : -b.radius_2exp();
    return std::max<Prec>(96, from_radius + 32 + extra);
}

}  // namespace detail

/// Enclosure of |-ln(omega) - omega|; contains 0 when the input encloses the
/// true root, with width a few ulp of the input.
inline BallReal minus_log_check(const BallReal& omega_ball) {
    if (!omega_ball.is_positive() || omega_ball.hi_rational() >= ExactRational(1))
        throw std::domain_error("minus_log_check: input must lie inside (0, 1)");
    Prec bits = detail::prec_for_ball(omega_ball);
    BallReal l = log(omega_ball, bits);
    return add(l.negated(), omega_ball.negated(), bits).abs_ball();
}

/// Enclosures of omega^n e^{n*omega} = (omega e^omega)^n for n = 0..n_max;
/// each must contain 1 when fed a true enclosure.
inline std::vector<BallReal> abel_check(const BallReal& omega_ball, unsigned n_max) {
    Prec bits = detail::prec_for_ball(omega_ball, 2 * static_cast<long>(n_max));
    BallReal base = mul(omega_ball, exp(omega_ball, bits), bits);
    std::vector<BallReal> out;
    out.reserve(n_max + 1);
    out.push_back(BallReal::one());
    BallReal cur = BallReal::one();
    for (unsigned n = 1; n <= n_max; ++n) {
        cur = mul(cur, base, bits);
        out.push_back(cur);
    }
    return out;
}

}  // namespace omega
