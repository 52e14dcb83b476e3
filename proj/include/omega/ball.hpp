#pragma once

#include <algorithm>
#include <climits>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "omega/exact.hpp"

namespace omega {

using Prec = long;  // working precision in bits

struct DivisorStraddlesZero : std::domain_error {
    DivisorStraddlesZero() : std::domain_error("ball division: divisor ball contains zero") {}
};
struct NonPositiveArgument : std::domain_error {
    NonPositiveArgument() : std::domain_error("ball log: argument ball touches (-inf, 0]") {}
};

namespace detail {

inline long bit_length(const BigInt& z) {
    return z == 0 ? 0 : static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

inline BigInt shl(const BigInt& z, long s) {
    BigInt r;
    mpz_mul_2exp(r.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
    return r;
}

inline BigInt shr_floor(const BigInt& z, long s) {
    BigInt r;
    mpz_fdiv_q_2exp(r.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
    return r;
}

inline BigInt shr_ceil(const BigInt& z, long s) {
    BigInt r;
    mpz_cdiv_q_2exp(r.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
    return r;
}

// round-to-nearest, |z - result*2^s| <= 2^{s-1}
inline BigInt shr_round(const BigInt& z, long s) {
    BigInt t = z + shl(BigInt(1), s - 1);
    return shr_floor(t, s);
}

}  // namespace detail

/// Fixed-point real with a rigorous error radius: the represented quantity lies in
/// [(mantissa - radius) * 2^exponent, (mantissa + radius) * 2^exponent].
/// radius == 0 marks an exact dyadic value. Values are immutable after construction;
/// every operation is a pure function taking an explicit bit precision.
class BallReal {
  public:
    BallReal() : man_(0), exp_(0), rad_(0) {}

    static BallReal exact(BigInt mantissa, long exponent = 0) {
        BallReal b;
        b.man_ = std::move(mantissa);
        b.exp_ = exponent;
        if (b.man_ == 0) b.exp_ = 0;
        return b;
    }
    static BallReal zero() { return BallReal(); }
    static BallReal one() { return exact(BigInt(1), 0); }

    static BallReal from_parts(BigInt mantissa, long exponent, BigInt radius) {
        if (radius < 0) throw std::invalid_argument("BallReal: negative radius");
        BallReal b;
        b.man_ = std::move(mantissa);
        b.exp_ = exponent;
        b.rad_ = std::move(radius);
        return b;
    }

    /// Ball containing the rational q, radius <= 1 ulp at `prec` bits (0 if exact).
    static BallReal from_rational(const ExactRational& q, Prec prec) {
        if (q.is_zero()) return zero();
        BigInt num = q.num(), den = q.den();
        long t = prec - (detail::bit_length(num) - detail::bit_length(den)) + 4;
        if (t < 0) t = 0;
        BigInt scaled = detail::shl(num, t);
        BigInt quo, rem;
        mpz_fdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
        BallReal b = from_parts(std::move(quo), -t, BigInt(rem != 0 ? 1 : 0));
        b.normalize(prec);
        return b;
    }

    /// Hull of a rational interval [lo, hi].
    static BallReal from_interval(const ExactRational& lo, const ExactRational& hi, Prec prec) {
        if (hi < lo) throw std::invalid_argument("from_interval: hi < lo");
        ExactRational mid = (lo + hi) / 2;
        BallReal b = from_rational(mid, prec);
        b.add_error_rational((hi - lo) / 2);
        b.normalize(prec);
        return b;
    }

    const BigInt& mantissa() const { return man_; }
    long exponent() const { return exp_; }
    const BigInt& radius() const { return rad_; }
    bool is_exact() const { return rad_ == 0; }
    bool is_exact_zero() const { return rad_ == 0 && man_ == 0; }

    ExactRational center_rational() const { return dyadic(man_, exp_); }
    ExactRational lo_rational() const { return dyadic(man_ - rad_, exp_); }
    ExactRational hi_rational() const { return dyadic(man_ + rad_, exp_); }
    ExactRational radius_rational() const { return dyadic(rad_, exp_); }

    bool contains_zero() const { return ::abs(man_) <= rad_; }
    bool is_positive() const { return man_ > rad_; }   // certified lo > 0
    bool is_negative() const { return man_ < -rad_; }  // certified hi < 0
    bool contains(const ExactRational& q) const { return lo_rational() <= q && q <= hi_rational(); }
    /// Whole ball inside [lo, hi]?
    bool inside(const ExactRational& lo, const ExactRational& hi) const {
        return lo <= lo_rational() && hi_rational() <= hi;
    }

    /// z with |value| + radius <= 2^z (magnitude bound of the entire ball).
    long upper_magnitude_2exp() const {
        BigInt m = ::abs(man_) + rad_;
        if (m == 0) return LONG_MIN / 4;
        return detail::bit_length(m) + exp_;
    }
    /// z with radius*2^exp <= 2^z.
    long radius_2exp() const {
        if (rad_ == 0) return LONG_MIN / 4;
        return detail::bit_length(rad_) + exp_;
    }

    void add_error_2exp(long e2) {
        if (e2 >= exp_) {
            rad_ += detail::shl(BigInt(1), e2 - exp_);
            return;
        }
        // rebase so the error registers at its own scale instead of a full ulp
        long s = std::min(exp_ - e2, static_cast<long>(1) << 20);
        man_ = detail::shl(man_, s);
        rad_ = detail::shl(rad_, s) + 1;
        exp_ -= s;
    }
    void add_error_rational(const ExactRational& r) {
        if (r.sign() < 0) throw std::invalid_argument("add_error_rational: negative");
        if (r.is_zero()) return;
        long e2 = detail::bit_length(r.num()) - detail::bit_length(r.den()) + 1;  // r <= 2^e2
        if (e2 < exp_) {
            // rebase so the error registers at its own scale, not a full ulp
            long s = std::min(exp_ - e2, static_cast<long>(1) << 20);
            man_ = detail::shl(man_, s);
            rad_ = detail::shl(rad_, s);
            exp_ -= s;
        }
        // ceil(r / 2^exp)
        BigInt num = r.num(), den = r.den();
        if (exp_ >= 0)
            den = detail::shl(den, exp_);
        else
            num = detail::shl(num, -exp_);
        BigInt q;
        mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        rad_ += q;
    }

    BallReal rounded(Prec prec) const {
        BallReal b = *this;
        b.normalize(prec);
        return b;
    }

    BallReal negated() const { return from_parts(-man_, exp_, rad_); }

    /// Interval absolute value as a ball.
    BallReal abs_ball() const {
        if (!contains_zero()) return from_parts(::abs(man_), exp_, rad_);
        // [0, |m|+r] -> center (|m|+r)/2 at one lower bit
        BigInt h = ::abs(man_) + rad_;
        return from_parts(h, exp_ - 1, h);
    }

    /// Keep the mantissa within prec (+slack) bits and the radius small; all
    /// rounding goes into the radius (at most 1 ulp for the center shift).
    void normalize(Prec prec) {
        if (man_ == 0 && rad_ == 0) {
            exp_ = 0;
            return;
        }
        long mb = detail::bit_length(man_);
        long rb = detail::bit_length(rad_);
        long s = std::max(mb - (prec + 2), rb - kRadiusBits);
        if (s <= 0) return;
        man_ = detail::shr_round(man_, s);
        rad_ = detail::shr_ceil(rad_, s) + 1;
        exp_ += s;
    }

    double to_double() const {
        long e2;
        double d = mpz_get_d_2exp(&e2, man_.get_mpz_t());
        return std::ldexp(d, static_cast<int>(std::min<long>(e2 + exp_, 40000)));
    }

  private:
    static ExactRational dyadic(const BigInt& m, long e) {
        if (e >= 0) return ExactRational(detail::shl(m, e), BigInt(1));
        return ExactRational(m, detail::shl(BigInt(1), -e));
    }

    static constexpr long kRadiusBits = 32;

    BigInt man_;
    long exp_;
    BigInt rad_;
};

/// result contains x+y for all x in a, y in b; rounding adds <= 1 ulp to the radius.
inline BallReal add(const BallReal& a, const BallReal& b, Prec prec) {
    const BallReal* hi = &a;
    const BallReal* lo = &b;
    if (hi->exponent() < lo->exponent()) std::swap(hi, lo);
    long d = hi->exponent() - lo->exponent();
    long cap = prec + 96;
    BallReal r;
    if (d > cap && d > detail::bit_length(lo->mantissa()) + detail::bit_length(lo->radius()) + cap) {
        // |lo ball| * 2^{-d} fits in one ulp of hi's scale: absorb into the radius
        BigInt extra = detail::shr_floor(::abs(lo->mantissa()) + lo->radius(), d) + 1;
        r = BallReal::from_parts(hi->mantissa(), hi->exponent(), hi->radius() + extra);
    } else {
        r = BallReal::from_parts(detail::shl(hi->mantissa(), d) + lo->mantissa(),
                                 lo->exponent(),
                                 detail::shl(hi->radius(), d) + lo->radius());
    }
    r.normalize(prec);
    return r;
}

inline BallReal sub(const BallReal& a, const BallReal& b, Prec prec) {
    return add(a, b.negated(), prec);
}

inline BallReal mul(const BallReal& a, const BallReal& b, Prec prec) {
    BigInt m = a.mantissa() * b.mantissa();
    BigInt rad = ::abs(a.mantissa()) * b.radius() + ::abs(b.mantissa()) * a.radius() +
                 a.radius() * b.radius();
    BallReal r = BallReal::from_parts(std::move(m), a.exponent() + b.exponent(), std::move(rad));
    r.normalize(prec);
    return r;
}

inline BallReal mul_2exp(const BallReal& a, long e) {
    return BallReal::from_parts(a.mantissa(), a.exponent() + e, a.radius());
}

inline BallReal div_small(const BallReal& a, unsigned long n, Prec prec) {
    if (n == 0) throw DivisorStraddlesZero();
    long s = prec + 4;
    BigInt q;
    BigInt scaled = detail::shl(a.mantissa(), s);
    mpz_fdiv_q_ui(q.get_mpz_t(), scaled.get_mpz_t(), n);  // error <= 1 in 2^{e-s} ulp
    BigInt rq;
    BigInt rscaled = detail::shl(a.radius(), s);
    mpz_cdiv_q_ui(rq.get_mpz_t(), rscaled.get_mpz_t(), n);
    BallReal r = BallReal::from_parts(std::move(q), a.exponent() - s, rq + 1);
    r.normalize(prec);
    return r;
}

/// Ball containing 1/b; b must exclude zero.
inline BallReal inv(const BallReal& b, Prec prec) {
    if (::abs(b.mantissa()) <= b.radius()) throw DivisorStraddlesZero();
    int sign = sgn(b.mantissa());
    BigInt m = ::abs(b.mantissa());
    BigInt blo = m - b.radius();
    BigInt bhi = m + b.radius();
    long s = detail::bit_length(bhi) + prec + 4;
    BigInt one_s = detail::shl(BigInt(1), s);
    BigInt lo_q, hi_q;
    mpz_fdiv_q(lo_q.get_mpz_t(), one_s.get_mpz_t(), bhi.get_mpz_t());
    mpz_cdiv_q(hi_q.get_mpz_t(), one_s.get_mpz_t(), blo.get_mpz_t());
    BigInt center = (lo_q + hi_q) / 2;
    BigInt rad = hi_q - center;  // >= center - lo_q
    if (sign < 0) center = -center;
    BallReal r = BallReal::from_parts(std::move(center), -s - b.exponent(), std::move(rad));
    r.normalize(prec);
    return r;
}

inline BallReal div(const BallReal& a, const BallReal& b, Prec prec) {
    return mul(a, inv(b, prec + 8), prec);
}

namespace detail {

/// Rigorous enclosure of exp(m * 2^e) for a dyadic point: argument reduction by
/// 2^k until |y| < 2^-kappa, Taylor sum with an explicit geometric tail bound,
/// then k squarings. Rounding is absorbed into the radius throughout.
inline BallReal exp_point(const BigInt& m, long e, Prec prec) {
    if (m == 0) return BallReal::one();
    long mag = bit_length(m) + e;  // |x| < 2^mag
    long kappa = std::clamp(static_cast<long>(std::lround(std::sqrt(static_cast<double>(prec)))),
                            4L, 512L);
    long k = std::max(0L, mag + kappa);
    Prec workp = prec + k + 16;
    BallReal y = BallReal::exact(m, e - k);
    long ymag = y.upper_magnitude_2exp();  // <= -kappa <= -4
    BallReal term = BallReal::one();
    BallReal sum = BallReal::one();
    for (unsigned long n = 1;; ++n) {
        term = mul(term, y, workp);
        term = div_small(term, n, workp);
        sum = add(sum, term, workp);
        // tail: sum_{j>n} |y|^j/j! <= |t_n| * |y| * 2   (|y| <= 1/16)
        long tmag = term.upper_magnitude_2exp() + ymag + 1;
        if (tmag <= -(workp + 2)) {
            sum.add_error_2exp(tmag);
            break;
        }
        if (n > 1000000) throw std::logic_error("exp_point: Taylor loop failed to terminate");
    }
    for (long i = 0; i < k; ++i) sum = mul(sum, sum, workp);
    return sum.rounded(prec);
}

}  // namespace detail

/// Enclosure of e^x for all x in a.
inline BallReal exp(const BallReal& a, Prec prec) {
    if (a.is_exact_zero()) return BallReal::one();
    Prec workp = prec + 16;
    BallReal e_center = detail::exp_point(a.mantissa(), a.exponent(), workp);
    if (a.is_exact()) return e_center.rounded(prec);
    ExactRational t = a.radius_rational();
    if (t <= ExactRational(1)) {
        // e^{x+d} = e^x * e^d with e^d in [1-t, 1+t+t^2] for |d| <= t <= 1
        BallReal factor = BallReal::one();
        factor.add_error_rational(t + t * t);
        return mul(e_center, factor, workp).rounded(prec);
    }
    // very wide input: hull of the endpoint values (exp is monotone)
    BallReal elo = detail::exp_point(a.mantissa() - a.radius(), a.exponent(), workp);
    BallReal ehi = detail::exp_point(a.mantissa() + a.radius(), a.exponent(), workp);
    return BallReal::from_interval(elo.lo_rational(), ehi.hi_rational(), prec);
}

namespace detail {

struct Dyadic {
    BigInt m;
    long e;
};

inline Dyadic dyadic_round(const Dyadic& d, Prec prec) {
    long mb = bit_length(d.m);
    long s = mb - prec;
    if (s <= 0) return d;
    return {shr_round(d.m, s), d.e + s};
}

inline Dyadic dyadic_add(const Dyadic& a, const Dyadic& b) {
    if (a.m == 0) return b;
    if (b.m == 0) return a;
    long e = std::min(a.e, b.e);
    return {shl(a.m, a.e - e) + shl(b.m, b.e - e), e};
}

inline Dyadic dyadic_from_double(double v) {
    int e2 = 0;
    double fr = std::frexp(v, &e2);
    auto m = static_cast<long>(std::ldexp(fr, 53));  // 54 bits, fits a 64-bit long
    return {BigInt(m), static_cast<long>(e2) - 53};
}

}  // namespace detail

/// Enclosure of ln(x) for all x in a; a must be entirely positive.
/// Point value by Newton on exp with a precision ladder, then one rigorous
/// correction: ln(c) = y + u + O(u^2) with u = c*e^{-y} - 1 evaluated in ball
/// arithmetic. The input radius propagates through the derivative bound 1/(c-r).
inline BallReal log(const BallReal& a, Prec prec) {
    if (!a.is_positive()) throw NonPositiveArgument();
    Prec workp = prec + 32;
    const BigInt& m = a.mantissa();
    long e = a.exponent();
    BallReal center = BallReal::exact(m, e);

    long e2;
    double d = mpz_get_d_2exp(&e2, m.get_mpz_t());  // m = d * 2^e2, d in [0.5, 1)
    detail::Dyadic y = detail::dyadic_from_double(std::log(d));
    y = detail::dyadic_add(y, detail::dyadic_from_double(static_cast<double>(e2 + e) *
                                                         0.6931471805599453));
    // ladder: each stage one exp at pl bits, Newton error tracks 2^-pl
    for (Prec pl = 64;; pl = std::min(pl * 2, workp + 8)) {
        BallReal eny = detail::exp_point(-y.m, y.e, pl);
        BallReal u = sub(mul(center, eny, pl), BallReal::one(), pl);
        y = detail::dyadic_round(detail::dyadic_add(y, {u.mantissa(), u.exponent()}), pl + 8);
        if (pl >= workp + 8) break;
    }
    // rigorous final step
    BallReal u;
    long umag = 0;
    for (int tries = 0;; ++tries) {
        BallReal eny = detail::exp_point(-y.m, y.e, workp + 8);
        u = sub(mul(center, eny, workp + 8), BallReal::one(), workp + 8);
        umag = u.upper_magnitude_2exp();
        if (umag <= -(workp / 2)) break;
        if (tries >= 4) throw std::logic_error("ball log: Newton failed to converge");
        y = detail::dyadic_round(detail::dyadic_add(y, {u.mantissa(), u.exponent()}), workp + 8);
    }
    // |ln(1+u) - u| <= u^2 for |u| <= 1/2
    BallReal res = add(BallReal::exact(y.m, y.e), u, workp);
    if (!u.is_exact_zero()) res.add_error_2exp(2 * umag);
    if (!a.is_exact()) {
        long rb = detail::bit_length(a.radius());
        long cb = detail::bit_length(m - a.radius());
        res.add_error_2exp(rb - cb + 1);  // r/(c-r), scale-free
    }
    return res.rounded(prec);
}

struct DecimalString {
    std::string text;
    long certified;  // fractional digits (plain) or mantissa digits (scientific)
};

namespace detail {

inline BigInt pow10(long k) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(k));
    return r;
}

// floor(q * 10^k), k may be negative
inline BigInt floor_scale10(const ExactRational& q, long k) {
    BigInt num = q.num(), den = q.den();
    if (k >= 0)
        num *= pow10(k);
    else
        den *= pow10(-k);
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return r;
}

inline BigInt div10_floor(const BigInt& z) {
    BigInt r;
    mpz_fdiv_q_ui(r.get_mpz_t(), z.get_mpz_t(), 10);
    return r;
}

inline std::string insert_point(const BigInt& digits, long frac, bool neg) {
    std::string s = digits.get_str();
    if (frac <= 0) {
        s.append(static_cast<size_t>(-frac), '0');
    } else {
        if (static_cast<long>(s.size()) <= frac) s.insert(0, static_cast<size_t>(frac) + 1 - s.size(), '0');
        s.insert(s.size() - static_cast<size_t>(frac), ".");
    }
    return neg ? "-" + s : s;
}

}  // namespace detail

/// Certified decimal rendering: prints exactly the digits shared by the two
/// endpoint expansions (truncation of the true value), stopping at the first
/// uncertain digit; never claims a digit the radius cannot support.
/// Plain notation inside [1e-6, 1e9), scientific outside.
inline DecimalString decimal_string(const BallReal& b, long max_digits) {
    if (b.is_exact_zero()) return {"0", max_digits};
    ExactRational lo = b.lo_rational(), hi = b.hi_rational();
    if (lo.sign() <= 0 && hi.sign() >= 0) return {"0", 0};  // straddles or touches zero
    bool neg = hi.sign() < 0;
    if (neg) {
        ExactRational t = lo;
        lo = -hi;
        hi = -t;
    }
    const ExactRational big(detail::pow10(9), BigInt(1));
    const ExactRational small(BigInt(1), detail::pow10(6));
    if (hi < big && lo >= small) {
        long dd = max_digits;
        BigInt l = detail::floor_scale10(lo, dd);
        BigInt h = detail::floor_scale10(hi, dd);
        while (l != h && dd > -12) {
            l = detail::div10_floor(l);
            h = detail::div10_floor(h);
            --dd;
        }
        if (l != h) return {"0", 0};
        return {detail::insert_point(l, dd, neg), dd};
    }
    // scientific: find t with 10^t <= lo < 10^{t+1}
    auto pow10r = [](long k) {
        if (k >= 0) return ExactRational(detail::pow10(k), BigInt(1));
        return ExactRational(BigInt(1), detail::pow10(-k));
    };
    long t = static_cast<long>(
        std::floor(static_cast<double>(detail::bit_length(lo.num()) -
                                       detail::bit_length(lo.den())) * 0.30102999566398));
    while (pow10r(t) > lo) --t;
    while (pow10r(t + 1) <= lo) ++t;
    long dd = max_digits - 1;
    BigInt l = detail::floor_scale10(lo, dd - t);
    BigInt h = detail::floor_scale10(hi, dd - t);
    while (l != h && dd >= 0) {
        l = detail::div10_floor(l);
        h = detail::div10_floor(h);
        --dd;
    }
    if (l != h || l == 0) return {"0", 0};
    std::string digs = l.get_str();
    std::string mant = digs.substr(0, 1);
    if (digs.size() > 1) mant += "." + digs.substr(1);
    std::string text = (neg ? "-" : "") + mant + "e" + (t >= 0 ? "+" : "") + std::to_string(t);
    return {text, dd + 1};
}

}  // namespace omega
