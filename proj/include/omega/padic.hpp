#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "omega/exact.hpp"

namespace omega {

struct PrimeMismatch : std::domain_error {
    PrimeMismatch() : std::domain_error("p-adic arithmetic: operands have different primes") {}
};
struct NonUnit : std::domain_error {
    NonUnit() : std::domain_error("p-adic inverse: argument has positive valuation") {}
};
struct CoefficientNotPIntegral : std::domain_error {
    explicit CoefficientNotPIntegral(size_t idx)
        : std::domain_error("series coefficient " + std::to_string(idx) +
                            " has denominator divisible by p"),
          index(idx) {}
    size_t index;
};
struct ArgumentNotInMaximalIdeal : std::domain_error {
    ArgumentNotInMaximalIdeal()
        : std::domain_error("p-adic series evaluation: argument must have valuation >= 1") {}
};
struct HenselConditionFailed : std::domain_error {
    HenselConditionFailed()
        : std::domain_error("Hensel lifting: val(F(x0)) > 2 val(F'(x0)) fails at the seed") {}
};
struct DerivativeNotUnitEnough : std::domain_error {
    DerivativeNotUnitEnough()
        : std::domain_error("Hensel lifting: derivative valuation drifted during the lift") {}
};

/// Integer known modulo p^precN. The residue is always reduced into
/// [0, p^precN); valuation == precN means indistinguishable from zero at this
/// precision. Values are immutable.
class PadicInt {
  public:
    PadicInt(unsigned long p, unsigned precN, const BigInt& value) : p_(p), prec_(precN) {
        if (p < 2) throw std::invalid_argument("PadicInt: p must be >= 2");
        if (precN == 0) throw std::invalid_argument("PadicInt: precision must be >= 1");
        mpz_ui_pow_ui(mod_.get_mpz_t(), p_, prec_);
        mpz_mod(res_.get_mpz_t(), value.get_mpz_t(), mod_.get_mpz_t());
    }

    unsigned long p() const { return p_; }
    unsigned precision() const { return prec_; }
    const BigInt& residue() const { return res_; }
    const BigInt& modulus() const { return mod_; }

    /// Reduce or arbitrarily lift (same residue) to another precision.
    PadicInt with_precision(unsigned precN) const { return {p_, precN, res_}; }

    bool is_zero() const { return res_ == 0; }

    friend PadicInt operator+(const PadicInt& a, const PadicInt& b) {
        return combine(a, b, a.res_ + b.res_);
    }
    friend PadicInt operator-(const PadicInt& a, const PadicInt& b) {
        return combine(a, b, a.res_ - b.res_);
    }
    friend PadicInt operator*(const PadicInt& a, const PadicInt& b) {
        return combine(a, b, a.res_ * b.res_);
    }
    friend bool operator==(const PadicInt& a, const PadicInt& b) {
        return a.p_ == b.p_ && a.prec_ == b.prec_ && a.res_ == b.res_;
    }

    /// Base-p digits, least significant first, precision-many entries.
    std::vector<unsigned long> digits() const {
        std::vector<unsigned long> out;
        out.reserve(prec_);
        BigInt r = res_;
        for (unsigned i = 0; i < prec_; ++i) {
            out.push_back(mpz_fdiv_q_ui(r.get_mpz_t(), r.get_mpz_t(), p_));
        }
        return out;
    }

    /// "d0 d1 d2 ... (base p)"
    std::string digit_string() const {
        std::string s;
        for (unsigned long d : digits()) {
            if (!s.empty()) s += ' ';
            s += std::to_string(d);
        }
        return s + " (base " + std::to_string(p_) + ")";
    }

  private:
    static PadicInt combine(const PadicInt& a, const PadicInt& b, const BigInt& raw) {
        if (a.p_ != b.p_) throw PrimeMismatch();
        return {a.p_, std::min(a.prec_, b.prec_), raw};
    }

    unsigned long p_;
    unsigned prec_;
    BigInt res_;
    BigInt mod_;
};

/// Largest v <= precN with p^v dividing the residue (precN for residue 0).
inline unsigned valuation(const PadicInt& a) {
    if (a.is_zero()) return a.precision();
    BigInt r = a.residue();
    unsigned v = 0;
    while (v < a.precision() && mpz_divisible_ui_p(r.get_mpz_t(), a.p())) {
        mpz_divexact_ui(r.get_mpz_t(), r.get_mpz_t(), a.p());
        ++v;
    }
    return v;
}

/// Modular inverse; the argument must be a unit.
inline PadicInt inv(const PadicInt& a) {
    if (valuation(a) > 0) throw NonUnit();
    BigInt r;
    if (mpz_invert(r.get_mpz_t(), a.residue().get_mpz_t(), a.modulus().get_mpz_t()) == 0)
        throw NonUnit();
    return {a.p(), a.precision(), r};
}

/// Exact division by p^k, dropping k digits of certainty; requires
/// valuation(a) >= k.
inline PadicInt shift_down(const PadicInt& a, unsigned k) {
    if (k == 0) return a;
    if (valuation(a) < k) throw NonUnit();
    if (a.precision() <= k) throw std::invalid_argument("shift_down: no precision left");
    BigInt pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), a.p(), k);
    BigInt q;
    mpz_divexact(q.get_mpz_t(), a.residue().get_mpz_t(), pk.get_mpz_t());
    return {a.p(), a.precision() - k, q};
}

/// Map a p-integral rational into Z/p^N.
inline PadicInt rational_to_padic(const ExactRational& c, unsigned long p, unsigned precN,
                                  size_t index_for_error = 0) {
    PadicInt den(p, precN, c.den());
    if (mpz_divisible_ui_p(c.den().get_mpz_t(), p)) throw CoefficientNotPIntegral(index_for_error);
    return PadicInt(p, precN, c.num()) * inv(den);
}

/// sum_m coeffs[m] x^m mod p^precN. Requires every denominator coprime to p
/// and valuation(x) >= 1; terms with m*val(x) >= precN vanish, so the Horner
/// loop stops at m = ceil(precN/val) - 1 (or the end of the list).
inline PadicInt eval_series(std::span<const ExactRational> coeffs, const PadicInt& x) {
    unsigned long p = x.p();
    unsigned n = x.precision();
    unsigned v = valuation(x);
    if (v < 1) throw ArgumentNotInMaximalIdeal();
    if (coeffs.empty()) return PadicInt(p, n, 0);
    size_t last = std::min(coeffs.size() - 1, static_cast<size_t>((n - 1) / v));
    for (size_t m = 0; m <= last; ++m)
        if (mpz_divisible_ui_p(coeffs[m].den().get_mpz_t(), p)) throw CoefficientNotPIntegral(m);
    PadicInt acc = rational_to_padic(coeffs[last], p, n, last);
    for (size_t m = last; m-- > 0;) {
        acc = acc * x + rational_to_padic(coeffs[m], p, n, m);
    }
    return acc;
}

/// F evaluated together with its derivative at a point, both at the point's precision.
using PadicFn = std::function<std::pair<PadicInt, PadicInt>(const PadicInt&)>;

/// Newton root lifting: from x0 with val(F(x0)) > 2 val(F'(x0)) to a root mod
/// p^targetN. Correct digits double per step; at most ceil(log2 targetN) + 2
/// steps. Per-step valuations of F(x) are appended to *fval_trace when given.
inline PadicInt hensel_lift(const PadicFn& F, const PadicInt& x0, unsigned targetN,
                            std::vector<unsigned>* fval_trace = nullptr) {
    auto [f0, fp0] = F(x0);
    unsigned vf = valuation(f0);
    unsigned vfp = valuation(fp0);
    if (vf <= 2 * vfp) throw HenselConditionFailed();
    unsigned t = vfp;
    unsigned work = targetN + t;
    PadicInt x = x0.with_precision(work);
    unsigned max_steps = 2;
    for (unsigned n = targetN; n > 1; n = (n + 1) / 2) ++max_steps;
    for (unsigned step = 0; step < max_steps; ++step) {
        auto [fx, fpx] = F(x);
        unsigned v = valuation(fx);
        if (fval_trace) fval_trace->push_back(v);
        if (v >= targetN + t) return x.with_precision(targetN);
        if (valuation(fpx) != t) throw DerivativeNotUnitEnough();
        // delta = F(x)/F'(x): strip p^t from both, then a unit inverse remains
        PadicInt num = shift_down(fx, t);
        PadicInt den = shift_down(fpx, t);
        x = (x.with_precision(work - t) - num * inv(den)).with_precision(work);
    }
    throw std::logic_error("hensel_lift: step bound exceeded without convergence");
}

}  // namespace omega
