#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "omega/exact.hpp"

namespace omega {

struct NonzeroConstantTerm : std::domain_error {
    NonzeroConstantTerm() : std::domain_error("series exp: constant term must be 0") {}
};
struct ConstantTermNotOne : std::domain_error {
    ConstantTermNotOne() : std::domain_error("series pow: constant term must be 1") {}
};
struct CompositionInnerConstantNonzero : std::domain_error {
    CompositionInnerConstantNonzero()
        : std::domain_error("series composition: inner constant term must be 0") {}
};
struct ZeroLinearCoefficient : std::domain_error {
    ZeroLinearCoefficient() : std::domain_error("series reversion: linear coefficient must be nonzero") {}
};
struct DivisionByNonUnitSeries : std::domain_error {
    DivisionByNonUnitSeries() : std::domain_error("series inverse: constant term must be nonzero") {}
};

/// Formal power series over ExactRational, known exactly modulo x^{order+1}.
/// Coefficient storage always has order+1 entries; operations return the
/// provable truncation order of their result and never pad further.
class TruncSeries {
  public:
    explicit TruncSeries(size_t order) : c_(order + 1) {}
    explicit TruncSeries(std::vector<ExactRational> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) throw std::invalid_argument("TruncSeries: empty coefficient list");
    }

    static TruncSeries x(size_t order) {
        TruncSeries s(order);
        if (order >= 1) s[1] = 1;
        return s;
    }
    static TruncSeries constant(const ExactRational& c, size_t order) {
        TruncSeries s(order);
        s[0] = c;
        return s;
    }

    size_t order() const { return c_.size() - 1; }
    const ExactRational& operator[](size_t i) const { return c_[i]; }
    ExactRational& operator[](size_t i) { return c_[i]; }
    const std::vector<ExactRational>& coeffs() const { return c_; }

    /// Index of the first nonzero coefficient, or order+1 if identically zero.
    size_t valuation() const {
        for (size_t i = 0; i < c_.size(); ++i)
            if (!c_[i].is_zero()) return i;
        return c_.size();
    }

    bool operator==(const TruncSeries& o) const { return c_ == o.c_; }

    TruncSeries truncated(size_t new_order) const {
        TruncSeries s(std::min(new_order, order()));
        for (size_t i = 0; i <= s.order(); ++i) s[i] = c_[i];
        return s;
    }

    /// "c0 + c1*x + ... + cN*x^N", coefficients in lowest terms.
    std::string to_text() const {
        std::string out = c_[0].to_string();
        for (size_t i = 1; i < c_.size(); ++i) {
            out += " + " + c_[i].to_string() + "*x";
            if (i > 1) out += "^" + std::to_string(i);
        }
        return out;
    }

  private:
    std::vector<ExactRational> c_;
};

inline TruncSeries add(const TruncSeries& f, const TruncSeries& g) {
    TruncSeries r(std::min(f.order(), g.order()));
    for (size_t i = 0; i <= r.order(); ++i) r[i] = f[i] + g[i];
    return r;
}

inline TruncSeries sub(const TruncSeries& f, const TruncSeries& g) {
    TruncSeries r(std::min(f.order(), g.order()));
    for (size_t i = 0; i <= r.order(); ++i) r[i] = f[i] - g[i];
    return r;
}

inline TruncSeries scale(const TruncSeries& f, const ExactRational& c) {
    TruncSeries r(f.order());
    for (size_t i = 0; i <= f.order(); ++i) r[i] = f[i] * c;
    return r;
}

namespace detail {

// Cauchy product via a common-denominator integer convolution: one gcd per
// output coefficient instead of one per partial product.
inline TruncSeries mul_common_den(const TruncSeries& f, const TruncSeries& g, size_t n) {
    BigInt df(1), dg(1);
    for (size_t i = 0; i <= f.order(); ++i) df = lcm(df, f[i].den());
    for (size_t j = 0; j <= g.order(); ++j) dg = lcm(dg, g[j].den());
    std::vector<BigInt> a(f.order() + 1), b(g.order() + 1);
    for (size_t i = 0; i <= f.order(); ++i) a[i] = f[i].num() * (df / f[i].den());
    for (size_t j = 0; j <= g.order(); ++j) b[j] = g[j].num() * (dg / g[j].den());
    BigInt den = df * dg;
    TruncSeries r(n);
    BigInt acc;
    for (size_t k = 0; k <= n; ++k) {
        acc = 0;
        size_t ilo = (k > g.order()) ? k - g.order() : 0;
        size_t ihi = std::min(k, f.order());
        for (size_t i = ilo; i <= ihi; ++i) {
            if (a[i] == 0 || b[k - i] == 0) continue;
            acc += a[i] * b[k - i];
        }
        r[k] = ExactRational(acc, den);
    }
    return r;
}

}  // namespace detail

/// Cauchy product truncated at min(order_f, order_g).
inline TruncSeries mul(const TruncSeries& f, const TruncSeries& g) {
    size_t n = std::min(f.order(), g.order());
    if (n >= 16) return detail::mul_common_den(f, g, n);
    TruncSeries r(n);
    for (size_t i = 0; i <= std::min(n, f.order()); ++i) {
        if (f[i].is_zero()) continue;
        for (size_t j = 0; i + j <= n && j <= g.order(); ++j) {
            if (g[j].is_zero()) continue;
            r[i + j] += f[i] * g[j];
        }
    }
    return r;
}

inline TruncSeries derivative(const TruncSeries& f) {
    if (f.order() == 0) return TruncSeries(std::vector<ExactRational>{ExactRational(0)});
    TruncSeries r(f.order() - 1);
    for (size_t i = 1; i <= f.order(); ++i) r[i - 1] = f[i] * ExactRational(static_cast<long>(i));
    return r;
}

/// exp(f) mod x^{N+1} via (exp f)' = f' exp f; requires f(0) = 0.
inline TruncSeries exp_series(const TruncSeries& f) {
    if (!f[0].is_zero()) throw NonzeroConstantTerm();
    size_t n = f.order();
    // nonzero support of f makes the recurrence cheap for sparse inputs
    std::vector<size_t> support;
    for (size_t j = 1; j <= n; ++j)
        if (!f[j].is_zero()) support.push_back(j);
    TruncSeries g(n);
    g[0] = 1;
    for (size_t m = 1; m <= n; ++m) {
        ExactRational s(0);
        for (size_t j : support) {
            if (j > m) break;
            s += ExactRational(static_cast<long>(j)) * f[j] * g[m - j];
        }
        g[m] = s / ExactRational(static_cast<long>(m));
    }
    return g;
}

/// f^alpha mod x^{N+1} via (f^a)' f = a f' f^a; requires f(0) = 1.
inline TruncSeries pow_rational(const TruncSeries& f, const ExactRational& alpha) {
    if (f[0] != ExactRational(1)) throw ConstantTermNotOne();
    size_t n = f.order();
    std::vector<size_t> support;
    for (size_t j = 1; j <= n; ++j)
        if (!f[j].is_zero()) support.push_back(j);
    TruncSeries g(n);
    g[0] = 1;
    ExactRational ap1 = alpha + ExactRational(1);
    for (size_t m = 1; m <= n; ++m) {
        ExactRational s(0);
        for (size_t j : support) {
            if (j > m) break;
            s += (ap1 * ExactRational(static_cast<long>(j)) - ExactRational(static_cast<long>(m))) *
                 f[j] * g[m - j];
        }
        g[m] = s / ExactRational(static_cast<long>(m));
    }
    return g;
}

/// Multiplicative inverse: g with f*g = 1 mod x^{N+1}; requires f(0) != 0.
inline TruncSeries inverse(const TruncSeries& f) {
    if (f[0].is_zero()) throw DivisionByNonUnitSeries();
    size_t n = f.order();
    TruncSeries g(n);
    ExactRational inv0 = ExactRational(1) / f[0];
    g[0] = inv0;
    for (size_t m = 1; m <= n; ++m) {
        ExactRational s(0);
        for (size_t j = 1; j <= m; ++j) {
            if (f[j].is_zero()) continue;
            s += f[j] * g[m - j];
        }
        g[m] = -s * inv0;
    }
    return g;
}

/// f(g(x)) mod x^{min(Nf,Ng)+1}; requires g(0) = 0. Ascending powers of g,
/// exploiting val(g^k) >= k so late powers touch few coefficients.
inline TruncSeries compose(const TruncSeries& f, const TruncSeries& g) {
    if (!g[0].is_zero()) throw CompositionInnerConstantNonzero();
    size_t n = std::min(f.order(), g.order());
    TruncSeries gt = g.truncated(n);
    TruncSeries acc(n);
    acc[0] = f[0];
    if (n == 0) return acc;
    TruncSeries p = gt;  // g^k, valuation >= k
    for (size_t k = 1; k <= n; ++k) {
        if (!f[k].is_zero()) {
            for (size_t i = k; i <= n; ++i) acc[i] += f[k] * p[i];
        }
        if (k < n) p = mul(p, gt);
    }
    return acc;
}

namespace detail {

// zero-extension used as internal Newton scratch; the padded coefficients
// never influence the coefficients the caller may rely on
inline TruncSeries pad_to(const TruncSeries& s, size_t m) {
    if (s.order() >= m) return s.truncated(m);
    std::vector<ExactRational> v(m + 1);
    for (size_t i = 0; i <= s.order(); ++i) v[i] = s[i];
    return TruncSeries(std::move(v));
}

}  // namespace detail

/// Compositional inverse: g with f(g(x)) = x mod x^{N+1}, by Newton order
/// doubling; requires f(0) = 0 and f'(0) != 0. The result is verified by
/// composition before returning.
inline TruncSeries revert(const TruncSeries& f) {
    if (!f[0].is_zero()) throw CompositionInnerConstantNonzero();
    if (f.order() < 1 || f[1].is_zero()) throw ZeroLinearCoefficient();
    size_t n = f.order();
    TruncSeries g(std::vector<ExactRational>{ExactRational(0), ExactRational(1) / f[1]});
    while (g.order() < n) {
        size_t m = std::min(2 * g.order() + 1, n);
        TruncSeries gm = detail::pad_to(g, m);
        TruncSeries fm = f.truncated(m);
        TruncSeries err = sub(compose(fm, gm), TruncSeries::x(m));
        TruncSeries fp = compose(detail::pad_to(derivative(fm), m), gm);
        // err has valuation > g.order(), so err/f'(g) only needs fp below x^m
        g = sub(gm, mul(err, inverse(fp)));
    }
    TruncSeries check = compose(f, g);
    for (size_t i = 0; i <= n; ++i) {
        if (check[i] != (i == 1 ? ExactRational(1) : ExactRational(0)))
            throw std::logic_error("revert: composition self-check failed");
    }
    return g;
}

/// First coefficient index whose denominator p divides, if any.
inline std::optional<size_t> first_non_p_integral(const TruncSeries& s, unsigned long p) {
    for (size_t i = 0; i <= s.order(); ++i) {
        if (mpz_divisible_ui_p(s[i].den().get_mpz_t(), p)) return i;
    }
    return std::nullopt;
}

}  // namespace omega
