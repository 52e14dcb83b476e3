#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace omega {

using BigInt = mpz_class;

struct DivideByZero : std::domain_error {
    DivideByZero() : std::domain_error("rational division by zero") {}
};

/// Arbitrary-precision rational kept in lowest terms with positive denominator.
/// Zero is 0/1. All arithmetic is exact.
class ExactRational {
  public:
    ExactRational() : v_(0) {}
    ExactRational(long n) : v_(n) {}  // NOLINT: implicit by design, series code assigns integers
    ExactRational(const BigInt& n) : v_(n) {}
    ExactRational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw DivideByZero();
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    ExactRational(long num, long den) : ExactRational(BigInt(num), BigInt(den)) {}

    BigInt num() const { return v_.get_num(); }
    BigInt den() const { return v_.get_den(); }
    int sign() const { return sgn(v_); }
    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return v_.get_den() == 1; }

    ExactRational operator-() const { return ExactRational(mpq_class(-v_)); }

    friend ExactRational operator+(const ExactRational& a, const ExactRational& b) {
        return ExactRational(mpq_class(a.v_ + b.v_));
    }
    friend ExactRational operator-(const ExactRational& a, const ExactRational& b) {
        return ExactRational(mpq_class(a.v_ - b.v_));
    }
    friend ExactRational operator*(const ExactRational& a, const ExactRational& b) {
        return ExactRational(mpq_class(a.v_ * b.v_));
    }
    friend ExactRational operator/(const ExactRational& a, const ExactRational& b) {
        if (b.v_ == 0) throw DivideByZero();
        return ExactRational(mpq_class(a.v_ / b.v_));
    }
    ExactRational& operator+=(const ExactRational& b) { v_ += b.v_; return *this; }
    ExactRational& operator-=(const ExactRational& b) { v_ -= b.v_; return *this; }
    ExactRational& operator*=(const ExactRational& b) { v_ *= b.v_; return *this; }
    ExactRational& operator/=(const ExactRational& b) {
        if (b.v_ == 0) throw DivideByZero();
        v_ /= b.v_;
        return *this;
    }

    friend bool operator==(const ExactRational& a, const ExactRational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const ExactRational& a, const ExactRational& b) { return a.v_ != b.v_; }
    friend bool operator<(const ExactRational& a, const ExactRational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const ExactRational& a, const ExactRational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const ExactRational& a, const ExactRational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const ExactRational& a, const ExactRational& b) { return a.v_ >= b.v_; }

    ExactRational abs() const { return ExactRational(mpq_class(::abs(v_))); }

    /// Largest integer <= value.
    BigInt floor() const {
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
        return q;
    }

    /// Nearest integer (ties toward +inf).
    BigInt round_nearest() const {
        BigInt two_num = num() * 2 + den();
        BigInt q;
        BigInt two_den = den() * 2;
        mpz_fdiv_q(q.get_mpz_t(), two_num.get_mpz_t(), two_den.get_mpz_t());
        return q;
    }

    /// Pretty form: "num" when the denominator is 1, else "num/den".
    std::string to_string() const {
        if (is_integer()) return num().get_str();
        return num().get_str() + "/" + den().get_str();
    }
    /// Uniform machine form, always "num/den".
    std::string fraction_string() const { return num().get_str() + "/" + den().get_str(); }

    /// Parses "num", "num/den", with optional leading '-'.
    static ExactRational from_string(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return ExactRational(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        return ExactRational(num, den);
    }

  private:
    explicit ExactRational(mpq_class v) : v_(std::move(v)) {}
    mpq_class v_;  // canonical at all times
};

inline ExactRational pow(const ExactRational& base, unsigned long e) {
    BigInt n, d;
    mpz_pow_ui(n.get_mpz_t(), base.num().get_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), base.den().get_mpz_t(), e);
    return ExactRational(n, d);
}

/// Mobius function by trial division: 0 on a squared prime factor,
/// else (-1)^{number of prime factors}.
inline int mobius(unsigned long n) {
    if (n == 0) throw std::invalid_argument("mobius: n must be >= 1");
    int factors = 0;
    for (unsigned long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            n /= d;
            ++factors;
            if (n % d == 0) return 0;
        }
    }
    if (n > 1) ++factors;
    return (factors % 2 == 0) ? 1 : -1;
}

inline bool is_prime(unsigned long n) {
    if (n < 2) return false;
    for (unsigned long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace omega
