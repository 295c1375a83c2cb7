#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace bsd2 {

// Owning MPFR value with an explicit per-value precision. Binary operations
// produce a result at the larger of the two operand precisions, so a single
// computation never depends on process-global state.
class Real {
public:
    explicit Real(mpfr_prec_t bits = 128);
    Real(long v, mpfr_prec_t bits);
    Real(double v, mpfr_prec_t bits);
    Real(const mpz_class& v, mpfr_prec_t bits);
    Real(const mpq_class& v, mpfr_prec_t bits);
    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    ~Real();

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    Real& operator+=(const Real& o);
    Real& operator-=(const Real& o);
    Real& operator*=(const Real& o);
    Real& operator/=(const Real& o);
    Real& operator*=(long k);
    Real& operator/=(long k);

    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);
    friend Real operator*(const Real& a, long k);
    friend Real operator/(const Real& a, long k);
    friend Real operator-(const Real& a);

    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_); }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_); }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_); }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_); }

    int sign() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long floor_long() const;
    mpz_class floor_integer() const;
    // log2 of |x| rounded down; only meaningful for x != 0.
    long exponent2() const { return mpfr_get_exp(v_) - 1; }
    std::string str(int digits = 30) const;

    static Real pi(mpfr_prec_t bits);
    static Real pow2(long e, mpfr_prec_t bits);

private:
    mpfr_t v_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real agm(const Real& a, const Real& b);

}  // namespace bsd2
