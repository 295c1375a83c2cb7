#include "bsd2/real.hpp"

#include <algorithm>
#include <vector>

namespace bsd2 {

Real::Real(mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
}

Real::Real(long v, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_si(v_, v, MPFR_RNDN);
}

Real::Real(double v, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_d(v_, v, MPFR_RNDN);
}

Real::Real(const mpz_class& v, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}

Real::Real(const mpq_class& v, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}

Real::Real(const Real& o) {
    mpfr_init2(v_, o.precision());
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
}

Real& Real::operator=(const Real& o) {
    if (this != &o) {
        mpfr_set_prec(v_, o.precision());
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

Real& Real::operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
}

Real::~Real() { mpfr_clear(v_); }

namespace {
mpfr_prec_t wider(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

void widen_to(Real& a, mpfr_prec_t bits) {
    if (a.precision() < bits) mpfr_prec_round(a.raw(), bits, MPFR_RNDN);
}
}  // namespace

Real& Real::operator+=(const Real& o) {
    widen_to(*this, o.precision());
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real& Real::operator-=(const Real& o) {
    widen_to(*this, o.precision());
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real& Real::operator*=(const Real& o) {
    widen_to(*this, o.precision());
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real& Real::operator/=(const Real& o) {
    widen_to(*this, o.precision());
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real& Real::operator*=(long k) {
    mpfr_mul_si(v_, v_, k, MPFR_RNDN);
    return *this;
}
Real& Real::operator/=(long k) {
    mpfr_div_si(v_, v_, k, MPFR_RNDN);
    return *this;
}

Real operator+(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}
Real operator-(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}
Real operator*(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}
Real operator/(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}
Real operator*(const Real& a, long k) {
    Real r(a);
    r *= k;
    return r;
}
Real operator/(const Real& a, long k) {
    Real r(a);
    r /= k;
    return r;
}
Real operator-(const Real& a) {
    Real r(a.precision());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
}

long Real::floor_long() const { return mpfr_get_si(v_, MPFR_RNDD); }

mpz_class Real::floor_integer() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
    return z;
}

std::string Real::str(int digits) const {
    std::vector<char> buf(static_cast<size_t>(digits) + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
    return std::string(buf.data());
}

Real Real::pi(mpfr_prec_t bits) {
    Real r(bits);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

Real Real::pow2(long e, mpfr_prec_t bits) {
    Real r(1L, bits);
    mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN);
    return r;
}

Real abs(const Real& x) {
    Real r(x.precision());
    mpfr_abs(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}
Real sqrt(const Real& x) {
    Real r(x.precision());
    mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}
Real exp(const Real& x) {
    Real r(x.precision());
    mpfr_exp(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}
Real log(const Real& x) {
    Real r(x.precision());
    mpfr_log(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}
Real agm(const Real& a, const Real& b) {
    Real r(std::max(a.precision(), b.precision()));
    mpfr_agm(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}

}  // namespace bsd2
