#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bsd2/real.hpp"

namespace bsd2 {

using Integer = mpz_class;
using Rational = mpq_class;

// 2-adic valuation with an explicit infinity for zero.
struct Val2 {
    bool infinite = true;
    long value = 0;

    static Val2 inf() { return {}; }
    static Val2 of(long v) { return {false, v}; }

    bool operator==(const Val2& o) const {
        return infinite == o.infinite && (infinite || value == o.value);
    }
    bool operator!=(const Val2& o) const { return !(*this == o); }
    bool operator==(long v) const { return !infinite && value == v; }
    Val2 operator+(const Val2& o) const {
        if (infinite || o.infinite) return inf();
        return of(value + o.value);
    }
    std::string str() const { return infinite ? "inf" : std::to_string(value); }
};

Val2 val2(const Integer& x);
Val2 val2(const Rational& x);

// p-adic valuation of a nonzero integer.
long valuation(const Integer& x, const Integer& p);
long valuation(const Integer& x, long p);

int kronecker(const Integer& a, const Integer& n);
int kronecker(long a, long n);

// Primitive real character attached to an odd squarefree m ≡ 1 (mod 4),
// i.e. k ↦ (k/m) as a Jacobi symbol.
class QuadChar {
public:
    explicit QuadChar(long modulus);
    long modulus() const { return m_; }
    int operator()(long k) const;

private:
    long m_;
};

bool is_squarefree(long n);

bool is_prime(const Integer& n);
bool is_prime(long n);
std::vector<long> primes_up_to(long bound);

// Prime factorization with multiplicities, ascending primes; sign ignored.
// Trial division up to 10^6, then Pollard rho on the cofactor.
std::vector<std::pair<Integer, unsigned>> factor(Integer n);
std::vector<long> prime_divisors(long n);

// n = s·t² with s squarefree (s carries the sign of n), t > 0.
std::pair<Integer, Integer> squarefree_factor(const Integer& n);

// Unique p/q with q ≤ bound and |x − p/q| ≤ tol, read off the continued
// fraction convergents of x. Requires tol < 1/(2·bound²).
Rational rational_reconstruct(const Real& x, const Integer& bound, const Real& tol);

std::string to_string(const Rational& q);
Rational rational_from_string(const std::string& s);

Integer floor_div(const Integer& a, const Integer& b);
long mod(long a, long m);
long inverse_mod(long a, long m);

}  // namespace bsd2
