#include "bsd2/arith.hpp"

#include <algorithm>
#include <stdexcept>

#include "bsd2/errors.hpp"

namespace bsd2 {

Val2 val2(const Integer& x) {
    if (x == 0) return Val2::inf();
    return Val2::of(static_cast<long>(mpz_scan1(x.get_mpz_t(), 0)));
}

Val2 val2(const Rational& x) {
    if (x == 0) return Val2::inf();
    return Val2::of(val2(x.get_num()).value - val2(x.get_den()).value);
}

long valuation(const Integer& x, const Integer& p) {
    if (x == 0) throw PreconditionViolated("valuation of zero");
    if (p == 2) return val2(x).value;
    Integer y = x;
    return static_cast<long>(mpz_remove(y.get_mpz_t(), y.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const Integer& x, long p) { return valuation(x, Integer(p)); }

int kronecker(const Integer& a, const Integer& n) {
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

int kronecker(long a, long n) { return kronecker(Integer(a), Integer(n)); }

QuadChar::QuadChar(long modulus) : m_(modulus) {
    if (modulus <= 0 || modulus % 2 == 0 || modulus % 4 != 1 || !is_squarefree(modulus))
        throw PreconditionViolated("character modulus must be odd, squarefree and 1 mod 4: " +
                                   std::to_string(modulus));
}

int QuadChar::operator()(long k) const {
    if (m_ == 1) return 1;
    return mpz_si_kronecker(mod(k, m_), Integer(m_).get_mpz_t());
}

bool is_squarefree(long n) {
    if (n == 0) return false;
    if (n < 0) n = -n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return false;
        }
    }
    return true;
}

bool is_prime(const Integer& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

bool is_prime(long n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (long d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

std::vector<long> primes_up_to(long bound) {
    std::vector<long> out;
    if (bound < 2) return out;
    std::vector<bool> composite(static_cast<size_t>(bound) + 1, false);
    for (long i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (long j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return out;
}

namespace {

Integer pollard_brent(const Integer& n, unsigned long seed) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    Integer y = seed % 1000 + 2, c = seed % 97 + 1, g = 1, q = 1, x, ys;
    const unsigned long batch = 128;
    unsigned long r = 1;
    auto f = [&](const Integer& v) -> Integer { return (v * v + c) % n; };
    while (g == 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) y = f(y);
        unsigned long k = 0;
        while (k < r && g == 1) {
            ys = y;
            for (unsigned long i = 0; i < std::min(batch, r - k); ++i) {
                y = f(y);
                q = (q * abs(x - y)) % n;
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            k += batch;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = f(ys);
            Integer diff = abs(x - ys);
            mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    return g;
}

void split_cofactor(const Integer& n, std::vector<Integer>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    Integer sq;
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        mpz_sqrt(sq.get_mpz_t(), n.get_mpz_t());
        split_cofactor(sq, out);
        split_cofactor(sq, out);
        return;
    }
    for (unsigned long seed = 1;; ++seed) {
        Integer d = pollard_brent(n, seed);
        if (d != 1 && d != n) {
            split_cofactor(d, out);
            split_cofactor(n / d, out);
            return;
        }
    }
}

}  // namespace

std::vector<std::pair<Integer, unsigned>> factor(Integer n) {
    if (n == 0) throw PreconditionViolated("cannot factor zero");
    n = abs(n);
    std::vector<std::pair<Integer, unsigned>> out;
    auto take = [&](unsigned long p) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            unsigned e = 0;
            while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
                mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
                ++e;
            }
            out.emplace_back(Integer(p), e);
        }
    };
    take(2);
    const unsigned long trial_limit = 1000000;
    for (unsigned long p = 3; p <= trial_limit; p += 2) {
        if (n == 1) break;
        if (Integer(p) * p > n) break;
        take(p);
    }
    if (n != 1) {
        std::vector<Integer> rest;
        split_cofactor(n, rest);
        std::sort(rest.begin(), rest.end());
        for (const auto& p : rest) {
            if (!out.empty() && out.back().first == p)
                ++out.back().second;
            else
                out.emplace_back(p, 1);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<long> prime_divisors(long n) {
    std::vector<long> out;
    for (const auto& [p, e] : factor(Integer(n))) out.push_back(p.get_si());
    return out;
}

std::pair<Integer, Integer> squarefree_factor(const Integer& n) {
    if (n == 0) throw PreconditionViolated("squarefree_factor of zero");
    Integer s = sgn(n), t = 1;
    for (const auto& [p, e] : factor(n)) {
        if (e % 2) s *= p;
        for (unsigned i = 0; i < e / 2; ++i) t *= p;
    }
    return {s, t};
}

Rational rational_reconstruct(const Real& x, const Integer& bound, const Real& tol) {
    if (bound < 1) throw PreconditionViolated("denominator bound must be positive");
    const mpfr_prec_t bits = x.precision();
    Real limit = Real(1L, bits) / (Real(bound, bits) * Real(bound, bits) * 2L);
    if (!(tol < limit))
        throw PreconditionViolated("tolerance " + tol.str(6) + " not below 1/(2·bound²)");

    Integer p_prev = 1, q_prev = 0, p_prev2 = 0, q_prev2 = 1;
    Real y = x;
    for (int step = 0; step < 4 * static_cast<int>(bits); ++step) {
        Integer a = y.floor_integer();
        Integer p = a * p_prev + p_prev2, q = a * q_prev + q_prev2;
        if (q > bound) break;
        Rational cand(p, q);
        cand.canonicalize();
        if (abs(x - Real(cand, bits)) <= tol) return cand;
        Real frac = y - Real(a, bits);
        if (frac.is_zero()) break;
        y = Real(1L, bits) / frac;
        p_prev2 = p_prev;
        q_prev2 = q_prev;
        p_prev = p;
        q_prev = q;
    }
    throw NoRationalInRange("no rational with denominator <= " + bound.get_str() +
                            " within " + tol.str(6) + " of " + x.str(25));
}

std::string to_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_from_string(const std::string& s) {
    Rational q(s);
    q.canonicalize();
    return q;
}

Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

long mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

long inverse_mod(long a, long m) {
    Integer r, aa(mod(a, m)), mm(m);
    if (!mpz_invert(r.get_mpz_t(), aa.get_mpz_t(), mm.get_mpz_t()))
        throw PreconditionViolated("no inverse of " + std::to_string(a) + " mod " + std::to_string(m));
    return r.get_si();
}

}  // namespace bsd2
