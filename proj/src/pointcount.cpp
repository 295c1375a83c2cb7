#include "pointcount.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

namespace bsd2::detail {

namespace {

using u64 = std::uint64_t;

struct Field {
    u64 p;
    u64 mul(u64 a, u64 b) const { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p); }
    u64 add(u64 a, u64 b) const {
        const u64 s = a + b;
        return s >= p ? s - p : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p - b; }
    u64 pow(u64 b, u64 e) const {
        u64 r = 1;
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }
    u64 inv(u64 a) const { return pow(a, p - 2); }
    int legendre(u64 a) const {
        if (a == 0) return 0;
        return pow(a, (p - 1) / 2) == 1 ? 1 : -1;
    }
    // Tonelli–Shanks; a must be a nonzero square.
    u64 sqrt(u64 a) const {
        if (p % 4 == 3) return pow(a, (p + 1) / 4);
        u64 q = p - 1, s = 0;
        while (q % 2 == 0) {
            q /= 2;
            ++s;
        }
        u64 z = 2;
        while (legendre(z) != -1) ++z;
        u64 m = s, c = pow(z, q), t = pow(a, q), r = pow(a, (q + 1) / 2);
        while (t != 1) {
            u64 i = 0, tt = t;
            while (tt != 1) {
                tt = mul(tt, tt);
                ++i;
            }
            u64 b = c;
            for (u64 j = 0; j + 1 < m - i; ++j) b = mul(b, b);
            m = i;
            c = mul(b, b);
            t = mul(t, c);
            r = mul(r, b);
        }
        return r;
    }
};

struct Point {
    u64 x = 0, y = 0;
    bool inf = true;
    bool operator==(const Point& o) const { return inf == o.inf && (inf || (x == o.x && y == o.y)); }
};

struct Curve {
    Field F;
    u64 a, b;

    Point neg(const Point& P) const { return P.inf ? P : Point{P.x, F.sub(0, P.y), false}; }

    Point add(const Point& P, const Point& Q) const {
        if (P.inf) return Q;
        if (Q.inf) return P;
        u64 lambda;
        if (P.x == Q.x) {
            if (P.y != Q.y || P.y == 0) return {};
            const u64 num = F.add(F.mul(3, F.mul(P.x, P.x)), a);
            lambda = F.mul(num, F.inv(F.mul(2, P.y)));
        } else {
            lambda = F.mul(F.sub(Q.y, P.y), F.inv(F.sub(Q.x, P.x)));
        }
        const u64 x3 = F.sub(F.sub(F.mul(lambda, lambda), P.x), Q.x);
        const u64 y3 = F.sub(F.mul(lambda, F.sub(P.x, x3)), P.y);
        return {x3, y3, false};
    }

    Point mul(Point P, u64 k) const {
        Point R;
        while (k) {
            if (k & 1) R = add(R, P);
            P = add(P, P);
            k >>= 1;
        }
        return R;
    }

    Point random_point(std::mt19937_64& rng) const {
        std::uniform_int_distribution<u64> dist(0, F.p - 1);
        for (;;) {
            const u64 x = dist(rng);
            const u64 rhs = F.add(F.mul(F.add(F.mul(x, x), a), x), b);
            if (rhs == 0) return {x, 0, false};
            if (F.legendre(rhs) == 1) return {x, F.sqrt(rhs), false};
        }
    }

    // All m in [lo, hi] with m·P = O.
    std::vector<long> annihilators(const Point& P, long lo, long hi) const {
        const long width = hi - lo + 1;
        const long s = static_cast<long>(std::ceil(std::sqrt(static_cast<double>(width))));
        std::unordered_multimap<u64, long> baby;
        std::vector<Point> steps(static_cast<size_t>(s));
        Point J;
        for (long j = 0; j < s; ++j) {
            steps[j] = J;
            if (!J.inf) baby.emplace(J.x, j);
            J = add(J, P);
        }
        const Point giant = mul(P, static_cast<u64>(s));
        Point R = mul(P, static_cast<u64>(lo));
        std::vector<long> out;
        for (long i = 0; lo + i * s <= hi; ++i) {
            // (lo + i·s + j)·P = O  ⇔  j·P = −R
            const Point target = neg(R);
            if (target.inf) {
                for (long j = 0; j < s; ++j)
                    if (steps[j].inf) out.push_back(lo + i * s + j);
            } else {
                auto range = baby.equal_range(target.x);
                for (auto it = range.first; it != range.second; ++it)
                    if (steps[it->second] == target) out.push_back(lo + i * s + it->second);
            }
            R = add(R, giant);
        }
        std::vector<long> kept;
        for (long m : out)
            if (m <= hi) kept.push_back(m);
        return kept;
    }
};

}  // namespace

std::optional<long> bsgs_point_count(long a, long b, long p) {
    const Field F{static_cast<u64>(p)};
    const u64 am = static_cast<u64>(((a % p) + p) % p), bm = static_cast<u64>(((b % p) + p) % p);
    const Curve E{F, am, bm};
    u64 d = 2;
    while (F.legendre(d) != -1) ++d;
    const Curve twist{F, F.mul(am, F.mul(d, d)), F.mul(bm, F.mul(d, F.mul(d, d)))};

    const long spread = static_cast<long>(std::floor(2 * std::sqrt(static_cast<double>(p)))) + 1;
    const long lo = p + 1 - spread, hi = p + 1 + spread;
    std::vector<bool> alive(static_cast<size_t>(hi - lo + 1), true);
    std::mt19937_64 rng(static_cast<u64>(p) * 0x9E3779B97F4A7C15ULL);
    for (int attempt = 0; attempt < 64; ++attempt) {
        const bool on_twist = attempt % 2 == 1;
        const Curve& C = on_twist ? twist : E;
        const Point P = C.random_point(rng);
        // Orders of E and its twist sum to 2p + 2.
        const long tlo = 2 * p + 2 - hi, thi = 2 * p + 2 - lo;
        std::vector<bool> hit(alive.size(), false);
        for (long m : C.annihilators(P, on_twist ? tlo : lo, on_twist ? thi : hi)) {
            const long n = on_twist ? 2 * p + 2 - m : m;
            hit[static_cast<size_t>(n - lo)] = true;
        }
        long survivors = 0, last = 0;
        for (size_t i = 0; i < alive.size(); ++i) {
            alive[i] = alive[i] && hit[i];
            if (alive[i]) {
                ++survivors;
                last = lo + static_cast<long>(i);
            }
        }
        if (survivors == 1) {
            if (last < p + 1 - 2 * std::sqrt(static_cast<double>(p)) - 1e-9 ||
                last > p + 1 + 2 * std::sqrt(static_cast<double>(p)) + 1e-9)
                return std::nullopt;
            return last;
        }
        if (survivors == 0) return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace bsd2::detail
