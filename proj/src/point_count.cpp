#include <algorithm>
#include <cstdint>
#include <iterator>
#include <random>
#include <unordered_map>
#include <vector>

#include "heegner/ec_arith.hpp"
#include "heegner/error.hpp"

namespace heegner {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }
u64 addmod(u64 a, u64 b, u64 p) { return a >= p - b ? a - (p - b) : a + b; }
u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + (p - b); }

u64 powmod(u64 a, u64 e, u64 p)
{
    u64 r = 1 % p;
    while (e) {
        if (e & 1)
            r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 p)
{
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a % p);
    while (nr) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1)
        throw DomainError("non-invertible residue");
    return static_cast<u64>(t < 0 ? t + static_cast<std::int64_t>(p) : t);
}

u64 reduce(const mpz_class & v, u64 p)
{
    return mpz_fdiv_ui(v.get_mpz_t(), p);
}

// Legendre symbol by Euler's criterion.
int legendre(u64 a, u64 p)
{
    a %= p;
    if (a == 0)
        return 0;
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

// Tonelli-Shanks; a must be a non-zero square.
u64 sqrtmod(u64 a, u64 p)
{
    if (p % 4 == 3)
        return powmod(a, (p + 1) / 4, p);
    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = 2;
    while (legendre(z, p) != -1)
        ++z;
    u64 m = static_cast<u64>(s);
    u64 c = powmod(z, q, p);
    u64 t = powmod(a, q, p);
    u64 r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, t2 = t;
        while (t2 != 1) {
            t2 = mulmod(t2, t2, p);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + i + 1 < m; ++j)
            b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

// Affine arithmetic on y^2 = x^3 + A x + B over F_p.
struct ShortPoint
{
    u64 x = 0, y = 0;
    bool inf = true;
};

struct ShortCurve
{
    u64 p, A, B;

    ShortPoint add(const ShortPoint & P, const ShortPoint & Q) const
    {
        if (P.inf)
            return Q;
        if (Q.inf)
            return P;
        u64 lambda;
        if (P.x == Q.x) {
            if (addmod(P.y, Q.y, p) == 0)
                return {};
            u64 num = addmod(mulmod(3, mulmod(P.x, P.x, p), p), A, p);
            lambda = mulmod(num, invmod(mulmod(2, P.y, p), p), p);
        } else {
            lambda = mulmod(submod(Q.y, P.y, p), invmod(submod(Q.x, P.x, p), p), p);
        }
        u64 x3 = submod(submod(mulmod(lambda, lambda, p), P.x, p), Q.x, p);
        u64 y3 = submod(mulmod(lambda, submod(P.x, x3, p), p), P.y, p);
        return {x3, y3, false};
    }

    ShortPoint mul(u64 k, ShortPoint P) const
    {
        ShortPoint acc;
        while (k) {
            if (k & 1)
                acc = add(acc, P);
            P = add(P, P);
            k >>= 1;
        }
        return acc;
    }

    u64 rhs(u64 x) const { return addmod(mulmod(addmod(mulmod(x, x, p), A, p), x, p), B, p); }

    ShortPoint random_point(std::mt19937_64 & rng) const
    {
        std::uniform_int_distribution<u64> dist(0, p - 1);
        for (;;) {
            u64 x = dist(rng);
            u64 r = rhs(x);
            if (r == 0)
                return {x, 0, false};
            if (legendre(r, p) == 1) {
                u64 y = sqrtmod(r, p);
                if (dist(rng) & 1)
                    y = p - y;
                return {x, y, false};
            }
        }
    }
};

// All m in [lo, hi] with m P = O.
std::vector<u64> annihilators(const ShortCurve & C, const ShortPoint & P, u64 lo, u64 hi)
{
    u64 width = hi - lo + 1;
    u64 s = 1;
    while (s * s < width)
        ++s;
    std::unordered_multimap<u64, std::pair<u64, u64>> baby; // x -> (j, y)
    baby.reserve(s * 2);
    std::vector<u64> zeros; // j with j P = O
    ShortPoint jP;
    for (u64 j = 0; j < s; ++j) {
        if (jP.inf)
            zeros.push_back(j);
        else
            baby.emplace(jP.x, std::make_pair(j, jP.y));
        jP = C.add(jP, P);
    }
    std::vector<u64> out;
    ShortPoint T = C.mul(lo, P);
    const ShortPoint G = C.mul(s, P);
    for (u64 m = lo; m <= hi; m += s) {
        // (m + j) P = O  <=>  j P = -T
        if (T.inf) {
            for (u64 j : zeros)
                if (m + j <= hi)
                    out.push_back(m + j);
        } else {
            u64 negy = T.y == 0 ? 0 : C.p - T.y;
            auto range = baby.equal_range(T.x);
            for (auto it = range.first; it != range.second; ++it)
                if (it->second.second == negy && m + it->second.first <= hi)
                    out.push_back(m + it->second.first);
        }
        T = C.add(T, G);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0)
            return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

bool has_good_reduction(const WeierstrassCurve & E, std::uint64_t p)
{
    return mpz_divisible_ui_p(E.discriminant().get_mpz_t(), p) == 0;
}

std::int64_t count_points_enumerate(const WeierstrassCurve & E, std::uint64_t p)
{
    if (!is_prime(p))
        throw DomainError(std::to_string(p) + " is not prime");
    if (p == 2 || p == 3) {
        const u64 a1 = reduce(E.a1(), p), a2 = reduce(E.a2(), p), a3 = reduce(E.a3(), p), a4 = reduce(E.a4(), p),
                  a6 = reduce(E.a6(), p);
        std::int64_t n = 1;
        for (u64 x = 0; x < p; ++x)
            for (u64 y = 0; y < p; ++y) {
                u64 lhs = (y * y + a1 * x * y + a3 * y) % p;
                u64 rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p;
                if (lhs == rhs)
                    ++n;
            }
        return n;
    }
    // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    const u64 b2 = reduce(E.b2(), p), b4 = reduce(E.b4(), p), b6 = reduce(E.b6(), p);
    std::vector<signed char> chi(p, -1);
    chi[0] = 0;
    for (u64 t = 1; t <= p / 2; ++t)
        chi[mulmod(t, t, p)] = 1;
    std::int64_t sum = 0;
    for (u64 x = 0; x < p; ++x) {
        u64 f = addmod(mulmod(addmod(mulmod(addmod(mulmod(4, x, p), b2, p), x, p), mulmod(2, b4, p), p), x, p), b6, p);
        sum += chi[f];
    }
    return static_cast<std::int64_t>(p) + 1 + sum;
}

std::int64_t count_points_bsgs(const WeierstrassCurve & E, std::uint64_t p)
{
    if (p < 5 || !is_prime(p))
        throw DomainError("baby-step giant-step needs a prime p >= 5");
    if (!has_good_reduction(E, p))
        throw DomainError("bad reduction at " + std::to_string(p));
    // y^2 = x^3 - 27 c4 x - 54 c6
    ShortCurve C{p, reduce(-27 * E.c4(), p), reduce(-54 * E.c6(), p)};
    u64 d = 2;
    while (legendre(d, p) != -1)
        ++d;
    ShortCurve T{p, mulmod(C.A, mulmod(d, d, p), p), mulmod(C.B, mulmod(d, mulmod(d, d, p), p), p)};

    u64 w = 0;
    while ((w + 1) * (w + 1) <= 4 * p)
        ++w;
    const u64 lo = p + 1 - w, hi = p + 1 + w;
    std::vector<u64> candidates;
    for (u64 m = lo; m <= hi; ++m)
        candidates.push_back(m);

    std::mt19937_64 rng(p * 0x9E3779B97F4A7C15ULL);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<u64> keep;
        if (attempt % 2 == 0) {
            ShortPoint P = C.random_point(rng);
            std::vector<u64> ok = annihilators(C, P, lo, hi);
            std::set_intersection(candidates.begin(), candidates.end(), ok.begin(), ok.end(), std::back_inserter(keep));
        } else {
            // #E + #E' = 2p + 2
            ShortPoint P = T.random_point(rng);
            std::vector<u64> ok = annihilators(T, P, lo, hi);
            for (u64 m : candidates)
                if (std::binary_search(ok.begin(), ok.end(), 2 * p + 2 - m))
                    keep.push_back(m);
        }
        candidates.swap(keep);
        if (candidates.size() == 1)
            return static_cast<std::int64_t>(candidates.front());
        if (candidates.empty())
            break;
    }
    throw PrecisionError("point count did not converge at p = " + std::to_string(p));
}

std::int64_t count_points_mod_p(const WeierstrassCurve & E, std::uint64_t p)
{
    if (!is_prime(p))
        throw DomainError(std::to_string(p) + " is not prime");
    if (!has_good_reduction(E, p))
        throw DomainError("bad reduction at " + std::to_string(p));
    if (p < point_count_enumeration_limit)
        return count_points_enumerate(E, p);
    return count_points_bsgs(E, p);
}

int a_p_bad(const WeierstrassCurve & E, std::uint64_t p)
{
    if (!is_prime(p))
        throw DomainError(std::to_string(p) + " is not prime");
    if (has_good_reduction(E, p))
        throw DomainError("good reduction at " + std::to_string(p));
    if (mpz_divisible_ui_p(E.c4().get_mpz_t(), p))
        return 0;

    // Multiplicative: locate the node and test whether its tangent cone
    // splits over F_p.
    if (p == 2) {
        const u64 a1 = reduce(E.a1(), 2), a2 = reduce(E.a2(), 2), a3 = reduce(E.a3(), 2), a4 = reduce(E.a4(), 2),
                  a6 = reduce(E.a6(), 2);
        for (u64 x = 0; x < 2; ++x)
            for (u64 y = 0; y < 2; ++y) {
                u64 F = (y * y + a1 * x * y + a3 * y + x * x * x + a2 * x * x + a4 * x + a6) % 2;
                u64 Fx = (a1 * y + 3 * x * x + 2 * a2 * x + a4) % 2;
                u64 Fy = (a1 * x + a3) % 2;
                if (F == 0 && Fx == 0 && Fy == 0) {
                    // quadratic part Y^2 + a1 XY + (3x + a2) X^2 at the node
                    u64 c = (3 * x + a2) % 2;
                    return c == 0 ? 1 : -1;
                }
            }
        throw InconsistencyError("no singular point found mod 2");
    }

    // Odd p: the double root x0 of f = 4x^3 + b2 x^2 + 2 b4 x + b6 is the
    // root of gcd(f, f'); the node is split iff f''(x0)/2 = 12 x0 + b2 is a
    // square.
    std::vector<u64> f{reduce(E.b6(), p), reduce(2 * E.b4(), p), reduce(E.b2(), p), 4 % p};
    std::vector<u64> g{reduce(2 * E.b4(), p), reduce(2 * E.b2(), p), 12 % p};
    auto trim = [](std::vector<u64> & v) {
        while (!v.empty() && v.back() == 0)
            v.pop_back();
    };
    trim(f);
    trim(g);
    while (!g.empty()) {
        // f mod g
        u64 inv = invmod(g.back(), p);
        while (f.size() >= g.size()) {
            u64 coef = mulmod(f.back(), inv, p);
            std::size_t shift = f.size() - g.size();
            for (std::size_t i = 0; i < g.size(); ++i)
                f[shift + i] = submod(f[shift + i], mulmod(coef, g[i], p), p);
            trim(f);
            if (f.empty())
                break;
        }
        std::swap(f, g);
    }
    if (f.size() != 2)
        throw InconsistencyError("multiplicative reduction without a unique double root mod " + std::to_string(p));
    u64 x0 = mulmod(p - f[0], invmod(f[1], p), p);
    u64 kappa = addmod(mulmod(12 % p, x0, p), reduce(E.b2(), p), p);
    int chi = legendre(kappa, p);
    if (chi == 0)
        throw InconsistencyError("degenerate tangent cone at a node mod " + std::to_string(p));
    return chi;
}

std::int64_t a_p(const WeierstrassCurve & E, std::uint64_t p)
{
    if (!has_good_reduction(E, p))
        return a_p_bad(E, p);
    return static_cast<std::int64_t>(p) + 1 - count_points_mod_p(E, p);
}

CoefficientCache an_table(const WeierstrassCurve & E, std::size_t M, std::string label)
{
    CoefficientCache out{std::move(label), std::vector<std::int64_t>(M, 0)};
    if (M == 0)
        return out;
    std::vector<std::uint32_t> spf(M + 1, 0);
    for (std::size_t i = 2; i <= M; ++i) {
        if (spf[i])
            continue;
        for (std::size_t j = i; j <= M; j += i)
            if (!spf[j])
                spf[j] = static_cast<std::uint32_t>(i);
    }
    auto & a = out.coefficients;
    auto at = [&](std::size_t n) -> std::int64_t & { return a[n - 1]; };
    at(1) = 1;
    for (std::size_t n = 2; n <= M; ++n) {
        std::size_t p = spf[n];
        std::size_t pk = p, m = n / p;
        while (m % p == 0) {
            m /= p;
            pk *= p;
        }
        if (m > 1) {
            at(n) = at(pk) * at(m);
        } else if (pk == p) {
            at(n) = a_p(E, p);
        } else {
            bool good = has_good_reduction(E, p);
            std::int64_t v = at(p) * at(pk / p);
            if (good)
                v -= static_cast<std::int64_t>(p) * at(pk / p / p);
            at(n) = v;
        }
    }
    return out;
}

} // namespace heegner
