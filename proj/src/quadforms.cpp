#include "heegner/quadforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "heegner/ec_arith.hpp"
#include "heegner/error.hpp"

namespace heegner {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

i64 floor_div(i64 a, i64 b)
{
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

i64 mod(i64 a, i64 m)
{
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

i64 mod(i128 a, i64 m)
{
    i128 r = a % m;
    return static_cast<i64>(r < 0 ? r + m : r);
}

// (g, u, v) with u a + v b = g = gcd(a, b) >= 0.
std::tuple<i64, i64, i64> ext_gcd(i64 a, i64 b)
{
    i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        i64 q = floor_div(old_r, r);
        std::tie(old_r, r) = std::make_tuple(r, old_r - q * r);
        std::tie(old_s, s) = std::make_tuple(s, old_s - q * s);
        std::tie(old_t, t) = std::make_tuple(t, old_t - q * t);
    }
    if (old_r < 0)
        return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}

i64 isqrt(i64 n)
{
    if (n < 0)
        throw DomainError("square root of a negative number");
    i64 s = static_cast<i64>(std::sqrt(static_cast<long double>(n)));
    while (s * s > n)
        --s;
    while ((s + 1) * (s + 1) <= n)
        ++s;
    return s;
}

i64 narrow(i128 v)
{
    if (v > INT64_MAX || v < INT64_MIN)
        throw DomainError("quadratic form coefficient overflows 64 bits");
    return static_cast<i64>(v);
}

void require_discriminant(i64 D)
{
    if (!is_discriminant(D))
        throw DomainError(std::to_string(D) + " is not a discriminant (must be 0 or 1 mod 4 and not a square)");
}

} // namespace

bool QuadForm::is_primitive() const
{
    return std::gcd(std::gcd(A, B), C) == 1;
}

mpz_class QuadForm::operator()(const mpz_class & x, const mpz_class & y) const
{
    return mpz_class(A) * x * x + mpz_class(B) * x * y + mpz_class(C) * y * y;
}

std::ostream & operator<<(std::ostream & os, const QuadForm & f)
{
    return os << "[" << f.A << "," << f.B << "," << f.C << "]";
}

std::string to_string(const QuadForm & f)
{
    std::ostringstream os;
    os << f;
    return os.str();
}

QuadForm act(const QuadForm & f, i64 p, i64 q, i64 r, i64 s)
{
    const i128 A = f.A, B = f.B, C = f.C;
    return {narrow(A * p * p + B * p * r + C * r * r), narrow(2 * A * p * q + B * (i128(p) * s + i128(q) * r) + 2 * C * r * s),
            narrow(A * q * q + B * q * s + C * s * s)};
}

bool is_discriminant(i64 D)
{
    i64 m = mod(D, 4);
    if (m != 0 && m != 1)
        return false;
    if (D >= 0) {
        i64 s = isqrt(D);
        if (s * s == D)
            return false;
    }
    return true;
}

bool is_fundamental_discriminant(i64 D)
{
    if (!is_discriminant(D))
        return false;
    auto squarefree = [](i64 n) {
        n = n < 0 ? -n : n;
        for (i64 p = 2; p * p <= n; ++p)
            if (n % (p * p) == 0)
                return false;
        return true;
    };
    if (mod(D, 4) == 1)
        return squarefree(D);
    i64 m = D / 4;
    i64 r = mod(m, 4);
    return (r == 2 || r == 3) && squarefree(m);
}

int kronecker(i64 a, i64 n)
{
    if (n == 0)
        return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0)
            result = -result;
    }
    // factor 2 out of n
    int v = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++v;
    }
    if (v > 0) {
        if (a % 2 == 0)
            return 0;
        i64 am8 = mod(a, 8);
        if ((v & 1) && (am8 == 3 || am8 == 5))
            result = -result;
    }
    // Jacobi symbol (a / n), n odd positive
    a = mod(a, n);
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 n8 = n % 8;
            if (n8 == 3 || n8 == 5)
                result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3)
            result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

QuadForm reduce_definite(const QuadForm & f)
{
    const i64 D = f.discriminant();
    if (D >= 0 || f.A <= 0)
        throw DomainError("reduce_definite needs a positive definite form, got " + to_string(f));
    if (!f.is_primitive())
        throw DomainError("form " + to_string(f) + " is not primitive");
    i64 A = f.A, B = f.B, C = f.C;
    for (;;) {
        // B into (-A, A]
        i64 k = floor_div(A - B, 2 * A);
        if (k != 0) {
            i128 nb = i128(B) + i128(2) * A * k;
            B = narrow(nb);
            C = narrow((i128(B) * B - D) / (4 * i128(A)));
        }
        if (A > C || (A == C && B < 0)) {
            std::swap(A, C);
            B = -B;
            continue;
        }
        break;
    }
    if ((B == -A || A == C) && B < 0)
        B = -B;
    return {A, B, C};
}

std::vector<QuadForm> class_group(i64 D)
{
    if (D >= 0)
        throw DomainError("class_group needs a negative discriminant");
    require_discriminant(D);
    std::vector<QuadForm> out;
    const i64 amax = isqrt(-D / 3);
    for (i64 a = 1; a <= amax; ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            i64 t = b * b - D;
            if (t % (4 * a) != 0)
                continue;
            i64 c = t / (4 * a);
            if (c < a || (a == c && b < 0))
                continue;
            QuadForm f{a, b, c};
            if (f.is_primitive())
                out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

QuadForm principal_form(i64 D)
{
    require_discriminant(D);
    i64 b = mod(D, 2);
    return {1, b, (b * b - D) / 4};
}

QuadForm compose(const QuadForm & f, const QuadForm & g)
{
    if (f.discriminant() != g.discriminant())
        throw DomainError("compose: discriminants differ (" + to_string(f) + ", " + to_string(g) + ")");
    if (!f.is_primitive() || !g.is_primitive())
        throw DomainError("compose: forms must be primitive");
    const i64 D = f.discriminant();
    QuadForm f1 = f, f2 = g;
    if (f1.A > f2.A)
        std::swap(f1, f2);
    const i64 a1 = f1.A, b1 = f1.B, a2 = f2.A, b2 = f2.B, c2 = f2.C;
    const i64 s = (b1 + b2) / 2;
    const i64 n = b2 - s;
    i64 y1, d;
    if (a2 % a1 == 0) {
        y1 = 0;
        d = a1;
    } else {
        auto [gg, u, v] = ext_gcd(a2, a1);
        (void)v;
        d = gg;
        y1 = u;
    }
    i64 x2, y2, d1;
    if (s % d == 0) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        auto [gg, u, v] = ext_gcd(s, d);
        d1 = gg;
        x2 = u;
        y2 = -v;
    }
    const i64 v1 = a1 / d1, v2 = a2 / d1;
    const i64 r = static_cast<i64>(((i128(y1) * y2 * n - i128(x2) * c2) % v1 + v1) % v1);
    const i128 b3 = i128(b2) + i128(2) * v2 * r;
    const i128 a3 = i128(v1) * v2;
    const i128 c3 = (b3 * b3 - D) / (4 * a3);
    return reduce_definite({narrow(a3), narrow(b3), narrow(c3)});
}

HeegnerPair make_heegner_pair(i64 N, i64 D, i64 r)
{
    if (N < 1)
        throw DomainError("level must be positive");
    if (D >= 0 || !is_fundamental_discriminant(D))
        throw DomainError(std::to_string(D) + " is not a negative fundamental discriminant");
    const i64 rr = mod(r, 2 * N);
    if (mod(i128(rr) * rr - D, 4 * N) != 0)
        throw DomainError("Heegner condition fails: " + std::to_string(r) + "^2 - (" + std::to_string(D) +
                          ") = " + std::to_string(static_cast<long long>(i128(r) * r - D)) + " is not divisible by 4N = " +
                          std::to_string(4 * N));
    return {N, D, rr, mod(-rr, 2 * N)};
}

namespace {

// An SL2(Z)-equivalent form whose first coefficient is coprime to N.
QuadForm coprime_first(const QuadForm & f, i64 N)
{
    if (std::gcd(f.A, N) == 1)
        return f;
    for (i64 bound = 1; bound < 1000; ++bound) {
        for (i64 x = -bound; x <= bound; ++x)
            for (i64 y = 0; y <= bound; ++y) {
                if (std::max(std::abs(x), y) != bound || std::gcd(x, y) != 1)
                    continue;
                mpz_class v = f(x, y);
                if (v <= 0 || gcd(v, mpz_class(N)) != 1)
                    continue;
                // complete (x, y) to [[x, q], [y, s]] with x s - q y = 1
                auto [g, u, w] = ext_gcd(x, y);
                (void)g;
                // u x + w y = 1  ->  s = u, q = -w
                return act(f, x, -w, y, u);
            }
    }
    throw DomainError("no value coprime to the level represented by " + to_string(f));
}

} // namespace

std::vector<QuadForm> heegner_forms(const HeegnerPair & pair)
{
    const i64 N = pair.N, D = pair.D, r = pair.r;
    if (mod(i128(r) * r - D, 4 * N) != 0)
        throw DomainError("Heegner condition fails for (" + std::to_string(D) + ", " + std::to_string(r) + ")");
    std::vector<QuadForm> out;
    for (const QuadForm & red : class_group(D)) {
        QuadForm f = coprime_first(red, N);
        const i64 a = f.A, b = f.B;
        // B = b (mod 2a), B = r (mod 2N); the moduli share exactly the factor 2
        // and b = r = D (mod 2).
        const i64 m = 2 * a * N;
        auto [g, u, v] = ext_gcd(a, N); // u a + v N = 1
        (void)g;
        // B = b + 2a t with 2a t = r - b (mod 2N)  ->  t = (r - b)/2 * u (mod N)
        const i64 t = mod(i128((r - b) / 2) * u, N);
        i64 B = mod(i128(b) + i128(2) * a * t, m);
        if (B > a * N)
            B -= m;
        const i128 num = i128(B) * B - D;
        const i64 C = narrow(num / (4 * i128(a) * N));
        out.push_back({narrow(i128(a) * N), B, C});
    }
    return out;
}

std::vector<HeegnerPair> heegner_pairs(i64 N, i64 Dmax)
{
    if (N < 1)
        throw DomainError("level must be positive");
    std::vector<HeegnerPair> out;
    for (i64 d = 3; d <= Dmax; ++d) {
        const i64 D = -d;
        if (!is_fundamental_discriminant(D))
            continue;
        for (i64 r = 0; r <= N; ++r)
            if (mod(i128(r) * r - D, 4 * N) == 0)
                out.push_back({N, D, r, mod(-r, 2 * N)});
    }
    return out;
}

std::pair<mpz_class, mpz_class> pell_fundamental(i64 Delta)
{
    if (Delta <= 0)
        throw DomainError("Pell equation needs a positive Delta");
    const i64 a0 = isqrt(Delta);
    if (a0 * a0 == Delta)
        throw DomainError("Pell equation needs a non-square Delta");
    // continued fraction of sqrt(Delta); every solution is a convergent
    mpz_class m = 0, d = 1, a = a0;
    mpz_class p_prev = 1, p = a0, q_prev = 0, q = 1;
    for (;;) {
        if (p * p - Delta * q * q == 1)
            return {p, q};
        m = d * a - m;
        d = (Delta - m * m) / d;
        a = (a0 + m) / d;
        mpz_class pn = a * p + p_prev, qn = a * q + q_prev;
        p_prev = p;
        p = pn;
        q_prev = q;
        q = qn;
    }
}

Automorph fundamental_automorph(const QuadForm & Q, i64 N)
{
    if (N < 1 || Q.A % N != 0)
        throw DomainError("fundamental_automorph needs N | A, got " + to_string(Q) + " and N = " + std::to_string(N));
    const i64 Delta = Q.discriminant();
    if (Delta <= 0)
        throw DomainError("fundamental_automorph needs an indefinite form");
    auto [x, y] = pell_fundamental(Delta);
    Automorph M;
    M.x = x;
    M.y = y;
    M.Delta = Delta;
    M.a = x - Q.B * y;
    M.b = -2 * Q.C * y;
    M.c = 2 * Q.A * y;
    M.d = x + Q.B * y;
    return M;
}

int genus_character(i64 D0, const QuadForm & Q, i64 N)
{
    const i64 Delta = Q.discriminant();
    if (N < 1 || Q.A % N != 0)
        throw DomainError("genus_character needs N | A");
    if (D0 == 0 || Delta % D0 != 0 || (D0 != 1 && !is_fundamental_discriminant(D0)))
        throw DomainError(std::to_string(D0) + " is not a fundamental discriminant dividing " + std::to_string(Delta));
    const i64 D1 = Delta / D0;
    if (mod(D1, 4) != 0 && mod(D1, 4) != 1)
        throw DomainError(std::to_string(Delta) + " / " + std::to_string(D0) + " is not a discriminant");
    const i64 g = std::gcd(std::gcd(Q.A / N, Q.B), std::gcd(Q.C, D0));
    if (g > 1)
        return 0;
    if (D0 == 1)
        return 1;
    for (i64 Np = 1; Np <= N; ++Np) {
        if (N % Np != 0)
            continue;
        const QuadForm F{Q.A / Np, Q.B, narrow(i128(Q.C) * Np)};
        // search represented values, widening the box until one is coprime
        for (i64 bound = 1; bound <= 10000; bound *= 2) {
            for (i64 x = -bound; x <= bound; ++x)
                for (i64 y = 0; y <= bound; ++y) {
                    if (std::gcd(x, y) != 1)
                        continue;
                    mpz_class n = F(x, y);
                    if (n <= 0 || gcd(n, mpz_class(D0)) != 1)
                        continue;
                    // (D0 / n) is periodic in n > 0 with period |D0|
                    mpz_class n_mod = n % std::abs(D0);
                    return kronecker(D0, n_mod.get_si());
                }
        }
    }
    throw DomainError("no represented value coprime to " + std::to_string(D0));
}

namespace {

std::vector<QuadForm> reduced_indefinite(i64 Delta)
{
    const i64 s = isqrt(Delta);
    std::vector<QuadForm> out;
    for (i64 b = 1; b <= s; ++b) {
        if (mod(b - Delta, 2) != 0)
            continue;
        const i64 ac = (b * b - Delta) / 4; // negative
        const i64 lo = s + 1 - b, hi = s + b; // range of 2|a|
        for (i64 a = 1; 2 * a <= hi; ++a) {
            if (2 * a < lo || (-ac) % a != 0)
                continue;
            for (i64 sg : {1, -1}) {
                QuadForm f{sg * a, b, ac / (sg * a)};
                if (f.is_primitive())
                    out.push_back(f);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

QuadForm rho(const QuadForm & f, i64 Delta, i64 s)
{
    const i64 c = f.C;
    const i64 m = 2 * std::abs(c);
    const i64 b = s - mod(i128(s) + f.B, m);
    return {c, b, narrow((i128(b) * b - Delta) / (4 * i128(c)))};
}

} // namespace

std::vector<std::vector<QuadForm>> reduction_cycles(i64 Delta)
{
    if (Delta <= 0)
        throw DomainError("reduction cycles need a positive discriminant");
    require_discriminant(Delta);
    const i64 s = isqrt(Delta);
    std::vector<QuadForm> forms = reduced_indefinite(Delta);
    std::set<QuadForm> seen;
    std::vector<std::vector<QuadForm>> cycles;
    for (const QuadForm & f : forms) {
        if (seen.count(f))
            continue;
        std::vector<QuadForm> cyc;
        QuadForm g = f;
        do {
            if (!seen.insert(g).second)
                throw InconsistencyError("reduction map is not a permutation at " + to_string(g));
            cyc.push_back(g);
            g = rho(g, Delta, s);
        } while (!(g == f));
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

std::size_t narrow_class_number(i64 Delta)
{
    return reduction_cycles(Delta).size();
}

std::size_t indefinite_class_number(i64 Delta)
{
    auto cycles = reduction_cycles(Delta);
    std::map<QuadForm, std::size_t> where;
    for (std::size_t i = 0; i < cycles.size(); ++i)
        for (const auto & f : cycles[i])
            where[f] = i;
    std::vector<std::size_t> parent(cycles.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i)
            i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        const QuadForm & f = cycles[i].front();
        std::size_t j = where.at({-f.A, f.B, -f.C});
        parent[find(i)] = find(j);
    }
    std::size_t classes = 0;
    for (std::size_t i = 0; i < cycles.size(); ++i)
        classes += find(i) == i;
    return classes;
}

std::int64_t nu(i64 N)
{
    if (N < 2 || !is_prime(static_cast<std::uint64_t>(N)))
        throw DomainError("nu is defined here for prime N, got " + std::to_string(N));
    const i64 h4N = static_cast<i64>(indefinite_class_number(4 * N));
    if (N % 4 == 1)
        return (h4N + static_cast<i64>(indefinite_class_number(N))) / 2;
    return (h4N + 1) / 2;
}

} // namespace heegner
