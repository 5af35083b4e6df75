#include <algorithm>
#include <vector>

#include "heegner/ec_arith.hpp"
#include "heegner/error.hpp"
#include "heegner/modparam.hpp"

namespace heegner {

namespace {

long valuation(mpz_class n, const mpz_class & p)
{
    if (n == 0)
        return 1L << 30;
    long v = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        n /= p;
        ++v;
    }
    return v;
}

long valuation(const mpq_class & x, const mpz_class & p)
{
    if (x == 0)
        return 1L << 30;
    return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

std::vector<mpz_class> prime_factors(mpz_class n)
{
    n = abs(n);
    std::vector<mpz_class> out;
    for (unsigned long p = 2; p < 1000000 && mpz_class(p) * p <= n; ++p) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            out.emplace_back(p);
            while (mpz_divisible_ui_p(n.get_mpz_t(), p))
                n /= p;
        }
    }
    if (n > 1) {
        if (mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
            throw PrecisionError("could not factor " + n.get_str());
        out.push_back(n);
    }
    return out;
}

} // namespace

HeightValue naive_height(const RationalPoint & P, Precision precision_bits)
{
    ProjectiveTriple t = P.projective();
    mpz_class m = std::max({mpz_class(abs(t.x)), mpz_class(abs(t.y)), mpz_class(abs(t.z))});
    return {log_abs(m, precision_bits), precision_bits};
}

HeightValue canonical_height(const WeierstrassCurve & E, const RationalPoint & P, Precision precision_bits)
{
    if (!on_curve(E, P))
        throw DomainError("point " + P.to_string() + " is not on the curve");
    if (P.is_infinity() || is_torsion(E, P))
        return {Real(0, precision_bits), precision_bits};

    const Precision wp = precision_bits + 32;
    PeriodLattice L(E, wp);
    Complex z = point_to_complex(L, E, P);
    Real h = archimedean_local_height(L, z);
    h += log_abs(E.discriminant(), wp) / 12;
    h += log_abs(P.x().get_den(), wp) / 2;

    // Primes where P reduces to the singular point.
    const mpq_class & x = P.x();
    const mpq_class & y = P.y();
    mpq_class psi2 = 2 * y + E.a1() * x + E.a3();
    mpq_class fx = 3 * x * x + 2 * E.a2() * x + E.a4() - E.a1() * y;
    mpq_class psi3 = 3 * x * x * x * x + E.b2() * x * x * x + 3 * E.b4() * x * x + 3 * E.b6() * x + E.b8();
    mpz_class g = gcd(E.discriminant(), gcd(psi2.get_num(), fx.get_num()));
    if (g != 1) {
        for (const mpz_class & p : prime_factors(g)) {
            const long N = valuation(E.discriminant(), p);
            const long B = valuation(psi2, p);
            const long C = valuation(psi3, p);
            Real logp = log_abs(p, wp);
            if (!mpz_divisible_p(E.c4().get_mpz_t(), p.get_mpz_t())) {
                // component index i = min(B, N/2); correction -i(N-i)/(2N) log p
                mpq_class i = std::min(mpq_class(B), mpq_class(N, 2));
                mpq_class c = i * (N - i) / (2 * N);
                h -= Real(c, wp) * logp;
            } else if (C >= 3 * B) {
                h -= Real(mpq_class(B, 3), wp) * logp;
            } else {
                h -= Real(mpq_class(C, 8), wp) * logp;
            }
        }
    }
    h *= 2;
    return {h.with_precision(precision_bits), precision_bits};
}

} // namespace heegner
