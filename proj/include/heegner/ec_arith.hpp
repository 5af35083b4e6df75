#pragma once

// Exact group law on E(Q), point counting over prime fields, L-series
// coefficients, heights and torsion.

#include <cstdint>
#include <vector>

#include "heegner/bigfloat.hpp"
#include "heegner/curve_store.hpp"
#include "heegner/weierstrass.hpp"

namespace heegner {

// Primes below this bound are counted by enumerating x; above it by
// baby-step giant-step on random points of E and its quadratic twist.
inline constexpr std::uint64_t point_count_enumeration_limit = 10000;

RationalPoint negate(const WeierstrassCurve & E, const RationalPoint & P);
// Chord-and-tangent addition. Throws DomainError if P or Q is off the curve.
RationalPoint add(const WeierstrassCurve & E, const RationalPoint & P, const RationalPoint & Q);
RationalPoint subtract(const WeierstrassCurve & E, const RationalPoint & P, const RationalPoint & Q);
// Double-and-add; k may be negative.
RationalPoint scalar_mul(const WeierstrassCurve & E, const mpz_class & k, const RationalPoint & P);
inline RationalPoint scalar_mul(const WeierstrassCurve & E, long k, const RationalPoint & P)
{
    return scalar_mul(E, mpz_class(k), P);
}

// Order of P if it is a torsion point (at most 12 over Q), else 0.
int point_order(const WeierstrassCurve & E, const RationalPoint & P);
inline bool is_torsion(const WeierstrassCurve & E, const RationalPoint & P) { return point_order(E, P) != 0; }

bool has_good_reduction(const WeierstrassCurve & E, std::uint64_t p);

// #E(F_p) including the point at infinity. Throws DomainError when p is not
// prime or divides the discriminant.
std::int64_t count_points_mod_p(const WeierstrassCurve & E, std::uint64_t p);
// Number of projective points on the reduction mod p by direct enumeration,
// valid for bad p as well (the singular point is counted).
std::int64_t count_points_enumerate(const WeierstrassCurve & E, std::uint64_t p);
// Baby-step giant-step count for good p >= 5.
std::int64_t count_points_bsgs(const WeierstrassCurve & E, std::uint64_t p);

// a_E(p) at a prime of bad reduction of a minimal model: +1 split
// multiplicative, -1 non-split multiplicative, 0 additive. Throws
// DomainError at a good prime.
int a_p_bad(const WeierstrassCurve & E, std::uint64_t p);
std::int64_t a_p(const WeierstrassCurve & E, std::uint64_t p);

// a_E(1..M) from the Euler product.
CoefficientCache an_table(const WeierstrassCurve & E, std::size_t M, std::string label = {});

struct HeightValue
{
    Real value;
    Precision precision_bits;
};

// log max(|X|, |Y|, |Z|) for the coprime projective triple of P.
HeightValue naive_height(const RationalPoint & P, Precision precision_bits);

// Neron-Tate height, normalised so that it is asymptotic to the logarithmic
// height of x(P) (the regulator of 37a1 is 0.0511...). Computed
// as a sum of local heights; the model must be minimal.
HeightValue canonical_height(const WeierstrassCurve & E, const RationalPoint & P, Precision precision_bits);

std::vector<RationalPoint> torsion_points(const WeierstrassCurve & E);
int torsion_order(const WeierstrassCurve & E);

bool is_prime(std::uint64_t n);

} // namespace heegner
