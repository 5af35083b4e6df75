#pragma once

// Period lattice, Weierstrass functions and the modular parametrisation
// phi(tau) = sum a_n / n q^n of a curve of conductor N.

#include <array>
#include <cstdint>
#include <utility>

#include "heegner/bigfloat.hpp"
#include "heegner/curve_store.hpp"
#include "heegner/weierstrass.hpp"

namespace heegner {

// Period lattice of the Neron differential dx / (2y + a1 x + a3).
class PeriodLattice
{
public:
    PeriodLattice(const WeierstrassCurve & E, Precision prec);

    // Least positive real period.
    const Complex & omega1() const { return omega1_; }
    // Second basis vector, Im(omega2 / omega1) > 0.
    const Complex & omega2() const { return omega2_; }
    // Number of connected components of E(R): 2 if the discriminant is
    // positive, else 1.
    int real_components() const { return components_; }
    // omega1 times the number of real components.
    Real real_period() const;
    // Roots of 4x^3 + b2 x^2 + 2 b4 x + b6; e1 is real and largest real root.
    const std::array<Complex, 3> & roots() const { return roots_; }
    Precision precision() const { return prec_; }

    // Basis (w1, w2) of the same lattice with w2 / w1 in the standard
    // fundamental domain for SL2(Z).
    const Complex & reduced_w1() const { return w1_; }
    const Complex & reduced_w2() const { return w2_; }

    // Representative of z mod the lattice with coordinates in [-1/2, 1/2)
    // with respect to the reduced basis.
    Complex reduce(const Complex & z) const;

    // Weierstrass p and p' of the lattice. Throws DomainError at a lattice
    // point.
    std::pair<Complex, Complex> wp(const Complex & z) const;

    const mpz_class & b2() const { return b2_; }
    const mpz_class & a1() const { return a1_; }
    const mpz_class & a3() const { return a3_; }

private:
    Precision prec_;
    Complex omega1_, omega2_, w1_, w2_;
    std::array<Complex, 3> roots_;
    int components_;
    mpz_class a1_, a3_, b2_;
};

// (x, y) = (p(z) - b2/12, (p'(z) - a1 x - a3) / 2). When z lies on the
// lattice to within 2^(-prec/2) the result is the point at infinity.
struct ComplexPoint
{
    bool infinity = false;
    Complex x, y;
};
ComplexPoint complex_to_point(const PeriodLattice & L, const Complex & z);

// Elliptic logarithm of a point of E(Q): the z in C / Lambda mapping to P,
// chosen on the real line (identity component) or on omega2/2 + R (the
// other real component).
Complex point_to_complex(const PeriodLattice & L, const WeierstrassCurve & E, const RationalPoint & P);

// Archimedean local height at z, in the normalisation where the global
// height is asymptotic to (1/2) log |x| and the discriminant term is
// included (the sum of local heights over all places is independent of the
// model).
Real archimedean_local_height(const PeriodLattice & L, const Complex & z);

// Minimal M such that the tail of phi beyond M is below 2^(-prec) when
// |q| = exp(-2 pi Im tau), using |a_n / n| <= 2.
std::size_t terms_needed(const Real & im_tau, Precision prec);

// phi(tau) = sum_{n <= M} a_n / n q^n with M = terms_needed(Im tau, prec).
// Throws TruncationError when the cache holds fewer than M coefficients.
Complex phi(const CoefficientCache & an, const Complex & tau, Precision prec);

// The representative of tau (up to integer translation and the
// Fricke involution tau -> -1/(N tau)) with the largest imaginary part.
Complex best_representative(const Complex & tau, std::int64_t N);

} // namespace heegner
