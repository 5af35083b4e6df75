#pragma once

// Binary quadratic forms [A, B, C] = A x^2 + B xy + C y^2: reduction,
// class groups, Heegner forms, Pell equations and automorphs, genus
// characters and Ogg's count of real components of X0+(N).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace heegner {

struct QuadForm
{
    std::int64_t A = 0, B = 0, C = 0;

    std::int64_t discriminant() const { return B * B - 4 * A * C; }
    bool is_primitive() const;
    // Value at (x, y).
    mpz_class operator()(const mpz_class & x, const mpz_class & y) const;

    friend bool operator==(const QuadForm &, const QuadForm &) = default;
    friend auto operator<=>(const QuadForm &, const QuadForm &) = default;
};

std::ostream & operator<<(std::ostream & os, const QuadForm & f);
std::string to_string(const QuadForm & f);

// f o g for g = [[p, q], [r, s]] in SL2(Z): f(px + qy, rx + sy).
QuadForm act(const QuadForm & f, std::int64_t p, std::int64_t q, std::int64_t r, std::int64_t s);

bool is_discriminant(std::int64_t D);
bool is_fundamental_discriminant(std::int64_t D);

// Kronecker symbol (a / n).
int kronecker(std::int64_t a, std::int64_t n);

// Reduced representative (|B| <= A <= C, B >= 0 if |B| = A or A = C) of a
// positive definite primitive form.
QuadForm reduce_definite(const QuadForm & f);

// Reduced primitive forms of discriminant D < 0, sorted.
std::vector<QuadForm> class_group(std::int64_t D);
inline std::size_t class_number(std::int64_t D) { return class_group(D).size(); }

// Gauss composition followed by reduction.
QuadForm compose(const QuadForm & f, const QuadForm & g);
QuadForm principal_form(std::int64_t D);
inline QuadForm inverse(const QuadForm & f) { return reduce_definite({f.A, -f.B, f.C}); }

struct HeegnerPair
{
    std::int64_t N = 0;
    std::int64_t D = 0;
    std::int64_t r = 0;           // 0 <= r < 2N, r^2 = D mod 4N
    std::int64_t r_conjugate = 0; // -r mod 2N

    friend bool operator==(const HeegnerPair &, const HeegnerPair &) = default;
};

// Throws DomainError unless D < 0 is fundamental and r^2 = D (mod 4N); r is
// taken mod 2N.
HeegnerPair make_heegner_pair(std::int64_t N, std::int64_t D, std::int64_t r);

// One form per class of discriminant D, each with N | A and B = r (mod 2N).
// The i-th form is built from the i-th reduced form [a, b, c] of
// class_group(D) as [N a, B, C] with B = b (mod 2a).
std::vector<QuadForm> heegner_forms(const HeegnerPair & pair);

// Pairs (D, r) with D fundamental, -Dmax <= D < 0, r^2 = D (mod 4N), one per
// {r, -r} with r <= N, ordered by |D| then r.
std::vector<HeegnerPair> heegner_pairs(std::int64_t N, std::int64_t Dmax);

// Least (x, y), x, y > 0, with x^2 - Delta y^2 = 1.
std::pair<mpz_class, mpz_class> pell_fundamental(std::int64_t Delta);

// M_Q = [[x - B y, -2 C y], [2 A y, x + B y]] from the fundamental Pell
// solution; it fixes the roots of Q and has eigenvalue x + y sqrt(Delta)
// at tau+ = (-B + sqrt(Delta)) / (2A).
struct Automorph
{
    mpz_class a, b, c, d;
    mpz_class x, y;
    std::int64_t Delta = 0;

    mpz_class determinant() const { return a * d - b * c; }
};
Automorph fundamental_automorph(const QuadForm & Q, std::int64_t N);

// chi_{D0}(Q) for Q with N | A: 0 if gcd(A/N, B, C, D0) > 1, otherwise
// (D0 / n) for a positive n coprime to D0 represented by [A/N', B, C N'],
// N' | N. D0 must be a fundamental discriminant prime to N and a square
// mod 4N, and D0 must divide the discriminant of Q.
int genus_character(std::int64_t D0, const QuadForm & Q, std::int64_t N);

// Reduced indefinite forms of discriminant Delta > 0 grouped into cycles.
std::vector<std::vector<QuadForm>> reduction_cycles(std::int64_t Delta);
// Number of classes of primitive forms of discriminant Delta, where a form
// and its negative [-A, B, -C] count as one class.
std::size_t indefinite_class_number(std::int64_t Delta);
// Number of proper (SL2(Z)) classes.
std::size_t narrow_class_number(std::int64_t Delta);

// Ogg's formula for the number of real components of X0+(N), N prime.
std::int64_t nu(std::int64_t N);

} // namespace heegner
