#include "doctest.h"

#include <map>
#include <numeric>
#include <random>
#include <set>

#include "heegner/error.hpp"
#include "heegner/quadforms.hpp"

using namespace heegner;

namespace {

// Reduced primitive forms of D < 0 straight from the inequalities
// |B| <= A <= C, B >= 0 when |B| = A or A = C.
std::vector<QuadForm> brute_reduced(std::int64_t D)
{
    std::vector<QuadForm> out;
    for (std::int64_t A = 1; 3 * A * A <= -D; ++A)
        for (std::int64_t B = -A; B <= A; ++B) {
            const std::int64_t num = B * B - D;
            if (num % (4 * A))
                continue;
            const std::int64_t C = num / (4 * A);
            if (C < A || ((B < 0) && (B == -A || A == C)))
                continue;
            if (std::gcd(std::gcd(A, B), C) != 1)
                continue;
            out.push_back({A, B, C});
        }
    return out;
}

bool brute_fundamental(std::int64_t D)
{
    auto squarefree = [](std::int64_t n) {
        n = std::abs(n);
        for (std::int64_t p = 2; p * p <= n; ++p)
            if (n % (p * p) == 0)
                return false;
        return true;
    };
    std::int64_t m = ((D % 4) + 4) % 4;
    if (m == 1)
        return squarefree(D);
    if (m != 0)
        return false;
    std::int64_t d = D / 4, dm = ((d % 4) + 4) % 4;
    return (dm == 2 || dm == 3) && squarefree(d);
}

// Same class as f: reduce both and compare.
bool equivalent(const QuadForm & f, const QuadForm & g) { return reduce_definite(f) == reduce_definite(g); }

// Values of f(x, y) for coprime (x, y) in a box.
std::set<std::int64_t> represented(const QuadForm & f, std::int64_t box)
{
    std::set<std::int64_t> out;
    for (std::int64_t x = -box; x <= box; ++x)
        for (std::int64_t y = -box; y <= box; ++y)
            if (std::gcd(x, y) == 1)
                out.insert(f(x, y).get_si());
    return out;
}

} // namespace

TEST_CASE("reduction")
{
    CHECK(reduce_definite({1, 1, 6}) == QuadForm{1, 1, 6});
    CHECK(reduce_definite({2, -1, 3}) == QuadForm{2, -1, 3});
    CHECK(reduce_definite({2, 1, 3}) != reduce_definite({2, -1, 3}));
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> e(-10, 10);
    for (const QuadForm & f : class_group(-71)) {
        for (int trial = 0; trial < 40; ++trial) {
            std::int64_t p = e(rng), q = e(rng), r = e(rng), s = e(rng);
            if (p * s - q * r != 1)
                continue;
            CHECK(reduce_definite(act(f, p, q, r, s)) == f);
        }
    }
}

TEST_CASE("class groups against brute force for |D| <= 500")
{
    for (std::int64_t D = -3; D >= -500; --D) {
        CHECK(is_fundamental_discriminant(D) == brute_fundamental(D));
        if (!is_discriminant(D))
            continue;
        std::vector<QuadForm> expect = brute_reduced(D);
        std::sort(expect.begin(), expect.end());
        CHECK_MESSAGE(class_group(D) == expect, "D=" << D);
    }
    CHECK(class_number(-4) == 1);
    CHECK(class_group(-4) == std::vector<QuadForm>{{1, 0, 1}});
    CHECK(class_number(-23) == 3);
    CHECK(class_number(-163) == 1);
    CHECK_THROWS_AS(class_group(-5), DomainError);
}

TEST_CASE("composition")
{
    CHECK(compose({2, 1, 3}, {2, -1, 3}) == QuadForm{1, 1, 6});
    for (std::int64_t D : {-23, -71, -199, -404, -431}) {
        auto G = class_group(D);
        QuadForm e = principal_form(D);
        std::map<QuadForm, int> seen;
        for (const QuadForm & f : G) {
            CHECK(compose(f, e) == f);
            CHECK(compose(f, inverse(f)) == e);
            QuadForm acc = e;
            for (std::size_t k = 0; k < G.size(); ++k)
                acc = compose(acc, f);
            CHECK(acc == e); // Lagrange
            for (const QuadForm & g : G) {
                CHECK(compose(f, g) == compose(g, f));
                for (const QuadForm & h : G)
                    CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
            }
        }
    }
}

TEST_CASE("Heegner pairs and forms")
{
    HeegnerPair p = make_heegner_pair(37, -4, 12);
    CHECK(p.r == 12);
    CHECK(p.r_conjugate == 62);
    CHECK(heegner_forms(p) == std::vector<QuadForm>{{37, 12, 1}});
    CHECK(make_heegner_pair(37, -4, 12 + 74).r == 12);
    CHECK_THROWS_AS(make_heegner_pair(37, -3, 5), DomainError);
    CHECK_THROWS_AS(make_heegner_pair(37, -12, 2), DomainError);

    for (std::int64_t N : {37, 43, 359, 997, 4159, 35083}) {
        auto pairs = heegner_pairs(N, 163);
        CHECK(!pairs.empty());
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const HeegnerPair & h = pairs[i];
            CHECK(is_fundamental_discriminant(h.D));
            CHECK(h.D >= -163);
            CHECK(((h.r * h.r - h.D) % (4 * N)) == 0);
            CHECK(h.r <= N);
            if (i)
                CHECK(std::make_pair(-pairs[i - 1].D, pairs[i - 1].r) < std::make_pair(-h.D, h.r));
            auto forms = heegner_forms(h);
            CHECK(forms.size() == class_number(h.D));
            std::set<QuadForm> classes;
            for (const QuadForm & f : forms) {
                CHECK(f.discriminant() == h.D);
                CHECK(f.A % N == 0);
                CHECK(((f.B - h.r) % (2 * N)) == 0);
                CHECK(f.A > 0);
                classes.insert(reduce_definite(f));
            }
            CHECK(classes.size() == forms.size());
        }
    }
    bool has = false;
    for (const HeegnerPair & h : heegner_pairs(37, 163)) {
        has = has || (h.D == -4 && h.r == 12);
        CHECK(h.D != -12);
    }
    CHECK(has);
}

TEST_CASE("Pell equation for 2 <= Delta <= 500")
{
    CHECK(pell_fundamental(5) == std::make_pair(mpz_class(9), mpz_class(4)));
    CHECK(pell_fundamental(8) == std::make_pair(mpz_class(3), mpz_class(1)));
    for (std::int64_t d = 2; d <= 500; ++d) {
        std::int64_t s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(d)));
        while (s * s > d)
            --s;
        while ((s + 1) * (s + 1) <= d)
            ++s;
        if (s * s == d)
            continue;
        auto [x, y] = pell_fundamental(d);
        CHECK(x * x - d * y * y == 1);
        CHECK(y > 0);
        // no smaller y solves it
        const std::int64_t limit = y < 200000 ? y.get_si() : 200000;
        for (std::int64_t t = 1; t < limit; ++t) {
            mpz_class v = mpz_class(d) * t * t + 1;
            if (mpz_perfect_square_p(v.get_mpz_t())) {
                FAIL_CHECK("smaller solution y=" << t << " for " << d);
                break;
            }
        }
    }
    CHECK_THROWS_AS(pell_fundamental(49), DomainError);
}

TEST_CASE("fundamental automorphs")
{
    Automorph m = fundamental_automorph({5, 5, 1}, 5);
    CHECK(m.x == 9);
    CHECK(m.y == 4);
    CHECK(m.a == -11);
    CHECK(m.b == -8);
    CHECK(m.c == 40);
    CHECK(m.d == 29);
    for (std::int64_t N : {5, 11, 37, 359}) {
        for (std::int64_t B = -3; B <= 3; ++B) {
            for (std::int64_t C = -4; C <= 4; ++C) {
                QuadForm Q{N, B, C};
                const std::int64_t Delta = Q.discriminant();
                std::int64_t s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(std::max<std::int64_t>(Delta, 0))));
                if (Delta <= 0 || s * s == Delta || (s + 1) * (s + 1) == Delta)
                    continue;
                Automorph a = fundamental_automorph(Q, N);
                CHECK(a.determinant() == 1);
                CHECK(a.c % N == 0);
                // Q o M = Q, so M fixes both roots of Q
                mpz_class p = a.a, q = a.b, r = a.c, t = a.d;
                mpz_class A2 = Q.A * p * p + Q.B * p * r + Q.C * r * r;
                mpz_class B2 = 2 * Q.A * p * q + Q.B * (p * t + q * r) + 2 * Q.C * r * t;
                mpz_class C2 = Q.A * q * q + Q.B * q * t + Q.C * t * t;
                CHECK(A2 == Q.A);
                CHECK(B2 == Q.B);
                CHECK(C2 == Q.C);
            }
        }
    }
}

TEST_CASE("genus characters")
{
    for (const QuadForm & f : {QuadForm{37, 12, 1}, QuadForm{74, 38, 5}})
        CHECK(genus_character(1, f, 37) == 1);
    // gcd(A/N, B, C, D0) > 1
    CHECK(genus_character(5, QuadForm{5 * 11, 5, 0}, 11) == 0);

    std::mt19937 rng(5);
    int tested = 0;
    for (std::int64_t N : {11, 37}) {
        for (std::int64_t D0 : {5, -3, -4, 13, -7, 8, -19, 21, -24, 33, 37, -31, 41}) {
            // the character needs D0 prime to N and a square mod 4N
            if (std::gcd(D0, N) != 1)
                continue;
            bool square = false;
            for (std::int64_t r = 0; r < 2 * N; ++r)
                square = square || ((r * r - D0) % (4 * N) == 0);
            if (!square)
                continue;
            for (std::int64_t a = 1; a <= 6; ++a)
                for (std::int64_t B = -2 * N; B <= 2 * N; B += 5) {
                    for (std::int64_t C : {-5, -3, -1, 1, 2, 3, 7}) {
                        QuadForm Q{N * a, B, C};
                        const std::int64_t D = Q.discriminant();
                        if (D == 0 || D % D0 != 0 || ((D / D0) % 4 + 4) % 4 > 1)
                            continue;
                        if (std::gcd(std::gcd(a, B), std::gcd(C, D0)) != 1)
                            continue;
                        int chi = genus_character(D0, Q, N);
                        CHECK(std::abs(chi) == 1);
                        // every represented value coprime to D0, by some
                        // [A/N', B, C N'], gives the same symbol
                        for (std::int64_t Np : {std::int64_t{1}, N}) {
                            QuadForm g{Q.A / Np, Q.B, Q.C * Np};
                            for (std::int64_t n : represented(g, 6))
                                if (n > 0 && std::gcd(n, D0) == 1)
                                    CHECK(kronecker(D0, n) == chi);
                        }
                        ++tested;
                    }
                }
        }
    }
    CHECK(tested > 50);
}

TEST_CASE("indefinite class numbers")
{
    CHECK(indefinite_class_number(5) == 1);
    CHECK(indefinite_class_number(1436) == 3);
    for (std::int64_t Delta : {5, 8, 12, 13, 60, 85, 136, 145, 221, 1436, 4 * 8069}) {
        auto cycles = reduction_cycles(Delta);
        std::set<QuadForm> all;
        std::size_t total = 0;
        for (const auto & c : cycles) {
            total += c.size();
            all.insert(c.begin(), c.end());
            for (const QuadForm & f : c)
                CHECK(f.discriminant() == Delta);
        }
        CHECK(all.size() == total); // cycles partition the reduced forms
        CHECK(narrow_class_number(Delta) == cycles.size());
        CHECK(indefinite_class_number(Delta) <= cycles.size());
    }
}

TEST_CASE("components of X0+(N)(R)")
{
    CHECK(nu(37) == 2);
    CHECK(nu(359) == 2);
    CHECK(nu(8069) == 3);
    CHECK(nu(9829) == 10);
    CHECK(nu(36479) == 11);
    CHECK(nu(90001) == 87);
    CHECK(nu(35083) == 1);
    CHECK(nu(48731) == 1);
    CHECK_THROWS_AS(nu(35), DomainError);
}
