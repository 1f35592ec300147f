// counting.hpp
// Prime counting functions over a PrimeTable and the logarithmic integrals
// used as their asymptotic predictions.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "primeent/primes.hpp"

namespace primeent::counting {

using primes::PrimeTable;

// Number of primes <= x.
std::uint64_t pi(const PrimeTable& table, std::uint64_t x);

// Primes p <= x of the form a*n + b, n >= 0. gcd(a, b) must be 1.
std::uint64_t pi_ab(const PrimeTable& table, std::uint64_t a, std::uint64_t b, std::uint64_t x);

// Primes p <= x with p + k also prime. Only p is bounded by x; p + k may
// exceed the table limit (checked by Miller-Rabin). Odd k gives 0.
std::uint64_t pi2(const PrimeTable& table, std::uint64_t k, std::uint64_t x);

// Indices n with a*n + b and a*n + b2 both prime and both <= x.
std::uint64_t pi_abb(const PrimeTable& table, std::uint64_t a, std::uint64_t b, std::uint64_t b2,
                     std::uint64_t x);

// int_2^x dt / log t  and  int_2^x dt / log^2 t.  x >= 2.
double li(double x);
double li2(double x);

enum class Kind { pi, pi_ab, pi2, pi_abb };

struct CountingQuery {
    Kind kind = Kind::pi;
    std::uint64_t a = 0;   // modulus
    std::uint64_t b = 0;   // residue
    std::uint64_t b2 = 0;  // second residue (pi_abb)
    std::uint64_t k = 0;   // gap (pi2)
    std::uint64_t x = 0;   // bound
};

std::uint64_t count(const PrimeTable& table, const CountingQuery& q);

// Leading asymptotic for q at bound X:
//   pi      Li(X)
//   pi_ab   Li(X) / phi(a)
//   pi2     C(k) Li2(X)
//   pi_abb  C(|b - b2|) Li2(X) / phi(a)
double predicted(const CountingQuery& q, std::uint64_t X);

struct RatioPoint {
    std::uint64_t X;
    double exact;
    double predicted;
    double ratio;
};

// q.x is ignored; each grid point replaces it.
std::vector<RatioPoint> asymptotic_ratio(const PrimeTable& table, const CountingQuery& q,
                                         std::span<const std::uint64_t> grid);

}  // namespace primeent::counting
