#include "primeent/counting.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "primeent/hardylittlewood.hpp"

namespace primeent::counting {

namespace {

void check_bound(const PrimeTable& table, std::uint64_t x, const char* who) {
    if (x > table.limit())
        throw std::out_of_range(std::string(who) + ": bound " + std::to_string(x) + " beyond sieve limit " +
                                std::to_string(table.limit()));
}

void check_coprime(std::uint64_t a, std::uint64_t b, const char* who) {
    if (a == 0 || std::gcd(a, b) != 1)
        throw std::domain_error(std::string(who) + ": modulus and residue must be coprime");
}

// int_{log 2}^{log x} e^u / u^power du, i.e. int_2^x dt / log^power t.
double log_integral(double x, int power, const char* who) {
    if (!(x >= 2.0)) throw std::domain_error(std::string(who) + ": x must be >= 2");
    if (x == 2.0) return 0.0;
    const double lo = std::log(2.0);
    const double hi = std::log(x);
    auto f = [power](double u) { return std::exp(u) / std::pow(u, power); };
    double err = 0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, 1e-14, &err);
}

}  // namespace

std::uint64_t pi(const PrimeTable& table, std::uint64_t x) {
    check_bound(table, x, "pi");
    return table.count_upto(x);
}

std::uint64_t pi_ab(const PrimeTable& table, std::uint64_t a, std::uint64_t b, std::uint64_t x) {
    check_coprime(a, b, "pi_ab");
    check_bound(table, x, "pi_ab");
    std::uint64_t c = 0;
    for (std::uint64_t p = b; p <= x; p += a) c += table.is_prime(p);
    return c;
}

std::uint64_t pi2(const PrimeTable& table, std::uint64_t k, std::uint64_t x) {
    check_bound(table, x, "pi2");
    if (k % 2 != 0) return 0;
    if (k == 0) throw std::domain_error("pi2: gap must be >= 2");
    std::uint64_t c = 0;
    for (std::uint64_t p = 3; p <= x; p += 2)
        if (table.is_prime(p) && primes::is_prime_extended(table, p + k)) ++c;
    return c;
}

std::uint64_t pi_abb(const PrimeTable& table, std::uint64_t a, std::uint64_t b, std::uint64_t b2,
                     std::uint64_t x) {
    if (b == b2) throw std::domain_error("pi_abb: residues must differ");
    check_coprime(a, b, "pi_abb");
    check_coprime(a, b2, "pi_abb");
    check_bound(table, x, "pi_abb");
    std::uint64_t c = 0;
    const std::uint64_t top = std::max(b, b2);
    for (std::uint64_t n = 0; a * n + top <= x; ++n)
        if (table.is_prime(a * n + b) && table.is_prime(a * n + b2)) ++c;
    return c;
}

double li(double x) { return log_integral(x, 1, "li"); }

double li2(double x) { return log_integral(x, 2, "li2"); }

std::uint64_t count(const PrimeTable& table, const CountingQuery& q) {
    switch (q.kind) {
        case Kind::pi: return pi(table, q.x);
        case Kind::pi_ab: return pi_ab(table, q.a, q.b, q.x);
        case Kind::pi2: return pi2(table, q.k, q.x);
        case Kind::pi_abb: return pi_abb(table, q.a, q.b, q.b2, q.x);
    }
    throw std::logic_error("count: unknown query kind");
}

double predicted(const CountingQuery& q, std::uint64_t X) {
    const auto& hl = hl::HLConstants::standard();
    const double x = static_cast<double>(X);
    switch (q.kind) {
        case Kind::pi: return li(x);
        case Kind::pi_ab: return li(x) / static_cast<double>(primes::totient(q.a));
        case Kind::pi2: return hl.C(q.k) * li2(x);
        case Kind::pi_abb: {
            const std::uint64_t gap = q.b > q.b2 ? q.b - q.b2 : q.b2 - q.b;
            return hl.C(gap) * li2(x) / static_cast<double>(primes::totient(q.a));
        }
    }
    throw std::logic_error("predicted: unknown query kind");
}

std::vector<RatioPoint> asymptotic_ratio(const PrimeTable& table, const CountingQuery& q,
                                         std::span<const std::uint64_t> grid) {
    std::vector<RatioPoint> out;
    out.reserve(grid.size());
    for (auto X : grid) {
        CountingQuery at = q;
        at.x = X;
        const double exact = static_cast<double>(count(table, at));
        const double pred = predicted(q, X);
        out.push_back({X, exact, pred, exact / pred});
    }
    return out;
}

}  // namespace primeent::counting
