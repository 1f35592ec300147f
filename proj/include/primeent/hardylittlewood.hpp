// hardylittlewood.hpp
// Hardy-Littlewood pair constants C(k), the arithmetic functions alpha(m)
// and beta(d), Euler products over odd primes with certified truncation
// bounds, and the partial-sum laws they satisfy.
//
// Naming: alpha == C2 == 2 prod_{p>2} (1 - 1/(p-1)^2), the twin constant in
// the normalization where C(2) = C2.

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <boost/rational.hpp>
#include "json.hpp"

#include "primeent/primes.hpp"

namespace primeent::hl {

using primes::PrimeTable;
using Rational = boost::rational<std::int64_t>;

inline constexpr std::uint64_t kDefaultCutoff = 1'000'000;

// The four products that appear in the model:
//   twin          2 prod (1 - (p-1)^-2)          = C2
//   purity        4 prod (1 + (p-1)^-3)          = 2 alpha^2 / alpha_2
//   alpha2_ratio  2 prod (1 + (p-1)^-3)          = alpha^2 / alpha_2
//   zeta_like     prod (1 + (p-1)^(1-2s)),  s >= 2
enum class Product { twin, purity, alpha2_ratio, zeta_like };

struct FactorSpec {
    Product kind = Product::twin;
    int s = 2;  // zeta_like only
};

struct EulerResult {
    double value = 0;
    double tail_bound = 0;  // |true value - value| <= tail_bound
    std::uint64_t cutoff = 0;
};

// Partial product over odd primes <= cutoff. The tail bound uses
// pi(x) < 1.25506 x / log x to bound sum_{p > cutoff} (p-1)^-q.
// cutoff > table.limit() -> std::out_of_range; cutoff < 3 -> std::domain_error.
EulerResult euler_product(const PrimeTable& table, FactorSpec spec, std::uint64_t cutoff);

class HLConstants {
public:
    explicit HLConstants(std::uint64_t cutoff = kDefaultCutoff);

    // Shared instance at the default cutoff, built on first use.
    static const HLConstants& standard();

    std::uint64_t prime_cutoff() const { return cutoff_; }
    double twin_constant() const { return twin_.value; }
    double alpha() const { return twin_.value; }
    double twin_tail_bound() const { return twin_.tail_bound; }
    double alpha2_ratio() const { return alpha2_.value; }  // alpha^2 / alpha_2

    EulerResult product(FactorSpec spec) const;

    // 0 for odd k (and k = 0), else C2 prod_{odd p | k} (p-1)/(p-2).
    double C(std::uint64_t k) const;
    // C(0..kmax) with C(0) = 0.
    std::vector<double> C_table(std::uint64_t kmax) const;

    // alpha * alpha_ratio(m).
    double alpha_m(std::uint64_t m) const;

private:
    std::uint64_t cutoff_;
    std::shared_ptr<const PrimeTable> table_;
    EulerResult twin_;
    EulerResult alpha2_;
};

// prod_{odd p | d} 1/(p-2); 0 for even or non-square-free d.
Rational beta(std::uint64_t d);

// alpha(m)/alpha: 0 for odd m, prod_{odd p | m} (p-1)/(p-2) otherwise.
Rational alpha_ratio(std::uint64_t m);
// Same quantity as sum_{d | m} beta(d) (even m), 0 for odd m.
Rational alpha_ratio_divisor_sum(std::uint64_t m);

// beta(0..D) as doubles, beta(0) = 0.
std::vector<double> beta_table(std::uint64_t D);

// sum_{d <= D} beta(d) / d, which tends to 2/alpha.
double beta_dirichlet_sum(std::uint64_t D);

struct SumResult {
    double exact = 0;
    double predicted = 0;
    double ratio = 0;
};

// sum_{k=1}^K C(k) against K - (1/2) log K.
SumResult sum_C(const HLConstants& hl, std::uint64_t K);

struct SumC2Result {
    std::uint64_t X = 0;          // 2 * d_half
    double double_sum = 0;        // sum_{i,j=1}^{d_half} C^2(2|i-j|)
    double single_sum = 0;        // sum_{m=1}^X C^2(m)
    double weighted_sum = 0;      // sum_{m=1}^X m C^2(m)
    double pred_single = 0;       // (alpha^2/alpha_2) X - (1/2) log^2 X
    double pred_weighted = 0;     // (alpha^2/2 alpha_2) X^2
    double pred_double = 0;       // (alpha^2/2 alpha_2) X^2 - (X/2) log^2 X
    double ratio_single = 0;
    double ratio_weighted = 0;
    double ratio_double = 0;
};

// d_half >= 2.
SumC2Result sum_C2(const HLConstants& hl, std::uint64_t d_half);

// [{name, value, cutoff, tail_bound}, ...] for the twin constant, the purity
// constant, alpha^2/alpha_2 and the zeta-like products s = 2..5.
nlohmann::json constants_report(const HLConstants& hl);

}  // namespace primeent::hl
