#include "primeent/hardylittlewood.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace primeent::hl {

namespace {

constexpr double kRosserSchoenfeld = 1.25506;  // pi(x) < 1.25506 x / log x, x > 1

struct Shape {
    double prefactor;
    int sign;
    int power;  // factor = 1 + sign (p-1)^-power
};

Shape shape_of(FactorSpec spec) {
    switch (spec.kind) {
        case Product::twin: return {2.0, -1, 2};
        case Product::purity: return {4.0, +1, 3};
        case Product::alpha2_ratio: return {2.0, +1, 3};
        case Product::zeta_like:
            if (spec.s < 2) throw std::domain_error("euler_product: s must be >= 2");
            return {1.0, +1, 2 * spec.s - 1};
    }
    throw std::logic_error("euler_product: unknown product");
}

// Odd prime factors of m (each once), and whether m is square-free in them.
struct OddFactors {
    std::vector<std::uint64_t> primes;
    bool square_free = true;
};

OddFactors odd_factors(std::uint64_t m) {
    OddFactors f;
    while (m % 2 == 0) m /= 2;
    for (std::uint64_t p = 3; p * p <= m; p += 2) {
        if (m % p != 0) continue;
        f.primes.push_back(p);
        m /= p;
        if (m % p == 0) {
            f.square_free = false;
            while (m % p == 0) m /= p;
        }
    }
    if (m > 1) f.primes.push_back(m);
    return f;
}

}  // namespace

EulerResult euler_product(const PrimeTable& table, FactorSpec spec, std::uint64_t cutoff) {
    const Shape sh = shape_of(spec);
    if (cutoff < 3) throw std::domain_error("euler_product: cutoff must be >= 3");
    if (cutoff > table.limit())
        throw std::out_of_range("euler_product: cutoff " + std::to_string(cutoff) + " beyond prime table");

    double log_sum = 0;
    for (std::uint64_t p = 3; p <= cutoff; p += 2) {
        if (!table.is_prime(p)) continue;
        const double x = std::pow(static_cast<double>(p - 1), -sh.power);
        log_sum += std::log1p(sh.sign * x);
    }
    const double value = sh.prefactor * std::exp(log_sum);

    // sum_{p > P} (p-1)^-q <= int_P^inf pi(t) q (t-1)^{-q-1} dt
    //                      <= (c/log P) [q (P-1)^{1-q}/(q-1) + (P-1)^{-q}]
    const double P = static_cast<double>(cutoff);
    const double q = sh.power;
    const double T = kRosserSchoenfeld / std::log(P) *
                     (q * std::pow(P - 1, 1 - q) / (q - 1) + std::pow(P - 1, -q));
    double bound;
    if (sh.sign > 0) {
        bound = value * std::expm1(T);
    } else {
        const double x_max = std::pow(P - 1, -q);  // largest tail term
        bound = value * -std::expm1(-T / (1 - x_max));
    }
    return {value, bound, cutoff};
}

namespace {
std::uint64_t checked_cutoff(std::uint64_t cutoff) {
    if (cutoff < 3 || cutoff > (1ULL << primes::kMaxQubits))
        throw std::out_of_range("HLConstants: cutoff outside [3, 2^30]");
    return cutoff;
}
}  // namespace

HLConstants::HLConstants(std::uint64_t cutoff)
    : cutoff_(checked_cutoff(cutoff)), table_(std::make_shared<PrimeTable>(cutoff)) {
    twin_ = euler_product(*table_, {Product::twin, 2}, cutoff_);
    alpha2_ = euler_product(*table_, {Product::alpha2_ratio, 2}, cutoff_);
}

const HLConstants& HLConstants::standard() {
    static const HLConstants instance(kDefaultCutoff);
    return instance;
}

EulerResult HLConstants::product(FactorSpec spec) const { return euler_product(*table_, spec, cutoff_); }

double HLConstants::C(std::uint64_t k) const {
    if (k == 0 || k % 2 != 0) return 0.0;
    double c = twin_.value;
    for (auto p : odd_factors(k).primes) c *= static_cast<double>(p - 1) / static_cast<double>(p - 2);
    return c;
}

std::vector<double> HLConstants::C_table(std::uint64_t kmax) const {
    std::vector<double> out(kmax + 1, 0.0);
    for (std::uint64_t k = 2; k <= kmax; k += 2) out[k] = C(k);
    return out;
}

double HLConstants::alpha_m(std::uint64_t m) const { return alpha() * boost::rational_cast<double>(alpha_ratio(m)); }

Rational beta(std::uint64_t d) {
    if (d == 0) throw std::domain_error("beta: d must be >= 1");
    if (d % 2 == 0) return Rational(0);
    const auto f = odd_factors(d);
    if (!f.square_free) return Rational(0);
    std::int64_t den = 1;
    for (auto p : f.primes) den *= static_cast<std::int64_t>(p - 2);
    return Rational(1, den);
}

Rational alpha_ratio(std::uint64_t m) {
    if (m == 0) throw std::domain_error("alpha_ratio: m must be >= 1");
    if (m % 2 != 0) return Rational(0);
    Rational r(1);
    for (auto p : odd_factors(m).primes)
        r *= Rational(static_cast<std::int64_t>(p - 1), static_cast<std::int64_t>(p - 2));
    return r;
}

Rational alpha_ratio_divisor_sum(std::uint64_t m) {
    if (m == 0) throw std::domain_error("alpha_ratio_divisor_sum: m must be >= 1");
    if (m % 2 != 0) return Rational(0);
    Rational r(0);
    for (std::uint64_t d = 1; d * d <= m; ++d) {
        if (m % d != 0) continue;
        r += beta(d);
        if (d * d != m) r += beta(m / d);
    }
    return r;
}

std::vector<double> beta_table(std::uint64_t D) {
    std::vector<double> out(D + 1, 0.0);
    for (std::uint64_t d = 1; d <= D; d += 2) out[d] = boost::rational_cast<double>(beta(d));
    return out;
}

double beta_dirichlet_sum(std::uint64_t D) {
    const auto b = beta_table(D);
    double s = 0;
    for (std::uint64_t d = 1; d <= D; ++d) s += b[d] / static_cast<double>(d);
    return s;
}

SumResult sum_C(const HLConstants& hl, std::uint64_t K) {
    if (K < 2) throw std::domain_error("sum_C: K must be >= 2");
    double s = 0;
    for (std::uint64_t k = 1; k <= K; ++k) s += hl.C(k);
    const double k = static_cast<double>(K);
    const double pred = k - 0.5 * std::log(k);
    return {s, pred, s / pred};
}

SumC2Result sum_C2(const HLConstants& hl, std::uint64_t d_half) {
    if (d_half < 2) throw std::domain_error("sum_C2: d_half must be >= 2");
    SumC2Result r;
    r.X = 2 * d_half;
    const auto c = hl.C_table(r.X);
    for (std::uint64_t k = 1; k < d_half; ++k)
        r.double_sum += 2.0 * static_cast<double>(d_half - k) * c[2 * k] * c[2 * k];
    for (std::uint64_t m = 1; m <= r.X; ++m) {
        r.single_sum += c[m] * c[m];
        r.weighted_sum += static_cast<double>(m) * c[m] * c[m];
    }
    const double X = static_cast<double>(r.X);
    const double a = hl.alpha2_ratio();
    const double lx2 = std::log(X) * std::log(X);
    r.pred_single = a * X - 0.5 * lx2;
    r.pred_weighted = 0.5 * a * X * X;
    r.pred_double = 0.5 * a * X * X - 0.5 * X * lx2;
    r.ratio_single = r.single_sum / r.pred_single;
    r.ratio_weighted = r.weighted_sum / r.pred_weighted;
    r.ratio_double = r.double_sum / r.pred_double;
    return r;
}

nlohmann::json constants_report(const HLConstants& hl) {
    auto entry = [&](const std::string& name, FactorSpec spec) {
        const auto e = hl.product(spec);
        return nlohmann::json{{"name", name}, {"value", e.value}, {"cutoff", e.cutoff}, {"tail_bound", e.tail_bound}};
    };
    nlohmann::json out = nlohmann::json::array();
    out.push_back(entry("twin_constant", {Product::twin, 2}));
    out.push_back(entry("purity_constant", {Product::purity, 2}));
    out.push_back(entry("alpha2_ratio", {Product::alpha2_ratio, 2}));
    for (int s = 2; s <= 5; ++s) out.push_back(entry("zeta_like_s" + std::to_string(s), {Product::zeta_like, s}));
    return out;
}

}  // namespace primeent::hl
