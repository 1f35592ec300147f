#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "primeent/counting.hpp"
#include "primeent/spectra.hpp"

using namespace primeent;
using namespace primeent::spectra;
using state::EllMode;
using state::Series;

namespace {

const PrimeTable& table20() {
    static const auto t = primes::sieve(20);
    return t;
}

const hl::HLConstants& consts() { return hl::HLConstants::standard(); }

// Cyclic Jacobi rotations, descending eigenvalues.
std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a) {
    const Eigen::Index n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30) break;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == 0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
                const double t = (theta >= 0 ? 1 : -1) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

Spectrum natural_spectrum(int n, Series s) {
    const auto v = state::build_state(table20(), n, s);
    return eig_sym(state::reduce_mask(v, state::PartitionMask::natural(n, n / 2)));
}

Spectrum make(std::vector<double> ev) {
    Spectrum s;
    s.eigenvalues = std::move(ev);
    s.source_dim = static_cast<Eigen::Index>(s.eigenvalues.size());
    return s;
}

}  // namespace

TEST_CASE("eig_sym small examples") {
    Eigen::MatrixXd m(2, 2);
    m << 2, 1, 1, 2;
    const auto s = eig_sym(m);
    CHECK(s.eigenvalues[0] == doctest::Approx(3));
    CHECK(s.eigenvalues[1] == doctest::Approx(1));

    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(4, 4);
    z(1, 1) = 0.5;
    z(3, 3) = 0.25;
    z(1, 3) = z(3, 1) = 0.1;
    const auto sz = eig_sym(z);
    CHECK(sz.source_dim == 4);
    REQUIRE(sz.eigenvalues.size() == 4);
    CHECK(sz.eigenvalues[2] == 0.0);
    CHECK(sz.eigenvalues[3] == 0.0);
    CHECK(sz.eigenvalues[0] + sz.eigenvalues[1] == doctest::Approx(0.75));

    Eigen::MatrixXd bad = m;
    bad(0, 1) = 1.1;
    CHECK_THROWS_AS(eig_sym(bad), std::domain_error);
    CHECK(eig_sym(Eigen::MatrixXd::Zero(3, 3)).eigenvalues == std::vector<double>{0, 0, 0});
}

TEST_CASE("eigenvalues against a Jacobi oracle") {
    const auto counts = state::rho_exact_counts(table20(), 6, 3);
    const auto spec = eig_sym(counts / 18.0);
    const auto oracle = jacobi_eigenvalues(counts / 18.0);
    for (std::size_t i = 0; i < 8; ++i) CHECK(spec.eigenvalues[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
    // three identically zero rows
    CHECK(std::count(spec.eigenvalues.begin(), spec.eigenvalues.end(), 0.0) >= 3);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXd a(20, 20);
        for (Eigen::Index i = 0; i < 20; ++i)
            for (Eigen::Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
        const auto ev = eig_sym(a).eigenvalues;
        const auto jo = jacobi_eigenvalues(a);
        for (std::size_t i = 0; i < 20; ++i) REQUIRE(std::abs(ev[i] - jo[i]) < 1e-10);
        const auto pairs = eig_sym_pairs(a);
        CHECK(backward_error(a, pairs) < 1e-12);
        CHECK((pairs.vectors.transpose() * pairs.vectors - Eigen::MatrixXd::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("Table II entries") {
    CHECK(std::abs(vn_entropy(natural_spectrum(10, Series::prime)) - 3.1900) < 5e-5);
    CHECK(std::abs(vn_entropy(natural_spectrum(14, Series::prime)) - 4.8993) < 5e-5);
    CHECK(std::abs(vn_entropy(natural_spectrum(10, Series::twin_gap)) - 3.3450) < 5e-5);
    CHECK(std::abs(vn_entropy(natural_spectrum(16, Series::twin_gap)) - 6.4812) < 5e-5);
    // the literal twin series sits close by
    CHECK(std::abs(vn_entropy(natural_spectrum(16, Series::twin)) - 6.4812) < 1e-2);
}

TEST_CASE("entropy functionals") {
    const auto u = make({0.25, 0.25, 0.25, 0.25});
    CHECK(vn_entropy(u) == doctest::Approx(2));
    for (double a : {0.5, 2.0, 3.0, 10.0}) CHECK(renyi(u, a) == doctest::Approx(2));
    CHECK(vn_entropy(make({1, 0, 0})) == 0);
    CHECK_THROWS_AS(renyi(u, 1.0), std::domain_error);
    CHECK_THROWS_AS(renyi(u, 0.0), std::domain_error);
    CHECK_THROWS_AS(renyi(u, -1.0), std::domain_error);

    const auto s = natural_spectrum(14, Series::prime);
    CHECK(renyi(s, 1 + 1e-6) == doctest::Approx(vn_entropy(s)).epsilon(1e-5));
    CHECK(renyi(s, 1 - 1e-6) == doctest::Approx(vn_entropy(s)).epsilon(1e-5));
    double prev = renyi(s, 0.1);
    for (double a = 0.2; a < 8; a += 0.1) {
        if (std::abs(a - 1) < 1e-9) continue;
        const double r = renyi(s, a);
        CHECK(r <= prev + 1e-12);
        prev = r;
    }
    CHECK(std::exp2(-renyi(s, 2)) == doctest::Approx(purity(s)).epsilon(1e-10));
}

TEST_CASE("purity identities") {
    const auto& t = table20();
    for (int n = 10; n <= 16; n += 2)
        for (int m = 3; m <= 6; ++m) {
            const auto rho = state::rho_exact(t, n, m);
            const double p = purity(rho);
            CHECK(p == doctest::Approx(purity(eig_sym(rho))).epsilon(1e-12));
            CHECK(p == doctest::Approx(purity_counting_formula(t, n, m)).epsilon(1e-12));
        }
    for (auto mode : {EllMode::exact_li_ratio, EllMode::limit_one_over_nlog2}) {
        const auto rho = state::rho_model(consts(), 16, 7, mode);
        CHECK(purity(rho) == doctest::Approx(purity_model_formula(consts(), 16, 7, mode)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(purity_counting_formula(t, 10, 1), std::invalid_argument);
}

TEST_CASE("density checks") {
    const auto c = check_density(state::rho_exact(table20(), 14, 7));
    CHECK(c.asymmetry == 0);
    CHECK(c.trace_error < 1e-12);
    CHECK(c.min_eigenvalue > -1e-13);
    CHECK(c.clamped_mass < 1e-12);
}

TEST_CASE("toy matrix spectra") {
    for (int d : {2, 5, 16}) {
        for (double c : {0.0, 0.3, 1.0}) {
            const auto s = eig_sym(state::toy_rho(d, c));
            CHECK(std::abs(s.eigenvalues[0] - (1 + c * (d - 1)) / d) < 1e-12);
            for (std::size_t i = 1; i < s.eigenvalues.size(); ++i) CHECK(std::abs(s.eigenvalues[i] - (1 - c) / d) < 1e-12);
            const auto levels = ent_spectrum(s);
            if (c == 0.0) {
                REQUIRE(levels.size() == 1);
                CHECK(levels[0].multiplicity == d);
            } else if (c == 1.0) {
                REQUIRE(levels.size() == 1);
                CHECK(levels[0].multiplicity == 1);
                CHECK(levels[0].epsilon == doctest::Approx(0).epsilon(1e-12));
            } else {
                REQUIRE(levels.size() == 2);
                CHECK(levels[0].multiplicity == 1);
                CHECK(levels[1].multiplicity == d - 1);
            }
        }
    }
}

TEST_CASE("uncorrelated gap table reduces to the toy matrix") {
    const double l = state::ell(12, EllMode::limit_one_over_nlog2);
    const std::vector<double> ones(32, 1.0);
    const auto g = state::rho_model_from_gaps(6, l, ones);
    CHECK(g.rho.isApprox(state::toy_rho(32, l).rho, 1e-15));
}

TEST_CASE("model spectrum") {
    const auto ms = model_spectrum(13);
    CHECK(ms.ell == doctest::Approx(1 / (26 * std::log(2.0))));
    CHECK(ms.total_weight <= 1.0);
    CHECK(ms.residual >= 0);
    CHECK(ms.k_m == 50);
    CHECK(ms.lambda0 == doctest::Approx(std::ldexp(1.0, -12) * (1 + ms.ell * 8192)));
    REQUIRE(ms.lambda.size() == ms.k_m);
    CHECK(ms.lambda[2] == doctest::Approx(std::ldexp(1.0, -12) * (1 + ms.ell * 8192 / 36)));
    CHECK(ms.ratio == doctest::Approx(50 / std::sqrt(8192.0)));

    // total weight is the sum of the expanded spectrum
    double sum = 0;
    for (double l : ms.spectrum.eigenvalues) sum += l;
    CHECK(sum == doctest::Approx(ms.total_weight).epsilon(1e-12));
    CHECK(ms.spectrum.eigenvalues.size() == 1 + ms.k_m * (ms.k_m + 1));
    // one more level overshoots
    const double next = std::ldexp(1.0, -12) * (1 + ms.ell * 8192 / (102.0 * 102.0));
    CHECK(ms.total_weight + 102 * next > 1.0);

    const auto levels = ent_spectrum(ms.spectrum, 1e-6);
    REQUIRE(levels.size() >= 6);
    const int expect[] = {1, 2, 4, 6, 8, 10};
    for (int i = 0; i < 6; ++i) CHECK(levels[static_cast<std::size_t>(i)].multiplicity == expect[i]);

    for (int i = 0; i <= 5; ++i) {
        const double lam = i == 0 ? ms.lambda0 : ms.lambda[static_cast<std::size_t>(i - 1)];
        const double gamma = gamma_from_level(lam, 13, ms.ell);
        CHECK(gamma == doctest::Approx(i == 0 ? 8192.0 : 8192.0 / (4.0 * i * i)).epsilon(1e-10));
    }

    CHECK(model_spectrum(13, EllMode::exact_li_ratio).k_m == 49);
    CHECK(model_spectrum(40, EllMode::limit_one_over_nlog2, false).spectrum.eigenvalues.empty());
    CHECK_THROWS_AS(model_spectrum(2), std::invalid_argument);
    CHECK_THROWS_AS(model_spectrum(30), std::invalid_argument);
    // the kappa1 correction brings the ratio to kappa0
    CHECK(std::abs(model_spectrum(30, EllMode::limit_one_over_nlog2, false).corrected_ratio - 1) < 1e-3);
}

TEST_CASE("dense model matrix shows the level clusters") {
    const int m = 10;
    const auto rho = state::rho_model(consts(), 2 * m, m, EllMode::limit_one_over_nlog2);
    const auto ev = eig_sym(rho).eigenvalues;
    // clusters of size 1, 2, 4: the gap to the next cluster dwarfs the spread inside
    const double spread2 = ev[1] - ev[2];
    const double spread4 = ev[3] - ev[6];
    CHECK(ev[0] - ev[1] > 20 * spread2);
    CHECK(ev[2] - ev[3] > 5 * spread4);
    const auto ms = model_spectrum(m);
    CHECK(ev[0] == doctest::Approx(ms.lambda0).epsilon(0.05));
}

TEST_CASE("trace powers of C") {
    const auto C = state::toeplitz_C(consts(), 7);
    const auto t2 = trace_power_C(consts(), 7, 2);
    CHECK(t2.trace == doctest::Approx((C * C).trace()).epsilon(1e-12));
    CHECK(t2.trace == doctest::Approx(trace_C2_closed_form(consts(), 7)).epsilon(1e-12));
    CHECK(t2.normalized == doctest::Approx(t2.trace / std::pow(2.0, 14)));
    const auto t3 = trace_power_C(consts(), 7, 3);
    CHECK(t3.trace == doctest::Approx((C * C * C).trace()).epsilon(1e-12));
    const auto t5 = trace_power_C(consts(), 6, 5);
    const auto C6 = state::toeplitz_C(consts(), 6);
    CHECK(t5.trace == doctest::Approx((C6 * C6 * C6 * C6 * C6).trace()).epsilon(1e-12));

    const double zeta_col[] = {1.15025711, 1.03240399, 1.00787772, 1.00195704};
    for (int s = 2; s <= 5; ++s) {
        const auto t = trace_power_C(consts(), 11, s);
        CHECK(std::abs(t.zeta_prediction - zeta_col[s - 2]) < 1e-8);
        // finite-m corrections of order m^3 2^-m shrink with m
        const auto t9 = trace_power_C(consts(), 9, s);
        CHECK(std::abs(t.normalized - t.product_prediction) < std::abs(t9.normalized - t9.product_prediction));
        CHECK(std::abs(t.normalized / t.product_prediction - 1) < 0.05);
    }
    CHECK_THROWS_AS(trace_power_C(consts(), 15, 2), std::invalid_argument);
    CHECK_THROWS_AS(trace_power_C(consts(), 8, 1), std::invalid_argument);
}

TEST_CASE("trace extrapolation") {
    const auto e = extrapolate_trace_C2(consts(), 9, 13);
    CHECK(std::abs(e.a0 - 1.15048) < 1e-3);
    CHECK(e.m_values.size() == 5);
    CHECK(e.coefficients.size() == 4);
    for (std::size_t i = 0; i < 5; ++i) {
        const int m = e.m_values[i];
        double fit = e.a0;
        for (int j = 0; j < 4; ++j) fit += std::pow(2.0, -m) * std::pow(double(m), j) * e.coefficients[std::size_t(j)];
        CHECK(fit == doctest::Approx(e.y_values[i]).epsilon(1e-9));
    }
    CHECK_THROWS_AS(extrapolate_trace_C2(consts(), 9, 12), std::domain_error);
}

TEST_CASE("analytic entropy") {
    // composite Simpson in u = log x as an oracle
    for (int m : {12, 20, 31}) {
        const auto ms = model_spectrum(m, EllMode::limit_one_over_nlog2, false);
        const double U = std::log(double(ms.k_m));
        const int N = 200'000;
        const double h = U / N;
        auto f = [&](double u) {
            const double x = std::exp(u);
            const double lam = std::ldexp(1.0, 1 - m) * (1 + ms.ell * std::ldexp(1.0, m - 2) / (x * x));
            return -2 * x * x * lam * std::log2(lam);
        };
        double s = f(0) + f(U);
        for (int i = 1; i < N; ++i) s += (i % 2 ? 4 : 2) * f(i * h);
        CHECK(analytic_entropy(m) == doctest::Approx(s * h / 3).epsilon(1e-10));
    }
    const auto sl = analytic_entropy_slope(20, 40);
    CHECK(std::abs(sl.slope - 0.875) < 0.01);
    CHECK(sl.plain_slope > sl.slope);
    CHECK_THROWS_AS(analytic_entropy_slope(20, 21), std::domain_error);
}

TEST_CASE("linear fit") {
    const std::vector<int> n = {4, 6, 8, 10};
    const std::vector<double> s = {1.5, 2.25, 3.0, 3.75};  // 0.75 n/2
    const auto f = linear_fit(n, s);
    CHECK(f.slope == doctest::Approx(0.75));
    CHECK(f.intercept == doctest::Approx(0).scale(1));
    CHECK(f.slope_stderr == doctest::Approx(0).scale(1));
    for (double r : f.residuals) CHECK(std::abs(r) < 1e-12);
    const std::vector<int> two = {4, 6};
    CHECK_THROWS_AS(linear_fit(two, std::vector<double>{1, 2}), std::domain_error);
}

TEST_CASE("entropy scaling") {
    const std::vector<int> ns = {8, 10, 12, 14, 16, 18};
    const auto f = entropy_scaling_fit(table20(), consts(), ns, Series::prime, MatrixFlavor::exact);
    CHECK(f.slope > 0.8);
    CHECK(f.slope < 0.95);
    const auto h = entropy_scaling_fit(table20(), consts(), ns, Series::hadamard, MatrixFlavor::exact);
    CHECK(std::abs(h.slope) < 1e-9);
    for (double e : h.entropies) CHECK(std::abs(e) < 1e-9);

    // S_exact - S_model levels off: its steps shrink with n
    std::vector<double> diff;
    for (int n = 12; n <= 20; n += 2)
        diff.push_back(natural_entropy(table20(), consts(), n, Series::prime, MatrixFlavor::exact) -
                       natural_entropy(table20(), consts(), n, Series::prime, MatrixFlavor::model));
    for (std::size_t i = 2; i < diff.size(); ++i)
        CHECK(std::abs(diff[i] - diff[i - 1]) < std::abs(diff[i - 1] - diff[i - 2]));
    CHECK_THROWS_AS(entropy_scaling_fit(table20(), consts(), std::vector<int>{8, 10}, Series::prime, MatrixFlavor::exact),
                    std::domain_error);
}

TEST_CASE("majorization") {
    const auto peaked = make({1, 0});
    const auto flat = make({0.5, 0.5});
    CHECK(majorization(peaked, flat).verdict == Majorization::a_majorizes_b);
    CHECK(majorization(flat, peaked).verdict == Majorization::b_majorizes_a);
    CHECK(majorization(flat, flat).verdict == Majorization::equal);
    const auto r = majorization(make({0.6, 0.1, 0.1, 0.1, 0.1}), make({0.5, 0.5}));
    CHECK(r.verdict == Majorization::incomparable);
    CHECK(r.first_violation_a == 1);
    CHECK(r.first_violation_b == 0);
    CHECK(r.worst_a == doctest::Approx(-0.3));
    // different lengths are padded
    CHECK(majorization(make({0.5, 0.5}), make({0.25, 0.25, 0.25, 0.25})).verdict == Majorization::a_majorizes_b);
    CHECK(to_string(Majorization::incomparable) == "incomparable");

    // the prime state is more entangled than the Hadamard state
    const auto p = natural_spectrum(12, Series::prime);
    const auto h = natural_spectrum(12, Series::hadamard);
    CHECK(majorization(h, p).verdict == Majorization::a_majorizes_b);
}

TEST_CASE("Schmidt spectra of complementary masks agree") {
    std::mt19937_64 rng(11);
    for (auto s : {Series::prime, Series::twin_gap, Series::moebius}) {
        const auto v = state::build_state(table20(), 12, s);
        for (int k = 0; k < 5; ++k) {
            std::uint32_t bits = 0;
            while (std::popcount(bits) < 3 || std::popcount(bits) > 9) bits = static_cast<std::uint32_t>(rng() & 4095u);
            const state::PartitionMask mask{12, bits};
            const auto a = eig_sym(state::reduce_mask(v, mask)).eigenvalues;
            const auto b = eig_sym(state::reduce_mask(v, mask.complement())).eigenvalues;
            const std::size_t r = std::min(a.size(), b.size());
            for (std::size_t i = 0; i < r; ++i) REQUIRE(std::abs(a[i] - b[i]) < 1e-8);
            for (std::size_t i = r; i < a.size(); ++i) REQUIRE(std::abs(a[i]) < 1e-8);
            for (std::size_t i = r; i < b.size(); ++i) REQUIRE(std::abs(b[i]) < 1e-8);
        }
    }
}

TEST_CASE("random partition survey") {
    const auto a = random_partition_survey(table20(), 10, Series::prime, 20, 5);
    const auto b = random_partition_survey(table20(), 10, Series::prime, 20, 5);
    REQUIRE(a.samples.size() == 20);
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(a.samples[i].mask == b.samples[i].mask);
        CHECK(a.samples[i].entropy == b.samples[i].entropy);
        CHECK(std::popcount(a.samples[i].mask) == 5);
        CHECK(a.samples[i].index == i);
    }
    CHECK(a.natural_entropy == doctest::Approx(vn_entropy(natural_spectrum(10, Series::prime))));

    // n = 4: every balanced mask shows up, the natural one with the natural entropy
    const auto small = random_partition_survey(table20(), 4, Series::prime, 200, 1);
    std::set<std::uint32_t> seen;
    for (const auto& s : small.samples) {
        seen.insert(s.mask);
        if (s.mask == 0b0011u) CHECK(s.entropy == doctest::Approx(small.natural_entropy));
    }
    CHECK(seen.size() == 6);
    CHECK(small.max_sample() >= small.natural_entropy - 1e-12);
    CHECK_THROWS_AS(random_partition_survey(table20(), 5, Series::prime, 3, 1), std::invalid_argument);
}
