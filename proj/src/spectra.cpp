#include "primeent/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/constants/constants.hpp>

#include "primeent/counting.hpp"

namespace primeent::spectra {

namespace {

void check_symmetric(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw std::domain_error("eig_sym: matrix is not square");
    const double scale = m.cwiseAbs().maxCoeff();
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(scale, 1e-300)) throw std::domain_error("eig_sym: matrix is not symmetric");
}

std::vector<Eigen::Index> nonzero_rows(const Eigen::MatrixXd& m) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        if ((m.row(i).array() != 0.0).any()) keep.push_back(i);
    return keep;
}

double xlog2x(double x) { return x > kClamp ? x * std::log2(x) : 0.0; }

double harmonic(std::uint64_t k) {
    if (k == 0) return 0.0;
    return boost::math::digamma(static_cast<double>(k) + 1.0) + boost::math::constants::euler<double>();
}

// Total weight lambda_0 + sum_{i<=k} 2i lambda_i.
double model_weight(int m, double ell, std::uint64_t k) {
    const double two_m = std::ldexp(1.0, m);
    const double kk = static_cast<double>(k);
    return std::ldexp(1.0, 1 - m) * (1.0 + ell * two_m + kk * (kk + 1.0) + ell * two_m * harmonic(k) / 2.0);
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace

Spectrum eig_sym(const Eigen::MatrixXd& m) {
    check_symmetric(m);
    Spectrum spec;
    spec.source_dim = m.rows();
    const auto keep = nonzero_rows(m);
    const auto k = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < k; ++i) sub(i, j) = m(keep[i], keep[j]);
    spec.eigenvalues.assign(static_cast<std::size_t>(m.rows()), 0.0);
    if (k > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw std::runtime_error("eig_sym: eigensolver did not converge");
        for (Eigen::Index i = 0; i < k; ++i) spec.eigenvalues[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    }
    std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end(), std::greater<>());
    return spec;
}

Spectrum eig_sym(const DensityMatrix& rho) { return eig_sym(rho.rho); }

EigenPairs eig_sym_pairs(const Eigen::MatrixXd& m) {
    check_symmetric(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) throw std::runtime_error("eig_sym_pairs: eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

double backward_error(const Eigen::MatrixXd& m, const EigenPairs& pairs) {
    const Eigen::MatrixXd rec = pairs.vectors * pairs.values.asDiagonal() * pairs.vectors.transpose();
    return (m - rec).cwiseAbs().maxCoeff();
}

double vn_entropy(const Spectrum& spec) {
    double s = 0;
    for (double l : spec.eigenvalues) s -= xlog2x(l);
    return s;
}

double renyi(const Spectrum& spec, double order) {
    if (!(order > 0.0) || order == 1.0) throw std::domain_error("renyi: order must be > 0 and != 1");
    double sum = 0;
    for (double l : spec.eigenvalues)
        if (l > kClamp) sum += std::pow(l, order);
    return std::log2(sum) / (1.0 - order);
}

double purity(const DensityMatrix& rho) { return rho.rho.squaredNorm(); }

double purity(const Spectrum& spec) {
    double s = 0;
    for (double l : spec.eigenvalues) s += l * l;
    return s;
}

double purity_counting_formula(const PrimeTable& table, int n, int m) {
    if (m < 2 || m >= n) throw std::invalid_argument("purity_counting_formula: need 2 <= m < n");
    const std::uint64_t N = (1ULL << n) - 1;  // primes below 2^n
    const std::uint64_t M = 1ULL << m;
    const double piN = static_cast<double>(counting::pi(table, N));
    double sum = 2.0 * static_cast<double>(counting::pi(table, M)) - 1.0;
    for (std::uint64_t a = 1; a < M; a += 2) {
        const double c = static_cast<double>(counting::pi_ab(table, M, a, N));
        sum += c * c;
        for (std::uint64_t a2 = a + 2; a2 < M; a2 += 2) {
            const double p = static_cast<double>(counting::pi_abb(table, M, a, a2, N));
            sum += 2.0 * p * p;
        }
    }
    return sum / (piN * piN);
}

double purity_model_formula(const hl::HLConstants& hl, int n, int m, state::EllMode mode) {
    if (m < 2 || m >= n) throw std::invalid_argument("purity_model_formula: need 2 <= m < n");
    const std::uint64_t d = 1ULL << (m - 1);
    const double l = state::ell(n, mode);
    double off = 0;
    for (std::uint64_t k = 1; k < d; ++k) {
        const double c = hl.C(2 * k);
        off += 2.0 * static_cast<double>(d - k) * c * c;
    }
    const double dd = static_cast<double>(d);
    return (dd + l * l * off) / (dd * dd);
}

DensityCheck check_density(const DensityMatrix& rho) {
    DensityCheck c;
    c.asymmetry = (rho.rho - rho.rho.transpose()).cwiseAbs().maxCoeff();
    c.trace_error = std::abs(rho.rho.trace() - 1.0);
    const auto spec = eig_sym(rho.rho);
    c.min_eigenvalue = spec.eigenvalues.empty() ? 0.0 : spec.eigenvalues.back();
    for (double l : spec.eigenvalues)
        if (l < 0) c.clamped_mass -= l;
    return c;
}

std::vector<Level> ent_spectrum(const Spectrum& spec, double group_tol) {
    std::vector<double> eps;
    for (double l : spec.eigenvalues)
        if (l > kClamp) eps.push_back(-std::log2(l));
    std::sort(eps.begin(), eps.end());
    std::vector<Level> out;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (i > 0 && eps[i] - eps[i - 1] <= group_tol)
            ++out.back().multiplicity;
        else
            out.push_back({eps[i], 1});
    }
    return out;
}

ModelSpectrum model_spectrum(int m, state::EllMode mode, bool expand) {
    if (m < 3 || m > 60) throw std::invalid_argument("model_spectrum: m outside [3, 60]");
    if (expand && m > 24) throw std::invalid_argument("model_spectrum: expanded spectrum limited to m <= 24");
    ModelSpectrum r;
    r.m = m;
    r.ell = state::ell(2 * m, mode);
    const double base = std::ldexp(1.0, 1 - m);
    const double two_m = std::ldexp(1.0, m);
    r.lambda0 = base * (1.0 + r.ell * two_m);

    // weight(k) is increasing in k; weight(k) > 1 once k(k+1) > 2^{m-1}
    std::uint64_t lo = 0;
    std::uint64_t hi = static_cast<std::uint64_t>(std::ldexp(1.0, m / 2 + 1)) + 2;
    if (model_weight(m, r.ell, 0) > 1.0) throw std::domain_error("model_spectrum: lambda_0 alone exceeds unit weight");
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (model_weight(m, r.ell, mid) <= 1.0)
            lo = mid;
        else
            hi = mid;
    }
    r.k_m = lo;
    r.total_weight = model_weight(m, r.ell, r.k_m);
    r.residual = 1.0 - r.total_weight;
    const double root = std::ldexp(1.0, 0) * std::sqrt(two_m);
    r.ratio = static_cast<double>(r.k_m) / root;
    r.corrected_ratio = static_cast<double>(r.k_m) / (kKappa0 * root * (1.0 - kKappa1 / m));

    if (expand) {
        r.lambda.reserve(r.k_m);
        auto& ev = r.spectrum.eigenvalues;
        ev.push_back(r.lambda0);
        for (std::uint64_t i = 1; i <= r.k_m; ++i) {
            const double di = 2.0 * static_cast<double>(i);
            const double li = base * (1.0 + r.ell * two_m / (di * di));
            r.lambda.push_back(li);
            ev.insert(ev.end(), 2 * i, li);
        }
        r.spectrum.source_dim = static_cast<Eigen::Index>(ev.size());
    }
    return r;
}

double gamma_from_level(double lambda, int m, double ell) { return (std::ldexp(lambda, m - 1) - 1.0) / ell; }

double trace_C2_closed_form(const hl::HLConstants& hl, int m) {
    const std::uint64_t d = 1ULL << (m - 1);
    double s = 0;
    for (std::uint64_t k = 1; k < d; ++k) {
        const double c = hl.C(2 * k);
        s += 2.0 * static_cast<double>(d - k) * c * c;
    }
    return s;
}

TracePower trace_power_C(const hl::HLConstants& hl, int m, int s) {
    if (s < 2) throw std::invalid_argument("trace_power_C: s must be >= 2");
    if (m < 2 || m > 14) throw std::invalid_argument("trace_power_C: m outside [2, 14]");
    const Eigen::MatrixXd C = state::toeplitz_C(hl, m);
    // Tr(A B) = sum(A o B) for symmetric A, B; build C^h with h = ceil(s/2)
    const int h = (s + 1) / 2;
    Eigen::MatrixXd high = C;
    for (int i = 1; i < h; ++i) high = high * C;
    Eigen::MatrixXd low = C;
    for (int i = 1; i < s - h; ++i) low = low * C;
    TracePower t;
    t.m = m;
    t.s = s;
    t.trace = high.cwiseProduct(low).sum();
    t.normalized = t.trace * std::pow(2.0, -static_cast<double>(m) * s);
    t.zeta_prediction = 1.0 + std::riemann_zeta(2.0 * s - 1.0) / std::pow(2.0, 2.0 * s - 1.0);
    t.product_prediction = hl.product({hl::Product::zeta_like, s}).value;
    return t;
}

Extrapolation extrapolate_trace_C2(const hl::HLConstants& hl, int m_lo, int m_hi) {
    if (m_hi - m_lo + 1 < 5) throw std::domain_error("extrapolate_trace_C2: need at least 5 values of m");
    Extrapolation e;
    const int rows = m_hi - m_lo + 1;
    Eigen::MatrixXd A(rows, 5);
    Eigen::VectorXd y(rows);
    for (int r = 0; r < rows; ++r) {
        const int m = m_lo + r;
        const double yv = trace_C2_closed_form(hl, m) * std::pow(2.0, -2.0 * m);
        const double w = std::pow(2.0, -m);
        A(r, 0) = 1.0;
        for (int j = 0; j <= 3; ++j) A(r, j + 1) = w * std::pow(static_cast<double>(m), j);
        y(r) = yv;
        e.m_values.push_back(m);
        e.y_values.push_back(yv);
    }
    const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
    e.a0 = coef(0);
    for (int j = 1; j <= 4; ++j) e.coefficients.push_back(coef(j));
    return e;
}

double analytic_entropy(int m, state::EllMode mode) {
    const auto ms = model_spectrum(m, mode, false);
    const double ell = ms.ell;
    const double upper = std::log(static_cast<double>(ms.k_m));
    const double pref = std::ldexp(1.0, 2 - m);
    const double shift = ell * std::ldexp(1.0, m - 2);
    // x = e^t
    auto f = [&](double t) {
        const double x = std::exp(t);
        const double u = 1.0 + shift / (x * x);
        return x * x * pref * u * ((1.0 - m) + std::log2(u));
    };
    if (upper <= 0) return 0.0;
    double err = 0;
    return -boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, upper, 20, 1e-13, &err);
}

AnalyticSlope analytic_entropy_slope(int m_lo, int m_hi, state::EllMode mode) {
    if (m_hi - m_lo < 2) throw std::domain_error("analytic_entropy_slope: need at least 3 values of m");
    std::vector<double> x, y, yc;
    for (int m = m_lo; m <= m_hi; ++m) {
        const double s = analytic_entropy(m, mode);
        x.push_back(m);
        y.push_back(s);
        yc.push_back(s - 0.25 * std::log2(static_cast<double>(m)));
    }
    return {least_squares_slope(x, yc), least_squares_slope(x, y)};
}

ScalingFit linear_fit(std::span<const int> n_values, std::span<const double> entropies) {
    if (n_values.size() != entropies.size()) throw std::invalid_argument("linear_fit: size mismatch");
    if (n_values.size() < 3) throw std::domain_error("linear_fit: need at least 3 points");
    ScalingFit f;
    f.n_values.assign(n_values.begin(), n_values.end());
    f.entropies.assign(entropies.begin(), entropies.end());
    std::vector<double> x;
    for (int n : n_values) x.push_back(n / 2.0);
    const double k = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k;
    const double my = std::accumulate(f.entropies.begin(), f.entropies.end(), 0.0) / k;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (f.entropies[i] - my);
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = f.entropies[i] - (f.slope * x[i] + f.intercept);
        f.residuals.push_back(r);
        ss += r * r;
    }
    f.slope_stderr = std::sqrt(ss / (k - 2.0) / sxx);
    return f;
}

double natural_entropy(const PrimeTable& table, const hl::HLConstants& hl, int n, state::Series series,
                       MatrixFlavor flavor) {
    const int m = n / 2;
    switch (flavor) {
        case MatrixFlavor::exact: {
            const auto st = state::build_state(table, n, series);
            return vn_entropy(eig_sym(state::reduce_mask(st, state::PartitionMask::natural(n, m))));
        }
        case MatrixFlavor::model: return vn_entropy(eig_sym(state::rho_model(hl, n, m)));
        case MatrixFlavor::odd: return vn_entropy(eig_sym(state::rho_odd(table, n, m)));
    }
    throw std::logic_error("natural_entropy: unknown flavor");
}

ScalingFit entropy_scaling_fit(const PrimeTable& table, const hl::HLConstants& hl, std::span<const int> n_list,
                               state::Series series, MatrixFlavor flavor) {
    if (n_list.size() < 3) throw std::domain_error("entropy_scaling_fit: need at least 3 points");
    std::vector<double> s;
    for (int n : n_list) s.push_back(natural_entropy(table, hl, n, series, flavor));
    return linear_fit(n_list, s);
}

std::string_view to_string(Majorization v) {
    switch (v) {
        case Majorization::a_majorizes_b: return "a_majorizes_b";
        case Majorization::b_majorizes_a: return "b_majorizes_a";
        case Majorization::equal: return "equal";
        case Majorization::incomparable: return "incomparable";
    }
    return "?";
}

MajorizationResult majorization(const Spectrum& a, const Spectrum& b, double slack) {
    std::vector<double> x = a.eigenvalues, y = b.eigenvalues;
    std::sort(x.begin(), x.end(), std::greater<>());
    std::sort(y.begin(), y.end(), std::greater<>());
    const std::size_t len = std::max(x.size(), y.size());
    x.resize(len, 0.0);
    y.resize(len, 0.0);
    MajorizationResult r;
    double sa = 0, sb = 0;
    r.worst_a = r.worst_b = len ? std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        sa += x[k];
        sb += y[k];
        r.worst_a = std::min(r.worst_a, sa - sb);
        r.worst_b = std::min(r.worst_b, sb - sa);
        if (r.first_violation_a < 0 && sa < sb - slack) r.first_violation_a = static_cast<long>(k);
        if (r.first_violation_b < 0 && sb < sa - slack) r.first_violation_b = static_cast<long>(k);
    }
    const bool ab = r.first_violation_a < 0;
    const bool ba = r.first_violation_b < 0;
    r.verdict = ab && ba ? Majorization::equal
                : ab     ? Majorization::a_majorizes_b
                : ba     ? Majorization::b_majorizes_a
                         : Majorization::incomparable;
    return r;
}

double Survey::max_sample() const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : samples) best = std::max(best, s.entropy);
    return best;
}

Survey random_partition_survey(const PrimeTable& table, int n, state::Series series, std::size_t count,
                               std::uint64_t seed) {
    if (n % 2 != 0) throw std::invalid_argument("random_partition_survey: n must be even");
    if (count == 0) throw std::invalid_argument("random_partition_survey: count must be >= 1");
    const auto st = state::build_state(table, n, series);
    Survey out;
    out.natural_entropy = vn_entropy(eig_sym(state::reduce_mask(st, state::PartitionMask::natural(n, n / 2))));
    std::mt19937_64 rng(seed);
    std::vector<int> qubits(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < count; ++i) {
        std::iota(qubits.begin(), qubits.end(), 0);
        std::shuffle(qubits.begin(), qubits.end(), rng);
        std::uint32_t bits = 0;
        for (int j = 0; j < n / 2; ++j) bits |= 1u << qubits[static_cast<std::size_t>(j)];
        const state::PartitionMask mask{n, bits};
        out.samples.push_back({i, bits, vn_entropy(eig_sym(state::reduce_mask(st, mask)))});
    }
    return out;
}

}  // namespace primeent::spectra
