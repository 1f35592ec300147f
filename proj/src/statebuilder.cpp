#include "primeent/statebuilder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "primeent/counting.hpp"

namespace primeent::state {

namespace {

std::uint64_t basis_size(int n) { return 1ULL << n; }

void check_nm(int n, int m, int m_min, const char* who) {
    if (n < 2 || n > primes::kMaxQubits || m < m_min || m > n - 1)
        throw std::invalid_argument(std::string(who) + ": need " + std::to_string(m_min) + " <= m <= n-1, n <= 30");
}

void require_table(const PrimeTable& table, int n, const char* who) {
    if (table.limit() + 1 < basis_size(n))
        throw std::out_of_range(std::string(who) + ": prime table does not cover 2^" + std::to_string(n));
}

// Extract the bits of x at `positions` into a compact integer.
std::uint32_t gather(std::uint32_t x, std::span<const int> positions) {
    std::uint32_t out = 0;
    for (std::size_t j = 0; j < positions.size(); ++j) out |= ((x >> positions[j]) & 1u) << j;
    return out;
}

std::vector<int> positions_of(std::uint32_t bits, int n) {
    std::vector<int> out;
    for (int q = 0; q < n; ++q)
        if ((bits >> q) & 1u) out.push_back(q);
    return out;
}

void mirror_lower(Eigen::MatrixXd& m) { m.triangularView<Eigen::StrictlyUpper>() = m.transpose(); }

// Unnormalized sum_b w_b w_b^T for the state's weights, rows/cols in the
// compact A index. Sparse outer products per b unless the support is dense.
Eigen::MatrixXd accumulate(const AmplitudeVector& state, const PartitionMask& mask) {
    const auto a_pos = positions_of(mask.a_bits, mask.n);
    const auto b_pos = positions_of(~mask.a_bits & static_cast<std::uint32_t>(basis_size(mask.n) - 1), mask.n);
    const Eigen::Index dim = Eigen::Index{1} << a_pos.size();
    const Eigen::Index nb = Eigen::Index{1} << b_pos.size();

    struct Entry {
        std::uint32_t b, a;
        std::int8_t w;
    };
    std::vector<Entry> entries(state.indices.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto x = state.indices[i];
        entries[i] = {gather(x, b_pos), gather(x, a_pos), state.weights[i]};
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& l, const Entry& r) { return l.b < r.b; });

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    const double fill = static_cast<double>(entries.size()) / static_cast<double>(basis_size(mask.n));
    if (fill > 0.25) {
        Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(nb, dim);
        for (const auto& e : entries) psi(e.b, e.a) = e.w;
        out.selfadjointView<Eigen::Lower>().rankUpdate(psi.transpose());
    } else {
        std::size_t lo = 0;
        while (lo < entries.size()) {
            std::size_t hi = lo;
            while (hi < entries.size() && entries[hi].b == entries[lo].b) ++hi;
            for (std::size_t i = lo; i < hi; ++i) {
                const auto ai = entries[i].a;
                const double wi = entries[i].w;
                for (std::size_t j = lo; j <= i; ++j) {
                    const auto aj = entries[j].a;
                    // keep the lower triangle
                    if (ai >= aj)
                        out(ai, aj) += wi * entries[j].w;
                    else
                        out(aj, ai) += wi * entries[j].w;
                }
            }
            lo = hi;
        }
    }
    mirror_lower(out);
    return out;
}

Eigen::MatrixXd permute(const Eigen::MatrixXd& m, std::span<const std::uint64_t> labels) {
    const auto d = static_cast<Eigen::Index>(labels.size());
    Eigen::MatrixXd out(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i)
            out(i, j) = m(static_cast<Eigen::Index>(labels[i]), static_cast<Eigen::Index>(labels[j]));
    return out;
}

std::vector<std::uint64_t> odd_labels(int m) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t a = 1; a < basis_size(m); a += 2) out.push_back(a);
    return out;
}

}  // namespace

std::string_view to_string(Series s) {
    switch (s) {
        case Series::prime: return "prime";
        case Series::twin: return "twin";
        case Series::twin_gap: return "twin_gap";
        case Series::triplet: return "triplet";
        case Series::moebius: return "moebius";
        case Series::hadamard: return "hadamard";
    }
    return "?";
}

Series parse_series(std::string_view name) {
    for (auto s : {Series::prime, Series::twin, Series::twin_gap, Series::triplet, Series::moebius, Series::hadamard})
        if (to_string(s) == name) return s;
    throw std::invalid_argument("unknown series '" + std::string(name) + "'");
}

std::string_view to_string(Flavor f) {
    switch (f) {
        case Flavor::full: return "full";
        case Flavor::truncated: return "truncated";
        case Flavor::odd: return "odd";
        case Flavor::model: return "model";
        case Flavor::toy: return "toy";
    }
    return "?";
}

double AmplitudeVector::scale() const { return 1.0 / std::sqrt(static_cast<double>(norm_constant)); }

double AmplitudeVector::amplitude(std::uint64_t x) const {
    auto it = std::lower_bound(indices.begin(), indices.end(), x);
    if (it == indices.end() || *it != x) return 0.0;
    return weights[static_cast<std::size_t>(it - indices.begin())] * scale();
}

std::vector<double> AmplitudeVector::dense() const {
    std::vector<double> out(basis_size(n), 0.0);
    const double s = scale();
    for (std::size_t i = 0; i < indices.size(); ++i) out[indices[i]] = weights[i] * s;
    return out;
}

AmplitudeVector build_state(const PrimeTable& table, int n, Series series) {
    if (n < 1 || n > primes::kMaxQubits) throw std::invalid_argument("build_state: n outside [1, 30]");
    AmplitudeVector v;
    v.n = n;
    v.series = series;
    const std::uint64_t size = basis_size(n);
    auto push = [&v](std::uint64_t x, int w) {
        v.indices.push_back(static_cast<std::uint32_t>(x));
        v.weights.push_back(static_cast<std::int8_t>(w));
    };
    auto prime = [&table](std::uint64_t x) { return primes::is_prime_extended(table, x); };

    if (series == Series::hadamard) {
        v.indices.resize(size);
        std::iota(v.indices.begin(), v.indices.end(), 0u);
        v.weights.assign(size, 1);
        v.norm_constant = size;
        return v;
    }
    require_table(table, n, "build_state");
    switch (series) {
        case Series::prime:
            for (std::uint64_t p = 2; p < size; ++p)
                if (table.is_prime(p)) push(p, 1);
            break;
        case Series::twin:
        case Series::twin_gap:
            if (series == Series::twin_gap && size > 2) push(2, 1);
            for (std::uint64_t p = 3; p < size; p += 2)
                if (table.is_prime(p) && prime(p + 2)) push(p, 1);
            break;
        case Series::triplet:
            for (std::uint64_t p = 3; p < size; p += 2)
                if (table.is_prime(p) && prime(p + 2) && prime(p + 6)) push(p, 1);
            break;
        case Series::moebius:
            for (std::uint64_t a = 1; a < size; ++a)
                if (int mu = table.mu(a); mu != 0) push(a, mu);
            break;
        case Series::hadamard: break;
    }
    if (v.indices.empty())
        throw std::domain_error("build_state: series '" + std::string(to_string(series)) + "' is empty below 2^" +
                                std::to_string(n));
    v.norm_constant = v.indices.size();
    return v;
}

PartitionMask PartitionMask::natural(int n, int m) {
    PartitionMask mk{n, static_cast<std::uint32_t>(basis_size(m) - 1)};
    mk.validate();
    return mk;
}

PartitionMask PartitionMask::complement() const {
    return {n, ~a_bits & static_cast<std::uint32_t>(basis_size(n) - 1)};
}

int PartitionMask::size() const { return std::popcount(a_bits); }

void PartitionMask::validate() const {
    if (n < 2 || n > primes::kMaxQubits) throw std::invalid_argument("PartitionMask: n outside [2, 30]");
    const auto full = static_cast<std::uint32_t>(basis_size(n) - 1);
    if (a_bits == 0 || (a_bits & ~full) != 0 || a_bits == full)
        throw std::invalid_argument("PartitionMask: A must be a non-empty proper subset of the qubits");
}

std::vector<std::uint64_t> even_odd_order(int m) {
    std::vector<std::uint64_t> out;
    out.reserve(basis_size(m));
    for (std::uint64_t a = 0; a < basis_size(m); a += 2) out.push_back(a);
    for (std::uint64_t a = 1; a < basis_size(m); a += 2) out.push_back(a);
    return out;
}

Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> psi_matrix(const PrimeTable& table, int n, int m) {
    check_nm(n, m, 1, "psi_matrix");
    require_table(table, n, "psi_matrix");
    const auto rows = static_cast<Eigen::Index>(basis_size(n - m));
    const auto cols = static_cast<Eigen::Index>(basis_size(m));
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> psi(rows, cols);
    for (Eigen::Index b = 0; b < rows; ++b)
        for (Eigen::Index a = 0; a < cols; ++a)
            psi(b, a) = table.is_prime(static_cast<std::uint64_t>(a) + (static_cast<std::uint64_t>(b) << m)) ? 1 : 0;
    return psi;
}

Eigen::MatrixXd rho_exact_counts(const PrimeTable& table, int n, int m) {
    check_nm(n, m, 1, "rho_exact");
    const auto state = build_state(table, n, Series::prime);
    return permute(accumulate(state, PartitionMask::natural(n, m)), even_odd_order(m));
}

DensityMatrix rho_exact(const PrimeTable& table, int n, int m) {
    DensityMatrix d;
    d.rho = rho_exact_counts(table, n, m) / static_cast<double>(counting::pi(table, basis_size(n) - 1));
    d.labels = even_odd_order(m);
    d.flavor = Flavor::full;
    return d;
}

DensityMatrix rho_truncated(const PrimeTable& table, int n, int m) {
    check_nm(n, m, 2, "rho_truncated");
    const auto state = build_state(table, n, Series::prime);
    std::vector<std::uint64_t> labels{2};
    for (auto a : odd_labels(m)) labels.push_back(a);
    DensityMatrix d;
    d.rho = permute(accumulate(state, PartitionMask::natural(n, m)), labels) / static_cast<double>(state.norm_constant);
    d.labels = std::move(labels);
    d.flavor = Flavor::truncated;
    return d;
}

DensityMatrix rho_odd(const PrimeTable& table, int n, int m) {
    check_nm(n, m, 2, "rho_odd");
    const auto state = build_state(table, n, Series::prime);
    auto labels = odd_labels(m);
    DensityMatrix d;
    d.rho = permute(accumulate(state, PartitionMask::natural(n, m)), labels) /
            static_cast<double>(state.norm_constant - 1);
    d.labels = std::move(labels);
    d.flavor = Flavor::odd;
    return d;
}

double ell(int n, EllMode mode) {
    if (n < 2) throw std::invalid_argument("ell: n must be >= 2");
    if (mode == EllMode::limit_one_over_nlog2) return 1.0 / (n * std::log(2.0));
    const double N = std::ldexp(1.0, n);
    return counting::li2(N) / counting::li(N);
}

Eigen::MatrixXd toeplitz_C(const hl::HLConstants& hl, int m) {
    if (m < 2 || m > 20) throw std::invalid_argument("toeplitz_C: m outside [2, 20]");
    const auto d = static_cast<Eigen::Index>(basis_size(m - 1));
    const auto c = hl.C_table(2 * static_cast<std::uint64_t>(d));
    Eigen::MatrixXd out(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) out(i, j) = i == j ? 0.0 : c[2 * static_cast<std::size_t>(std::abs(i - j))];
    return out;
}

DensityMatrix rho_model_from_gaps(int m, double ell_value, std::span<const double> c_of_gap) {
    if (m < 2 || m > 20) throw std::invalid_argument("rho_model: m outside [2, 20]");
    const auto d = static_cast<Eigen::Index>(basis_size(m - 1));
    if (static_cast<Eigen::Index>(c_of_gap.size()) < d) throw std::invalid_argument("rho_model: gap table too short");
    DensityMatrix out;
    out.rho.resize(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i)
            out.rho(i, j) = (i == j ? 1.0 : ell_value * c_of_gap[static_cast<std::size_t>(std::abs(i - j))]) /
                            static_cast<double>(d);
    out.labels = odd_labels(m);
    out.flavor = Flavor::model;
    return out;
}

DensityMatrix rho_model(const hl::HLConstants& hl, int n, int m, EllMode mode) {
    check_nm(n, m, 2, "rho_model");
    const auto d = basis_size(m - 1);
    std::vector<double> gaps(d, 0.0);
    for (std::uint64_t g = 1; g < d; ++g) gaps[g] = hl.C(2 * g);
    return rho_model_from_gaps(m, ell(n, mode), gaps);
}

DensityMatrix reduce_mask(const AmplitudeVector& state, const PartitionMask& mask) {
    mask.validate();
    if (mask.n != state.n) throw std::invalid_argument("reduce_mask: mask and state disagree on n");
    DensityMatrix d;
    d.rho = accumulate(state, mask) / static_cast<double>(state.norm_constant);
    d.labels.resize(static_cast<std::size_t>(d.rho.rows()));
    std::iota(d.labels.begin(), d.labels.end(), 0u);
    d.flavor = Flavor::full;
    return d;
}

DensityMatrix toy_rho(int d, double c) {
    if (d < 2) throw std::invalid_argument("toy_rho: d must be >= 2");
    if (!(c >= 0.0 && c <= 1.0)) throw std::domain_error("toy_rho: coupling must lie in [0, 1]");
    DensityMatrix out;
    out.rho = Eigen::MatrixXd::Constant(d, d, c / d);
    out.rho.diagonal().setConstant(1.0 / d);
    out.labels.resize(static_cast<std::size_t>(d));
    std::iota(out.labels.begin(), out.labels.end(), 0u);
    out.flavor = Flavor::toy;
    return out;
}

MertensOverlap mertens_overlap(const PrimeTable& table, int n) {
    const auto mu = build_state(table, n, Series::moebius);
    const auto h = build_state(table, n, Series::hadamard);
    double overlap = 0;
    for (std::size_t i = 0; i < mu.indices.size(); ++i) overlap += mu.weights[i] * mu.scale() * h.amplitude(mu.indices[i]);
    MertensOverlap r;
    r.overlap = overlap;
    r.norm_constant = mu.norm_constant;
    r.recovered = std::llround(overlap * std::sqrt(static_cast<double>(basis_size(n))) *
                               std::sqrt(static_cast<double>(mu.norm_constant)));
    return r;
}

double dirichlet_norm(int n, double sigma) {
    if (!(sigma > 0.5)) throw std::domain_error("dirichlet_norm: sum diverges for sigma <= 1/2");
    if (n < 1 || n > 40) throw std::invalid_argument("dirichlet_norm: n outside [1, 40]");
    double s = 0;
    for (std::uint64_t a = basis_size(n) - 1; a >= 1; --a) s += std::pow(static_cast<double>(a), -2.0 * sigma);
    return s;
}

}  // namespace primeent::state
