// spectra.hpp
// Eigenvalues of density matrices and the entanglement functionals built on
// them. Entropies are in bits.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "primeent/hardylittlewood.hpp"
#include "primeent/primes.hpp"
#include "primeent/statebuilder.hpp"

namespace primeent::spectra {

using primes::PrimeTable;
using state::DensityMatrix;

inline constexpr double kClamp = 1e-14;

struct Spectrum {
    std::vector<double> eigenvalues;  // descending
    Eigen::Index source_dim = 0;
};

// Rows/columns that are identically zero are split off and contribute exact
// zero eigenvalues. Non-symmetric input (beyond 1e-12 max-entry) throws
// std::domain_error.
Spectrum eig_sym(const Eigen::MatrixXd& m);
Spectrum eig_sym(const DensityMatrix& rho);

struct EigenPairs {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns
};
EigenPairs eig_sym_pairs(const Eigen::MatrixXd& m);

// max |m - V diag(values) V^T|.
double backward_error(const Eigen::MatrixXd& m, const EigenPairs& pairs);

double vn_entropy(const Spectrum& spec);
// order > 0, order != 1 (std::domain_error).
double renyi(const Spectrum& spec, double order);

// Tr rho^2 from the entries.
double purity(const DensityMatrix& rho);
double purity(const Spectrum& spec);
// Prime-counting expression for Tr rho_A^2 of rho_exact(n, m), m >= 2.
// Costs O(4^m 2^{n-m}); meant for cross-checks at small m.
double purity_counting_formula(const PrimeTable& table, int n, int m);
// (1/d^2)(d + ell^2 sum_{i != j} C^2(2|i-j|)) for rho_model(n, m).
double purity_model_formula(const hl::HLConstants& hl, int n, int m, state::EllMode mode);

struct DensityCheck {
    double asymmetry = 0;        // max |rho - rho^T|
    double trace_error = 0;      // |Tr rho - 1|
    double min_eigenvalue = 0;
    double clamped_mass = 0;     // sum of |negative eigenvalues|
};
DensityCheck check_density(const DensityMatrix& rho);

struct Level {
    double epsilon = 0;  // -log2 lambda of the first member
    int multiplicity = 0;
};

// Entanglement energies, ascending, with neighbours closer than group_tol
// merged into one level. Eigenvalues <= kClamp are skipped.
std::vector<Level> ent_spectrum(const Spectrum& spec, double group_tol = 1e-6);

inline constexpr double kKappa0 = 0.6123724356957945;  // sqrt(3/8)
inline constexpr double kKappa1 = 1.0035;

struct ModelSpectrum {
    int m = 0;
    double ell = 0;
    std::uint64_t k_m = 0;
    double lambda0 = 0;
    std::vector<double> lambda;  // lambda[i-1] = lambda_i, multiplicity 2i
    double total_weight = 0;
    double residual = 0;         // 1 - total_weight
    double ratio = 0;            // k_m / 2^{m/2}
    double corrected_ratio = 0;  // k_m / (kappa0 2^{m/2} (1 - kappa1/m))
    Spectrum spectrum;           // expanded with multiplicities (empty if not requested)
};

// lambda_0 = 2^{1-m}(1 + ell 2^m), lambda_i = 2^{1-m}(1 + ell 2^m/(2i)^2)
// with k_m the largest k whose total weight stays <= 1. ell taken at n = 2m.
// m >= 3.
ModelSpectrum model_spectrum(int m, state::EllMode mode = state::EllMode::limit_one_over_nlog2, bool expand = true);

// gamma_i = 2^m/(2i)^2 read back from a spectrum: 2^{m-1} lambda_i - 1 over
// ell, for the i-th distinct level (i = 0 is the top eigenvalue).
double gamma_from_level(double lambda, int m, double ell);

struct TracePower {
    int m = 0;
    int s = 0;
    double trace = 0;           // Tr C_m^s
    double normalized = 0;      // 2^{-ms} Tr C_m^s
    double zeta_prediction = 0;     // 1 + zeta(2s-1)/2^{2s-1}
    double product_prediction = 0;  // prod_{p>2} (1 + (p-1)^{1-2s})
};

TracePower trace_power_C(const hl::HLConstants& hl, int m, int s);

// 2 sum_{k=1}^{d-1} (d-k) C^2(2k), d = 2^{m-1}; equals Tr C_m^2.
double trace_C2_closed_form(const hl::HLConstants& hl, int m);

struct Extrapolation {
    double a0 = 0;
    std::vector<double> coefficients;  // a_0..a_3 of the 2^{-m} m^j terms
    std::vector<int> m_values;
    std::vector<double> y_values;      // 2^{-2m} Tr C_m^2
};

// Least squares of 2^{-2m} Tr C_m^2 against a0 + 2^{-m} sum_{j=0}^3 a_j m^j.
Extrapolation extrapolate_trace_C2(const hl::HLConstants& hl, int m_lo, int m_hi);

// Integral approximation of -sum 2i lambda_i log2 lambda_i over x in [1, k_m].
// The lambda_0 term is left out, it only shifts the constant. m >= 3.
double analytic_entropy(int m, state::EllMode mode = state::EllMode::limit_one_over_nlog2);

struct AnalyticSlope {
    double slope = 0;        // of S(m) - (1/4) log2 m
    double plain_slope = 0;  // of S(m)
};
AnalyticSlope analytic_entropy_slope(int m_lo, int m_hi,
                                     state::EllMode mode = state::EllMode::limit_one_over_nlog2);

struct ScalingFit {
    std::vector<int> n_values;
    std::vector<double> entropies;
    double slope = 0;
    double slope_stderr = 0;
    double intercept = 0;
    std::vector<double> residuals;
};

// Unweighted least squares of S against n/2. Fewer than 3 points ->
// std::domain_error.
ScalingFit linear_fit(std::span<const int> n_values, std::span<const double> entropies);

enum class MatrixFlavor { exact, model, odd };

// Natural-partition entropy of one (n, series, flavor) combination. The
// model flavor ignores the series and uses rho_model with exact ell.
double natural_entropy(const PrimeTable& table, const hl::HLConstants& hl, int n, state::Series series,
                       MatrixFlavor flavor);

ScalingFit entropy_scaling_fit(const PrimeTable& table, const hl::HLConstants& hl, std::span<const int> n_list,
                               state::Series series, MatrixFlavor flavor);

enum class Majorization { a_majorizes_b, b_majorizes_a, equal, incomparable };
std::string_view to_string(Majorization v);

struct MajorizationResult {
    Majorization verdict = Majorization::incomparable;
    long first_violation_a = -1;  // first k where A_k < B_k - slack (a >- b fails)
    long first_violation_b = -1;  // first k where B_k < A_k - slack
    double worst_a = 0;           // min_k (A_k - B_k)
    double worst_b = 0;           // min_k (B_k - A_k)
};

MajorizationResult majorization(const Spectrum& a, const Spectrum& b, double slack = 1e-12);

struct SurveySample {
    std::size_t index = 0;
    std::uint32_t mask = 0;
    double entropy = 0;
};

struct Survey {
    double natural_entropy = 0;
    std::vector<SurveySample> samples;
    double max_sample() const;
};

// count random balanced masks drawn by shuffling qubit indices with
// mt19937_64(seed) and taking the first n/2. n even.
Survey random_partition_survey(const PrimeTable& table, int n, state::Series series, std::size_t count,
                               std::uint64_t seed);

}  // namespace primeent::spectra
