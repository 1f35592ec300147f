// statebuilder.hpp
// Amplitude vectors for arithmetic series over n-bit basis states, and the
// reduced density matrices built from them: exact (full, truncated, odd
// block), the Hardy-Littlewood model, the toy uniform-coupling matrix, and
// partial traces over arbitrary qubit subsets.
//
// Basis index x = a + 2^m b for the natural partition: a holds the low m
// bits (subsystem A), b the high n - m bits.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "primeent/hardylittlewood.hpp"
#include "primeent/primes.hpp"

namespace primeent::state {

using primes::PrimeTable;

// twin      p < 2^n with p + 2 prime
// twin_gap  twin plus {2}: consecutive primes with gap <= 2
// triplet   p < 2^n with p + 2 and p + 6 prime
enum class Series { prime, twin, twin_gap, triplet, moebius, hadamard };

std::string_view to_string(Series s);
// Accepts the names above; std::invalid_argument otherwise.
Series parse_series(std::string_view name);

// Real amplitudes with support `indices` (ascending) and values
// weights[i] / sqrt(norm_constant), weights in {-1, +1}.
struct AmplitudeVector {
    int n = 0;
    Series series = Series::prime;
    std::vector<std::uint32_t> indices;
    std::vector<std::int8_t> weights;
    std::uint64_t norm_constant = 0;

    double scale() const;
    double amplitude(std::uint64_t x) const;
    std::vector<double> dense() const;
};

// Needs table.limit() >= 2^n - 1 for every series except hadamard. Tuple
// partners beyond the table are tested with Miller-Rabin.
// Empty series -> std::domain_error.
AmplitudeVector build_state(const PrimeTable& table, int n, Series series);

struct PartitionMask {
    int n = 0;
    std::uint32_t a_bits = 0;  // bit q set <=> qubit q (weight 2^q) belongs to A

    static PartitionMask natural(int n, int m);
    PartitionMask complement() const;
    int size() const;
    // Non-empty proper subset of n qubits, else std::invalid_argument.
    void validate() const;
};

enum class Flavor { full, truncated, odd, model, toy };
std::string_view to_string(Flavor f);

struct DensityMatrix {
    Eigen::MatrixXd rho;
    std::vector<std::uint64_t> labels;  // basis label of each row/column
    Flavor flavor = Flavor::full;

    Eigen::Index dim() const { return rho.rows(); }
};

// Basis labels 0, 2, 4, ..., 2^m - 2, 1, 3, ..., 2^m - 1.
std::vector<std::uint64_t> even_odd_order(int m);

// psi(b, a) = 1 iff a + 2^m b is prime; 2^{n-m} x 2^m, natural ordering.
Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> psi_matrix(const PrimeTable& table, int n, int m);

// Integer matrix psi^T psi in even-odd ordering (entries are exact integers).
Eigen::MatrixXd rho_exact_counts(const PrimeTable& table, int n, int m);

// psi^T psi / pi(2^n) in even-odd ordering, flavor full. 1 <= m <= n-1.
DensityMatrix rho_exact(const PrimeTable& table, int n, int m);

// Rows/columns {2, 1, 3, 5, ...} of rho_exact, same normalization. m >= 2.
DensityMatrix rho_truncated(const PrimeTable& table, int n, int m);

// Odd-residue block renormalized by pi(2^n) - 1. m >= 2.
DensityMatrix rho_odd(const PrimeTable& table, int n, int m);

enum class EllMode { exact_li_ratio, limit_one_over_nlog2 };

// Li2(2^n)/Li(2^n) or 1/(n log 2).
double ell(int n, EllMode mode);

// d x d zero-diagonal Toeplitz matrix C(2|i-j|), d = 2^{m-1}.
Eigen::MatrixXd toeplitz_C(const hl::HLConstants& hl, int m);

// (1/d)(I + ell C_m) over odd residues. m >= 2.
DensityMatrix rho_model(const hl::HLConstants& hl, int n, int m, EllMode mode = EllMode::exact_li_ratio);

// Same construction with an arbitrary gap table: c_of_gap[g] is used for
// entries with |i - j| = g, g = 1 .. d-1.
DensityMatrix rho_model_from_gaps(int m, double ell_value, std::span<const double> c_of_gap);

// Partial trace over the complement of mask.a_bits. Row/column label k has
// bit j equal to the j-th lowest qubit of A.
DensityMatrix reduce_mask(const AmplitudeVector& state, const PartitionMask& mask);

// (1/d)(I + c (J - I)). d >= 2, 0 <= c <= 1 (std::domain_error otherwise).
DensityMatrix toy_rho(int d, double c);

struct MertensOverlap {
    double overlap = 0;          // <H_n | mu_n>
    std::uint64_t norm_constant = 0;  // number of square-free a < 2^n
    std::int64_t recovered = 0;  // overlap * 2^{n/2} * sqrt(norm_constant), rounded
};

// Needs table.limit() >= 2^n - 1. The Moebius state runs over 1 <= a < 2^n,
// so `recovered` equals M(2^n - 1) = M(2^n) for n >= 2.
MertensOverlap mertens_overlap(const PrimeTable& table, int n);

// sum_{a=1}^{2^n-1} a^{-2 sigma}; sigma <= 1/2 -> std::domain_error.
double dirichlet_norm(int n, double sigma);

}  // namespace primeent::state
