// primes.hpp
// Elementary arithmetic tables: primality bitmap, Moebius values, Mertens
// sums, totients and a deterministic Miller-Rabin check.
//
// Bitmap encoding:
//   bit i  ->  odd number 2*i + 1   (bit 0 is the integer 1, never set)
//   2 is special-cased; all other even numbers are composite.
//
// A table built for limit N answers queries on the closed range [0, N].

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace primeent::primes {

inline constexpr int kMinQubits = 2;
inline constexpr int kMaxQubits = 30;

class PrimeTable {
public:
    // Sieve of Eratosthenes over the odd integers in [0, limit].
    explicit PrimeTable(std::uint64_t limit);

    // Adopt an existing odd-only bitmap (e.g. loaded from the disk cache).
    PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> words);

    PrimeTable(PrimeTable&&) noexcept = default;
    PrimeTable& operator=(PrimeTable&&) noexcept = default;

    std::uint64_t limit() const { return limit_; }

    // Throws std::out_of_range for x > limit().
    bool is_prime(std::uint64_t x) const;

    // Number of primes <= x, O(1) through a per-word rank table.
    std::uint64_t count_upto(std::uint64_t x) const;

    std::vector<std::uint64_t> primes_upto(std::uint64_t x) const;

    // Moebius value, built on first use by a linear sieve over [1, limit].
    int mu(std::uint64_t x) const;

    // M(x) = sum_{a <= x} mu(a); x in [1, limit].
    std::int64_t mertens(std::uint64_t x) const;

    std::span<const std::uint64_t> words() const { return words_; }

private:
    struct MoebiusData {
        std::once_flag once;
        std::vector<std::int8_t> values;
    };

    void build_ranks();
    void ensure_moebius() const;
    bool odd_bit(std::uint64_t x) const { return (words_[x >> 7] >> ((x >> 1) & 63)) & 1u; }

    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> words_;
    std::vector<std::uint32_t> ranks_;  // odd primes before word i
    std::unique_ptr<MoebiusData> moebius_;
};

// Number of 64-bit words holding the odd-number bitmap for [0, limit].
std::size_t bitmap_words(std::uint64_t limit);

// Table for [0, 2^n], 2 <= n <= 30. When cache_dir is non-empty the bitmap is
// read from / written to cache_dir/sieve_<n>.bin; a corrupt file is rebuilt.
PrimeTable sieve(int n, const std::filesystem::path& cache_dir = {});

std::filesystem::path cache_file(const std::filesystem::path& cache_dir, int n);

// FNV-1a over the little-endian bytes of the bitmap words.
std::uint64_t bitmap_checksum(std::span<const std::uint64_t> words);

enum class Verdict { composite, probable_prime };

// Paper witness set; exact for every odd x below kDeterministicBound.
inline constexpr std::uint64_t kWitnesses[] = {2, 3, 5, 7, 11, 13, 17};
inline constexpr std::uint64_t kDeterministicBound = 341'550'071'728'321ULL;

// Strong-probable-prime test. x must be odd and > 2, each witness in [1, x];
// otherwise std::domain_error. A witness equal to x carries no information
// and is skipped.
Verdict miller_rabin(std::uint64_t x, std::span<const std::uint64_t> witnesses);

// Exact primality for any x < kDeterministicBound (small and even x handled
// directly, witnesses >= x dropped).
bool is_prime_deterministic(std::uint64_t x);

// Table lookup for x <= table.limit(), deterministic Miller-Rabin above it.
bool is_prime_extended(const PrimeTable& table, std::uint64_t x);

// Euler's phi by trial division; a >= 1.
std::uint64_t totient(std::uint64_t a);

}  // namespace primeent::primes
