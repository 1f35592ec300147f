#include "primeent/primes.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace primeent::primes {

namespace {

constexpr std::array<char, 4> kCacheMagic = {'P', 'S', 'V', '1'};
constexpr std::uint64_t kSegmentBits = 1u << 18;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1u) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

// Odd primes up to `bound` by a plain byte sieve; only used for the base
// primes of the segmented sieve (bound <= 2^15 + 1).
std::vector<std::uint64_t> small_odd_primes(std::uint64_t bound) {
    std::vector<char> composite(bound + 1, 0);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 3; i <= bound; i += 2) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= bound; j += 2 * i) composite[j] = 1;
    }
    return out;
}

std::vector<std::uint64_t> sieve_odd_bitmap(std::uint64_t limit) {
    const std::size_t nwords = bitmap_words(limit);
    std::vector<std::uint64_t> words(nwords, ~0ULL);
    // bit i <-> 2i+1; valid bits are those with 2i+1 <= limit.
    const std::uint64_t nbits = limit >= 1 ? (limit - 1) / 2 + 1 : 0;
    if (nbits % 64 != 0) words.back() &= (1ULL << (nbits % 64)) - 1;
    if (nwords == 0) return words;
    words[0] &= ~1ULL;  // 1 is not prime

    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
    const auto base = small_odd_primes(root);
    // next[k]: bit index of the next odd multiple of base[k] still to clear
    std::vector<std::uint64_t> next(base.size());
    for (std::size_t k = 0; k < base.size(); ++k) next[k] = (base[k] * base[k]) / 2;

    for (std::uint64_t lo = 0; lo < nbits; lo += kSegmentBits) {
        const std::uint64_t hi = std::min(nbits, lo + kSegmentBits);
        for (std::size_t k = 0; k < base.size(); ++k) {
            const std::uint64_t p = base[k];
            std::uint64_t i = next[k];
            for (; i < hi; i += p) words[i >> 6] &= ~(1ULL << (i & 63));
            next[k] = i;
        }
    }
    return words;
}

template <typename T>
void write_le(std::ostream& os, T value) {
    std::array<char, sizeof(T)> buf{};
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
    os.write(buf.data(), buf.size());
}

template <typename T>
bool read_le(std::istream& is, T& value) {
    std::array<unsigned char, sizeof(T)> buf{};
    if (!is.read(reinterpret_cast<char*>(buf.data()), buf.size())) return false;
    value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(buf[i]) << (8 * i);
    return true;
}

bool load_cache(const std::filesystem::path& file, int n, std::vector<std::uint64_t>& words) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return false;
    std::array<char, 4> magic{};
    std::uint32_t stored_n = 0;
    std::uint64_t checksum = 0;
    if (!in.read(magic.data(), magic.size()) || magic != kCacheMagic) return false;
    if (!read_le(in, stored_n) || stored_n != static_cast<std::uint32_t>(n)) return false;
    if (!read_le(in, checksum)) return false;
    words.assign(bitmap_words(1ULL << n), 0);
    for (auto& w : words)
        if (!read_le(in, w)) return false;
    if (in.peek() != std::char_traits<char>::eof()) return false;
    return bitmap_checksum(words) == checksum;
}

void store_cache(const std::filesystem::path& file, int n, std::span<const std::uint64_t> words) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    auto tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) return;
        out.write(kCacheMagic.data(), kCacheMagic.size());
        write_le(out, static_cast<std::uint32_t>(n));
        write_le(out, bitmap_checksum(words));
        for (auto w : words) write_le(out, w);
        if (!out) return;
    }
    std::filesystem::rename(tmp, file, ec);
}

}  // namespace

std::size_t bitmap_words(std::uint64_t limit) {
    const std::uint64_t nbits = limit >= 1 ? (limit - 1) / 2 + 1 : 0;
    return static_cast<std::size_t>((nbits + 63) / 64);
}

std::uint64_t bitmap_checksum(std::span<const std::uint64_t> words) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto w : words) {
        for (int i = 0; i < 8; ++i) {
            h ^= (w >> (8 * i)) & 0xFF;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

PrimeTable::PrimeTable(std::uint64_t limit)
    : limit_(limit), words_(sieve_odd_bitmap(limit)), moebius_(std::make_unique<MoebiusData>()) {
    build_ranks();
}

PrimeTable::PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> words)
    : limit_(limit), words_(std::move(words)), moebius_(std::make_unique<MoebiusData>()) {
    if (words_.size() != bitmap_words(limit)) throw std::invalid_argument("PrimeTable: bitmap size does not match limit");
    build_ranks();
}

void PrimeTable::build_ranks() {
    ranks_.resize(words_.size());
    std::uint32_t acc = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        ranks_[i] = acc;
        acc += static_cast<std::uint32_t>(std::popcount(words_[i]));
    }
}

bool PrimeTable::is_prime(std::uint64_t x) const {
    if (x > limit_) throw std::out_of_range("PrimeTable::is_prime: " + std::to_string(x) + " beyond limit " + std::to_string(limit_));
    if (x == 2) return true;
    if (x < 2 || (x & 1u) == 0) return false;
    return odd_bit(x);
}

std::uint64_t PrimeTable::count_upto(std::uint64_t x) const {
    if (x > limit_) throw std::out_of_range("PrimeTable::count_upto: " + std::to_string(x) + " beyond limit " + std::to_string(limit_));
    if (x < 2) return 0;
    const std::uint64_t last = (x - 1) >> 1;  // bit index of the largest odd <= x
    const std::uint64_t w = last >> 6;
    const std::uint64_t bit = last & 63;
    const std::uint64_t mask = bit == 63 ? ~0ULL : ((1ULL << (bit + 1)) - 1);
    return 1 + ranks_[w] + static_cast<std::uint64_t>(std::popcount(words_[w] & mask));
}

std::vector<std::uint64_t> PrimeTable::primes_upto(std::uint64_t x) const {
    x = std::min(x, limit_);
    std::vector<std::uint64_t> out;
    if (x < 2) return out;
    out.reserve(count_upto(x));
    out.push_back(2);
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t bits = words_[w];
        while (bits) {
            const std::uint64_t p = 2 * (w * 64 + static_cast<std::uint64_t>(std::countr_zero(bits))) + 1;
            if (p > x) return out;
            out.push_back(p);
            bits &= bits - 1;
        }
    }
    return out;
}

void PrimeTable::ensure_moebius() const {
    std::call_once(moebius_->once, [this] {
        auto& mu = moebius_->values;
        mu.assign(limit_ + 1, 0);
        if (limit_ >= 1) mu[1] = 1;
        const auto primes = primes_upto(limit_ / 2);
        for (std::uint64_t i = 2; i <= limit_; ++i) {
            if (is_prime(i)) mu[i] = -1;
            for (auto p : primes) {
                if (p * i > limit_) break;
                if (i % p == 0) {
                    mu[p * i] = 0;
                    break;
                }
                mu[p * i] = static_cast<std::int8_t>(-mu[i]);
            }
        }
    });
}

int PrimeTable::mu(std::uint64_t x) const {
    if (x > limit_) throw std::out_of_range("PrimeTable::mu: " + std::to_string(x) + " beyond limit " + std::to_string(limit_));
    ensure_moebius();
    return moebius_->values[x];
}

std::int64_t PrimeTable::mertens(std::uint64_t x) const {
    if (x < 1) throw std::domain_error("mertens: x must be >= 1");
    if (x > limit_) throw std::out_of_range("mertens: " + std::to_string(x) + " beyond limit " + std::to_string(limit_));
    ensure_moebius();
    std::int64_t sum = 0;
    for (std::uint64_t a = 1; a <= x; ++a) sum += moebius_->values[a];
    return sum;
}

std::filesystem::path cache_file(const std::filesystem::path& cache_dir, int n) {
    return cache_dir / ("sieve_" + std::to_string(n) + ".bin");
}

PrimeTable sieve(int n, const std::filesystem::path& cache_dir) {
    if (n < kMinQubits || n > kMaxQubits)
        throw std::out_of_range("sieve: n=" + std::to_string(n) + " outside [2, 30]");
    const std::uint64_t limit = 1ULL << n;
    if (cache_dir.empty()) return PrimeTable(limit);

    const auto file = cache_file(cache_dir, n);
    std::vector<std::uint64_t> words;
    if (load_cache(file, n, words)) return PrimeTable(limit, std::move(words));

    PrimeTable table(limit);
    store_cache(file, n, table.words());
    return table;
}

Verdict miller_rabin(std::uint64_t x, std::span<const std::uint64_t> witnesses) {
    if (x <= 2 || (x & 1u) == 0) throw std::domain_error("miller_rabin: x must be odd and > 2");
    for (auto a : witnesses)
        if (a < 1 || a > x) throw std::domain_error("miller_rabin: witness outside [1, x]");

    std::uint64_t d = x - 1;
    int s = 0;
    while ((d & 1u) == 0) {
        d >>= 1;
        ++s;
    }
    for (auto a : witnesses) {
        if (a == x) continue;
        std::uint64_t y = powmod(a, d, x);
        if (y == 1 || y == x - 1) continue;
        bool liar = false;
        for (int r = 1; r < s; ++r) {
            y = mulmod(y, y, x);
            if (y == x - 1) {
                liar = true;
                break;
            }
        }
        if (!liar) return Verdict::composite;
    }
    return Verdict::probable_prime;
}

bool is_prime_deterministic(std::uint64_t x) {
    if (x >= kDeterministicBound) throw std::domain_error("is_prime_deterministic: x beyond the deterministic witness bound");
    if (x < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL}) {
        if (x == p) return true;
        if (x % p == 0) return false;
    }
    if (x < 19 * 19) return true;
    return miller_rabin(x, kWitnesses) == Verdict::probable_prime;
}

bool is_prime_extended(const PrimeTable& table, std::uint64_t x) {
    return x <= table.limit() ? table.is_prime(x) : is_prime_deterministic(x);
}

std::uint64_t totient(std::uint64_t a) {
    if (a == 0) throw std::domain_error("totient: a must be >= 1");
    std::uint64_t result = a;
    for (std::uint64_t p = 2; p * p <= a; ++p) {
        if (a % p != 0) continue;
        while (a % p == 0) a /= p;
        result -= result / p;
    }
    if (a > 1) result -= result / a;
    return result;
}

}  // namespace primeent::primes
