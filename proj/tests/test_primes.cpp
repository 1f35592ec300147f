#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>
#include <vector>

#include "primeent/primes.hpp"

using namespace primeent::primes;

namespace {

bool trial_prime(std::uint64_t x) {
    if (x < 2) return false;
    for (std::uint64_t d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

int trial_mu(std::uint64_t x) {
    int sign = 1;
    for (std::uint64_t p = 2; p * p <= x; ++p) {
        if (x % p) continue;
        x /= p;
        if (x % p == 0) return 0;
        sign = -sign;
    }
    if (x > 1) sign = -sign;
    return sign;
}

std::uint64_t gcd_count(std::uint64_t a) {
    std::uint64_t c = 0;
    for (std::uint64_t k = 1; k <= a; ++k) {
        std::uint64_t x = a, y = k;
        while (y) {
            auto t = x % y;
            x = y;
            y = t;
        }
        c += x == 1;
    }
    return c;
}

std::filesystem::path scratch_dir(const char* tag) {
    auto dir = std::filesystem::temp_directory_path() / (std::string("primeent_test_") + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("small tables") {
    auto t4 = sieve(4);
    CHECK(t4.primes_upto(15) == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13});
    CHECK(t4.count_upto(16) == 6);
    auto t2 = sieve(2);
    CHECK(t2.primes_upto(4) == std::vector<std::uint64_t>{2, 3});
    CHECK(t2.count_upto(4) == 2);
    CHECK(sieve(6).count_upto(64) == 18);
}

TEST_CASE("table size bounds") {
    CHECK_THROWS_AS(sieve(1), std::out_of_range);
    CHECK_THROWS_AS(sieve(31), std::out_of_range);
    auto t = sieve(5);
    CHECK_THROWS_AS(t.is_prime(33), std::out_of_range);
    CHECK_THROWS_AS(t.count_upto(33), std::out_of_range);
    CHECK_NOTHROW(t.is_prime(32));
}

TEST_CASE("flags and counts agree with trial division") {
    auto t = sieve(16);
    CHECK_FALSE(t.is_prime(0));
    CHECK_FALSE(t.is_prime(1));
    CHECK(t.is_prime(2));
    std::uint64_t count = 0;
    for (std::uint64_t x = 0; x <= t.limit(); ++x) {
        const bool p = trial_prime(x);
        REQUIRE(t.is_prime(x) == p);
        count += p;
        REQUIRE(t.count_upto(x) == count);
    }
    CHECK(t.primes_upto(t.limit()).size() == count);
}

TEST_CASE("odd limits and word boundaries") {
    for (std::uint64_t limit : {3ULL, 127ULL, 128ULL, 129ULL, 255ULL, 1000ULL}) {
        PrimeTable t(limit);
        std::uint64_t c = 0;
        for (std::uint64_t x = 0; x <= limit; ++x) {
            c += trial_prime(x);
            REQUIRE(t.count_upto(x) == c);
        }
    }
}

TEST_CASE("Moebius values") {
    auto t = sieve(17);
    CHECK(t.mu(1) == 1);
    std::uint64_t squarefree = 0, abs_sum = 0;
    for (std::uint64_t x = 1; x <= 100'000; ++x) {
        const int oracle = trial_mu(x);
        REQUIRE(t.mu(x) == oracle);
        squarefree += oracle != 0;
        abs_sum += static_cast<std::uint64_t>(std::abs(t.mu(x)));
    }
    CHECK(abs_sum == squarefree);
    for (std::uint64_t p : t.primes_upto(200)) {
        CHECK(t.mu(p) == -1);
        CHECK(t.mu(p * p) == 0);
        CHECK(t.mu(3 * p * p) == 0);
    }
}

TEST_CASE("Mertens") {
    auto t = sieve(5);
    CHECK(t.mertens(1) == 1);
    CHECK(t.mertens(16) == -1);
    CHECK(t.mertens(2) == 0);
    CHECK_THROWS_AS(t.mertens(0), std::domain_error);
    CHECK_THROWS_AS(t.mertens(33), std::out_of_range);
    auto big = sieve(16);
    std::int64_t acc = 0;
    for (std::uint64_t x = 1; x <= big.limit(); ++x) {
        acc += trial_mu(x);
        if ((x & (x - 1)) == 0) CHECK(big.mertens(x) == acc);
    }
}

TEST_CASE("Moebius fill is safe under concurrent first use") {
    auto t = sieve(18);
    std::vector<std::int64_t> results(4);
    std::vector<std::thread> threads;
    for (int i = 0; i < 4; ++i) threads.emplace_back([&, i] { results[static_cast<std::size_t>(i)] = t.mertens(t.limit()); });
    for (auto& th : threads) th.join();
    for (auto r : results) CHECK(r == results[0]);
}

TEST_CASE("totient") {
    CHECK(totient(4) == 2);
    CHECK(totient(8) == 4);
    CHECK(totient(1) == 1);
    CHECK_THROWS_AS(totient(0), std::domain_error);
    for (int m = 1; m <= 30; ++m) CHECK(totient(1ULL << m) == (1ULL << (m - 1)));
    for (std::uint64_t a = 1; a <= 300; ++a) REQUIRE(totient(a) == gcd_count(a));
}

TEST_CASE("Miller-Rabin examples and preconditions") {
    const std::uint64_t two[] = {2};
    CHECK(miller_rabin(13, two) == Verdict::probable_prime);
    CHECK(miller_rabin(561, two) == Verdict::composite);
    CHECK(miller_rabin((1ULL << 31) - 1, kWitnesses) == Verdict::probable_prime);
    CHECK(trial_prime((1ULL << 31) - 1));

    CHECK_THROWS_AS(miller_rabin(10, two), std::domain_error);
    CHECK_THROWS_AS(miller_rabin(2, two), std::domain_error);
    CHECK_THROWS_AS(miller_rabin(1, two), std::domain_error);
    const std::uint64_t zero[] = {0};
    CHECK_THROWS_AS(miller_rabin(13, zero), std::domain_error);
    const std::uint64_t big[] = {14};
    CHECK_THROWS_AS(miller_rabin(13, big), std::domain_error);
    const std::uint64_t self[] = {13};
    CHECK(miller_rabin(13, self) == Verdict::probable_prime);
    for (std::uint64_t x : {3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL}) CHECK(is_prime_deterministic(x));
}

TEST_CASE("strong pseudoprimes are caught by the full witness set") {
    const std::uint64_t two[] = {2};
    CHECK(miller_rabin(2047, two) == Verdict::probable_prime);  // 23 * 89
    CHECK_FALSE(is_prime_deterministic(2047));
    const std::uint64_t four[] = {2, 3, 5, 7};
    CHECK(miller_rabin(3215031751ULL, four) == Verdict::probable_prime);  // 151 * 751 * 28351
    CHECK_FALSE(is_prime_deterministic(3215031751ULL));
    CHECK_THROWS_AS(is_prime_deterministic(kDeterministicBound), std::domain_error);
}

TEST_CASE("Miller-Rabin agrees with the sieve") {
    auto t = sieve(22);
    for (std::uint64_t x = 19; x <= t.limit(); x += 2)
        REQUIRE((miller_rabin(x, kWitnesses) == Verdict::probable_prime) == t.is_prime(x));
    for (std::uint64_t x = 0; x <= t.limit(); ++x) REQUIRE(is_prime_deterministic(x) == t.is_prime(x));
    CHECK(is_prime_extended(t, t.limit() + 1) == trial_prime(t.limit() + 1));
    CHECK(is_prime_extended(t, (1ULL << 22) + 15) == trial_prime((1ULL << 22) + 15));
}

TEST_CASE("disk cache round trip and header layout") {
    const auto dir = scratch_dir("cache");
    auto first = sieve(12, dir);
    const auto file = cache_file(dir, 12);
    REQUIRE(std::filesystem::exists(file));
    CHECK(std::filesystem::file_size(file) == 16 + 8 * bitmap_words(1ULL << 12));

    std::ifstream in(file, std::ios::binary);
    unsigned char header[16];
    in.read(reinterpret_cast<char*>(header), 16);
    CHECK(header[4] == 12);
    CHECK(header[5] == 0);
    std::uint64_t stored = 0;
    for (int i = 0; i < 8; ++i) stored |= static_cast<std::uint64_t>(header[8 + i]) << (8 * i);
    CHECK(stored == bitmap_checksum(first.words()));

    auto second = sieve(12, dir);
    CHECK(std::equal(first.words().begin(), first.words().end(), second.words().begin(), second.words().end()));
}

TEST_CASE("corrupt cache files are rebuilt") {
    const auto dir = scratch_dir("corrupt");
    const auto reference = sieve(14);
    const auto file = cache_file(dir, 14);

    auto check_rebuild = [&] {
        auto t = sieve(14, dir);
        CHECK(t.count_upto(1ULL << 14) == reference.count_upto(1ULL << 14));
        CHECK(std::equal(t.words().begin(), t.words().end(), reference.words().begin(), reference.words().end()));
    };

    sieve(14, dir);
    {  // flip one bitmap byte
        std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(40);
        f.put('\x5a');
    }
    check_rebuild();
    std::filesystem::resize_file(file, 100);  // truncated
    check_rebuild();
    {
        std::ofstream f(file, std::ios::binary | std::ios::trunc);
        f << "garbage";
    }
    check_rebuild();
    {  // header for a different n
        sieve(14, dir);
        std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(4);
        f.put(13);
    }
    check_rebuild();
}

TEST_CASE("checksum") {
    CHECK(bitmap_checksum({}) == 0xcbf29ce484222325ULL);
    const std::uint64_t one[] = {0x61};  // "a" then seven zero bytes
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int i = 0; i < 8; ++i) {
        h ^= i == 0 ? 0x61 : 0;
        h *= 0x100000001b3ULL;
    }
    CHECK(bitmap_checksum(one) == h);
}
