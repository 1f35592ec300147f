// cli.hpp
// Command-line front end: sweeps that regenerate the tables and figure data,
// the appendix verification suite, constants and cache management.
//
//   primeent <command> [--n-min K] [--n-max K] [--series S] [--flavor F]
//                      [--samples K] [--seed K] [--cutoff K] [--format csv|json]
//                      [--cache-dir PATH] [--allow-large]
//
// Exit codes: 0 success, 1 a verification failed, 2 usage error or refusal.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace primeent::cli {

inline constexpr const char* kCacheEnv = "PRIMEENT_CACHE_DIR";
inline constexpr int kDefaultMaxN = 24;
inline constexpr int kDenseMaxM = 13;  // larger m needs --allow-large

enum class Format { csv, json };

struct RunConfig {
    std::filesystem::path cache_dir;
    int max_n = kDefaultMaxN;
    bool allow_large = false;
    std::uint64_t prime_cutoff = 1'000'000;
    std::uint64_t seed = 1;
    Format format = Format::csv;
    int n_min = 0;  // 0: command default
    int n_max = 0;
    std::string series = "prime";
    std::string flavor = "exact";
    std::size_t samples = 200;
};

struct Column {
    std::string name;
    int decimals = -1;  // >= 0: round half-even to that many places
};

struct Table {
    std::vector<Column> columns;
    std::vector<std::vector<nlohmann::json>> rows;
};

struct Check {
    std::string name;
    double value = 0;
    double target = 0;
    double tolerance = 0;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::string command;
    Table table;
    std::vector<Check> verdicts;
    nlohmann::json config;
    double elapsed_ms = 0;
};

// Round half to even at `decimals` places.
double round_half_even(double x, int decimals);

// Throws std::invalid_argument on unknown command, bad range or a refused
// size (n above the ceiling without allow_large).
Report execute(const std::string& command, const RunConfig& cfg);

void emit(std::ostream& out, std::ostream& err, const Report& report, Format format);

std::vector<std::string> command_names();

// Full entry point; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace primeent::cli
