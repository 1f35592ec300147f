#include "primeent/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "primeent/counting.hpp"
#include "primeent/hardylittlewood.hpp"
#include "primeent/matrix_io.hpp"
#include "primeent/primes.hpp"
#include "primeent/spectra.hpp"
#include "primeent/statebuilder.hpp"

namespace primeent::cli {

namespace {

using nlohmann::json;
using state::Series;

struct Extra {
    std::string query = "pi";
    std::uint64_t modulus = 8;
    std::uint64_t residue = 1;
    std::uint64_t residue2 = 3;
    std::uint64_t gap = 2;
    std::filesystem::path out_dir = ".";
};

// Options outside RunConfig, filled by run() before execute().
Extra& extra() {
    static Extra e;
    return e;
}

void check_n(int n, const RunConfig& cfg) {
    if (n < 2 || n > primes::kMaxQubits)
        throw std::invalid_argument("n=" + std::to_string(n) + " outside [2, 30]");
    if (cfg.allow_large) return;
    if (n > cfg.max_n)
        throw std::invalid_argument("n=" + std::to_string(n) + " exceeds the ceiling " + std::to_string(cfg.max_n) +
                                    "; pass --allow-large to run it");
    if (n / 2 > kDenseMaxM)
        throw std::invalid_argument("m=" + std::to_string(n / 2) + " exceeds the dense-matrix ceiling " +
                                    std::to_string(kDenseMaxM) + "; pass --allow-large to run it");
}

primes::PrimeTable table_for(int n, const RunConfig& cfg) { return primes::sieve(std::max(n, 2), cfg.cache_dir); }

std::vector<int> even_range(int lo, int hi) {
    if (lo > hi) throw std::invalid_argument("--n-min exceeds --n-max");
    std::vector<int> out;
    for (int n = lo + (lo % 2); n <= hi; n += 2) out.push_back(n);
    if (out.empty()) throw std::invalid_argument("no even n in the requested range");
    return out;
}

int pick(int v, int dflt) { return v > 0 ? v : dflt; }

Check make_check(std::string name, double value, double target, double tol, std::string detail = {}) {
    return {std::move(name), value, target, tol, std::abs(value - target) <= tol, std::move(detail)};
}

spectra::MatrixFlavor parse_flavor(const std::string& f) {
    if (f == "exact") return spectra::MatrixFlavor::exact;
    if (f == "model") return spectra::MatrixFlavor::model;
    if (f == "odd") return spectra::MatrixFlavor::odd;
    throw std::invalid_argument("unknown flavor '" + f + "'");
}

Report cmd_table2(const RunConfig& cfg) {
    Report r;
    r.table.columns = {{"n", -1}, {"S_prime", 4}, {"S_twin", 4}};
    const auto ns = even_range(pick(cfg.n_min, 10), pick(cfg.n_max, 20));
    for (int n : ns) check_n(n, cfg);
    const auto table = table_for(ns.back(), cfg);
    const auto& hl = hl::HLConstants::standard();
    for (int n : ns) {
        const double sp = spectra::natural_entropy(table, hl, n, Series::prime, spectra::MatrixFlavor::exact);
        const double st = spectra::natural_entropy(table, hl, n, Series::twin_gap, spectra::MatrixFlavor::exact);
        r.table.rows.push_back({n, sp, st});
    }
    return r;
}

Report cmd_fig1(const RunConfig& cfg) {
    Report r;
    r.table.columns = {{"n", -1}, {"purity_exact", -1}, {"purity_model", -1}, {"difference", -1},
                       {"scaled_model", -1}};
    const auto ns = even_range(pick(cfg.n_min, 8), pick(cfg.n_max, 24));
    for (int n : ns) check_n(n, cfg);
    const auto table = table_for(ns.back(), cfg);
    const auto& hl = hl::HLConstants::standard();
    for (int n : ns) {
        const int m = n / 2;
        const double pe = spectra::purity(state::rho_exact(table, n, m));
        const double pm = spectra::purity_model_formula(hl, n, m, state::EllMode::exact_li_ratio);
        const double scale = n * std::log(2.0);
        r.table.rows.push_back({n, pe, pm, pm - pe, pm * scale * scale});
    }
    return r;
}

Report cmd_fig2(const RunConfig& cfg) {
    Report r;
    r.table.columns = {{"n", -1}, {"S_exact", 4}, {"S_model", 4}, {"difference", 4}};
    const auto ns = even_range(pick(cfg.n_min, 8), pick(cfg.n_max, 24));
    for (int n : ns) check_n(n, cfg);
    const auto table = table_for(ns.back(), cfg);
    const auto& hl = hl::HLConstants::standard();
    std::vector<double> se;
    for (int n : ns) {
        const double e = spectra::natural_entropy(table, hl, n, Series::prime, spectra::MatrixFlavor::exact);
        const double m = spectra::natural_entropy(table, hl, n, Series::prime, spectra::MatrixFlavor::model);
        se.push_back(e);
        r.table.rows.push_back({n, e, m, e - m});
    }
    if (ns.size() >= 3) {
        const auto fit = spectra::linear_fit(ns, se);
        r.verdicts.push_back(make_check("slope_exact", fit.slope, 0.885, 0.025,
                                        "stderr " + std::to_string(fit.slope_stderr)));
    }
    return r;
}

Report cmd_fig3(const RunConfig& cfg) {
    Report r;
    r.table.columns = {{"sample_index", -1}, {"mask_hex", -1}, {"entropy_bits", -1}, {"natural", -1}};
    const int n = pick(cfg.n_max, 16);
    check_n(n, cfg);
    const auto table = table_for(n, cfg);
    const auto series = state::parse_series(cfg.series);
    const auto survey = spectra::random_partition_survey(table, n, series, cfg.samples, cfg.seed);
    const auto natural = state::PartitionMask::natural(n, n / 2).a_bits;
    auto hex = [](std::uint32_t v) {
        std::ostringstream os;
        os << "0x" << std::hex << v;
        return os.str();
    };
    r.table.rows.push_back({-1, hex(natural), survey.natural_entropy, 1});
    for (const auto& s : survey.samples)
        r.table.rows.push_back({s.index, hex(s.mask), s.entropy, s.mask == natural ? 1 : 0});
    r.verdicts.push_back({"natural_partition_is_max", survey.natural_entropy, survey.max_sample(), 0,
                          survey.natural_entropy >= survey.max_sample() - 1e-12, "value: natural, target: max sample"});
    return r;
}

Report cmd_fig4(const RunConfig& cfg) {
    Report r;
    r.table.columns = {{"index", -1}, {"epsilon_exact", -1}, {"epsilon_model", -1}, {"epsilon_analytic", -1}};
    const int n = pick(cfg.n_max, 24);
    check_n(n, cfg);
    const int m = n / 2;
    const auto table = table_for(n, cfg);
    const auto& hl = hl::HLConstants::standard();
    const auto ex = spectra::eig_sym(state::rho_exact(table, n, m));
    const auto mo = spectra::eig_sym(state::rho_model(hl, n, m));
    spectra::Spectrum an;
    if (m >= 3) an = spectra::model_spectrum(m, state::EllMode::exact_li_ratio).spectrum;
    const std::size_t count = std::min<std::size_t>(89, mo.eigenvalues.size());
    auto eps = [](const spectra::Spectrum& s, std::size_t i) -> json {
        if (i >= s.eigenvalues.size() || s.eigenvalues[i] <= spectra::kClamp) return nullptr;
        return -std::log2(s.eigenvalues[i]);
    };
    for (std::size_t i = 0; i < count; ++i) r.table.rows.push_back({i, eps(ex, i), eps(mo, i), eps(an, i)});
    return r;
}

Report cmd_fig5(const RunConfig& cfg) {
    Report r;
    r.table.columns = {{"m", -1}};
    for (int i = 0; i <= 5; ++i) r.table.columns.push_back({"gamma" + std::to_string(i) + "_scaled", -1});
    const auto ns = even_range(pick(cfg.n_min, 8), pick(cfg.n_max, 24));
    for (int n : ns) check_n(n, cfg);
    const auto& hl = hl::HLConstants::standard();
    for (int n : ns) {
        const int m = n / 2;
        const double l = state::ell(n, state::EllMode::exact_li_ratio);
        const auto spec = spectra::eig_sym(state::rho_model(hl, n, m));
        std::vector<json> row{m};
        // level i spans positions i(i-1)+1 .. i(i+1) (level 0 is position 0)
        for (std::size_t i = 0; i <= 5; ++i) {
            const std::size_t lo = i == 0 ? 0 : i * (i - 1) + 1;
            const std::size_t hi = i == 0 ? 0 : i * (i + 1);
            if (hi >= spec.eigenvalues.size()) {
                row.push_back(nullptr);
                continue;
            }
            double mean = 0;
            for (std::size_t k = lo; k <= hi; ++k) mean += spec.eigenvalues[k];
            mean /= static_cast<double>(hi - lo + 1);
            const double g = spectra::gamma_from_level(mean, m, l);
            const double scale = i == 0 ? 1.0 : 4.0 * static_cast<double>(i * i);
            row.push_back(g * scale / std::ldexp(1.0, m));
        }
        r.table.rows.push_back(row);
    }
    return r;
}

// Appendix identities: asymptotic count ratios, sum laws, exact rationals.
Report cmd_appendix(const RunConfig& cfg) {
    Report r;
    r.table.columns = {{"identity", -1}, {"value", -1}, {"target", -1}, {"tolerance", -1}, {"pass", -1}};
    const int n = std::min(pick(cfg.n_max, 20), 24);
    check_n(n, cfg);
    const auto table = table_for(n, cfg);
    const hl::HLConstants hl(cfg.prime_cutoff);
    const std::uint64_t X = (1ULL << n) - 1;
    const std::uint64_t grid[] = {X};
    using counting::CountingQuery;
    using counting::Kind;
    auto ratio = [&](CountingQuery q) { return counting::asymptotic_ratio(table, q, grid).front().ratio; };

    r.verdicts.push_back(make_check("pi/Li", ratio({Kind::pi}), 1.0, 0.1));
    for (std::uint64_t a : {1, 3, 5, 7})
        r.verdicts.push_back(make_check("pi_8," + std::to_string(a) + "/(Li/4)", ratio({Kind::pi_ab, 8, a}), 1.0, 0.1));
    r.verdicts.push_back(make_check("pi2(2)/(C(2)Li2)", ratio({Kind::pi2, 0, 0, 0, 2}), 1.0, 0.1));
    r.verdicts.push_back(make_check("pi2(6)/(C(6)Li2)", ratio({Kind::pi2, 0, 0, 0, 6}), 1.0, 0.1));
    r.verdicts.push_back(make_check("C(6)/C(2)", hl.C(6) / hl.C(2), 2.0, 1e-12));
    r.verdicts.push_back(make_check("pi_8;1,3/(C(2)Li2/4)", ratio({Kind::pi_abb, 8, 1, 3}), 1.0, 0.1));
    r.verdicts.push_back(make_check("pi_8;1,7/(C(6)Li2/4)", ratio({Kind::pi_abb, 8, 1, 7}), 1.0, 0.1));

    r.verdicts.push_back(make_check("sum_C(4000) ratio", hl::sum_C(hl, 4000).ratio, 1.0, 0.01));
    const auto s2 = hl::sum_C2(hl, 2000);
    r.verdicts.push_back(make_check("sum alpha^2(m) ratio, X=4000", s2.ratio_single, 1.0, 0.05));
    r.verdicts.push_back(make_check("sum m alpha^2(m) ratio, X=4000", s2.ratio_weighted, 1.0, 0.05));
    r.verdicts.push_back(make_check("sum alpha^2(2|i-j|) ratio, X=4000", s2.ratio_double, 1.0, 0.05));

    const std::map<std::uint64_t, hl::Rational> alpha_row = {{2, {1, 1}},  {4, {1, 1}},  {6, {2, 1}},   {8, {1, 1}},
                                                             {10, {4, 3}}, {12, {2, 1}}, {14, {6, 5}}};
    const std::map<std::uint64_t, hl::Rational> cumulative = {{2, {1, 1}},   {4, {2, 1}},   {6, {4, 1}},
                                                              {8, {5, 1}},   {10, {19, 3}}, {12, {25, 3}},
                                                              {14, {143, 15}}};
    const std::map<std::uint64_t, hl::Rational> beta_row = {{1, {1, 1}},  {3, {1, 1}},  {5, {1, 3}},  {7, {1, 5}},
                                                            {11, {1, 9}}, {13, {1, 11}}, {15, {1, 3}}};
    int mismatches = 0;
    hl::Rational acc(0);
    for (std::uint64_t m = 1; m <= 14; ++m) {
        acc += hl::alpha_ratio(m);
        if (auto it = alpha_row.find(m); it != alpha_row.end() && hl::alpha_ratio(m) != it->second) ++mismatches;
        if (auto it = alpha_row.find(m); it != alpha_row.end() && hl::alpha_ratio_divisor_sum(m) != it->second)
            ++mismatches;
        if (auto it = cumulative.find(m); it != cumulative.end() && acc != it->second) ++mismatches;
    }
    for (const auto& [d, v] : beta_row)
        if (hl::beta(d) != v) ++mismatches;
    r.verdicts.push_back(make_check("alpha(m)/alpha, cumulative sums, beta(d) table mismatches", mismatches, 0, 0));

    int identity_failures = 0;
    for (std::uint64_t m = 2; m <= 10'000; m += 2)
        if (hl::alpha_ratio(m) != hl::alpha_ratio_divisor_sum(m)) ++identity_failures;
    r.verdicts.push_back(make_check("divisor-sum identity failures, even m <= 10^4", identity_failures, 0, 0));

    r.verdicts.push_back(make_check("sum_{d<=1e5} beta(d)/d", hl::beta_dirichlet_sum(100'000), 2.0 / hl.alpha(), 1e-4));

    for (const auto& v : r.verdicts)
        r.table.rows.push_back({v.name, v.value, v.target, v.tolerance, v.pass});
    return r;
}

Report cmd_constants(const RunConfig& cfg) {
    Report r;
    r.table.columns = {{"name", -1}, {"value", -1}, {"cutoff", -1}, {"tail_bound", -1}};
    const hl::HLConstants hl(cfg.prime_cutoff);
    for (const auto& e : hl::constants_report(hl))
        r.table.rows.push_back({e["name"], e["value"], e["cutoff"], e["tail_bound"]});
    return r;
}

Report cmd_ratio(const RunConfig& cfg) {
    Report r;
    r.table.columns = {{"X", -1}, {"exact", -1}, {"predicted", -1}, {"ratio", -1}};
    const int lo = pick(cfg.n_min, 10);
    const int hi = pick(cfg.n_max, 20);
    check_n(hi, cfg);
    const auto table = table_for(hi, cfg);
    const auto& e = extra();
    counting::CountingQuery q;
    if (e.query == "pi") q.kind = counting::Kind::pi;
    else if (e.query == "pi_ab") q = {counting::Kind::pi_ab, e.modulus, e.residue};
    else if (e.query == "pi2") q = {counting::Kind::pi2, 0, 0, 0, e.gap};
    else if (e.query == "pi_abb") q = {counting::Kind::pi_abb, e.modulus, e.residue, e.residue2};
    else throw std::invalid_argument("unknown query '" + e.query + "'");
    std::vector<std::uint64_t> grid;
    for (int n = lo; n <= hi; ++n) grid.push_back((1ULL << n) - 1);
    for (const auto& p : counting::asymptotic_ratio(table, q, grid))
        r.table.rows.push_back({p.X, p.exact, p.predicted, p.ratio});
    return r;
}

Report cmd_fit(const RunConfig& cfg) {
    Report r;
    r.table.columns = {{"n", -1}, {"entropy", 4}, {"residual", -1}};
    const auto ns = even_range(pick(cfg.n_min, 8), pick(cfg.n_max, 24));
    for (int n : ns) check_n(n, cfg);
    const auto table = table_for(ns.back(), cfg);
    const auto fit = spectra::entropy_scaling_fit(table, hl::HLConstants::standard(), ns,
                                                  state::parse_series(cfg.series), parse_flavor(cfg.flavor));
    for (std::size_t i = 0; i < ns.size(); ++i) r.table.rows.push_back({ns[i], fit.entropies[i], fit.residuals[i]});
    r.config["fit"] = {{"slope", fit.slope}, {"slope_stderr", fit.slope_stderr}, {"intercept", fit.intercept},
                       {"points", ns.size()}};
    return r;
}

Report cmd_sieve(const RunConfig& cfg) {
    Report r;
    r.table.columns = {{"n", -1}, {"pi", -1}, {"cache_file", -1}};
    const int n = pick(cfg.n_max, 24);
    check_n(n, cfg);
    const auto table = table_for(n, cfg);
    r.table.rows.push_back({n, table.count_upto((1ULL << n) - 1),
                            cfg.cache_dir.empty() ? std::string() : primes::cache_file(cfg.cache_dir, n).string()});
    return r;
}

Report cmd_dump(const RunConfig& cfg) {
    Report r;
    r.table.columns = {{"file", -1}, {"dim", -1}};
    const int n = pick(cfg.n_max, 12);
    check_n(n, cfg);
    const int m = n / 2;
    const auto table = table_for(n, cfg);
    state::DensityMatrix rho;
    switch (parse_flavor(cfg.flavor)) {
        case spectra::MatrixFlavor::exact: rho = state::rho_exact(table, n, m); break;
        case spectra::MatrixFlavor::model: rho = state::rho_model(hl::HLConstants::standard(), n, m); break;
        case spectra::MatrixFlavor::odd: rho = state::rho_odd(table, n, m); break;
    }
    const auto dir = extra().out_dir;
    std::filesystem::create_directories(dir);
    const std::string stem = "rho_" + cfg.flavor + "_n" + std::to_string(n);
    {
        std::ofstream os(dir / (stem + ".csv"));
        io::write_csv(os, rho);
    }
    {
        std::ofstream os(dir / (stem + ".bin"), std::ios::binary);
        io::write_binary(os, rho);
    }
    {
        std::ofstream os(dir / (stem + ".labels.json"));
        os << io::labels_json(rho).dump() << '\n';
    }
    for (const char* ext : {".csv", ".bin", ".labels.json"})
        r.table.rows.push_back({(dir / (stem + ext)).string(), rho.dim()});
    return r;
}

using Handler = Report (*)(const RunConfig&);

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h = {
        {"table2", cmd_table2},     {"fig1", cmd_fig1},           {"fig2", cmd_fig2},   {"fig3", cmd_fig3},
        {"fig4", cmd_fig4},         {"fig5", cmd_fig5},           {"appendix-verify", cmd_appendix},
        {"constants", cmd_constants}, {"ratio", cmd_ratio},       {"fit", cmd_fit},     {"sieve", cmd_sieve},
        {"dump", cmd_dump}};
    return h;
}

json config_json(const RunConfig& cfg) {
    return {{"cache_dir", cfg.cache_dir.string()}, {"max_n", cfg.max_n},   {"allow_large", cfg.allow_large},
            {"prime_cutoff", cfg.prime_cutoff},    {"seed", cfg.seed},     {"n_min", cfg.n_min},
            {"n_max", cfg.n_max},                  {"series", cfg.series}, {"flavor", cfg.flavor},
            {"samples", cfg.samples},              {"format", cfg.format == Format::csv ? "csv" : "json"}};
}

std::string format_cell(const json& v, int decimals) {
    if (v.is_null()) return "";
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) {
        std::ostringstream os;
        if (decimals >= 0)
            os << std::fixed << std::setprecision(decimals) << round_half_even(v.get<double>(), decimals);
        else
            os << std::setprecision(12) << v.get<double>();
        return os.str();
    }
    return v.dump();
}

}  // namespace

double round_half_even(double x, int decimals) {
    const double scale = std::pow(10.0, decimals);
    // nearbyint follows the default to-nearest-even rounding mode
    return std::nearbyint(x * scale) / scale;
}

std::vector<std::string> command_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : handlers()) out.push_back(k);
    return out;
}

Report execute(const std::string& command, const RunConfig& cfg) {
    const auto it = handlers().find(command);
    if (it == handlers().end()) throw std::invalid_argument("unknown command '" + command + "'");
    const auto start = std::chrono::steady_clock::now();
    Report r = it->second(cfg);
    r.command = command;
    json extra_cfg = r.config;
    r.config = config_json(cfg);
    r.config.update(extra_cfg.is_object() ? extra_cfg : json::object());
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

void emit(std::ostream& out, std::ostream& err, const Report& report, Format format) {
    if (format == Format::json) {
        json rows = json::array();
        for (const auto& row : report.table.rows) {
            json o = json::object();
            for (std::size_t i = 0; i < row.size(); ++i) {
                const auto& col = report.table.columns[i];
                o[col.name] = col.decimals >= 0 && row[i].is_number_float()
                                  ? json(round_half_even(row[i].get<double>(), col.decimals))
                                  : row[i];
            }
            rows.push_back(o);
        }
        json verdicts = json::array();
        for (const auto& v : report.verdicts)
            verdicts.push_back({{"name", v.name},
                                {"value", v.value},
                                {"target", v.target},
                                {"tolerance", v.tolerance},
                                {"pass", v.pass},
                                {"detail", v.detail}});
        json doc = {{"command", report.command}, {"config", report.config}, {"rows", rows},
                    {"verdicts", verdicts},      {"elapsed_ms", report.elapsed_ms}};
        out << doc.dump(2) << '\n';
        return;
    }
    for (std::size_t i = 0; i < report.table.columns.size(); ++i) out << (i ? "," : "") << report.table.columns[i].name;
    out << '\n';
    for (const auto& row : report.table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_cell(row[i], report.table.columns[i].decimals);
        out << '\n';
    }
    for (const auto& v : report.verdicts)
        err << (v.pass ? "PASS " : "FAIL ") << v.name << ": value " << std::setprecision(10) << v.value << ", target "
            << v.target << " +- " << v.tolerance << (v.detail.empty() ? "" : " (" + v.detail + ")") << '\n';
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entanglement of prime-number states: tables, figure data and verification suites"};
    RunConfig cfg;
    std::string command;
    std::string format = "csv";
    std::string cache_dir;
    auto& e = extra();
    e = Extra{};  // no carry-over between calls in one process
    std::string out_dir = ".";

    app.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(command_names()));
    app.add_option("--n-min", cfg.n_min, "Smallest n of a sweep");
    app.add_option("--n-max", cfg.n_max, "Largest n of a sweep (single-n commands use this n)");
    app.add_option("--series", cfg.series, "prime|twin|twin_gap|triplet|moebius|hadamard");
    app.add_option("--flavor", cfg.flavor, "exact|model|odd")->check(CLI::IsMember({"exact", "model", "odd"}));
    app.add_option("--samples", cfg.samples, "Random partitions for fig3");
    app.add_option("--seed", cfg.seed, "Seed for random partitions");
    app.add_option("--cutoff", cfg.prime_cutoff, "Prime cutoff for Euler products");
    app.add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--cache-dir", cache_dir, "Sieve cache directory");
    app.add_flag("--allow-large", cfg.allow_large, "Allow n above the ceiling (up to 30)");
    app.add_option("--query", e.query, "ratio: pi|pi_ab|pi2|pi_abb");
    app.add_option("--modulus", e.modulus, "ratio: modulus a");
    app.add_option("--residue", e.residue, "ratio: residue b");
    app.add_option("--residue2", e.residue2, "ratio: second residue b'");
    app.add_option("--gap", e.gap, "ratio: gap k");
    app.add_option("--out", out_dir, "dump: output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        std::ostringstream o, er;
        const int code = app.exit(ex, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? 0 : 2;
    }
    cfg.format = format == "json" ? Format::json : Format::csv;
    e.out_dir = out_dir;
    if (!cache_dir.empty())
        cfg.cache_dir = cache_dir;
    else if (const char* env = std::getenv(kCacheEnv); env && *env)
        cfg.cache_dir = env;

    try {
        const Report r = execute(command, cfg);
        emit(out, err, r, cfg.format);
        for (const auto& v : r.verdicts)
            if (!v.pass) return 1;
        return 0;
    } catch (const std::invalid_argument& ex) {
        err << "primeent: " << ex.what() << '\n';
        return 2;
    } catch (const std::exception& ex) {
        err << "primeent: " << ex.what() << '\n';
        return 1;
    }
}

}  // namespace primeent::cli
