#include "primeent/matrix_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <istream>
#include <stdexcept>

namespace primeent::io {

namespace {

template <typename T>
void put(std::ostream& os, T v) {
    std::array<unsigned char, sizeof(T)> buf{};
    std::memcpy(buf.data(), &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf.begin(), buf.end());
    os.write(reinterpret_cast<const char*>(buf.data()), buf.size());
}

template <typename T>
T get(std::istream& is) {
    std::array<unsigned char, sizeof(T)> buf{};
    if (!is.read(reinterpret_cast<char*>(buf.data()), buf.size())) throw std::runtime_error("read_binary: truncated input");
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf.begin(), buf.end());
    T v;
    std::memcpy(&v, buf.data(), sizeof(T));
    return v;
}

}  // namespace

void write_csv(std::ostream& os, const state::DensityMatrix& rho) {
    os << std::setprecision(17);
    for (Eigen::Index i = 0; i < rho.dim(); ++i) {
        for (Eigen::Index j = 0; j < rho.dim(); ++j) os << (j ? "," : "") << rho.rho(i, j);
        os << '\n';
    }
}

void write_binary(std::ostream& os, const state::DensityMatrix& rho) {
    put<std::uint64_t>(os, static_cast<std::uint64_t>(rho.dim()));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(rho.flavor));
    for (Eigen::Index i = 0; i < rho.dim(); ++i)
        for (Eigen::Index j = 0; j <= i; ++j) put<double>(os, rho.rho(i, j));
}

state::DensityMatrix read_binary(std::istream& is) {
    const auto dim = get<std::uint64_t>(is);
    const auto tag = get<std::uint32_t>(is);
    if (dim == 0 || dim > (1u << 16)) throw std::runtime_error("read_binary: implausible dimension");
    if (tag > static_cast<std::uint32_t>(state::Flavor::toy)) throw std::runtime_error("read_binary: unknown flavor tag");
    state::DensityMatrix out;
    const auto d = static_cast<Eigen::Index>(dim);
    out.rho.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) out.rho(i, j) = out.rho(j, i) = get<double>(is);
    out.flavor = static_cast<state::Flavor>(tag);
    out.labels.resize(dim);
    std::iota(out.labels.begin(), out.labels.end(), 0u);
    return out;
}

nlohmann::json labels_json(const state::DensityMatrix& rho) { return rho.labels; }

}  // namespace primeent::io
