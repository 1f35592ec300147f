// matrix_io.hpp
// Density-matrix dumps: CSV (row-major, full), a compact binary form and a
// JSON sidecar with the basis labels.
//
// Binary layout, little-endian:
//   uint64 dim | uint32 flavor tag | dim(dim+1)/2 doubles, lower triangle
//   row by row (row i holds columns 0..i).

#pragma once

#include <iosfwd>

#include "json.hpp"

#include "primeent/statebuilder.hpp"

namespace primeent::io {

void write_csv(std::ostream& os, const state::DensityMatrix& rho);
void write_binary(std::ostream& os, const state::DensityMatrix& rho);
// Labels are not part of the binary form; the result has labels 0..dim-1.
// Truncated or malformed input -> std::runtime_error.
state::DensityMatrix read_binary(std::istream& is);
nlohmann::json labels_json(const state::DensityMatrix& rho);

}  // namespace primeent::io
