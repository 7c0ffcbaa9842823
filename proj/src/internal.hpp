#pragma once

#include <cstddef>
#include <vector>

namespace finstat::detail {

// Clamps [-kStochasticTol, 0) entries of v[offset, offset+n) to zero and
// checks the mass; throws NotStochastic. Defined in dist.cpp.
void validate_mass(std::vector<double>& v, std::size_t offset, std::size_t n,
                   const char* what);

}  // namespace finstat::detail
