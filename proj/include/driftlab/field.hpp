/// @file field.hpp
/// @brief Cell-averaged density on a Grid
#pragma once

#include <vector>

#include "grid.hpp"

namespace driftlab {

struct Field {
    std::vector<double> u;       ///< cell averages, indexed by Grid::index
    double boundary_mass = 0.0;  ///< mass absorbed through the a = 0 face
    double time = 0.0;

    Field() = default;
    explicit Field(const Grid& g) : u(g.size(), 0.0) {}
};

}  // namespace driftlab
