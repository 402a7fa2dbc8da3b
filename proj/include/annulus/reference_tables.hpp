#pragma once

#include <array>
#include <vector>

namespace annulus {

/// Published u_N^2 samples on the 15 degree grid (0..180) about the hole centre,
/// plus lambda(h) per column and the concentric lambda(0), for one hole radius.
struct ReferenceColumn {
  double h;
  std::array<double, 13> u_n_sq;
  double lambda;
};

struct ReferenceTable {
  double a;
  double lambda0;
  std::vector<ReferenceColumn> columns;
};

inline constexpr int kReferenceAngleCount = 13;
inline constexpr double kReferenceAngleStepDegrees = 15.0;

const std::vector<ReferenceTable>& reference_tables();

}  // namespace annulus
