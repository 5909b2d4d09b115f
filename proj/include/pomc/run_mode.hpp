#pragma once

namespace pomc {

/// Scheduling choice for the grid and sampling kernels. Results are identical
/// in both modes; parallel only changes wall time.
enum class RunMode { serial, parallel };

} // namespace pomc
