#pragma once

#include <stdexcept>
#include <string>

namespace twistlab {

/// Multi-index, point, or field dimensions do not agree.
struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Two fields (or a field and an operator) live on different grids.
struct grid_mismatch_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Requested quadrature order cannot integrate the requested modes.
struct quadrature_order_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Complex time where 1 - e^{-2 eta} vanishes (eta = 0 or r = 0 with sin t = 0).
struct singular_time_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// A dense object would exceed the desk-scale memory guard.
struct size_guard_error : std::length_error {
  using std::length_error::length_error;
};

/// Argument sits on a pole of Gamma(z + 1) that has no dedicated limit path.
struct gamma_pole_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// Extension data supported off the surface lambda = 2|nu| + n.
struct off_surface_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace twistlab
