#pragma once

#include <vector>

namespace xsb {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< root mean square of y - (slope x + intercept)
};

/// Ordinary least squares. Needs at least two distinct x values.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

/// least_squares on (log x, log y); all values must be positive.
LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace xsb
