#pragma once

#include <functional>
#include <vector>

namespace qrt {

// Golden-section minimization on [lo, hi]; assumes a unimodal objective.
double golden_section_minimize(const std::function<double(double)>& f, double lo,
                               double hi, double rel_tol = 1e-4);

// Least-squares polynomial fit, returns coefficients c0 + c1 x + c2 x^2 + ...
std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y,
                            int degree);

}  // namespace qrt
