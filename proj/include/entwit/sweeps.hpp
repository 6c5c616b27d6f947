#pragma once

#include "entwit/criteria.hpp"

#include <optional>
#include <string>
#include <vector>

namespace entwit {

struct SweepPoint {
  double parameter = 0.0;
  double fidelity = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::kInconclusive;
};

/// MES fidelity of the pseudo-pure family over a grid of mixing weights.
std::vector<SweepPoint> nmr_sweep(int n_dim, int m, double lo, double hi, int steps,
                                  double margin = kValidationTol);

/// Overlap of the two-qubit p-mixture with its defining entangled state,
/// over a grid of mixture weights.
std::vector<SweepPoint> p_mixture_sweep(double lo, double hi, int steps,
                                        double margin = kValidationTol);

/// Parameter at which the fidelity crosses the threshold, linearly
/// interpolated between the first adjacent grid points that straddle it.
std::optional<double> crossing_parameter(const std::vector<SweepPoint>& points);

/// CSV with header "parameter,fidelity,threshold,verdict", floats at 17
/// significant digits, LF line endings.
std::string sweep_to_csv(const std::vector<SweepPoint>& points);
void write_sweep_csv(const std::vector<SweepPoint>& points, const std::string& path);

}  // namespace entwit
