#include "entwit/sweeps.hpp"

#include "entwit/statezoo.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace entwit {

namespace {

std::vector<double> grid(double lo, double hi, int steps) {
  if (steps < 2) {
    throw std::invalid_argument("sweep: need at least two grid points");
  }
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) {
    throw std::invalid_argument("sweep: range must satisfy 0 <= lo < hi <= 1");
  }
  std::vector<double> points(steps);
  for (int i = 0; i < steps; ++i) {
    points[i] = lo + (hi - lo) * i / (steps - 1);
  }
  return points;
}

}  // namespace

std::vector<SweepPoint> nmr_sweep(int n_dim, int m, double lo, double hi, int steps,
                                  double margin) {
  const double threshold = 1.0 / n_dim;
  std::vector<SweepPoint> points;
  for (double eps : grid(lo, hi, steps)) {
    const double fidelity = nmr_fidelity(eps, n_dim, m);
    points.push_back(SweepPoint{eps, fidelity, threshold,
                                fidelity > threshold + margin ? Verdict::kNptEntangled
                                                              : Verdict::kInconclusive});
  }
  return points;
}

std::vector<SweepPoint> p_mixture_sweep(double lo, double hi, int steps, double margin) {
  const SystemShape shape({2, 2});
  const double s = 1.0 / std::sqrt(2.0);
  Vector witness = Vector::Zero(4);
  witness(0) = s;
  witness(3) = -s;
  const PureState psi(shape, std::move(witness));

  const double threshold = 0.5;
  std::vector<SweepPoint> points;
  for (double p : grid(lo, hi, steps)) {
    const double fidelity = overlap(horodecki_p_mixture(p), psi);
    points.push_back(SweepPoint{p, fidelity, threshold,
                                fidelity > threshold + margin ? Verdict::kNptEntangled
                                                              : Verdict::kInconclusive});
  }
  return points;
}

std::optional<double> crossing_parameter(const std::vector<SweepPoint>& points) {
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    const double below = points[i].fidelity - points[i].threshold;
    const double above = points[i + 1].fidelity - points[i + 1].threshold;
    if (below <= 0.0 && above > 0.0) {
      if (below == 0.0) return points[i].parameter;
      const double t = -below / (above - below);
      return points[i].parameter + t * (points[i + 1].parameter - points[i].parameter);
    }
  }
  return std::nullopt;
}

std::string sweep_to_csv(const std::vector<SweepPoint>& points) {
  std::string out = "parameter,fidelity,threshold,verdict\n";
  char buffer[128];
  for (const SweepPoint& point : points) {
    std::snprintf(buffer, sizeof buffer, "%.17g,%.17g,%.17g,", point.parameter,
                  point.fidelity, point.threshold);
    out += buffer;
    out += to_string(point.verdict);
    out += '\n';
  }
  return out;
}

void write_sweep_csv(const std::vector<SweepPoint>& points, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << sweep_to_csv(points);
}

}  // namespace entwit
