#pragma once

#include <array>
#include <vector>

#include <nlohmann/json.hpp>

namespace cfb {

struct EnvelopeAtom {
  double x = 0.0;
  double p = 0.0;
};

// Certified extremal candidate: a law on at most 4 atoms meeting the moment
// constraints (sum p = 1, mean 0, variance 1, E|X|^3 = rho) whose objective
// value at the reported phase theta equals `value`. The residual vector
// reports the four constraint defects of the support as published.
struct EnvelopeSolution {
  double t = 0.0;
  double rho = 1.0;
  double value = 0.0;
  double theta = 0.0;
  std::vector<EnvelopeAtom> support;
  std::array<double, 4> constraint_residuals{};
  nlohmann::json to_json() const;
};

// Largest |f(t)| over laws with mean 0, variance 1, E|X|^3 = rho. Extremal
// laws live on <= 4 atoms, so the search runs multistart coordinate descent
// over 4 support points with the probabilities recovered from the affine
// moment constraints and the phase maximized in closed form. The result is
// always a certified lower bound for the sup; rho < 1 is infeasible.
EnvelopeSolution cf_envelope(double t, double rho, int budget = 20000);

// Same moment class, objective |f(t) - e^{-t^2/2}|.
EnvelopeSolution cf_normal_gap_envelope(double t, double rho,
                                        int budget = 20000);

}  // namespace cfb
