#pragma once
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mvgb/estimators.hpp"
#include "mvgb/multiview.hpp"

namespace mvgb {

// Inputs shared by the bound evaluators. Counts are doubles so the same
// closed forms serve scaling studies directly.
struct BoundParams {
  double n = 0;
  double m = 0;
  double d = 1;
  double gamma = 1.0;
  double delta = 0.05;
  double lambda = 0.1;
  double beta = 0.3;                    // fast-rate temperature
  std::optional<double> xi;             // fast-rate weight; defaults to max(xi_min, 0)
  std::optional<double> sigma_u;        // LOO sub-Gaussian scale; defaults to r_s_xy
  std::optional<double> sup_loss_rms;   // sqrt((1/nm) sum (loss difference)^2)
  double empirical_risk = 0.0;          // weighted fast-rate form input
};

// Evaluated bound plus every constant needed to reproduce it.
struct BoundBreakdown {
  int theorem = 0;
  double bound = 0.0;
  double info_term = 0.0;      // information sum inside the main term
  double main_term = 0.0;      // sqrt term (theorems 1-6) or fast term (theorem 7)
  double additive_term = 0.0;  // K3-style additive remainder (or xi * empirical risk)
  std::vector<std::pair<std::string, double>> constants;
  std::vector<std::pair<std::string, double>> inputs;
};

// Generalization bounds: theorems 1 and 2 (reconstruction), 3 and 4
// (classification), 7 (fast rate; weighted form when empirical_risk > 0,
// interpolating form when it is 0).
BoundBreakdown evaluate_bound(int theorem, const InfoProfile& profile,
                              const LossEnvelope& envelope, const BoundParams& params);

// Validation-error bounds: theorem 5 (leave-one-out) and 6 (supersample).
// Both assume lambda near 0; lambda <= 0.1 is enforced.
BoundBreakdown evaluate_validation_bound(int theorem, const InfoProfile& profile,
                                         const LossEnvelope& envelope,
                                         const BoundParams& params);

// Admissible lower bound for the fast-rate weight:
// log(2 - e^{2 beta r}) / (2 beta r) - 1, defined while 2 beta r < log 2.
double xi_min(double beta, double r);

}  // namespace mvgb
