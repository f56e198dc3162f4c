#include "mvgb/bounds.hpp"

#include <cmath>
#include <sstream>

namespace mvgb {

namespace {

constexpr double kLn2 = 0.6931471805599453;

struct Ctx {
  double nm = 0;
  double log_arg = 0;  // log(sqrt(nm)/gamma)
  double root4_nm = 0;
};

Ctx validate_common(const BoundParams& p) {
  if (p.n < 1 || p.m < 1)
    throw ValidationError("bound evaluation needs n >= 1 and m >= 1 (n*m = 0 rejected)");
  if (!(p.delta > 0.0 && p.delta < 1.0))
    throw ValidationError("delta must lie strictly inside (0,1)");
  if (!(p.gamma > 0.0)) throw ValidationError("gamma must be > 0");
  if (!(p.d >= 1)) throw ValidationError("d must be >= 1");
  Ctx c;
  c.nm = p.n * p.m;
  c.log_arg = std::log(std::sqrt(c.nm) / p.gamma);
  if (c.log_arg < 0.0)
    throw RegimeError("vacuous regime: gamma exceeds sqrt(n m), the typical-set "
                      "radius would be complex");
  c.root4_nm = std::pow(c.nm, 0.25);
  return c;
}

double sensitivity_term(double c_phi, double d, double log_arg) {
  return c_phi * std::sqrt(d * log_arg / 2.0);
}

double require_field(const std::optional<double>& f, const char* name, int theorem) {
  if (!f) {
    std::ostringstream os;
    os << "profile field " << name << " required by theorem " << theorem << " is unset";
    throw ValidationError(os.str());
  }
  return *f;
}

void echo_inputs(BoundBreakdown& b, const BoundParams& p, const LossEnvelope& e,
                 const InfoProfile& prof) {
  b.inputs = {{"n", p.n},
              {"m", p.m},
              {"d", p.d},
              {"gamma", p.gamma},
              {"delta", p.delta},
              {"lambda", p.lambda},
              {"beta", p.beta},
              {"empirical_risk", p.empirical_risk},
              {"r_x", e.r_x},
              {"r_xy", e.r_xy},
              {"r_s_x", e.r_s_x},
              {"r_s_xy", e.r_s_xy},
              {"c_phi", prof.c_phi},
              {"y_card", static_cast<double>(prof.y_card)}};
}

}  // namespace

double xi_min(double beta, double r) {
  if (!(beta > 0.0)) throw ValidationError("beta must be > 0");
  if (!(r > 0.0)) throw ValidationError("samplewise loss bound r must be > 0");
  double x = 2.0 * beta * r;
  if (x >= kLn2) throw RegimeError("fast-rate regime requires 2*beta*R < log 2");
  // within 1e-9 of the boundary the value has already diverged past any
  // useful magnitude; report the singularity instead of a huge number
  if (x > kLn2 - 1e-9)
    throw RegimeError("fast-rate weight bound diverges: 2*beta*R is at the log 2 boundary");
  double value = std::log(2.0 - std::exp(x)) / x - 1.0;
  if (value < -1e6)
    throw RegimeError("fast-rate weight bound diverges: 2*beta*R is at the log 2 boundary");
  return value;
}

BoundBreakdown evaluate_bound(int theorem, const InfoProfile& profile,
                              const LossEnvelope& envelope, const BoundParams& params) {
  Ctx ctx = validate_common(params);
  BoundBreakdown out;
  out.theorem = theorem;
  echo_inputs(out, params, envelope, profile);
  double c_term = sensitivity_term(profile.c_phi, params.d, ctx.log_arg);
  double y = static_cast<double>(profile.y_card);

  switch (theorem) {
    case 1: {
      double k1 = 2.0 * std::sqrt(2.0) * envelope.r_x;
      double k2 = c_term + std::log(2.0 / params.delta);
      double k3 = params.gamma * envelope.r_x +
                  envelope.r_s_x * (std::sqrt(params.gamma) / ctx.root4_nm) *
                      std::sqrt(2.0 * std::log(2.0 / params.delta));
      out.info_term = profile.h_c + profile.h_u_sum;
      out.main_term = k1 * std::sqrt((out.info_term + k2) / ctx.nm);
      out.additive_term = k3 / std::sqrt(ctx.nm);
      out.constants = {{"k1", k1}, {"k2", k2}, {"k3", k3}};
      break;
    }
    case 2: {
      if (!(params.lambda > 0.0 && params.lambda < 1.0))
        throw ValidationError("lambda must lie in (0,1)");
      double phi_tail = profile.renyi_phi +
                        (1.0 / params.lambda) * std::log(1.0 / params.delta) +
                        std::log(4.0 / params.delta);
      double k1 = 2.0 * std::sqrt(2.0) * envelope.r_x;
      double k2 = c_term + (1.0 / params.lambda) * std::log(1.0 / params.delta) +
                  std::log(4.0 / params.delta) + profile.h_c_given_x + profile.h_u_given_x_sum;
      double k3 = params.gamma * envelope.r_x +
                  std::sqrt(2.0) * envelope.r_s_x * (std::sqrt(params.gamma) / ctx.root4_nm) *
                      std::sqrt(phi_tail);
      out.info_term = profile.mi_common_sum + profile.mi_unique_sum + profile.renyi_phi;
      out.main_term = k1 * std::sqrt((out.info_term + k2) / ctx.nm);
      out.additive_term = k3 / std::sqrt(ctx.nm);
      out.constants = {{"k1", k1}, {"k2_lambda", k2}, {"k3_phi", k3}};
      break;
    }
    case 3: {
      if (profile.y_card < 1) throw ValidationError("profile field y_card is unset");
      double k1 = 2.0 * std::sqrt(2.0) * envelope.r_xy * std::sqrt(y);
      double k2 = c_term + std::log(2.0 * y / params.delta) + profile.h_z_given_x1_y;
      double k3 = params.gamma * envelope.r_xy +
                  envelope.r_s_xy * (std::sqrt(params.gamma * y) / ctx.root4_nm) *
                      std::sqrt(2.0 * std::log(2.0 * y / params.delta));
      out.info_term = profile.cmi_sum;
      out.main_term = k1 * std::sqrt((out.info_term + k2) / ctx.nm);
      out.additive_term = k3 / std::sqrt(ctx.nm);
      out.constants = {{"kt1", k1}, {"kt2", k2}, {"kt3", k3}};
      break;
    }
    case 4: {
      if (profile.y_card < 1) throw ValidationError("profile field y_card is unset");
      if (!(params.lambda > 0.0 && params.lambda < 1.0))
        throw ValidationError("lambda must lie in (0,1)");
      double phi_tail = profile.renyi_phi +
                        (1.0 / params.lambda) * std::log(1.0 / params.delta) +
                        std::log(4.0 * y / params.delta);
      double k1 = 2.0 * std::sqrt(2.0) * envelope.r_xy * std::sqrt(y);
      double k2 = c_term + (1.0 / params.lambda) * std::log(1.0 / params.delta) +
                  std::log(4.0 * y / params.delta) + profile.h_z_given_x1_y;
      double k3 = params.gamma * envelope.r_xy +
                  std::sqrt(2.0) * envelope.r_s_xy *
                      (std::sqrt(params.gamma * y) / ctx.root4_nm) * std::sqrt(phi_tail);
      out.info_term = profile.cmi_sum + profile.renyi_phi;
      out.main_term = k1 * std::sqrt((out.info_term + k2) / ctx.nm);
      out.additive_term = k3 / std::sqrt(ctx.nm);
      out.constants = {{"kt1", k1}, {"kt2_lambda", k2}, {"kt3_phi", k3}};
      break;
    }
    case 7: {
      if (profile.y_card < 1) throw ValidationError("profile field y_card is unset");
      if (!(params.lambda > 0.0 && params.lambda < 1.0))
        throw ValidationError("lambda must lie in (0,1)");
      if (!(params.beta > 0.0)) throw ValidationError("beta must be > 0");
      double r = envelope.r_s_xy;
      double xi_lower = 0.0;
      if (r > 0.0) {
        if (2.0 * params.beta * r >= kLn2)
          throw RegimeError("fast-rate regime requires 2*beta*R < log 2");
        xi_lower = xi_min(params.beta, r);
      }
      double xi = params.xi ? *params.xi : std::max(xi_lower, 0.0);
      if (params.xi && *params.xi < xi_lower)
        throw RegimeError("fast-rate weight xi is below its admissible lower bound");
      if (xi < 0.0) throw ValidationError("fast-rate weight xi must be >= 0");
      double khat = c_term + (1.0 / params.lambda) * std::log(1.0 / params.delta) +
                    std::log(4.0 * y / params.delta) + profile.h_z_given_x1_y;
      out.info_term = profile.cmi_sum + profile.renyi_phi;
      out.main_term = (out.info_term + khat) / (ctx.nm * params.beta);
      out.additive_term = xi * params.empirical_risk;
      out.constants = {{"khat", khat}, {"xi", xi}, {"xi_min", xi_lower}};
      break;
    }
    default:
      throw ValidationError("evaluate_bound covers theorems 1, 2, 3, 4 and 7");
  }
  out.bound = out.main_term + out.additive_term;
  return out;
}

BoundBreakdown evaluate_validation_bound(int theorem, const InfoProfile& profile,
                                         const LossEnvelope& envelope,
                                         const BoundParams& params) {
  Ctx ctx = validate_common(params);
  if (!(params.lambda > 0.0)) throw ValidationError("lambda must be > 0");
  if (params.lambda > 0.1)
    throw RegimeError("validation bounds assume lambda -> 0; lambda <= 0.1 required");
  if (profile.y_card < 1) throw ValidationError("profile field y_card is unset");

  BoundBreakdown out;
  out.theorem = theorem;
  echo_inputs(out, params, envelope, profile);
  double c_term = sensitivity_term(profile.c_phi, params.d, ctx.log_arg);
  double y = static_cast<double>(profile.y_card);
  double log_tail = (1.0 / params.lambda) * std::log(1.0 / params.delta) +
                    std::log(4.0 * y / params.delta);

  switch (theorem) {
    case 5: {
      double mi_phi_u = require_field(profile.mi_phi_u, "mi_phi_u", 5);
      double h_phi_u = require_field(profile.h_phi_given_u, "h_phi_given_u", 5);
      double sigma = params.sigma_u ? *params.sigma_u : envelope.r_s_xy;
      if (sigma < 0.0 || sigma > envelope.r_s_xy + 1e-12)
        throw ValidationError("sigma_u must lie in [0, r_s_xy]");
      double k1 = std::sqrt(2.0) * sigma;
      double k2 = c_term + log_tail + profile.h_z_given_x1_y + h_phi_u;
      out.info_term = profile.cmi_sum + mi_phi_u;
      out.main_term = k1 * std::sqrt(out.info_term + k2);
      out.additive_term = 0.0;
      out.constants = {{"ku1", k1}, {"ku2_lambda", k2}, {"sigma_u", sigma}};
      break;
    }
    case 6: {
      double mi_phi_usup = require_field(profile.mi_phi_usup, "mi_phi_usup", 6);
      double h_phi_usup = require_field(profile.h_phi_given_usup, "h_phi_given_usup", 6);
      double rms = require_field(params.sup_loss_rms, "sup_loss_rms", 6);
      if (rms < 0.0) throw ValidationError("sup_loss_rms must be >= 0");
      double k1 = std::sqrt(2.0) * rms;
      double k2 = c_term + log_tail + profile.h_z_given_x1_y + h_phi_usup;
      out.info_term = profile.cmi_sum + mi_phi_usup;
      out.main_term = k1 * std::sqrt((out.info_term + k2) / ctx.nm);
      out.additive_term = 0.0;
      out.constants = {{"kut1", k1}, {"kut2_lambda", k2}};
      break;
    }
    default:
      throw ValidationError("evaluate_validation_bound covers theorems 5 and 6");
  }
  out.bound = out.main_term + out.additive_term;
  return out;
}

}  // namespace mvgb
