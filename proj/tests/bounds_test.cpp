#include <doctest.h>

#include <cmath>

#include "mvgb/bounds.hpp"
#include "mvgb/rng.hpp"

using namespace mvgb;

namespace {

InfoProfile profile_with(double h_c, double h_u_sum, double cmi, int y_card) {
  InfoProfile p;
  p.h_c = h_c;
  p.h_u_sum = h_u_sum;
  p.cmi_sum = cmi;
  p.y_card = y_card;
  return p;
}

LossEnvelope unit_envelope() { return {1.0, 1.0, 1.0, 1.0}; }

BoundParams base_params(double n, double m) {
  BoundParams p;
  p.n = n;
  p.m = m;
  p.d = 1;
  p.gamma = 1.0;
  p.delta = 0.05;
  p.lambda = 0.1;
  p.beta = 0.3;
  return p;
}

// Recompute a bound from its emitted constants map alone.
double reconstruct(const BoundBreakdown& b) {
  auto get = [&](const std::string& k) {
    for (const auto& [name, v] : b.constants)
      if (name == k) return v;
    for (const auto& [name, v] : b.inputs)
      if (name == k) return v;
    REQUIRE(false);
    return 0.0;
  };
  double nm = get("n") * get("m");
  switch (b.theorem) {
    case 1:
      return get("k1") * std::sqrt((b.info_term + get("k2")) / nm) + get("k3") / std::sqrt(nm);
    case 2:
      return get("k1") * std::sqrt((b.info_term + get("k2_lambda")) / nm) +
             get("k3_phi") / std::sqrt(nm);
    case 3:
      return get("kt1") * std::sqrt((b.info_term + get("kt2")) / nm) + get("kt3") / std::sqrt(nm);
    case 4:
      return get("kt1") * std::sqrt((b.info_term + get("kt2_lambda")) / nm) +
             get("kt3_phi") / std::sqrt(nm);
    case 5:
      return get("ku1") * std::sqrt(b.info_term + get("ku2_lambda"));
    case 6:
      return get("kut1") * std::sqrt((b.info_term + get("kut2_lambda")) / nm);
    case 7:
      return get("xi") * get("empirical_risk") +
             (b.info_term + get("khat")) / (nm * get("beta"));
  }
  REQUIRE(false);
  return 0.0;
}

constexpr double kLog2 = 0.6931471805599453;

}  // namespace

TEST_SUITE_BEGIN("bounds");

TEST_CASE("theorem 1 zero-loss envelope gives a zero bound") {
  auto b = evaluate_bound(1, profile_with(kLog2, 2 * kLog2, 0, 2), {0, 0, 0, 0},
                          base_params(100, 2));
  CHECK(b.bound == doctest::Approx(0.0));
}

TEST_CASE("theorem 1 worked example") {
  auto b = evaluate_bound(1, profile_with(kLog2, 2 * kLog2, 0, 2), unit_envelope(),
                          base_params(100, 2));
  CHECK(b.constants[0].second == doctest::Approx(2.828427125).epsilon(1e-8));
  CHECK(b.constants[1].second == doctest::Approx(3.688879454).epsilon(1e-8));
  CHECK(b.constants[2].second == doctest::Approx(1.722278572).epsilon(1e-8));
  CHECK(b.bound == doctest::Approx(0.602130069).epsilon(1e-8));
}

TEST_CASE("theorem 3 worked example") {
  auto params = base_params(100, 2);
  InfoProfile p = profile_with(0, 0, 0.5, 2);
  auto b = evaluate_bound(3, p, unit_envelope(), params);
  CHECK(b.constants[0].second == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(b.constants[1].second == doctest::Approx(4.382026635).epsilon(1e-8));
  CHECK(b.constants[2].second == doctest::Approx(2.113294345).epsilon(1e-8));
  CHECK(b.bound == doctest::Approx(0.774382179).epsilon(1e-8));
}

TEST_CASE("theorem 7 worked example (interpolating)") {
  auto params = base_params(100, 2);
  params.lambda = 0.5;
  params.beta = 0.3;
  params.empirical_risk = 0.0;
  auto b = evaluate_bound(7, profile_with(0, 0, 0, 2), unit_envelope(), params);
  CHECK(b.constants[0].second == doctest::Approx(11.066638362).epsilon(1e-8));
  CHECK(b.bound == doctest::Approx(0.184443973).epsilon(1e-8));
}

TEST_CASE("theorem 7 weighted form and regime checks") {
  auto params = base_params(100, 2);
  params.empirical_risk = 0.2;
  params.xi = 0.5;
  auto b = evaluate_bound(7, profile_with(0, 0, 0.3, 2), unit_envelope(), params);
  CHECK(b.additive_term == doctest::Approx(0.1));
  CHECK(std::abs(reconstruct(b) - b.bound) <= 1e-12);

  // 2 beta R >= log 2 is out of regime
  params.beta = 0.4;
  CHECK_THROWS_WITH_AS(evaluate_bound(7, profile_with(0, 0, 0.3, 2), unit_envelope(), params),
                       doctest::Contains("fast-rate regime"), RegimeError);
  // xi below its admissible lower bound
  params.beta = 0.3;
  params.xi = -5.0;
  CHECK_THROWS_AS(evaluate_bound(7, profile_with(0, 0, 0.3, 2), unit_envelope(), params),
                  RegimeError);
}

TEST_CASE("theorem 5 worked example") {
  auto params = base_params(100, 2);
  params.sigma_u = 0.5;
  InfoProfile p = profile_with(0, 0, 0, 2);
  p.mi_phi_u = 0.0;
  p.h_phi_given_u = 0.0;
  auto b = evaluate_validation_bound(5, p, unit_envelope(), params);
  CHECK(b.bound == doctest::Approx(0.5 * 8.370483).epsilon(1e-6));
  // default sigma_u is the samplewise envelope
  params.sigma_u.reset();
  auto b2 = evaluate_validation_bound(5, p, unit_envelope(), params);
  CHECK(b2.bound == doctest::Approx(8.370483).epsilon(1e-6));
}

TEST_CASE("theorem 6 scale and homogeneity") {
  auto params = base_params(100, 2);
  InfoProfile p = profile_with(0, 0, 0.4, 2);
  p.mi_phi_usup = 0.2;
  p.h_phi_given_usup = 0.1;

  params.sup_loss_rms = 0.0;
  CHECK(evaluate_validation_bound(6, p, unit_envelope(), params).bound ==
        doctest::Approx(0.0));

  params.sup_loss_rms = 0.7;
  p.c_phi = 0.0;
  auto b1 = evaluate_validation_bound(6, p, unit_envelope(), params);
  auto params2 = params;
  params2.n = 200;  // doubles nm
  auto b2 = evaluate_validation_bound(6, p, unit_envelope(), params2);
  CHECK(std::abs(b1.main_term / b2.main_term - std::sqrt(2.0)) <= 1e-12);
}

TEST_CASE("validation bounds enforce the lambda -> 0 premise") {
  auto params = base_params(100, 2);
  params.lambda = 0.2;
  InfoProfile p = profile_with(0, 0, 0, 2);
  p.mi_phi_u = 0.0;
  p.h_phi_given_u = 0.0;
  CHECK_THROWS_AS(evaluate_validation_bound(5, p, unit_envelope(), params), RegimeError);
}

TEST_CASE("missing profile fields are named") {
  auto params = base_params(100, 2);
  InfoProfile p = profile_with(0, 0, 0, 2);
  CHECK_THROWS_WITH_AS(evaluate_validation_bound(5, p, unit_envelope(), params),
                       doctest::Contains("mi_phi_u"), ValidationError);
  p.mi_phi_u = 0.0;
  CHECK_THROWS_WITH_AS(evaluate_validation_bound(5, p, unit_envelope(), params),
                       doctest::Contains("h_phi_given_u"), ValidationError);
  p.h_phi_given_u = 0.0;
  CHECK_THROWS_WITH_AS(evaluate_validation_bound(6, p, unit_envelope(), params),
                       doctest::Contains("mi_phi_usup"), ValidationError);
}

TEST_CASE("degenerate inputs rejected") {
  InfoProfile p = profile_with(0, 0, 0, 2);
  auto params = base_params(0, 2);
  CHECK_THROWS_AS(evaluate_bound(1, p, unit_envelope(), params), ValidationError);
  params = base_params(100, 2);
  params.delta = 1.0;
  CHECK_THROWS_AS(evaluate_bound(1, p, unit_envelope(), params), ValidationError);
  params = base_params(100, 2);
  params.gamma = 100.0;  // gamma > sqrt(nm)
  CHECK_THROWS_WITH_AS(evaluate_bound(1, p, unit_envelope(), params),
                       doctest::Contains("vacuous"), RegimeError);
}

TEST_CASE("xi_min") {
  CHECK(xi_min(0.3, 1.0) == doctest::Approx(-3.877732282).epsilon(1e-8));
  CHECK(xi_min(1e-6, 1.0) == doctest::Approx(-2.000002).epsilon(1e-6));
  CHECK_THROWS_AS(xi_min(0.35, 1.0), RegimeError);
  CHECK_THROWS_AS(xi_min(0.3, 0.0), ValidationError);
  // boundary blowup is a regime error, not a huge finite number
  CHECK_THROWS_AS(xi_min((kLog2 - 1e-12) / 2.0, 1.0), RegimeError);
  // the stated form decreases from -2 toward the boundary singularity, so
  // any positive weight stays admissible across the whole valid region
  double prev = xi_min(0.01, 1.0);
  CHECK(prev <= -2.0 + 1e-9);
  for (double beta = 0.02; beta < 0.34; beta += 0.01) {
    double cur = xi_min(beta, 1.0);
    CHECK(cur <= prev + 1e-12);
    CHECK(cur < 0.0);
    prev = cur;
  }
}

TEST_CASE("monotonicity in information, delta and n") {
  SplitMix64 rng(51);
  for (int theorem : {1, 2, 3, 4, 6, 7}) {
    for (int t = 0; t < 10; ++t) {
      InfoProfile p = profile_with(0.2 + rng.next_double(), rng.next_double(),
                                   0.2 + rng.next_double(), 2);
      p.renyi_phi = rng.next_double();
      p.mi_phi_u = rng.next_double();
      p.h_phi_given_u = rng.next_double();
      p.mi_phi_usup = rng.next_double();
      p.h_phi_given_usup = rng.next_double();
      p.c_phi = rng.next_double();
      auto params = base_params(50 + rng.next_index(200), 1 + rng.next_index(4));
      params.sup_loss_rms = 0.5;
      params.empirical_risk = 0.1;
      auto eval = [&](const InfoProfile& prof, const BoundParams& pr) {
        return theorem == 6 ? evaluate_validation_bound(6, prof, unit_envelope(), pr).bound
                            : evaluate_bound(theorem, prof, unit_envelope(), pr).bound;
      };
      double b0 = eval(p, params);

      InfoProfile more = p;
      more.h_c += 0.3;
      more.h_u_sum += 0.3;
      more.cmi_sum += 0.3;
      more.mi_common_sum += 0.3;
      more.mi_unique_sum += 0.3;
      more.renyi_phi += 0.3;
      more.mi_phi_usup = *more.mi_phi_usup + 0.3;
      CHECK(eval(more, params) >= b0 - 1e-12);

      BoundParams smaller_delta = params;
      smaller_delta.delta = params.delta / 4.0;
      CHECK(eval(p, smaller_delta) >= b0 - 1e-12);

      BoundParams more_n = params;
      more_n.n = params.n * 4;
      CHECK(eval(p, more_n) <= b0 + 1e-12);
    }
  }
}

TEST_CASE("audit: the constants map reproduces the bound") {
  SplitMix64 rng(52);
  for (int theorem : {1, 2, 3, 4, 5, 6, 7}) {
    for (int t = 0; t < 25; ++t) {
      InfoProfile p = profile_with(rng.next_double(), rng.next_double(),
                                   rng.next_double(), 2 + rng.next_index(3));
      p.renyi_phi = rng.next_double();
      p.h_c_given_x = 0.1 * rng.next_double();
      p.h_u_given_x_sum = 0.1 * rng.next_double();
      p.h_z_given_x1_y = rng.next_double();
      p.c_phi = 2.0 * rng.next_double();
      p.mi_phi_u = rng.next_double();
      p.h_phi_given_u = rng.next_double();
      p.mi_phi_usup = rng.next_double();
      p.h_phi_given_usup = rng.next_double();
      LossEnvelope env{0.5 + rng.next_double(), 0.5 + rng.next_double(), 0.0, 0.0};
      env.r_s_x = env.r_x * rng.next_double();
      env.r_s_xy = env.r_xy * rng.next_double();
      auto params = base_params(20 + rng.next_index(500), 1 + rng.next_index(4));
      params.gamma = 0.5 + rng.next_double();
      params.delta = 0.02 + 0.2 * rng.next_double();
      params.lambda = 0.02 + 0.07 * rng.next_double();
      params.beta = env.r_s_xy > 0 ? 0.9 * kLog2 / (2.0 * env.r_s_xy) : 0.3;
      params.sup_loss_rms = rng.next_double();
      params.empirical_risk = 0.2 * rng.next_double();
      BoundBreakdown b = (theorem == 5 || theorem == 6)
                             ? evaluate_validation_bound(theorem, p, env, params)
                             : evaluate_bound(theorem, p, env, params);
      CHECK(b.bound >= 0.0);
      CHECK(std::abs(reconstruct(b) - b.bound) <= 1e-12);
    }
  }
}

TEST_CASE("frozen-profile scaling slopes") {
  InfoProfile p = profile_with(kLog2, kLog2, 0.4, 2);
  p.c_phi = 0.0;  // keeps K2 independent of nm
  for (int theorem : {1, 2, 3, 4}) {
    std::vector<double> lx, ly;
    for (double n : {50.0, 100.0, 200.0, 400.0, 800.0}) {
      auto params = base_params(n, 2);
      auto b = evaluate_bound(theorem, p, unit_envelope(), params);
      lx.push_back(std::log(n * 2));
      ly.push_back(std::log(b.main_term));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      num += (lx[i] - mx) * (ly[i] - my);
      den += (lx[i] - mx) * (lx[i] - mx);
    }
    CHECK(std::abs(num / den - (-0.5)) <= 1e-6);
  }
  // theorem 7 interpolating: bound * (nm beta) is constant
  auto params = base_params(100, 2);
  auto b1 = evaluate_bound(7, p, unit_envelope(), params);
  params.n = 800;
  auto b2 = evaluate_bound(7, p, unit_envelope(), params);
  CHECK(std::abs(b1.bound * (100 * 2 * 0.3) - b2.bound * (800 * 2 * 0.3)) <= 1e-12);
}

TEST_CASE("m = 1 single-view specialization evaluates cleanly") {
  InfoProfile p = profile_with(kLog2, 0.3, 0.4, 2);
  p.mi_phi_u = 0.1;
  p.h_phi_given_u = 0.1;
  p.mi_phi_usup = 0.1;
  p.h_phi_given_usup = 0.1;
  auto params = base_params(100, 1);
  params.sup_loss_rms = 0.5;
  for (int theorem : {1, 2, 3, 4, 7}) {
    auto b = evaluate_bound(theorem, p, unit_envelope(), params);
    CHECK(std::isfinite(b.bound));
    CHECK(b.bound >= 0.0);
  }
  for (int theorem : {5, 6})
    CHECK(std::isfinite(evaluate_validation_bound(theorem, p, unit_envelope(), params).bound));
}

TEST_SUITE_END();
