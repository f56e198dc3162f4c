#include <doctest.h>

#include <cmath>
#include <vector>

#include "mvgb/estimators.hpp"
#include "mvgb/rng.hpp"

using namespace mvgb;

namespace {

constexpr double kLog2 = 0.6931471805599453;

double binary_entropy(double p) { return -p * std::log(p) - (1 - p) * std::log(1 - p); }

GenerativeModel xor_flip_model(int m, double f) {
  GenerativeModel g;
  g.y_card = 2;
  g.p_y = {0.5, 0.5};
  g.m = m;
  g.d = 1;
  g.coord_card = 2;
  g.p_coord = {1.0 - f, f};
  g.x_card = 2;
  g.theta = {0, 1, 1, 0};
  return g;
}

TrainedModel constant_trained(int m, int x_card, int label) {
  TrainedModel tm;
  tm.rep = RepresentationFunction::constant(m, x_card);
  tm.psi.c_card = 1;
  tm.psi.u_card = 1;
  tm.psi.x_card = x_card;
  tm.psi.table = {0};
  tm.psi_hat.c_card = 1;
  tm.psi_hat.u_card = 1;
  tm.psi_hat.y_card = 2;
  tm.psi_hat.table = {label};
  return tm;
}

}  // namespace

TEST_SUITE_BEGIN("estimators");

TEST_CASE("empirical joint counting and smoothing") {
  std::vector<Alphabet> axes = {{"x", 2}};
  std::vector<std::vector<int>> samples = {{0}, {0}, {0}, {1}};
  auto raw = empirical_joint(samples, axes, 0.0);
  CHECK(raw.probs()[0] == doctest::Approx(0.75));
  CHECK(raw.probs()[1] == doctest::Approx(0.25));
  CHECK(entropy(raw, {"x"}) == doctest::Approx(0.562335145).epsilon(1e-8));

  auto smoothed = empirical_joint(samples, axes, 1.0);
  CHECK(smoothed.probs()[0] == doctest::Approx(4.0 / 6.0));
  CHECK(smoothed.probs()[1] == doctest::Approx(2.0 / 6.0));

  // smoothing > 0 never leaves a zero cell
  auto sparse = empirical_joint({{0}}, axes, 0.5);
  CHECK(sparse.probs()[1] > 0.0);

  CHECK_THROWS_WITH_AS(empirical_joint({{0}, {2}}, axes, 0.0),
                       doctest::Contains("sample 1"), ValidationError);
  CHECK_THROWS_AS(empirical_joint({}, axes, 0.0), ValidationError);
  CHECK_THROWS_AS(empirical_joint(samples, axes, -1.0), ValidationError);
}

TEST_CASE("binning") {
  BinningSpec spec;
  spec.bins_per_dim = 4;
  auto b = bin_columns({{0.0, 1.0, 2.0, 3.9, 4.0}}, spec);
  CHECK(b.symbols[0] == std::vector<int>{0, 1, 2, 3, 3});
  CHECK_THROWS_AS(bin_columns({{}}, spec), ValidationError);
  spec.bins_per_dim = 1;
  CHECK_THROWS_AS(bin_columns({{1.0}}, spec), ValidationError);
}

TEST_CASE("plug-in MI bias envelope on independent pairs") {
  SplitMix64 rng(41);
  int n = 2000;
  std::vector<Alphabet> axes = {{"a", 3}, {"b", 3}};
  for (int t = 0; t < 5; ++t) {
    std::vector<std::vector<int>> samples;
    for (int i = 0; i < n; ++i) samples.push_back({rng.next_index(3), rng.next_index(3)});
    auto d = empirical_joint(samples, axes, 0.0);
    double mi = mutual_information(d, {"a"}, {"b"});
    double cells = 9.0;
    // delta-method standard error of the plug-in MI
    std::vector<double> pa = d.marginal_probs({"a"});
    std::vector<double> pb = d.marginal_probs({"b"});
    double mean = 0.0, m2 = 0.0;
    int k = 0;
    for (const auto& s : samples) {
      double pj = d.probs()[static_cast<std::size_t>(s[0] * 3 + s[1])];
      double t_i = std::log(pj / (pa[static_cast<std::size_t>(s[0])] * pb[static_cast<std::size_t>(s[1])]));
      ++k;
      double delta = t_i - mean;
      mean += delta / k;
      m2 += delta * (t_i - mean);
    }
    double se = std::sqrt(m2 / (k - 1) / k);
    CHECK(mi <= 2.0 * (cells - 1.0) / (2.0 * n) + 3.0 * se);
  }
}

TEST_CASE("exact profile on the two-view flip model") {
  auto model = xor_flip_model(2, 0.1);
  auto rep = RepresentationFunction::identity_into_c(2, 2);
  MultiViewDataset dummy;  // unused on the exact path
  dummy.m = 2;
  dummy.d = 1;
  dummy.x_card = 2;
  dummy.y_card = 2;
  auto p = estimate_info_profile(dummy, rep, &model, 0.0, 0.1);

  // deterministic encoders leave no conditional code entropy
  CHECK(p.h_c_given_x == doctest::Approx(0.0));
  CHECK(p.h_u_given_x_sum == doctest::Approx(0.0));
  // identity into C: sum_j I(X^j; C,U^j | Y) = 2 H_b(0.1)
  CHECK(p.cmi_sum == doctest::Approx(2.0 * binary_entropy(0.1)).epsilon(1e-9));
  CHECK(p.cmi_sum == doctest::Approx(0.650165947).epsilon(1e-8));
  // U is a point mass
  CHECK(p.h_u_sum == doctest::Approx(0.0));
  CHECK(p.mi_unique_sum == doctest::Approx(0.0));
  // H(Z | X^1, Y) = H(X^2 | Y) = H_b(0.1)
  CHECK(p.h_z_given_x1_y == doctest::Approx(binary_entropy(0.1)).epsilon(1e-9));
  CHECK(p.y_card == 2);
}

TEST_CASE("exact profile, single view identity: cmi = H(X|Y)") {
  auto model = xor_flip_model(1, 0.25);
  auto rep = RepresentationFunction::identity_into_c(1, 2);
  MultiViewDataset dummy;
  dummy.m = 1;
  dummy.d = 1;
  dummy.x_card = 2;
  dummy.y_card = 2;
  auto p = estimate_info_profile(dummy, rep, &model, 0.0, 0.1);
  CHECK(p.cmi_sum == doctest::Approx(binary_entropy(0.25)).epsilon(1e-9));
  CHECK(p.h_c == doctest::Approx(kLog2).epsilon(1e-9));  // X marginal is fair
}

TEST_CASE("plug-in equals exact when the sample enumerates the support") {
  auto model = xor_flip_model(2, 0.25);
  auto rep = RepresentationFunction::identity_into_c(2, 2);
  // atom (y, v1, v2) has probability (1/2) p_{v1} p_{v2} with p in {3/4, 1/4};
  // multiplicities 9,3,3,1 out of 16 per label reproduce it exactly
  MultiViewDataset data;
  data.m = 2;
  data.d = 1;
  data.x_card = 2;
  data.y_card = 2;
  for (int y = 0; y < 2; ++y)
    for (int v1 = 0; v1 < 2; ++v1)
      for (int v2 = 0; v2 < 2; ++v2) {
        int count = (v1 ? 1 : 3) * (v2 ? 1 : 3);
        for (int r = 0; r < count; ++r) data.samples.push_back({{y ^ v1, y ^ v2}, y});
      }
  auto exact = estimate_info_profile(data, rep, &model, 0.0, 0.1);
  auto plug = estimate_info_profile(data, rep, nullptr, 0.0, 0.1);
  CHECK(std::abs(plug.cmi_sum - exact.cmi_sum) <= 1e-12);
  CHECK(std::abs(plug.mi_common_sum - exact.mi_common_sum) <= 1e-12);
  CHECK(std::abs(plug.mi_unique_sum - exact.mi_unique_sum) <= 1e-12);
  CHECK(std::abs(plug.h_u_sum - exact.h_u_sum) <= 1e-12);
  CHECK(std::abs(plug.h_c - exact.h_c) <= 1e-12);
  CHECK(std::abs(plug.h_z_given_x1_y - exact.h_z_given_x1_y) <= 1e-12);
}

TEST_CASE("plug-in profile converges to the exact profile") {
  auto model = xor_flip_model(2, 0.1);
  auto rep = RepresentationFunction::identity_into_c(2, 2);
  MultiViewDataset dummy;
  dummy.m = 2;
  dummy.d = 1;
  dummy.x_card = 2;
  dummy.y_card = 2;
  auto exact = estimate_info_profile(dummy, rep, &model, 0.0, 0.1);
  auto err = [&](int n, std::uint64_t seed) {
    auto data = sample_dataset(model, n, seed);
    auto plug = estimate_info_profile(data, rep, nullptr, 0.0, 0.1);
    double e = 0.0;
    e = std::max(e, std::abs(plug.cmi_sum - exact.cmi_sum));
    e = std::max(e, std::abs(plug.h_c - exact.h_c));
    e = std::max(e, std::abs(plug.mi_common_sum - exact.mi_common_sum));
    e = std::max(e, std::abs(plug.h_z_given_x1_y - exact.h_z_given_x1_y));
    return e;
  };
  double e3 = err(1000, 5), e4 = err(10000, 6);
  CHECK(e4 <= 0.05);
  CHECK(e4 <= 3.0 * e3 + 1e-6);
}

TEST_CASE("hypothesis renyi") {
  HypothesisSpace space;
  space.members = {RepresentationFunction::identity_into_c(1, 2),
                   RepresentationFunction::constant(1, 2)};
  space.prior = {0.5, 0.5};
  CHECK(hypothesis_renyi(space, 0.5) == doctest::Approx(kLog2).epsilon(1e-12));
  space.prior = {1.0, 0.0};
  CHECK(hypothesis_renyi(space, 0.5) == doctest::Approx(0.0));
  CHECK_THROWS_AS(hypothesis_renyi(space, 1.5), ValidationError);

  MultiViewDataset dummy;
  dummy.m = 1;
  dummy.d = 1;
  dummy.x_card = 2;
  dummy.y_card = 2;
  auto rep = RepresentationFunction::identity_into_c(1, 2);
  auto model = xor_flip_model(1, 0.1);
  CHECK_THROWS_AS(estimate_info_profile(dummy, rep, &model, 0.0, 0.0, &space),
                  ValidationError);
}

TEST_CASE("fingerprints are deterministic functions of the model") {
  auto source = xor_flip_model(2, 0.1);
  auto fp = make_prediction_fingerprint(source, 8, 99);
  auto tm = constant_trained(2, 2, 1);
  CHECK(fingerprint_symbol(fp, tm) == fingerprint_symbol(fp, tm));
  auto tm2 = constant_trained(2, 2, 0);
  CHECK(fingerprint_symbol(fp, tm) != fingerprint_symbol(fp, tm2));

  auto wfp = make_weight_fingerprint(16);
  tm.raw_weights = {0.11, -0.52, 3.9};
  tm2.raw_weights = {0.11, -0.52, 3.9};
  CHECK(fingerprint_symbol(wfp, tm) == fingerprint_symbol(wfp, tm2));
  tm2.raw_weights[2] = -3.9;
  CHECK(fingerprint_symbol(wfp, tm) != fingerprint_symbol(wfp, tm2));
}

TEST_CASE("model information: data-blind trainer carries zero information") {
  auto source = xor_flip_model(1, 0.2);
  auto fp = make_prediction_fingerprint(source, 8, 7);
  Trainer blind = [](const MultiViewDataset& data, std::uint64_t) {
    return constant_trained(data.m, data.x_card, 0);
  };
  for (auto setting : {InfoSetting::full, InfoSetting::loo, InfoSetting::supersample}) {
    auto est = estimate_model_information(blind, source, 12, setting, 64, fp, 0.0, 0.1, 3);
    CHECK(est.mi == doctest::Approx(0.0));
    CHECK(est.renyi_phi == doctest::Approx(0.0));
    CHECK(est.distinct_symbols == 1);
  }
}

TEST_CASE("model information: copy channel recovers log 2") {
  // trainer output reproduces the first training sample's first view; under
  // the supersample setting that view is selected by the first split bit
  auto source = xor_flip_model(1, 0.0);  // x = y exactly
  auto fp = make_prediction_fingerprint(source, 8, 7);
  Trainer copy_first = [](const MultiViewDataset& data, std::uint64_t) {
    return constant_trained(data.m, data.x_card, data.samples[0].views[0]);
  };
  // scan for a seed whose first supersample pair differs across sides (the
  // trainer only sees that pair's selected side, so otherwise it is blind)
  std::uint64_t seed = 0;
  for (std::uint64_t s = 0; s < 32; ++s) {
    auto probe = estimate_model_information(copy_first, source, 16, InfoSetting::supersample,
                                            16, fp, 0.0, 0.1, s);
    if (probe.distinct_symbols >= 2) {
      seed = s;
      break;
    }
  }
  auto est = estimate_model_information(copy_first, source, 16, InfoSetting::supersample,
                                        2000, fp, 0.0, 0.1, seed);
  CHECK(est.distinct_symbols == 2);
  CHECK(std::abs(est.mi - kLog2) <= 0.05);
  CHECK(est.h_phi_given == doctest::Approx(0.0));  // split bits determine it
}

TEST_CASE("model information: non-deterministic trainer rejected") {
  auto source = xor_flip_model(1, 0.2);
  auto fp = make_prediction_fingerprint(source, 8, 7);
  int calls = 0;
  Trainer flaky = [&calls](const MultiViewDataset& data, std::uint64_t) {
    return constant_trained(data.m, data.x_card, (calls++) % 2);
  };
  CHECK_THROWS_WITH_AS(
      estimate_model_information(flaky, source, 8, InfoSetting::full, 16, fp, 0.0, 0.1, 3),
      doctest::Contains("non-deterministic"), ValidationError);
}

TEST_SUITE_END();
