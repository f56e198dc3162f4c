#include <doctest.h>

#include <cmath>
#include <vector>

#include "mvgb/multiview.hpp"
#include "mvgb/rng.hpp"

using namespace mvgb;

namespace {

constexpr double kLog2 = 0.6931471805599453;

// x^(j) = y xor flip, flip ~ Bernoulli(f): the standard two-symbol channel.
GenerativeModel xor_flip_model(int m, double f) {
  GenerativeModel g;
  g.y_card = 2;
  g.p_y = {0.5, 0.5};
  g.m = m;
  g.d = 1;
  g.coord_card = 2;
  g.p_coord = {1.0 - f, f};
  g.x_card = 2;
  g.theta = {0, 1, 1, 0};  // theta[y*2+v] = y xor v
  return g;
}

// Single label, x = v directly; p_coord shapes p_z for sensitivity tests.
GenerativeModel direct_model(std::vector<double> p_coord) {
  GenerativeModel g;
  g.y_card = 1;
  g.p_y = {1.0};
  g.m = 1;
  g.d = 1;
  g.coord_card = static_cast<int>(p_coord.size());
  g.p_coord = std::move(p_coord);
  g.x_card = g.coord_card;
  for (int v = 0; v < g.coord_card; ++v) g.theta.push_back(v);
  return g;
}

ClassificationDecoder identity_cls_decoder(int x_card) {
  ClassificationDecoder d;
  d.c_card = x_card;
  d.u_card = 1;
  d.y_card = x_card;
  for (int z = 0; z < x_card; ++z) d.table.push_back(z);
  return d;
}

ReconstructionDecoder identity_rec_decoder(int x_card) {
  ReconstructionDecoder d;
  d.c_card = x_card;
  d.u_card = 1;
  d.x_card = x_card;
  for (int z = 0; z < x_card; ++z) d.table.push_back(z);
  return d;
}

// m views, one relevant symbol per view: sample with k mismatching views has
// average zero-one loss k/m under the identity rep + identity decoder.
MultiViewSample sample_with_loss(int m, int label, int wrong_views) {
  MultiViewSample s;
  s.label = label;
  for (int j = 0; j < m; ++j) s.views.push_back(j < wrong_views ? 1 - label : label);
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("multiview");

TEST_CASE("sensitivity closed forms") {
  // uniform p_z over its range -> 0
  auto fair = xor_flip_model(2, 0.5);
  auto rep = RepresentationFunction::identity_into_c(2, 2);
  CHECK(sensitivity(fair, rep).c_phi == doctest::Approx(0.0));

  // constant rep -> 0
  auto skew = direct_model({0.75, 0.25});
  CHECK(sensitivity(skew, RepresentationFunction::constant(1, 2)).c_phi ==
        doctest::Approx(0.0));

  // d = 1, two nuisance values with p_z = (0.75, 0.25) -> log 3
  auto s = sensitivity(skew, RepresentationFunction::identity_into_c(1, 2));
  CHECK(s.c_phi == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(s.per_label[0] == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("sensitivity rejects reachable codes with zero probability") {
  // second coordinate value never occurs, so its code is unreached; the swap
  // enumeration still visits it
  auto m = direct_model({1.0, 0.0});
  CHECK_THROWS_WITH_AS(
      sensitivity(m, RepresentationFunction::identity_into_c(1, 2)),
      doctest::Contains("zero probability"), ValidationError);
}

TEST_CASE("typical set: uniform code covers everything") {
  auto model = xor_flip_model(2, 0.5);
  auto rep = RepresentationFunction::identity_into_c(2, 2);
  auto ts = typical_set(model, rep, 1.0, 50, 2);
  CHECK(ts.complement_mass == doctest::Approx(0.0));
  CHECK(ts.members.size() == 2);  // (x=0,z=0), (x=1,z=u_card*? ) pairs
  CHECK(ts.h_z == doctest::Approx(kLog2).epsilon(1e-12));
}

TEST_CASE("typical set: gamma -> 0 grows to full support") {
  auto model = direct_model({0.9, 0.05, 0.05});
  auto rep = RepresentationFunction::identity_into_c(1, 3);
  auto ts = typical_set(model, rep, 1e-6, 100, 1);
  CHECK(ts.members.size() == 3);
  CHECK(ts.complement_mass == doctest::Approx(0.0));
}

TEST_CASE("typical set: membership matches a direct threshold check") {
  auto model = direct_model({0.9, 0.05, 0.05});
  auto rep = RepresentationFunction::identity_into_c(1, 3);
  // swap oracle by hand: worst log-probability gap is log(0.9/0.05)
  double c_phi = std::log(18.0);
  CHECK(sensitivity(model, rep).c_phi == doctest::Approx(c_phi).epsilon(1e-12));
  for (double gamma : {1.0, 5.0, 9.0, 9.9}) {
    auto ts = typical_set(model, rep, gamma, 100, 1);
    // independent threshold evaluation per atom
    double h = 0.0;
    double pz[3] = {0.9, 0.05, 0.05};
    for (double p : pz) h -= p * std::log(p);
    double eps = c_phi * std::sqrt(std::log(std::sqrt(100.0) / gamma) / 2.0);
    std::vector<int> expect;
    double comp = 0.0;
    for (int z = 0; z < 3; ++z) {
      if (-std::log(pz[z]) - h <= eps + 1e-12)
        expect.push_back(z);
      else
        comp += pz[z];
    }
    CHECK(ts.members.size() == expect.size());
    CHECK(ts.complement_mass == doctest::Approx(comp).epsilon(1e-9));
    CHECK(ts.complement_mass <= gamma / 10.0 + 1e-12);
    CHECK(static_cast<double>(ts.distinct_codes) <= std::exp(ts.h_z + ts.epsilon) + 1e-9);
  }
}

TEST_CASE("typical set: vacuous regime rejected") {
  auto model = direct_model({0.9, 0.05, 0.05});
  auto rep = RepresentationFunction::identity_into_c(1, 3);
  CHECK_THROWS_AS(typical_set(model, rep, 11.0, 100, 1), RegimeError);
  CHECK_THROWS_AS(typical_set(model, rep, -1.0, 100, 1), ValidationError);
}

TEST_CASE("typical set: label-collapsing rep violates the unconditional premise") {
  // Nuisance swaps never move the code (c^y = 0 for every y), yet the code
  // distribution varies across labels. The unconditional construction then
  // cannot cover the rare codes and the constructor reports the violation;
  // the label-conditional variant is a theorem and passes.
  GenerativeModel g;
  g.y_card = 2;
  g.p_y = {0.5, 0.5};
  g.m = 1;
  g.d = 1;
  g.coord_card = 2;
  g.p_coord = {0.5, 0.5};
  g.x_card = 3;
  g.theta = {0, 0, 1, 2};  // y=0 -> x=0; y=1 -> x=1 or 2
  auto rep = RepresentationFunction::identity_into_c(1, 3);
  CHECK_THROWS_WITH_AS(typical_set(g, rep, 1.0, 100, 1),
                       doctest::Contains("complement mass"), ValidationError);
  for (int y = 0; y < 2; ++y) {
    auto ts = typical_set(g, rep, 1.0, 100, 1, y);
    CHECK(ts.complement_mass <= ts.mass_bound + 1e-12);
  }
}

TEST_CASE("typical set lemma conclusions across models and reps") {
  SplitMix64 rng(31);
  int checked = 0;
  for (int t = 0; t < 40; ++t) {
    int m = 1 + rng.next_index(3);
    double f = 0.05 + 0.4 * rng.next_double();
    auto model = xor_flip_model(m, f);
    RepresentationFunction rep = (t % 2 == 0)
                                     ? RepresentationFunction::identity_into_c(m, 2)
                                     : RepresentationFunction::constant(m, 2);
    for (double gamma : {0.5, 1.0, 3.0})
      for (int n : {25, 100, 400}) {
        auto ts = typical_set(model, rep, gamma, n, m);  // throws on violation
        CHECK(ts.complement_mass <= ts.mass_bound + 1e-12);
        for (int y = 0; y < 2; ++y) {
          auto tsy = typical_set(model, rep, gamma, n, m, y);
          CHECK(tsy.complement_mass <= tsy.mass_bound + 1e-12);
        }
        ++checked;
      }
  }
  CHECK(checked >= 100);
}

TEST_CASE("generalization gap: exact-frequency dataset has zero gap") {
  auto model = xor_flip_model(2, 0.5);
  auto rep = RepresentationFunction::identity_into_c(2, 2);
  auto dec = identity_cls_decoder(2);
  // enumerate all (y, v1, v2) atoms once each: empirical frequencies match
  // the model exactly
  MultiViewDataset data;
  data.m = 2;
  data.d = 1;
  data.x_card = 2;
  data.y_card = 2;
  for (int y = 0; y < 2; ++y)
    for (int v1 = 0; v1 < 2; ++v1)
      for (int v2 = 0; v2 < 2; ++v2)
        data.samples.push_back({{y ^ v1, y ^ v2}, y});
  auto r = generalization_gap(model, rep, dec, data, Task::classification,
                              LossKind::zero_one);
  CHECK(r.gap == doctest::Approx(0.0));
  CHECK(r.population_exact);
}

TEST_CASE("generalization gap: identity round-trip reconstructs perfectly") {
  auto model = xor_flip_model(2, 0.1);
  auto rep = RepresentationFunction::identity_into_c(2, 2);
  auto psi = identity_rec_decoder(2);
  auto data = sample_dataset(model, 16, 7);
  auto r = generalization_gap(model, rep, psi, data, Task::reconstruction,
                              LossKind::zero_one);
  CHECK(r.empirical == doctest::Approx(0.0));
  CHECK(r.population == doctest::Approx(0.0));
}

TEST_CASE("generalization gap: hand-enumerated two-view toy") {
  // flip 0.25, identity rep, identity decoder; population per view is
  // P(X != Y) = 0.25, so the exact population risk is 0.25.
  auto model = xor_flip_model(2, 0.25);
  auto rep = RepresentationFunction::identity_into_c(2, 2);
  auto dec = identity_cls_decoder(2);
  MultiViewDataset data;
  data.m = 2;
  data.d = 1;
  data.x_card = 2;
  data.y_card = 2;
  // 8 fixed samples, 5 clean pairs + 3 with one flipped view
  for (int i = 0; i < 5; ++i) data.samples.push_back({{0, 0}, 0});
  for (int i = 0; i < 3; ++i) data.samples.push_back({{1, 0}, 0});
  auto r = generalization_gap(model, rep, dec, data, Task::classification,
                              LossKind::zero_one);
  double empirical = (5 * 0.0 + 3 * 0.5) / 8.0;
  CHECK(std::abs(r.empirical - empirical) <= 1e-12);
  CHECK(std::abs(r.population - 0.25) <= 1e-12);
  CHECK(std::abs(r.gap - (0.25 - empirical)) <= 1e-12);

  // population is a property of the model alone
  auto other = sample_dataset(model, 40, 99);
  auto r2 = generalization_gap(model, rep, dec, other, Task::classification,
                               LossKind::zero_one);
  CHECK(r2.population == doctest::Approx(r.population).epsilon(1e-15));

  // task/decoder mismatch
  CHECK_THROWS_AS(generalization_gap(model, rep, identity_rec_decoder(2), data,
                                     Task::classification, LossKind::zero_one),
                  ValidationError);
}

TEST_CASE("delta_loo") {
  int m = 10;
  auto rep = RepresentationFunction::identity_into_c(m, 2);
  auto dec = identity_cls_decoder(2);

  LooPlan plan;
  plan.data.m = m;
  plan.data.d = 1;
  plan.data.x_card = 2;
  plan.data.y_card = 2;

  // all samplewise losses equal -> 0
  for (int i = 0; i < 4; ++i) plan.data.samples.push_back(sample_with_loss(m, 0, 3));
  plan.test_index = 2;
  CHECK(delta_loo(plan, rep, dec, LossKind::zero_one) == doctest::Approx(0.0));

  // loss 1 at the held-out index, 0 elsewhere -> 1
  plan.data.samples.clear();
  plan.data.samples.push_back(sample_with_loss(m, 0, 0));
  plan.data.samples.push_back(sample_with_loss(m, 0, m));
  plan.data.samples.push_back(sample_with_loss(m, 0, 0));
  plan.test_index = 1;
  CHECK(delta_loo(plan, rep, dec, LossKind::zero_one) == doctest::Approx(1.0));

  // losses (0.2, 0.8, 0.5) with the middle one held out -> 0.45
  plan.data.samples = {sample_with_loss(m, 0, 2), sample_with_loss(m, 0, 8),
                       sample_with_loss(m, 0, 5)};
  plan.test_index = 1;
  CHECK(delta_loo(plan, rep, dec, LossKind::zero_one) ==
        doctest::Approx(0.45).epsilon(1e-12));

  // boundedness: |delta_loo| <= (1 + 1/n) R^s
  SplitMix64 rng(32);
  for (int t = 0; t < 50; ++t) {
    plan.data.samples.clear();
    int total = 2 + rng.next_index(8);
    for (int i = 0; i < total; ++i)
      plan.data.samples.push_back(sample_with_loss(m, 0, rng.next_index(m + 1)));
    plan.test_index = rng.next_index(total);
    double rs = 0.0;
    for (const auto& s : plan.data.samples)
      rs = std::max(rs, avg_loss_cls(rep, dec, s, LossKind::zero_one));
    int n = total - 1;
    CHECK(std::abs(delta_loo(plan, rep, dec, LossKind::zero_one)) <=
          (1.0 + 1.0 / n) * rs + 1e-12);
  }

  plan.data.samples = {sample_with_loss(m, 0, 0)};
  plan.test_index = 0;
  CHECK_THROWS_AS(delta_loo(plan, rep, dec, LossKind::zero_one), ValidationError);
}

TEST_CASE("delta_sup") {
  int m = 5;
  auto rep = RepresentationFunction::identity_into_c(m, 2);
  auto dec = identity_cls_decoder(2);

  SupersamplePlan plan;
  plan.m = m;
  plan.d = 1;
  plan.x_card = 2;
  plan.y_card = 2;

  // both sides identical -> 0
  plan.pairs.push_back({sample_with_loss(m, 0, 2), sample_with_loss(m, 0, 2)});
  plan.pairs.push_back({sample_with_loss(m, 0, 4), sample_with_loss(m, 0, 4)});
  plan.split_bits = {0, 1};
  CHECK(delta_sup(plan, rep, dec, LossKind::zero_one) == doctest::Approx(0.0));

  // per-pair loss differences (0.4, -0.2) with bits (0, 1) -> 0.3
  plan.pairs.clear();
  plan.pairs.push_back({sample_with_loss(m, 0, 1), sample_with_loss(m, 0, 3)});
  plan.pairs.push_back({sample_with_loss(m, 0, 2), sample_with_loss(m, 0, 1)});
  plan.split_bits = {0, 1};
  CHECK(delta_sup(plan, rep, dec, LossKind::zero_one) ==
        doctest::Approx(0.3).epsilon(1e-12));
  CHECK(std::abs(delta_sup(plan, rep, dec, LossKind::zero_one) -
                 delta_sup_signed(plan, rep, dec, LossKind::zero_one)) <= 1e-12);

  // antisymmetry under flipping every bit
  SplitMix64 rng(33);
  for (int t = 0; t < 30; ++t) {
    plan.pairs.clear();
    plan.split_bits.clear();
    int n = 1 + rng.next_index(8);
    for (int i = 0; i < n; ++i) {
      plan.pairs.push_back({sample_with_loss(m, 0, rng.next_index(m + 1)),
                            sample_with_loss(m, 0, rng.next_index(m + 1))});
      plan.split_bits.push_back(rng.next_index(2));
    }
    double d1 = delta_sup(plan, rep, dec, LossKind::zero_one);
    CHECK(std::abs(d1 - delta_sup_signed(plan, rep, dec, LossKind::zero_one)) <= 1e-12);
    for (auto& b : plan.split_bits) b = 1 - b;
    CHECK(delta_sup(plan, rep, dec, LossKind::zero_one) == doctest::Approx(-d1));
  }

  // enumeration over every split of a small plan averages to exactly zero
  plan.pairs.clear();
  for (int i = 0; i < 6; ++i)
    plan.pairs.push_back({sample_with_loss(m, 0, (i * 2) % (m + 1)),
                          sample_with_loss(m, 0, (i * 3 + 1) % (m + 1))});
  plan.split_bits.assign(6, 0);
  double total = 0.0;
  for (int u = 0; u < 32; ++u) {  // pair each split with its complement
    for (int i = 0; i < 6; ++i) plan.split_bits[static_cast<std::size_t>(i)] = (u >> i) & 1;
    double a = delta_sup(plan, rep, dec, LossKind::zero_one);
    for (int i = 0; i < 6; ++i)
      plan.split_bits[static_cast<std::size_t>(i)] = 1 - plan.split_bits[static_cast<std::size_t>(i)];
    total += a + delta_sup(plan, rep, dec, LossKind::zero_one);
  }
  CHECK(total == 0.0);

  plan.split_bits.pop_back();
  CHECK_THROWS_AS(delta_sup(plan, rep, dec, LossKind::zero_one), ValidationError);
}

TEST_CASE("loss envelope dominates evaluated losses") {
  SplitMix64 rng(34);
  for (int t = 0; t < 20; ++t) {
    int m = 1 + rng.next_index(3);
    auto model = xor_flip_model(m, 0.1 + 0.3 * rng.next_double());
    auto rep = RepresentationFunction::identity_into_c(m, 2);
    auto psi = identity_rec_decoder(2);
    auto dec = identity_cls_decoder(2);
    auto data = sample_dataset(model, 30, rng.next());
    auto env = loss_envelope(model, rep, psi, dec, data, LossKind::zero_one,
                             LossKind::zero_one);
    CHECK(env.r_s_x <= env.r_x + 1e-12);
    CHECK(env.r_s_xy <= env.r_xy + 1e-12);
    for (const auto& s : data.samples) {
      CHECK(avg_loss_rec(rep, psi, s, LossKind::zero_one) <= env.r_s_x + 1e-12);
      CHECK(avg_loss_cls(rep, dec, s, LossKind::zero_one) <= env.r_s_xy + 1e-12);
    }
  }
}

TEST_CASE("sample_dataset is deterministic in the seed") {
  auto model = xor_flip_model(3, 0.2);
  auto a = sample_dataset(model, 50, 1234);
  auto b = sample_dataset(model, 50, 1234);
  auto c = sample_dataset(model, 50, 1235);
  REQUIRE(a.n() == b.n());
  bool same = true, differ = false;
  for (int i = 0; i < a.n(); ++i) {
    same = same && a.samples[static_cast<std::size_t>(i)].views == b.samples[static_cast<std::size_t>(i)].views &&
           a.samples[static_cast<std::size_t>(i)].label == b.samples[static_cast<std::size_t>(i)].label;
    differ = differ || a.samples[static_cast<std::size_t>(i)].views != c.samples[static_cast<std::size_t>(i)].views;
  }
  CHECK(same);
  CHECK(differ);
}

TEST_CASE("stochastic representation kernels") {
  // stochastic kernel rows must normalize; expected losses average the kernel
  RepresentationFunction r;
  r.m = 1;
  r.x_card = 2;
  r.c_card = 2;
  r.u_card = 1;
  r.stochastic = true;
  r.kernel = {{{0.8, 0.2}, {0.3, 0.7}}};
  r.validate();
  auto dec = identity_cls_decoder(2);
  MultiViewSample s{{0}, 0};
  CHECK(avg_loss_cls(r, dec, s, LossKind::zero_one) == doctest::Approx(0.2));
  r.kernel[0][0] = {0.8, 0.1};
  CHECK_THROWS_AS(r.validate(), ValidationError);
}

TEST_SUITE_END();
