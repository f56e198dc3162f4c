#include "mvgb/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "mvgb/rng.hpp"

namespace mvgb {

namespace {

constexpr double kLn2 = 0.6931471805599453;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

double norm_cdf(double t) { return 0.5 * (1.0 + std::erf(t / std::sqrt(2.0))); }

double sigmoid(double s) { return 1.0 / (1.0 + std::exp(-s)); }

int quantize(double s, int levels) {
  return std::clamp(static_cast<int>(sigmoid(s) * levels), 0, levels - 1);
}

// Trainable per-view encoder plus surrogate heads. Kept flat so the weight
// vector doubles as the quantized-weights fingerprint input.
struct EncoderNet {
  int m, x_card, y_card, c_levels, levels, hidden;
  bool head_reads_unique = false;
  Task objective;
  std::vector<std::vector<double>> wc, wu;        // [m][x_card] (linear mode)
  std::vector<std::vector<double>> w1, w2c, w2u;  // hidden mode
  std::vector<std::vector<double>> cls_head;      // [m][y_card*2]
  std::vector<double> rec_head;                   // [x_card*2], shared
  std::vector<std::vector<std::vector<double>>*> blocks;

  EncoderNet(int m_, int x_card_, int y_card_, const TrainerHyper& h)
      : m(m_), x_card(x_card_), y_card(y_card_),
        c_levels(h.c_levels > 0 ? h.c_levels : h.code_levels), levels(h.code_levels),
        hidden(h.hidden), head_reads_unique(h.label_head_reads_unique),
        objective(h.objective) {
    auto add = [this](std::vector<std::vector<double>>& b, std::size_t len) {
      b.assign(static_cast<std::size_t>(m), std::vector<double>(len, 0.0));
      blocks.push_back(&b);
    };
    if (hidden == 0) {
      add(wc, static_cast<std::size_t>(x_card));
      add(wu, static_cast<std::size_t>(x_card));
    } else {
      add(w1, static_cast<std::size_t>(hidden) * static_cast<std::size_t>(x_card));
      add(w2c, static_cast<std::size_t>(hidden));
      add(w2u, static_cast<std::size_t>(hidden));
    }
    add(cls_head, (head_reads_unique ? 2u : 1u) * static_cast<std::size_t>(y_card));
    rec_head.assign(2 * static_cast<std::size_t>(x_card), 0.0);
  }

  void init(SplitMix64& rng) {
    for (auto* bs : blocks)
      for (auto& b : *bs)
        for (auto& w : b) w = rng.next_double() - 0.5;
    for (auto& w : rec_head) w = rng.next_double() - 0.5;
  }

  struct Scores {
    double s_c = 0, s_u = 0;
    std::vector<double> h;
  };

  Scores forward(int view, int x) const {
    Scores s;
    auto jv = static_cast<std::size_t>(view);
    if (hidden == 0) {
      s.s_c = wc[jv][static_cast<std::size_t>(x)];
      s.s_u = wu[jv][static_cast<std::size_t>(x)];
      return s;
    }
    s.h.resize(static_cast<std::size_t>(hidden));
    for (int k = 0; k < hidden; ++k) {
      auto kk = static_cast<std::size_t>(k);
      s.h[kk] = std::tanh(w1[jv][kk * static_cast<std::size_t>(x_card) + static_cast<std::size_t>(x)]);
      s.s_c += w2c[jv][kk] * s.h[kk];
      s.s_u += w2u[jv][kk] * s.h[kk];
    }
    return s;
  }

  // One SGD step for (view, x, label). The label head reads the consensus
  // score only; the shared reconstruction head reads both scores and trains
  // the unique code. Classification adds the label term on top of the
  // reconstruction term. Returns the surrogate loss.
  double step(int view, int x, int label, double lr) {
    Scores s = forward(view, x);
    auto jv = static_cast<std::size_t>(view);
    double ds_c = 0.0, ds_u = 0.0, loss = 0.0;

    {  // reconstruction term: softmax over view symbols from (s_c, s_u),
       // half-weighted so the two terms share the step budget
      const double w_rec = objective == Task::classification ? 0.5 : 1.0;
      std::vector<double> p(static_cast<std::size_t>(x_card));
      double max_logit = -1e300;
      for (int o = 0; o < x_card; ++o) {
        auto oo = static_cast<std::size_t>(o);
        p[oo] = rec_head[2 * oo] * s.s_c + rec_head[2 * oo + 1] * s.s_u;
        max_logit = std::max(max_logit, p[oo]);
      }
      double z = 0.0;
      for (auto& v : p) z += (v = std::exp(v - max_logit));
      loss += -w_rec * std::log(std::max(p[static_cast<std::size_t>(x)] / z, 1e-300));
      for (int o = 0; o < x_card; ++o) {
        auto oo = static_cast<std::size_t>(o);
        double g = w_rec * (p[oo] / z - (o == x ? 1.0 : 0.0));
        ds_c += g * rec_head[2 * oo];
        ds_u += g * rec_head[2 * oo + 1];
        rec_head[2 * oo] -= lr * g * s.s_c;
        rec_head[2 * oo + 1] -= lr * g * s.s_u;
      }
    }
    if (objective == Task::classification) {  // label term, consensus-led
      std::vector<double>& head = cls_head[jv];
      std::vector<double> p(static_cast<std::size_t>(y_card));
      double max_logit = -1e300;
      for (int o = 0; o < y_card; ++o) {
        auto oo = static_cast<std::size_t>(o);
        p[oo] = head_reads_unique ? head[2 * oo] * s.s_c + head[2 * oo + 1] * s.s_u
                                  : head[oo] * s.s_c;
        max_logit = std::max(max_logit, p[oo]);
      }
      double z = 0.0;
      for (auto& v : p) z += (v = std::exp(v - max_logit));
      loss += -std::log(std::max(p[static_cast<std::size_t>(label)] / z, 1e-300));
      for (int o = 0; o < y_card; ++o) {
        auto oo = static_cast<std::size_t>(o);
        double g = p[oo] / z - (o == label ? 1.0 : 0.0);
        if (head_reads_unique) {
          ds_c += g * head[2 * oo];
          ds_u += g * head[2 * oo + 1];
          head[2 * oo] -= lr * g * s.s_c;
          head[2 * oo + 1] -= lr * g * s.s_u;
        } else {
          ds_c += g * head[oo];
          head[oo] -= lr * g * s.s_c;
        }
      }
    }

    if (hidden == 0) {
      wc[jv][static_cast<std::size_t>(x)] -= lr * ds_c;
      wu[jv][static_cast<std::size_t>(x)] -= lr * ds_u;
    } else {
      for (int k = 0; k < hidden; ++k) {
        auto kk = static_cast<std::size_t>(k);
        double hk = s.h[kk];
        double dh = ds_c * w2c[jv][kk] + ds_u * w2u[jv][kk];
        w2c[jv][kk] -= lr * ds_c * hk;
        w2u[jv][kk] -= lr * ds_u * hk;
        w1[jv][kk * static_cast<std::size_t>(x_card) + static_cast<std::size_t>(x)] -=
            lr * dh * (1.0 - hk * hk);
      }
    }
    return loss;
  }

  void decay(double rate) {
    if (rate <= 0.0) return;
    double keep = 1.0 - rate;
    for (auto* bs : blocks)
      for (auto& b : *bs)
        for (auto& w : b) w *= keep;
    for (auto& w : rec_head) w *= keep;
  }


  RepresentationFunction tabulate() const {
    RepresentationFunction rep;
    rep.m = m;
    rep.x_card = x_card;
    rep.c_card = c_levels;
    rep.u_card = levels;
    rep.c_table.assign(static_cast<std::size_t>(m),
                       std::vector<int>(static_cast<std::size_t>(x_card)));
    rep.u_table = rep.c_table;
    for (int j = 0; j < m; ++j)
      for (int x = 0; x < x_card; ++x) {
        Scores s = forward(j, x);
        rep.c_table[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)] = quantize(s.s_c, c_levels);
        rep.u_table[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)] = quantize(s.s_u, levels);
      }
    return rep;
  }

  std::vector<double> flat_weights() const {
    std::vector<double> out;
    for (const auto* bs : blocks)
      for (const auto& b : *bs) out.insert(out.end(), b.begin(), b.end());
    out.insert(out.end(), rec_head.begin(), rec_head.end());
    return out;
  }
};

// Majority decoders over code cells from the training set; ties and unseen
// cells resolve to the lowest index.
void fit_decoders(const MultiViewDataset& data, const RepresentationFunction& rep,
                  TrainedModel& tm) {
  int cells = rep.code_card();
  std::vector<std::vector<int>> label_count(
      static_cast<std::size_t>(cells), std::vector<int>(static_cast<std::size_t>(data.y_card), 0));
  std::vector<std::vector<int>> symbol_count(
      static_cast<std::size_t>(cells), std::vector<int>(static_cast<std::size_t>(data.x_card), 0));
  for (const auto& s : data.samples)
    for (int j = 0; j < data.m; ++j) {
      int x = s.views[static_cast<std::size_t>(j)];
      int z = rep.code_of(j, x);
      ++label_count[static_cast<std::size_t>(z)][static_cast<std::size_t>(s.label)];
      ++symbol_count[static_cast<std::size_t>(z)][static_cast<std::size_t>(x)];
    }
  auto majority = [](const std::vector<int>& counts) {
    int best = 0;
    for (std::size_t i = 1; i < counts.size(); ++i)
      if (counts[i] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
    return best;
  };
  tm.psi_hat.c_card = rep.c_card;
  tm.psi_hat.u_card = rep.u_card;
  tm.psi_hat.y_card = data.y_card;
  tm.psi.c_card = rep.c_card;
  tm.psi.u_card = rep.u_card;
  tm.psi.x_card = data.x_card;
  for (int z = 0; z < cells; ++z) {
    tm.psi_hat.table.push_back(majority(label_count[static_cast<std::size_t>(z)]));
    tm.psi.table.push_back(majority(symbol_count[static_cast<std::size_t>(z)]));
  }
}

std::vector<double> uniform_prior(int card) {
  return std::vector<double>(static_cast<std::size_t>(card), 1.0 / card);
}

// H(Z) and H(Z|Y) of the full cross-view code tuple; for deterministic reps
// these equal I(X;Z) and I(X;Z|Y). Views are conditionally independent given
// the label, so the tuple law is a label mixture of per-view products.
std::pair<double, double> tuple_code_entropies(const GenerativeModel& model,
                                               const RepresentationFunction& rep) {
  std::size_t cells = 1;
  for (int j = 0; j < model.m; ++j) {
    if (cells > JointDistribution::kMaxCells / static_cast<std::size_t>(rep.code_card()))
      throw ValidationError("code tuple space exceeds the dense cap");
    cells *= static_cast<std::size_t>(rep.code_card());
  }
  std::vector<double> mix(cells, 0.0);
  double h_given_y = 0.0;
  std::size_t vs = model.v_space();
  for (int y = 0; y < model.y_card; ++y) {
    double wy = model.p_y[static_cast<std::size_t>(y)];
    if (wy <= 0.0) continue;
    std::vector<std::vector<double>> per_view;
    for (int j = 0; j < model.m; ++j) {
      std::vector<double> pz(static_cast<std::size_t>(rep.code_card()), 0.0);
      for (std::size_t v = 0; v < vs; ++v) {
        double w = model.v_prob(v);
        if (w > 0.0) pz[static_cast<std::size_t>(rep.code_of(j, model.view_symbol(y, v)))] += w;
      }
      h_given_y += wy * entropy_of_probs(pz);
      per_view.push_back(std::move(pz));
    }
    for (std::size_t t = 0; t < cells; ++t) {
      double p = wy;
      std::size_t rest = t;
      for (int j = model.m - 1; j >= 0 && p > 0.0; --j) {
        p *= per_view[static_cast<std::size_t>(j)][rest % static_cast<std::size_t>(rep.code_card())];
        rest /= static_cast<std::size_t>(rep.code_card());
      }
      mix[t] += p;
    }
  }
  return {entropy_of_probs(mix), h_given_y};
}

struct CellBounds {
  BoundBreakdown t1, t3;
  std::optional<BoundBreakdown> t7;
  double beta = 0.0;
};

CellBounds evaluate_cell_bounds(const ExperimentConfig& cfg, const InfoProfile& profile,
                                const LossEnvelope& env, int n, int m,
                                double empirical_cls) {
  BoundParams p;
  p.n = n;
  p.m = m;
  p.d = cfg.generator.d;
  p.gamma = cfg.gamma;
  p.delta = cfg.delta;
  p.lambda = cfg.lambda;
  double r_att = std::max(env.r_xy, 1e-9);
  p.beta = cfg.beta_scale * kLn2 / (2.0 * r_att);
  p.empirical_risk = empirical_cls;
  CellBounds out;
  out.beta = p.beta;
  out.t1 = evaluate_bound(1, profile, env, p);
  out.t3 = evaluate_bound(3, profile, env, p);
  if (empirical_cls <= 1e-12) out.t7 = evaluate_bound(7, profile, env, p);
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

GenerativeModel build_generator(const GeneratorSpec& spec) {
  GenerativeModel g;
  g.y_card = spec.y_card;
  g.m = spec.m;
  g.d = spec.d;
  g.p_y = spec.p_y.empty() ? uniform_prior(spec.y_card) : spec.p_y;
  if (spec.y_card < 1 || spec.y_card > 4)
    throw ValidationError("generator label space must have 1..4 classes");
  if (spec.d < 1 || spec.d > 4)
    throw ValidationError("generator supports 1..4 nuisance coordinates per view");
  if (spec.m < 1) throw ValidationError("generator needs m >= 1");

  if (spec.mode == GeneratorSpec::Mode::discrete_exact) {
    if (spec.x_card < 2 || spec.x_card > 16)
      throw ValidationError("discrete generator view alphabet must have 2..16 symbols");
    if (spec.coord_card < 2 || spec.coord_card > 16)
      throw ValidationError("coordinate alphabet must have 2..16 symbols");
    if (!(spec.flip_prob >= 0.0 && spec.flip_prob <= 1.0))
      throw ValidationError("flip probability must lie in [0,1]");
    g.coord_card = spec.coord_card;
    g.x_card = spec.x_card;
    g.p_coord.assign(static_cast<std::size_t>(spec.coord_card),
                     spec.coord_card > 1 ? spec.flip_prob / (spec.coord_card - 1) : 0.0);
    g.p_coord[0] = 1.0 - spec.flip_prob;
    std::size_t vs = g.v_space();
    for (int y = 0; y < g.y_card; ++y)
      for (std::size_t v = 0; v < vs; ++v) {
        std::size_t rest = v;
        int sum = 0;
        for (int i = 0; i < g.d; ++i) {
          sum += static_cast<int>(rest % static_cast<std::size_t>(g.coord_card));
          rest /= static_cast<std::size_t>(g.coord_card);
        }
        g.theta.push_back((spec.class_stride * y + sum) % g.x_card);
      }
    g.validate();
    return g;
  }

  if (spec.mode == GeneratorSpec::Mode::signal_noise) {
    // v = 0 emits the class symbol; v >= 1 emits a label-independent noise
    // symbol. Keeps label information identical across representations that
    // resolve the signal, while noise-symbol granularity stays free.
    if (spec.d != 1) throw ValidationError("signal-noise generator uses d = 1");
    if (spec.coord_card < 2 || spec.coord_card > 16)
      throw ValidationError("coordinate alphabet must have 2..16 symbols");
    if (!(spec.flip_prob >= 0.0 && spec.flip_prob <= 1.0))
      throw ValidationError("flip probability must lie in [0,1]");
    g.coord_card = spec.coord_card;
    g.x_card = spec.y_card + spec.coord_card - 1;
    if (g.x_card > 16)
      throw ValidationError("signal-noise view alphabet exceeds 16 symbols");
    g.p_coord.assign(static_cast<std::size_t>(spec.coord_card),
                     spec.flip_prob / (spec.coord_card - 1));
    g.p_coord[0] = 1.0 - spec.flip_prob;
    for (int y = 0; y < g.y_card; ++y)
      for (int v = 0; v < g.coord_card; ++v)
        g.theta.push_back(v == 0 ? y : g.y_card + (v - 1));
    g.validate();
    return g;
  }

  // gaussian_mixture: quantize the standard-normal nuisance onto coord_card
  // equal-width bins over [-4, 4] (tails folded into the edge bins), then
  // shift by the class offset measured in bins.
  if (spec.d != 1) throw ValidationError("gaussian generator uses d = 1");
  if (spec.coord_card < 2 || spec.coord_card > 16)
    throw ValidationError("coordinate alphabet must have 2..16 symbols");
  g.coord_card = spec.coord_card;
  double bin_width = 8.0 / spec.coord_card;
  for (int b = 0; b < spec.coord_card; ++b) {
    double lo = b == 0 ? -1e9 : -4.0 + b * bin_width;
    double hi = b == spec.coord_card - 1 ? 1e9 : -4.0 + (b + 1) * bin_width;
    g.p_coord.push_back(norm_cdf(hi) - norm_cdf(lo));
  }
  int shift = std::max(1, static_cast<int>(std::lround(spec.gauss_sep / bin_width)));
  g.x_card = spec.coord_card + shift * (spec.y_card - 1);
  if (g.x_card > 16)
    throw ValidationError("gaussian generator view alphabet exceeds 16 symbols; "
                          "reduce bins or class separation");
  for (int y = 0; y < g.y_card; ++y)
    for (int v = 0; v < g.coord_card; ++v) g.theta.push_back(v + shift * y);
  g.validate();
  return g;
}

std::pair<GenerativeModel, MultiViewDataset> generate_synthetic(const GeneratorSpec& spec,
                                                                int n, std::uint64_t seed) {
  GenerativeModel model = build_generator(spec);
  return {model, sample_dataset(model, n, seed)};
}

TrainedModel train_model(const MultiViewDataset& data, const TrainerHyper& hyper,
                         std::uint64_t seed) {
  data.validate();
  if (data.n() == 0) throw ValidationError("cannot train on an empty dataset");
  if (hyper.code_levels < 1) throw ValidationError("code_levels must be >= 1");
  if (hyper.epochs < 0) throw ValidationError("epochs must be >= 0");

  EncoderNet net(data.m, data.x_card, data.y_card, hyper);
  SplitMix64 rng(seed);
  net.init(rng);

  std::vector<int> order(static_cast<std::size_t>(data.n()));
  for (int i = 0; i < data.n(); ++i) order[static_cast<std::size_t>(i)] = i;

  double epoch_loss = 0.0;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    double decay_rate = hyper.weight_decay;
    if (hyper.penalty_weight > 0.0) {
      InfoProfile cur = estimate_info_profile(data, net.tabulate(), nullptr, 0.0, 0.1);
      decay_rate += hyper.penalty_weight * hyper.penalty_scale * cur.cmi_sum;
    }
    rng.shuffle(order);
    epoch_loss = 0.0;
    for (int idx : order) {
      const auto& s = data.samples[static_cast<std::size_t>(idx)];
      for (int j = 0; j < data.m; ++j)
        epoch_loss += net.step(j, s.views[static_cast<std::size_t>(j)], s.label, hyper.lr);
      net.decay(hyper.lr * decay_rate / data.n());
    }
    epoch_loss /= static_cast<double>(data.n()) * data.m;
    if (!std::isfinite(epoch_loss)) {
      std::ostringstream os;
      os << "non-finite training loss at epoch " << epoch;
      throw ValidationError(os.str());
    }
  }

  TrainedModel tm;
  tm.rep = net.tabulate();
  fit_decoders(data, tm.rep, tm);
  tm.raw_weights = net.flat_weights();
  tm.param_count = static_cast<int>(tm.raw_weights.size());
  double sq = 0.0;
  for (double w : tm.raw_weights) sq += w * w;
  tm.weight_fnorm = std::sqrt(sq);
  tm.final_surrogate_loss = epoch_loss;
  return tm;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ValidationError("pearson needs equal-length inputs");
  if (xs.size() < 2) throw ValidationError("pearson needs at least 2 points");
  double mx = mean_of(xs), my = mean_of(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw ValidationError("pearson undefined: an input has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::pair<double, double> fit_slope(const std::vector<double>& x,
                                    const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ValidationError("slope fit needs matched inputs with >= 2 points");
  double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx <= 0.0) throw ValidationError("slope fit undefined: x has zero variance");
  double slope = sxy / sxx;
  double intercept = my - slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (intercept + slope * x[i]);
    rss += r * r;
  }
  double se = x.size() > 2 ? std::sqrt(rss / (static_cast<double>(x.size()) - 2.0) / sxx) : 0.0;
  return {slope, se};
}

StudyReport run_bound_validation(const ExperimentConfig& cfg) {
  if (cfg.replicates < 1) throw ValidationError("replicate count must be >= 1");
  StudyReport report;
  report.kind = "validate";
  report.columns = {"cell", "n", "m", "replicate", "seed_lo", "interpolating",
                    "gap_rec", "gap_cls", "empirical_rec", "population_rec",
                    "empirical_cls", "population_cls", "delta_loo", "delta_sup",
                    "bound_t1", "bound_t3", "bound_t7", "k1", "k2", "k3",
                    "kt1", "kt2", "kt3", "khat", "xi", "beta",
                    "h_c", "h_u_sum", "mi_common_sum", "mi_unique_sum", "mi_code_sum",
                    "cmi_sum", "renyi_phi", "h_c_given_x", "h_u_given_x_sum",
                    "h_z_given_x1_y", "c_phi", "y_card", "r_x", "r_xy", "r_s_x", "r_s_xy"};

  int cell_index = 0;
  for (int n : cfg.n_grid)
    for (int m : cfg.m_grid) {
      GeneratorSpec gspec = cfg.generator;
      gspec.m = m;
      GenerativeModel model = build_generator(gspec);
      int covered_t1 = 0, covered_t3 = 0, covered_t7 = 0, interpolating_count = 0;
      for (int r = 0; r < cfg.replicates; ++r) {
        std::uint64_t rep_stream =
            derive_stream(cfg.master_seed, static_cast<std::uint64_t>(cell_index) * 1000003ULL +
                                               static_cast<std::uint64_t>(r));
        MultiViewDataset data = sample_dataset(model, n, rep_stream);
        TrainedModel tm = train_model(data, cfg.trainer, derive_stream(rep_stream, 1));

        InfoProfile profile = estimate_info_profile(data, tm.rep, &model, 0.0, cfg.lambda);
        LossEnvelope env = loss_envelope(model, tm.rep, tm.psi, tm.psi_hat, data,
                                         LossKind::zero_one, LossKind::zero_one);
        GapResult rec = generalization_gap(model, tm.rep, tm.psi, data,
                                           Task::reconstruction, LossKind::zero_one);
        GapResult cls = generalization_gap(model, tm.rep, tm.psi_hat, data,
                                           Task::classification, LossKind::zero_one);
        CellBounds bounds = evaluate_cell_bounds(cfg, profile, env, n, m, cls.empirical);

        // leave-one-out replicate: fresh n+1 draw, honest retrain on the rest
        LooPlan loo;
        loo.data = sample_dataset(model, n + 1, derive_stream(rep_stream, 2));
        loo.test_index =
            static_cast<int>(derive_stream(rep_stream, 3) % static_cast<std::uint64_t>(n + 1));
        MultiViewDataset loo_train = loo.data;
        loo_train.samples.erase(loo_train.samples.begin() + loo.test_index);
        TrainedModel loo_tm = train_model(loo_train, cfg.trainer, derive_stream(rep_stream, 4));
        double dloo = delta_loo(loo, loo_tm.rep, loo_tm.psi_hat, LossKind::zero_one);

        // supersample replicate: pair the dataset with fresh partners
        SupersamplePlan sup;
        sup.m = m;
        sup.d = model.d;
        sup.x_card = model.x_card;
        sup.y_card = model.y_card;
        MultiViewDataset partners = sample_dataset(model, n, derive_stream(rep_stream, 5));
        SplitMix64 bit_rng(derive_stream(rep_stream, 6));
        MultiViewDataset sup_train = data;
        sup_train.samples.clear();
        for (int i = 0; i < n; ++i) {
          sup.pairs.push_back({data.samples[static_cast<std::size_t>(i)],
                               partners.samples[static_cast<std::size_t>(i)]});
          int b = bit_rng.next_index(2);
          sup.split_bits.push_back(b);
          sup_train.samples.push_back(sup.pairs.back()[static_cast<std::size_t>(b)]);
        }
        TrainedModel sup_tm = train_model(sup_train, cfg.trainer, derive_stream(rep_stream, 7));
        double dsup = delta_sup(sup, sup_tm.rep, sup_tm.psi_hat, LossKind::zero_one);

        bool interpolating = cls.empirical <= 1e-12;
        if (interpolating) ++interpolating_count;
        if (rec.gap <= bounds.t1.bound + 1e-12) ++covered_t1;
        if (cls.gap <= bounds.t3.bound + 1e-12) ++covered_t3;
        if (interpolating && bounds.t7 && cls.gap <= bounds.t7->bound + 1e-12) ++covered_t7;

        auto constant = [](const BoundBreakdown& b, int i) {
          return b.constants[static_cast<std::size_t>(i)].second;
        };
        report.rows.push_back(
            {static_cast<double>(cell_index), static_cast<double>(n), static_cast<double>(m),
             static_cast<double>(r), static_cast<double>(rep_stream & 0xFFFFFFFFULL),
             interpolating ? 1.0 : 0.0, rec.gap, cls.gap, rec.empirical, rec.population,
             cls.empirical, cls.population, dloo, dsup, bounds.t1.bound, bounds.t3.bound,
             bounds.t7 ? bounds.t7->bound : kNaN, constant(bounds.t1, 0), constant(bounds.t1, 1),
             constant(bounds.t1, 2), constant(bounds.t3, 0), constant(bounds.t3, 1),
             constant(bounds.t3, 2), bounds.t7 ? constant(*bounds.t7, 0) : kNaN,
             bounds.t7 ? constant(*bounds.t7, 1) : kNaN, bounds.beta, profile.h_c,
             profile.h_u_sum, profile.mi_common_sum, profile.mi_unique_sum, profile.mi_code_sum,
             profile.cmi_sum, profile.renyi_phi, profile.h_c_given_x, profile.h_u_given_x_sum,
             profile.h_z_given_x1_y, profile.c_phi, static_cast<double>(profile.y_card),
             env.r_x, env.r_xy, env.r_s_x, env.r_s_xy});
      }
      std::ostringstream cell;
      cell << "n" << n << "/m" << m;
      double reps = cfg.replicates;
      report.coverage.emplace_back("t1/" + cell.str(), covered_t1 / reps);
      report.coverage.emplace_back("t3/" + cell.str(), covered_t3 / reps);
      report.coverage.emplace_back(
          "t7/" + cell.str(),
          interpolating_count > 0 ? covered_t7 / static_cast<double>(interpolating_count) : kNaN);
      report.coverage.emplace_back("t7_interpolating_fraction/" + cell.str(),
                                   interpolating_count / reps);
      ++cell_index;
    }
  return report;
}

StudyReport run_correlation_study(const ExperimentConfig& cfg) {
  StudyReport report;
  report.kind = "correlate";
  report.columns = {"combo", "width", "penalty", "decay", "draw", "seed", "gap",
                    "num_params", "weight_fnorm", "mi_code_avg", "cmi_avg",
                    "mi_phi_s", "mi_xz", "cmi_xz_y"};

  GenerativeModel model = build_generator(cfg.generator);
  ModelFingerprint fp = make_prediction_fingerprint(model, cfg.probe_count,
                                                    derive_stream(cfg.master_seed, 0xF1));

  std::vector<double> gap_col;
  std::map<std::string, std::vector<double>> metric;
  const std::vector<std::string> metric_names = {"num_params",
                                                 "weight_fnorm",
                                                 "mi_code_avg",
                                                 "cmi_avg",
                                                 "mi_phi_s",
                                                 "mi_phi_s_plus_mi_xz",
                                                 "mi_phi_s_plus_cmi_xz_y",
                                                 "mi_phi_s_plus_mi_code_avg",
                                                 "mi_phi_s_plus_cmi_avg"};

  int combo = 0;
  for (int width : cfg.width_grid)
    for (double penalty : cfg.penalty_grid)
      for (double decay : cfg.decay_grid) {
        TrainerHyper hyper = cfg.trainer;
        hyper.code_levels = width;
        hyper.hidden = width * width / 2;  // parameter count grows superlinearly
        hyper.penalty_weight = penalty;
        hyper.weight_decay = decay;

        Trainer trainer = [&hyper](const MultiViewDataset& d, std::uint64_t s) {
          return train_model(d, hyper, s);
        };
        double mi_phi_s =
            estimate_model_information(
                trainer, model, cfg.corr_n, InfoSetting::full, cfg.phi_replicates, fp, 0.0,
                cfg.lambda, derive_stream(cfg.master_seed, 0xA0 + static_cast<std::uint64_t>(combo)))
                .mi;

        for (int draw = 0; draw < cfg.corr_draws; ++draw) {
          MultiViewDataset data = sample_dataset(
              model, cfg.corr_n,
              derive_stream(cfg.master_seed, 0xD000 + static_cast<std::uint64_t>(
                                                          combo * cfg.corr_draws + draw)));
          for (int s = 0; s < cfg.corr_seeds; ++s) {
            TrainedModel tm = train_model(
                data, hyper,
                derive_stream(cfg.master_seed,
                              0xE0000 + static_cast<std::uint64_t>(
                                            (combo * cfg.corr_draws + draw) * cfg.corr_seeds + s)));
            GapResult cls = generalization_gap(model, tm.rep, tm.psi_hat, data,
                                               Task::classification, LossKind::zero_one);
            InfoProfile profile = estimate_info_profile(data, tm.rep, &model, 0.0, cfg.lambda);
            auto [h_z, h_z_given_y] = tuple_code_entropies(model, tm.rep);

            double mi_code_avg = profile.mi_code_sum / model.m;
            double cmi_avg = profile.cmi_sum / model.m;
            gap_col.push_back(cls.gap);
            metric["num_params"].push_back(tm.param_count);
            metric["weight_fnorm"].push_back(tm.weight_fnorm);
            metric["mi_code_avg"].push_back(mi_code_avg);
            metric["cmi_avg"].push_back(cmi_avg);
            metric["mi_phi_s"].push_back(mi_phi_s);
            metric["mi_phi_s_plus_mi_xz"].push_back(mi_phi_s + h_z);
            metric["mi_phi_s_plus_cmi_xz_y"].push_back(mi_phi_s + h_z_given_y);
            metric["mi_phi_s_plus_mi_code_avg"].push_back(mi_phi_s + mi_code_avg);
            metric["mi_phi_s_plus_cmi_avg"].push_back(mi_phi_s + cmi_avg);

            report.rows.push_back({static_cast<double>(combo), static_cast<double>(width),
                                   penalty, decay, static_cast<double>(draw),
                                   static_cast<double>(s), cls.gap,
                                   static_cast<double>(tm.param_count), tm.weight_fnorm,
                                   mi_code_avg, cmi_avg, mi_phi_s, h_z, h_z_given_y});
          }
        }
        ++combo;
      }

  for (const auto& name : metric_names) {
    double corr = kNaN;
    try {
      corr = pearson(metric[name], gap_col);
    } catch (const ValidationError&) {
      // zero-variance metric: correlation undefined, reported as NaN
    }
    report.pearson_table.emplace_back(name, corr);
  }
  return report;
}

StudyReport run_scaling_study(const ExperimentConfig& cfg) {
  if (cfg.n_grid.size() < 4)
    throw ValidationError("scaling study needs at least 4 grid points");
  double n_min = *std::min_element(cfg.n_grid.begin(), cfg.n_grid.end());
  double n_max = *std::max_element(cfg.n_grid.begin(), cfg.n_grid.end());
  if (n_max / n_min < 10.0)
    throw ValidationError("scaling study grid must span at least one decade");

  StudyReport report;
  report.kind = "scale";
  report.columns = {"n", "m", "mean_abs_gap", "bound_t1_main", "bound_t3_main", "bound_t7"};

  // analytic slopes on a frozen profile (c_phi = 0 keeps the radicand fixed)
  InfoProfile frozen;
  frozen.h_c = kLn2;
  frozen.h_u_sum = kLn2;
  frozen.mi_common_sum = kLn2;
  frozen.mi_unique_sum = 0.2;
  frozen.cmi_sum = 0.4;
  frozen.renyi_phi = 0.3;
  frozen.h_z_given_x1_y = 0.2;
  frozen.c_phi = 0.0;
  frozen.y_card = cfg.generator.y_card;
  LossEnvelope unit{1.0, 1.0, 1.0, 1.0};

  int m0 = cfg.m_grid.empty() ? 2 : cfg.m_grid.front();
  std::vector<double> log_nm;
  std::map<int, std::vector<double>> log_term;
  for (int n : cfg.n_grid) {
    BoundParams p;
    p.n = n;
    p.m = m0;
    p.d = cfg.generator.d;
    p.gamma = cfg.gamma;
    p.delta = cfg.delta;
    p.lambda = cfg.lambda;
    p.beta = cfg.beta_scale * kLn2 / 2.0;
    log_nm.push_back(std::log(static_cast<double>(n) * m0));
    for (int theorem : {1, 2, 3, 4})
      log_term[theorem].push_back(std::log(evaluate_bound(theorem, frozen, unit, p).main_term));
    log_term[7].push_back(std::log(evaluate_bound(7, frozen, unit, p).bound));
  }
  for (int theorem : {1, 2, 3, 4, 7}) {
    auto [slope, se] = fit_slope(log_nm, log_term[theorem]);
    report.slopes.emplace_back("bound_t" + std::to_string(theorem) + "_slope", slope);
    report.slopes.emplace_back("bound_t" + std::to_string(theorem) + "_se", se);
  }

  // measured mean |gap| across replicates
  GeneratorSpec gspec = cfg.generator;
  gspec.m = m0;
  GenerativeModel model = build_generator(gspec);
  std::vector<double> log_gap;
  std::vector<std::pair<double, double>> gap_series;
  int cell = 0;
  for (int n : cfg.n_grid) {
    std::vector<double> gaps;
    for (int r = 0; r < cfg.replicates; ++r) {
      std::uint64_t stream =
          derive_stream(cfg.master_seed, 0x5CA1E + static_cast<std::uint64_t>(cell) * 1000003ULL +
                                             static_cast<std::uint64_t>(r));
      MultiViewDataset data = sample_dataset(model, n, stream);
      TrainedModel tm = train_model(data, cfg.trainer, derive_stream(stream, 1));
      GapResult cls = generalization_gap(model, tm.rep, tm.psi_hat, data,
                                         Task::classification, LossKind::zero_one);
      gaps.push_back(std::abs(cls.gap));
    }
    double mean_gap = mean_of(gaps);
    log_gap.push_back(std::log(std::max(mean_gap, 1e-12)));
    gap_series.emplace_back(static_cast<double>(n) * m0, mean_gap);

    BoundParams p;
    p.n = n;
    p.m = m0;
    p.d = cfg.generator.d;
    p.gamma = cfg.gamma;
    p.delta = cfg.delta;
    p.lambda = cfg.lambda;
    p.beta = cfg.beta_scale * kLn2 / 2.0;
    report.rows.push_back({static_cast<double>(n), static_cast<double>(m0), mean_gap,
                           evaluate_bound(1, frozen, unit, p).main_term,
                           evaluate_bound(3, frozen, unit, p).main_term,
                           evaluate_bound(7, frozen, unit, p).bound});
    ++cell;
  }
  auto [gap_slope, gap_se] = fit_slope(log_nm, log_gap);
  report.slopes.emplace_back("measured_gap_slope", gap_slope);
  report.slopes.emplace_back("measured_gap_se", gap_se);
  report.plot_series.emplace_back("mean_abs_gap_vs_nm", gap_series);
  return report;
}

}  // namespace mvgb
