#include "mvgb/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "mvgb/rng.hpp"

namespace mvgb {

namespace {

// Entropy of a sparse nonnegative weight map, normalized by its total.
template <typename Map>
double sparse_entropy(const Map& weights) {
  double total = 0.0;
  for (const auto& [k, w] : weights) total += w;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (const auto& [k, w] : weights)
    if (w > 0.0) h -= (w / total) * std::log(w / total);
  return std::max(h, 0.0);
}

// Dense per-view joint over (X^j, C, U, Y) induced by the model, exactly.
JointDistribution induced_view_joint(const GenerativeModel& model,
                                     const RepresentationFunction& rep, int view) {
  std::vector<Alphabet> axes = {{"x", model.x_card},
                                {"c", rep.c_card},
                                {"u", rep.u_card},
                                {"y", model.y_card}};
  std::vector<double> probs(
      static_cast<std::size_t>(model.x_card) * static_cast<std::size_t>(rep.c_card) *
          static_cast<std::size_t>(rep.u_card) * static_cast<std::size_t>(model.y_card),
      0.0);
  auto at = [&](int x, int c, int u, int y) -> double& {
    return probs[((static_cast<std::size_t>(x) * static_cast<std::size_t>(rep.c_card) +
                   static_cast<std::size_t>(c)) *
                      static_cast<std::size_t>(rep.u_card) +
                  static_cast<std::size_t>(u)) *
                     static_cast<std::size_t>(model.y_card) +
                 static_cast<std::size_t>(y)];
  };
  std::size_t vs = model.v_space();
  for (int y = 0; y < model.y_card; ++y) {
    double wy = model.p_y[static_cast<std::size_t>(y)];
    if (wy <= 0.0) continue;
    for (std::size_t v = 0; v < vs; ++v) {
      double w = wy * model.v_prob(v);
      if (w <= 0.0) continue;
      int x = model.view_symbol(y, v);
      if (!rep.stochastic) {
        at(x, rep.c_table[static_cast<std::size_t>(view)][static_cast<std::size_t>(x)],
           rep.u_table[static_cast<std::size_t>(view)][static_cast<std::size_t>(x)], y) += w;
      } else {
        const auto& row = rep.kernel[static_cast<std::size_t>(view)][static_cast<std::size_t>(x)];
        for (int c = 0; c < rep.c_card; ++c)
          for (int u = 0; u < rep.u_card; ++u) {
            double kw = row[static_cast<std::size_t>(c * rep.u_card + u)];
            if (kw > 0.0) at(x, c, u, y) += w * kw;
          }
      }
    }
  }
  return JointDistribution(std::move(axes), std::move(probs), true);
}

// Dense per-view joint over (X^j, C, U, Y) counted from the dataset.
JointDistribution empirical_view_joint(const MultiViewDataset& data,
                                       const RepresentationFunction& rep, int view,
                                       double smoothing) {
  std::vector<Alphabet> axes = {{"x", data.x_card},
                                {"c", rep.c_card},
                                {"u", rep.u_card},
                                {"y", data.y_card}};
  std::vector<double> w(
      static_cast<std::size_t>(data.x_card) * static_cast<std::size_t>(rep.c_card) *
          static_cast<std::size_t>(rep.u_card) * static_cast<std::size_t>(data.y_card),
      smoothing);
  auto at = [&](int x, int c, int u, int y) -> double& {
    return w[((static_cast<std::size_t>(x) * static_cast<std::size_t>(rep.c_card) +
               static_cast<std::size_t>(c)) *
                  static_cast<std::size_t>(rep.u_card) +
              static_cast<std::size_t>(u)) *
                 static_cast<std::size_t>(data.y_card) +
             static_cast<std::size_t>(y)];
  };
  for (const auto& s : data.samples) {
    int x = s.views[static_cast<std::size_t>(view)];
    at(x, rep.c_table[static_cast<std::size_t>(view)][static_cast<std::size_t>(x)],
       rep.u_table[static_cast<std::size_t>(view)][static_cast<std::size_t>(x)], s.label) += 1.0;
  }
  return JointDistribution(std::move(axes), std::move(w), true);
}

// Per-view, per-label code distribution (c*u_card+u), exact.
std::vector<double> view_code_given_y(const GenerativeModel& model,
                                      const RepresentationFunction& rep, int view, int y) {
  std::vector<double> p(static_cast<std::size_t>(rep.code_card()), 0.0);
  std::size_t vs = model.v_space();
  for (std::size_t v = 0; v < vs; ++v) {
    double w = model.v_prob(v);
    if (w <= 0.0) continue;
    int x = model.view_symbol(y, v);
    if (!rep.stochastic) {
      p[static_cast<std::size_t>(rep.code_of(view, x))] += w;
    } else {
      const auto& row = rep.kernel[static_cast<std::size_t>(view)][static_cast<std::size_t>(x)];
      for (int z = 0; z < rep.code_card(); ++z)
        p[static_cast<std::size_t>(z)] += w * row[static_cast<std::size_t>(z)];
    }
  }
  return p;
}

// Per-view, per-label common-part distribution.
std::vector<double> view_c_given_y(const GenerativeModel& model,
                                   const RepresentationFunction& rep, int view, int y) {
  std::vector<double> code = view_code_given_y(model, rep, view, y);
  std::vector<double> p(static_cast<std::size_t>(rep.c_card), 0.0);
  for (int z = 0; z < rep.code_card(); ++z)
    p[static_cast<std::size_t>(z / rep.u_card)] += code[static_cast<std::size_t>(z)];
  return p;
}

std::string dataset_symbol(const MultiViewDataset& data) {
  std::ostringstream os;
  for (const auto& s : data.samples) {
    for (int v : s.views) os << v << ',';
    os << s.label << ';';
  }
  return os.str();
}

}  // namespace

BinnedColumns bin_columns(const std::vector<std::vector<double>>& columns,
                          const BinningSpec& spec) {
  if (spec.bins_per_dim < 2) throw ValidationError("binning needs >= 2 bins per dimension");
  BinnedColumns out;
  for (const auto& col : columns) {
    if (col.empty()) throw ValidationError("cannot bin an empty column");
    double lo = col[0], hi = col[0];
    for (double v : col) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    lo -= 1e-12;
    hi += 1e-12;
    double width = (hi - lo) / spec.bins_per_dim;
    std::vector<int> sym;
    sym.reserve(col.size());
    for (double v : col)
      sym.push_back(std::clamp(static_cast<int>((v - lo) / width), 0, spec.bins_per_dim - 1));
    out.symbols.push_back(std::move(sym));
    out.ranges.emplace_back(lo, hi);
  }
  return out;
}

JointDistribution empirical_joint(const std::vector<std::vector<int>>& samples,
                                  const std::vector<Alphabet>& axes, double smoothing) {
  if (samples.empty()) throw ValidationError("empirical_joint needs samples");
  if (smoothing < 0.0) throw ValidationError("smoothing must be >= 0");
  std::size_t cells = 1;
  for (const auto& a : axes) {
    if (a.size < 1) throw ValidationError("axis '" + a.name + "' has size < 1");
    if (cells > JointDistribution::kMaxCells / static_cast<std::size_t>(a.size))
      throw ValidationError("axes define an oversized product space");
    cells *= static_cast<std::size_t>(a.size);
  }
  std::vector<double> w(cells, smoothing);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.size() != axes.size()) {
      std::ostringstream os;
      os << "sample " << i << " has " << s.size() << " coordinates, expected " << axes.size();
      throw ValidationError(os.str());
    }
    std::size_t cell = 0;
    for (std::size_t k = 0; k < axes.size(); ++k) {
      if (s[k] < 0 || s[k] >= axes[k].size) {
        std::ostringstream os;
        os << "sample " << i << ": symbol " << s[k] << " outside axis '" << axes[k].name
           << "' of size " << axes[k].size;
        throw ValidationError(os.str());
      }
      cell = cell * static_cast<std::size_t>(axes[k].size) + static_cast<std::size_t>(s[k]);
    }
    w[cell] += 1.0;
  }
  return JointDistribution(axes, std::move(w), true);
}

double hypothesis_renyi(const HypothesisSpace& space, double lambda) {
  space.validate();
  if (!(lambda > 0.0 && lambda < 1.0))
    throw ValidationError("hypothesis Renyi order needs lambda in (0,1)");
  if (space.members.size() == 1) return 0.0;
  JointDistribution d({{"phi", static_cast<int>(space.prior.size())}}, space.prior, true);
  return renyi_entropy(d, {"phi"}, 1.0 - lambda);
}

InfoProfile estimate_info_profile(const MultiViewDataset& data,
                                  const RepresentationFunction& rep,
                                  const GenerativeModel* model, double smoothing,
                                  double lambda, const HypothesisSpace* space) {
  rep.validate();
  InfoProfile out;
  out.y_card = model ? model->y_card : data.y_card;
  if (space) {
    if (!(lambda > 0.0 && lambda < 1.0))
      throw ValidationError(
          "lambda must be set in (0,1) when a stochastic hypothesis space is supplied");
    out.renyi_phi = hypothesis_renyi(*space, lambda);
  }

  const std::vector<std::string> x_ax = {"x"}, c_ax = {"c"}, u_ax = {"u"}, y_ax = {"y"};
  const std::vector<std::string> cu_ax = {"c", "u"};

  if (model) {
    model->validate();
    if (rep.m != model->m || rep.x_card != model->x_card)
      throw ValidationError("representation does not match the model");
    for (int j = 0; j < model->m; ++j) {
      JointDistribution vj = induced_view_joint(*model, rep, j);
      out.cmi_sum += conditional_mutual_information(vj, x_ax, cu_ax, y_ax);
      out.mi_common_sum += mutual_information(vj, x_ax, c_ax);
      out.mi_unique_sum += mutual_information(vj, x_ax, u_ax);
      out.mi_code_sum += mutual_information(vj, x_ax, cu_ax);
      out.h_u_sum += entropy(vj, u_ax);
      out.h_u_given_x_sum += conditional_entropy(vj, u_ax, x_ax);
    }

    // H(C): views are conditionally independent given the label, so the
    // common-part tuple law is a label mixture of per-view products.
    std::size_t c_tuple_cells = 1;
    for (int j = 0; j < model->m; ++j) {
      if (c_tuple_cells > JointDistribution::kMaxCells / static_cast<std::size_t>(rep.c_card))
        throw ValidationError("common-code tuple space exceeds the dense cap");
      c_tuple_cells *= static_cast<std::size_t>(rep.c_card);
    }
    std::vector<double> c_tuple(c_tuple_cells, 0.0);
    for (int y = 0; y < model->y_card; ++y) {
      double wy = model->p_y[static_cast<std::size_t>(y)];
      if (wy <= 0.0) continue;
      std::vector<std::vector<double>> per_view;
      for (int j = 0; j < model->m; ++j) per_view.push_back(view_c_given_y(*model, rep, j, y));
      for (std::size_t t = 0; t < c_tuple_cells; ++t) {
        double p = wy;
        std::size_t rest = t;
        for (int j = model->m - 1; j >= 0 && p > 0.0; --j) {
          p *= per_view[static_cast<std::size_t>(j)][rest % static_cast<std::size_t>(rep.c_card)];
          rest /= static_cast<std::size_t>(rep.c_card);
        }
        c_tuple[t] += p;
      }
    }
    out.h_c = entropy_of_probs(c_tuple);

    // H(C|X) is encoder noise only (zero for deterministic reps).
    // H(Z|X^1,Y): given (x^1, y), view 1 contributes only encoder noise and
    // each other view contributes its label-conditional code entropy.
    std::size_t vs = model->v_space();
    for (int y = 0; y < model->y_card; ++y) {
      double wy = model->p_y[static_cast<std::size_t>(y)];
      if (wy <= 0.0) continue;
      std::vector<double> p_x(static_cast<std::size_t>(model->x_card), 0.0);
      for (std::size_t v = 0; v < vs; ++v) {
        double w = model->v_prob(v);
        if (w > 0.0) p_x[static_cast<std::size_t>(model->view_symbol(y, v))] += w;
      }
      if (rep.stochastic) {
        for (int x = 0; x < model->x_card; ++x) {
          double px = p_x[static_cast<std::size_t>(x)];
          if (px <= 0.0) continue;
          const auto& row = rep.kernel[0][static_cast<std::size_t>(x)];
          out.h_z_given_x1_y += wy * px * entropy_of_probs(row);
          for (int j = 0; j < model->m; ++j) {
            std::vector<double> c_marg(static_cast<std::size_t>(rep.c_card), 0.0);
            const auto& rj = rep.kernel[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)];
            for (int z = 0; z < rep.code_card(); ++z)
              c_marg[static_cast<std::size_t>(z / rep.u_card)] += rj[static_cast<std::size_t>(z)];
            out.h_c_given_x += wy * px * entropy_of_probs(c_marg);
          }
        }
      }
      for (int j = 1; j < model->m; ++j)
        out.h_z_given_x1_y += wy * entropy_of_probs(view_code_given_y(*model, rep, j, y));
    }
    out.c_phi = sensitivity(*model, rep).c_phi;
    return out;
  }

  // Plug-in path from the dataset. Tuple-level terms use raw frequencies over
  // the observed support; the pseudocount applies to the dense per-view joints.
  data.validate();
  if (data.n() == 0) throw ValidationError("empty dataset");
  if (rep.m != data.m || rep.x_card != data.x_card)
    throw ValidationError("representation does not match the dataset");
  if (rep.stochastic)
    throw ValidationError("plug-in profiles support deterministic representations only");
  for (int j = 0; j < data.m; ++j) {
    JointDistribution vj = empirical_view_joint(data, rep, j, smoothing);
    out.cmi_sum += conditional_mutual_information(vj, x_ax, cu_ax, y_ax);
    out.mi_common_sum += mutual_information(vj, x_ax, c_ax);
    out.mi_unique_sum += mutual_information(vj, x_ax, u_ax);
    out.mi_code_sum += mutual_information(vj, x_ax, cu_ax);
    out.h_u_sum += entropy(vj, u_ax);
    out.h_u_given_x_sum += conditional_entropy(vj, u_ax, x_ax);
  }
  std::map<std::vector<int>, double> c_tuple, z_x1_y, x1_y;
  for (const auto& s : data.samples) {
    std::vector<int> ct, zt;
    for (int j = 0; j < data.m; ++j) {
      int x = s.views[static_cast<std::size_t>(j)];
      ct.push_back(rep.c_table[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)]);
      zt.push_back(rep.code_of(j, x));
    }
    c_tuple[ct] += 1.0;
    zt.push_back(s.views[0]);
    zt.push_back(s.label);
    z_x1_y[zt] += 1.0;
    x1_y[{s.views[0], s.label}] += 1.0;
  }
  out.h_c = sparse_entropy(c_tuple);
  out.h_c_given_x = 0.0;  // deterministic rep
  out.h_z_given_x1_y = std::max(0.0, sparse_entropy(z_x1_y) - sparse_entropy(x1_y));
  return out;
}

ModelFingerprint make_prediction_fingerprint(const GenerativeModel& source,
                                             int probe_count, std::uint64_t seed) {
  if (probe_count < 1) throw ValidationError("probe count must be >= 1");
  ModelFingerprint fp;
  fp.mode = ModelFingerprint::Mode::prediction_signature;
  fp.probes = sample_dataset(source, probe_count, seed).samples;
  return fp;
}

ModelFingerprint make_weight_fingerprint(int levels) {
  if (levels < 2) throw ValidationError("weight fingerprint needs >= 2 levels");
  ModelFingerprint fp;
  fp.mode = ModelFingerprint::Mode::quantized_weights;
  fp.weight_levels = levels;
  return fp;
}

std::string fingerprint_symbol(const ModelFingerprint& fp, const TrainedModel& tm) {
  std::ostringstream os;
  if (fp.mode == ModelFingerprint::Mode::quantized_weights) {
    for (double w : tm.raw_weights) {
      double unit = (w + fp.weight_clip) / (2.0 * fp.weight_clip);
      int level = std::clamp(static_cast<int>(unit * fp.weight_levels), 0, fp.weight_levels - 1);
      os << level << ',';
    }
    return os.str();
  }
  if (fp.probes.empty()) throw ValidationError("prediction fingerprint has no probes");
  for (const auto& probe : fp.probes) {
    for (int j = 0; j < tm.rep.m; ++j) {
      int z = tm.rep.code_of(j, probe.views[static_cast<std::size_t>(j)]);
      os << z << ':' << tm.psi_hat.decode(z) << '|';
    }
    os << ';';
  }
  return os.str();
}

ModelInfoEstimate estimate_model_information(const Trainer& trainer,
                                             const GenerativeModel& source, int n,
                                             InfoSetting setting, int replicates,
                                             const ModelFingerprint& fp, double smoothing,
                                             double lambda, std::uint64_t seed) {
  source.validate();
  if (replicates < 2) throw ValidationError("model-information estimation needs K >= 2");
  if (n < 1) throw ValidationError("n must be >= 1");
  if (!(lambda > 0.0 && lambda < 1.0)) throw ValidationError("lambda must be in (0,1)");

  const std::uint64_t train_seed = derive_stream(seed, 0x545241494eULL);

  MultiViewDataset loo_base;
  std::vector<std::array<MultiViewSample, 2>> super_pairs;
  if (setting == InfoSetting::loo)
    loo_base = sample_dataset(source, n + 1, derive_stream(seed, 0xba5eULL));
  if (setting == InfoSetting::supersample) {
    MultiViewDataset both = sample_dataset(source, 2 * n, derive_stream(seed, 0xba5eULL));
    for (int i = 0; i < n; ++i)
      super_pairs.push_back({both.samples[static_cast<std::size_t>(2 * i)],
                             both.samples[static_cast<std::size_t>(2 * i + 1)]});
  }

  auto make_trainset = [&](SplitMix64& var_rng, int replicate, std::string& var_symbol) {
    MultiViewDataset train;
    train.m = source.m;
    train.d = source.d;
    train.x_card = source.x_card;
    train.y_card = source.y_card;
    switch (setting) {
      case InfoSetting::full: {
        train = sample_dataset(source, n,
                               derive_stream(seed, 0x1000 + static_cast<std::uint64_t>(replicate)));
        var_symbol = dataset_symbol(train);
        break;
      }
      case InfoSetting::loo: {
        int held = var_rng.next_index(n + 1);
        var_symbol = std::to_string(held);
        for (int i = 0; i <= n; ++i)
          if (i != held) train.samples.push_back(loo_base.samples[static_cast<std::size_t>(i)]);
        break;
      }
      case InfoSetting::supersample: {
        std::string bits;
        for (int i = 0; i < n; ++i) {
          int b = var_rng.next_index(2);
          bits.push_back(b ? '1' : '0');
          train.samples.push_back(super_pairs[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)]);
        }
        var_symbol = bits;
        break;
      }
    }
    return train;
  };

  // Determinism check: the first replicate must fingerprint identically twice.
  {
    SplitMix64 probe_rng(derive_stream(seed, 0x564152ULL));
    std::string sym;
    MultiViewDataset probe_train = make_trainset(probe_rng, 0, sym);
    std::string a = fingerprint_symbol(fp, trainer(probe_train, train_seed));
    std::string b = fingerprint_symbol(fp, trainer(probe_train, train_seed));
    if (a != b)
      throw ValidationError("non-deterministic trainer: two runs with identical inputs "
                            "produced different fingerprints");
  }

  std::map<std::string, int> phi_ids, var_ids;
  std::vector<std::pair<int, int>> draws;
  SplitMix64 var_rng(derive_stream(seed, 0x564152ULL));
  for (int k = 0; k < replicates; ++k) {
    std::string var_symbol;
    MultiViewDataset train = make_trainset(var_rng, k, var_symbol);
    std::string phi_symbol = fingerprint_symbol(fp, trainer(train, train_seed));
    auto pit = phi_ids.try_emplace(phi_symbol, static_cast<int>(phi_ids.size())).first;
    auto vit = var_ids.try_emplace(var_symbol, static_cast<int>(var_ids.size())).first;
    draws.emplace_back(pit->second, vit->second);
  }

  std::size_t nf = phi_ids.size(), nv = var_ids.size();
  std::vector<double> joint(nf * nv, smoothing), pf(nf, 0.0), pv(nv, 0.0);
  for (const auto& [f, v] : draws)
    joint[static_cast<std::size_t>(f) * nv + static_cast<std::size_t>(v)] += 1.0;
  double total = 0.0;
  for (double w : joint) total += w;
  for (auto& w : joint) w /= total;
  for (std::size_t f = 0; f < nf; ++f)
    for (std::size_t v = 0; v < nv; ++v) {
      pf[f] += joint[f * nv + v];
      pv[v] += joint[f * nv + v];
    }

  ModelInfoEstimate out;
  out.distinct_symbols = static_cast<int>(nf);
  double h_f = entropy_of_probs(pf);
  double h_v = entropy_of_probs(pv);
  double h_fv = entropy_of_probs(joint);
  out.mi = std::max(0.0, h_f + h_v - h_fv);
  out.h_phi_given = std::max(0.0, h_fv - h_v);
  if (nf == 1) {
    out.renyi_phi = 0.0;
  } else {
    JointDistribution phi_dist({{"phi", static_cast<int>(nf)}}, pf, true);
    out.renyi_phi = renyi_entropy(phi_dist, {"phi"}, 1.0 - lambda);
  }
  // delta-method standard error over the per-draw log-ratio terms
  double mean_t = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < draws.size(); ++k) {
    auto [f, v] = draws[k];
    double t = std::log(joint[static_cast<std::size_t>(f) * nv + static_cast<std::size_t>(v)] /
                        (pf[static_cast<std::size_t>(f)] * pv[static_cast<std::size_t>(v)]));
    double delta = t - mean_t;
    mean_t += delta / static_cast<double>(k + 1);
    m2 += delta * (t - mean_t);
  }
  double var_t = draws.size() > 1 ? m2 / static_cast<double>(draws.size() - 1) : 0.0;
  out.mi_se = std::sqrt(std::max(0.0, var_t) / static_cast<double>(draws.size()));
  return out;
}

}  // namespace mvgb
