#include "mvgb/multiview.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "mvgb/rng.hpp"

namespace mvgb {

namespace {

constexpr double kZeroProb = 1e-300;  // below this, treated as exact zero
constexpr std::size_t kEnumCap = 10'000'000;

double loss_value(LossKind kind, int predicted, int truth) {
  switch (kind) {
    case LossKind::zero_one:
      return predicted == truth ? 0.0 : 1.0;
    case LossKind::squared:
      return static_cast<double>(predicted - truth) * (predicted - truth);
    case LossKind::absolute:
      return std::abs(predicted - truth);
  }
  return 0.0;
}

void check_prior(const std::vector<double>& p, int card, const char* what) {
  if (static_cast<int>(p.size()) != card)
    throw ValidationError(std::string(what) + " prior length does not match cardinality");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw ValidationError(std::string(what) + " prior has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValidationError(std::string(what) + " prior does not sum to 1 within 1e-9");
}

// Per-view expected loss for one symbol, kernel-weighted when stochastic.
template <typename DecodeLoss>
double view_loss(const RepresentationFunction& rep, int view, int x, DecodeLoss&& dl) {
  if (!rep.stochastic) {
    int z = rep.code_of(view, x);
    return dl(z);
  }
  double acc = 0.0;
  const auto& row = rep.kernel[static_cast<std::size_t>(view)][static_cast<std::size_t>(x)];
  for (int z = 0; z < rep.code_card(); ++z)
    if (row[static_cast<std::size_t>(z)] > 0.0) acc += row[static_cast<std::size_t>(z)] * dl(z);
  return acc;
}

double view_loss_rec(const RepresentationFunction& rep, const ReconstructionDecoder& psi,
                     int view, int x, LossKind loss) {
  return view_loss(rep, view, x, [&](int z) { return loss_value(loss, psi.decode(z), x); });
}

double view_loss_cls(const RepresentationFunction& rep, const ClassificationDecoder& psi_hat,
                     int view, int x, int y, LossKind loss) {
  return view_loss(rep, view, x, [&](int z) { return loss_value(loss, psi_hat.decode(z), y); });
}

// Code distribution of a uniformly chosen view, optionally conditioned on a
// label. Encoder randomness is part of the marginal for stochastic reps.
std::vector<double> code_distribution(const GenerativeModel& model,
                                      const RepresentationFunction& rep,
                                      std::optional<int> given_y) {
  std::vector<double> p_z(static_cast<std::size_t>(rep.code_card()), 0.0);
  std::size_t vs = model.v_space();
  for (int y = 0; y < model.y_card; ++y) {
    double wy = given_y ? (y == *given_y ? 1.0 : 0.0) : model.p_y[static_cast<std::size_t>(y)];
    if (wy <= 0.0) continue;
    for (std::size_t v = 0; v < vs; ++v) {
      double w = wy * model.v_prob(v);
      if (w <= 0.0) continue;
      int x = model.view_symbol(y, v);
      for (int j = 0; j < model.m; ++j) {
        if (!rep.stochastic) {
          p_z[static_cast<std::size_t>(rep.code_of(j, x))] += w / model.m;
        } else {
          const auto& row = rep.kernel[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)];
          for (int z = 0; z < rep.code_card(); ++z)
            p_z[static_cast<std::size_t>(z)] += w / model.m * row[static_cast<std::size_t>(z)];
        }
      }
    }
  }
  return p_z;
}

// Codes reachable from a view symbol (kernel support, or the table entry).
std::vector<int> reachable_codes(const RepresentationFunction& rep, int view, int x) {
  if (!rep.stochastic) return {rep.code_of(view, x)};
  std::vector<int> out;
  const auto& row = rep.kernel[static_cast<std::size_t>(view)][static_cast<std::size_t>(x)];
  for (int z = 0; z < rep.code_card(); ++z)
    if (row[static_cast<std::size_t>(z)] > 0.0) out.push_back(z);
  return out;
}

}  // namespace

std::size_t GenerativeModel::v_space() const {
  std::size_t s = 1;
  for (int i = 0; i < d; ++i) s *= static_cast<std::size_t>(coord_card);
  return s;
}

int GenerativeModel::view_symbol(int y, std::size_t v_index) const {
  return theta[static_cast<std::size_t>(y) * v_space() + v_index];
}

double GenerativeModel::v_prob(std::size_t v_index) const {
  double p = 1.0;
  for (int i = 0; i < d; ++i) {
    p *= p_coord[v_index % static_cast<std::size_t>(coord_card)];
    v_index /= static_cast<std::size_t>(coord_card);
  }
  return p;
}

void GenerativeModel::validate() const {
  if (y_card < 1 || m < 1 || d < 1 || coord_card < 1 || x_card < 1)
    throw ValidationError("generative model has a non-positive cardinality");
  check_prior(p_y, y_card, "label");
  check_prior(p_coord, coord_card, "coordinate");
  std::size_t vs = v_space();
  if (vs > kEnumCap / static_cast<std::size_t>(y_card))
    throw ValidationError("nuisance space exceeds the 1e7 enumeration cap");
  if (theta.size() != static_cast<std::size_t>(y_card) * vs)
    throw ValidationError("theta table has the wrong length");
  for (int x : theta)
    if (x < 0 || x >= x_card) throw ValidationError("theta maps outside the view alphabet");
}

int RepresentationFunction::code_of(int view, int x) const {
  return c_table[static_cast<std::size_t>(view)][static_cast<std::size_t>(x)] * u_card +
         u_table[static_cast<std::size_t>(view)][static_cast<std::size_t>(x)];
}

void RepresentationFunction::validate() const {
  if (m < 1 || x_card < 1 || c_card < 1 || u_card < 1)
    throw ValidationError("representation has a non-positive cardinality");
  if (!stochastic) {
    if (c_table.size() != static_cast<std::size_t>(m) ||
        u_table.size() != static_cast<std::size_t>(m))
      throw ValidationError("representation tables must cover every view");
    for (int j = 0; j < m; ++j) {
      if (c_table[static_cast<std::size_t>(j)].size() != static_cast<std::size_t>(x_card) ||
          u_table[static_cast<std::size_t>(j)].size() != static_cast<std::size_t>(x_card))
        throw ValidationError("representation table is not total over the view alphabet");
      for (int x = 0; x < x_card; ++x) {
        int c = c_table[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)];
        int u = u_table[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)];
        if (c < 0 || c >= c_card || u < 0 || u >= u_card)
          throw ValidationError("representation table maps outside its code alphabet");
      }
    }
    return;
  }
  if (kernel.size() != static_cast<std::size_t>(m))
    throw ValidationError("stochastic representation needs a kernel per view");
  for (const auto& per_view : kernel) {
    if (per_view.size() != static_cast<std::size_t>(x_card))
      throw ValidationError("kernel is not total over the view alphabet");
    for (const auto& row : per_view) {
      if (row.size() != static_cast<std::size_t>(c_card * u_card))
        throw ValidationError("kernel row has the wrong code-space length");
      double sum = 0.0;
      for (double p : row) {
        if (!(p >= 0.0)) throw ValidationError("kernel row has a negative entry");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("kernel row does not sum to 1 within 1e-9");
    }
  }
}

RepresentationFunction RepresentationFunction::identity_into_c(int m, int x_card) {
  RepresentationFunction r;
  r.m = m;
  r.x_card = x_card;
  r.c_card = x_card;
  r.u_card = 1;
  std::vector<int> ident(static_cast<std::size_t>(x_card));
  for (int x = 0; x < x_card; ++x) ident[static_cast<std::size_t>(x)] = x;
  r.c_table.assign(static_cast<std::size_t>(m), ident);
  r.u_table.assign(static_cast<std::size_t>(m),
                   std::vector<int>(static_cast<std::size_t>(x_card), 0));
  return r;
}

RepresentationFunction RepresentationFunction::constant(int m, int x_card) {
  RepresentationFunction r;
  r.m = m;
  r.x_card = x_card;
  r.c_card = 1;
  r.u_card = 1;
  r.c_table.assign(static_cast<std::size_t>(m),
                   std::vector<int>(static_cast<std::size_t>(x_card), 0));
  r.u_table = r.c_table;
  return r;
}

RepresentationFunction RepresentationFunction::shared_table(int m, int x_card,
                                                            std::vector<int> c_tab,
                                                            std::vector<int> u_tab,
                                                            int c_card, int u_card) {
  RepresentationFunction r;
  r.m = m;
  r.x_card = x_card;
  r.c_card = c_card;
  r.u_card = u_card;
  r.c_table.assign(static_cast<std::size_t>(m), std::move(c_tab));
  r.u_table.assign(static_cast<std::size_t>(m), std::move(u_tab));
  r.validate();
  return r;
}

void HypothesisSpace::validate() const {
  if (members.empty()) throw ValidationError("hypothesis space must be nonempty");
  check_prior(prior, static_cast<int>(members.size()), "hypothesis");
  for (const auto& f : members) f.validate();
}

void MultiViewDataset::validate() const {
  for (const auto& s : samples) {
    if (static_cast<int>(s.views.size()) != m)
      throw ValidationError("sample does not have m views");
    for (int x : s.views)
      if (x < 0 || x >= x_card) throw ValidationError("view symbol outside the alphabet");
    if (s.label < 0 || s.label >= y_card)
      throw ValidationError("label outside the label space");
  }
}

void LooPlan::validate() const {
  data.validate();
  if (data.n() < 2) throw ValidationError("LOO plan needs n >= 1 (at least 2 samples)");
  if (test_index < 0 || test_index >= data.n())
    throw ValidationError("LOO index out of range");
}

void SupersamplePlan::validate() const {
  if (split_bits.size() != pairs.size())
    throw ValidationError("supersample split length does not match the pair count");
  for (int b : split_bits)
    if (b != 0 && b != 1) throw ValidationError("supersample split bits must be 0/1");
  for (const auto& pr : pairs)
    for (const auto& s : pr)
      if (static_cast<int>(s.views.size()) != m)
        throw ValidationError("supersample pair does not have m views");
}

SensitivityResult sensitivity(const GenerativeModel& model,
                              const RepresentationFunction& rep) {
  model.validate();
  rep.validate();
  if (rep.m != model.m || rep.x_card != model.x_card)
    throw ValidationError("representation does not match the model's views");

  // Gaps are measured against the label-conditional code distribution: the
  // per-label constant is the bounded-difference constant of
  // v -> -log p_{z|y}(code(theta_y(v))), which is what the conditional
  // typical-set concentration argument consumes.
  std::vector<std::vector<double>> p_z_given_y;
  for (int y = 0; y < model.y_card; ++y)
    p_z_given_y.push_back(model.p_y[static_cast<std::size_t>(y)] > 0.0
                              ? code_distribution(model, rep, y)
                              : std::vector<double>());
  auto log_pz = [&](int z, int y, std::size_t v, int j) {
    double p = p_z_given_y[static_cast<std::size_t>(y)][static_cast<std::size_t>(z)];
    if (p < kZeroProb) {
      std::ostringstream os;
      os << "sensitivity undefined: reachable code has zero probability"
         << " (label " << y << ", nuisance index " << v << ", view " << j << ")";
      throw ValidationError(os.str());
    }
    return std::log(p);
  };

  SensitivityResult out;
  out.per_label.assign(static_cast<std::size_t>(model.y_card), 0.0);
  std::size_t vs = model.v_space();
  std::vector<std::size_t> stride(static_cast<std::size_t>(model.d), 1);
  for (int i = 1; i < model.d; ++i)
    stride[static_cast<std::size_t>(i)] =
        stride[static_cast<std::size_t>(i - 1)] * static_cast<std::size_t>(model.coord_card);

  for (int y = 0; y < model.y_card; ++y) {
    if (model.p_y[static_cast<std::size_t>(y)] <= 0.0) continue;  // null labels never occur
    double worst = 0.0;
    for (int j = 0; j < model.m; ++j)
      for (std::size_t v = 0; v < vs; ++v) {
        int x = model.view_symbol(y, v);
        for (int i = 0; i < model.d; ++i) {
          std::size_t digit = (v / stride[static_cast<std::size_t>(i)]) %
                              static_cast<std::size_t>(model.coord_card);
          for (int alt = 0; alt < model.coord_card; ++alt) {
            if (static_cast<std::size_t>(alt) == digit) continue;
            std::size_t v2 =
                v + (static_cast<std::size_t>(alt) - digit) * stride[static_cast<std::size_t>(i)];
            int x2 = model.view_symbol(y, v2);
            for (int z : reachable_codes(rep, j, x))
              for (int z2 : reachable_codes(rep, j, x2))
                worst = std::max(worst, std::abs(log_pz(z, y, v, j) - log_pz(z2, y, v2, j)));
          }
        }
      }
    out.per_label[static_cast<std::size_t>(y)] = worst;
    out.c_phi += model.p_y[static_cast<std::size_t>(y)] * worst;
  }
  return out;
}

TypicalSet typical_set(const GenerativeModel& model, const RepresentationFunction& rep,
                       double gamma, int n, int m_count, std::optional<int> conditioned_on) {
  if (!(gamma > 0.0)) throw ValidationError("gamma must be > 0");
  if (n < 1 || m_count < 1) throw ValidationError("typical_set needs n*m >= 1");
  double nm = static_cast<double>(n) * m_count;
  double log_arg = std::log(std::sqrt(nm) / gamma);
  if (log_arg < 0.0)
    throw RegimeError("vacuous regime: gamma exceeds sqrt(n m), log(sqrt(nm)/gamma) < 0");

  SensitivityResult sens = sensitivity(model, rep);
  double c = sens.c_phi;
  if (conditioned_on) {
    int y0 = *conditioned_on;
    if (y0 < 0 || y0 >= model.y_card) throw ValidationError("conditioning label out of range");
    if (model.p_y[static_cast<std::size_t>(y0)] <= 0.0)
      throw ValidationError("cannot condition on a zero-probability label");
    c = sens.per_label[static_cast<std::size_t>(y0)];
  }

  std::vector<double> p_z = code_distribution(model, rep, conditioned_on);
  double h_z = entropy_of_probs(p_z);
  double eps = c * std::sqrt(static_cast<double>(model.d) * log_arg / 2.0);

  // Reachable (view symbol, code) pairs with their probability mass.
  std::map<std::pair<int, int>, double> pair_mass;
  std::size_t vs = model.v_space();
  for (int y = 0; y < model.y_card; ++y) {
    double wy = conditioned_on ? (y == *conditioned_on ? 1.0 : 0.0)
                               : model.p_y[static_cast<std::size_t>(y)];
    if (wy <= 0.0) continue;
    for (std::size_t v = 0; v < vs; ++v) {
      double w = wy * model.v_prob(v);
      if (w <= 0.0) continue;
      int x = model.view_symbol(y, v);
      for (int j = 0; j < model.m; ++j) {
        if (!rep.stochastic) {
          pair_mass[{x, rep.code_of(j, x)}] += w / model.m;
        } else {
          const auto& row = rep.kernel[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)];
          for (int z = 0; z < rep.code_card(); ++z)
            if (row[static_cast<std::size_t>(z)] > 0.0)
              pair_mass[{x, z}] += w / model.m * row[static_cast<std::size_t>(z)];
        }
      }
    }
  }

  TypicalSet out;
  out.epsilon = eps;
  out.h_z = h_z;
  out.mass_bound = gamma / std::sqrt(nm);
  out.cardinality_bound = std::exp(h_z + eps);
  double member_mass = 0.0;
  std::vector<bool> code_seen(static_cast<std::size_t>(rep.code_card()), false);
  for (const auto& [xz, mass] : pair_mass) {
    double surprise = -std::log(p_z[static_cast<std::size_t>(xz.second)]) - h_z;
    if (surprise <= eps + 1e-12) {
      out.members.push_back({xz.first, xz.second});
      member_mass += mass;
      if (!code_seen[static_cast<std::size_t>(xz.second)]) {
        code_seen[static_cast<std::size_t>(xz.second)] = true;
        ++out.distinct_codes;
      }
    }
  }
  out.complement_mass = std::max(0.0, 1.0 - member_mass);

  if (static_cast<double>(out.distinct_codes) > out.cardinality_bound * (1.0 + 1e-9)) {
    std::ostringstream os;
    os << "typical-set code count " << out.distinct_codes
       << " exceeds exp(H+eps) = " << out.cardinality_bound;
    throw ValidationError(os.str());
  }
  if (out.complement_mass > out.mass_bound + 1e-12) {
    std::ostringstream os;
    os << "typical-set complement mass " << out.complement_mass
       << " exceeds gamma/sqrt(nm) = " << out.mass_bound
       << "; the construction's concentration premise fails for this model";
    throw ValidationError(os.str());
  }
  return out;
}

double avg_loss_rec(const RepresentationFunction& rep, const ReconstructionDecoder& psi,
                    const MultiViewSample& s, LossKind loss) {
  double acc = 0.0;
  for (int j = 0; j < rep.m; ++j)
    acc += view_loss_rec(rep, psi, j, s.views[static_cast<std::size_t>(j)], loss);
  return acc / rep.m;
}

double avg_loss_cls(const RepresentationFunction& rep, const ClassificationDecoder& psi_hat,
                    const MultiViewSample& s, LossKind loss) {
  double acc = 0.0;
  for (int j = 0; j < rep.m; ++j)
    acc += view_loss_cls(rep, psi_hat, j, s.views[static_cast<std::size_t>(j)], s.label, loss);
  return acc / rep.m;
}

GapResult generalization_gap(const GenerativeModel& model, const RepresentationFunction& rep,
                             const Decoder& decoder, const MultiViewDataset& data, Task task,
                             LossKind loss) {
  model.validate();
  rep.validate();
  data.validate();
  if (task == Task::reconstruction && !std::holds_alternative<ReconstructionDecoder>(decoder))
    throw ValidationError("reconstruction task needs a reconstruction decoder");
  if (task == Task::classification && !std::holds_alternative<ClassificationDecoder>(decoder))
    throw ValidationError("classification task needs a classification decoder");
  if (data.n() == 0) throw ValidationError("empty dataset");

  auto sample_loss = [&](const MultiViewSample& s) {
    if (task == Task::reconstruction)
      return avg_loss_rec(rep, std::get<ReconstructionDecoder>(decoder), s, loss);
    return avg_loss_cls(rep, std::get<ClassificationDecoder>(decoder), s, loss);
  };
  auto atom_view_loss = [&](int j, int x, int y) {
    if (task == Task::reconstruction)
      return view_loss_rec(rep, std::get<ReconstructionDecoder>(decoder), j, x, loss);
    return view_loss_cls(rep, std::get<ClassificationDecoder>(decoder), j, x, y, loss);
  };

  GapResult out;
  for (const auto& s : data.samples) out.empirical += sample_loss(s);
  out.empirical /= data.n();

  std::size_t vs = model.v_space();
  if (static_cast<std::size_t>(model.y_card) * vs <= kEnumCap) {
    // exact: per view, enumerate the (label, per-view nuisance) space
    double pop = 0.0;
    for (int j = 0; j < model.m; ++j)
      for (int y = 0; y < model.y_card; ++y) {
        double wy = model.p_y[static_cast<std::size_t>(y)];
        if (wy <= 0.0) continue;
        for (std::size_t v = 0; v < vs; ++v) {
          double w = wy * model.v_prob(v);
          if (w <= 0.0) continue;
          pop += w * atom_view_loss(j, model.view_symbol(y, v), y);
        }
      }
    out.population = pop / model.m;
  } else {
    // Monte Carlo fallback on a fixed internal stream, flagged in the result.
    constexpr int kMc = 200000;
    SplitMix64 rng(0x6D763A706F70ULL);
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < kMc; ++i) {
      MultiViewDataset one = sample_dataset(model, 1, rng.next());
      double l = sample_loss(one.samples[0]);
      sum += l;
      sum2 += l * l;
    }
    out.population = sum / kMc;
    out.population_exact = false;
    out.population_se =
        std::sqrt(std::max(0.0, sum2 / kMc - out.population * out.population) / kMc);
  }
  out.gap = out.population - out.empirical;
  return out;
}

double delta_loo(const LooPlan& plan, const RepresentationFunction& rep,
                 const ClassificationDecoder& psi_hat, LossKind loss) {
  plan.validate();
  int total = plan.data.n();
  double held = 0.0, rest = 0.0;
  for (int i = 0; i < total; ++i) {
    double l = avg_loss_cls(rep, psi_hat, plan.data.samples[static_cast<std::size_t>(i)], loss);
    if (i == plan.test_index)
      held = l;
    else
      rest += l;
  }
  return held - rest / (total - 1);
}

double delta_sup(const SupersamplePlan& plan, const RepresentationFunction& rep,
                 const ClassificationDecoder& psi_hat, LossKind loss) {
  plan.validate();
  if (plan.n() == 0) throw ValidationError("empty supersample plan");
  double test = 0.0, train = 0.0;
  for (int i = 0; i < plan.n(); ++i) {
    int b = plan.split_bits[static_cast<std::size_t>(i)];
    const auto& pr = plan.pairs[static_cast<std::size_t>(i)];
    train += avg_loss_cls(rep, psi_hat, pr[static_cast<std::size_t>(b)], loss);
    test += avg_loss_cls(rep, psi_hat, pr[static_cast<std::size_t>(1 - b)], loss);
  }
  return (test - train) / plan.n();
}

double delta_sup_signed(const SupersamplePlan& plan, const RepresentationFunction& rep,
                        const ClassificationDecoder& psi_hat, LossKind loss) {
  plan.validate();
  if (plan.n() == 0) throw ValidationError("empty supersample plan");
  double acc = 0.0;
  for (int i = 0; i < plan.n(); ++i) {
    double sign = plan.split_bits[static_cast<std::size_t>(i)] == 0 ? 1.0 : -1.0;
    const auto& pr = plan.pairs[static_cast<std::size_t>(i)];
    for (int j = 0; j < rep.m; ++j) {
      double diff =
          view_loss_cls(rep, psi_hat, j, pr[1].views[static_cast<std::size_t>(j)], pr[1].label, loss) -
          view_loss_cls(rep, psi_hat, j, pr[0].views[static_cast<std::size_t>(j)], pr[0].label, loss);
      acc += sign * diff;
    }
  }
  return acc / (static_cast<double>(plan.n()) * rep.m);
}

double sup_loss_rms(const SupersamplePlan& plan, const RepresentationFunction& rep,
                    const ClassificationDecoder& psi_hat, LossKind loss) {
  plan.validate();
  if (plan.n() == 0) throw ValidationError("empty supersample plan");
  double acc = 0.0;
  for (int i = 0; i < plan.n(); ++i) {
    const auto& pr = plan.pairs[static_cast<std::size_t>(i)];
    for (int j = 0; j < rep.m; ++j) {
      double diff =
          view_loss_cls(rep, psi_hat, j, pr[1].views[static_cast<std::size_t>(j)], pr[1].label, loss) -
          view_loss_cls(rep, psi_hat, j, pr[0].views[static_cast<std::size_t>(j)], pr[0].label, loss);
      acc += diff * diff;
    }
  }
  return std::sqrt(acc / (static_cast<double>(plan.n()) * rep.m));
}

LossEnvelope loss_envelope(const GenerativeModel& model, const RepresentationFunction& rep,
                           const ReconstructionDecoder& psi,
                           const ClassificationDecoder& psi_hat, const MultiViewDataset& data,
                           LossKind rec_loss, LossKind cls_loss) {
  LossEnvelope env;
  std::size_t vs = model.v_space();
  for (int y = 0; y < model.y_card; ++y) {
    if (model.p_y[static_cast<std::size_t>(y)] <= 0.0) continue;
    double rec_sum = 0.0, cls_sum = 0.0;
    for (int j = 0; j < model.m; ++j) {
      double rec_max = 0.0, cls_max = 0.0;
      for (std::size_t v = 0; v < vs; ++v) {
        if (model.v_prob(v) <= 0.0) continue;
        int x = model.view_symbol(y, v);
        rec_max = std::max(rec_max, view_loss_rec(rep, psi, j, x, rec_loss));
        cls_max = std::max(cls_max, view_loss_cls(rep, psi_hat, j, x, y, cls_loss));
      }
      rec_sum += rec_max;
      cls_sum += cls_max;
    }
    env.r_x = std::max(env.r_x, rec_sum / model.m);
    env.r_xy = std::max(env.r_xy, cls_sum / model.m);
  }
  for (const auto& s : data.samples) {
    env.r_s_x = std::max(env.r_s_x, avg_loss_rec(rep, psi, s, rec_loss));
    env.r_s_xy = std::max(env.r_s_xy, avg_loss_cls(rep, psi_hat, s, cls_loss));
  }
  return env;
}

MultiViewDataset sample_dataset(const GenerativeModel& model, int n, std::uint64_t seed) {
  model.validate();
  MultiViewDataset data;
  data.m = model.m;
  data.d = model.d;
  data.x_card = model.x_card;
  data.y_card = model.y_card;
  data.seed = seed;
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i) {
    MultiViewSample s;
    s.label = rng.next_categorical(model.p_y);
    for (int j = 0; j < model.m; ++j) {
      std::size_t v = 0, stride = 1;
      for (int k = 0; k < model.d; ++k) {
        v += static_cast<std::size_t>(rng.next_categorical(model.p_coord)) * stride;
        stride *= static_cast<std::size_t>(model.coord_card);
      }
      s.views.push_back(model.view_symbol(s.label, v));
    }
    data.samples.push_back(std::move(s));
  }
  return data;
}

}  // namespace mvgb
