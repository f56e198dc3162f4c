#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mvgb/errors.hpp"
#include "mvgb/finite_info.hpp"

namespace mvgb {

// Finite-alphabet generative process x^(j) = theta(y, v^(j)): a label prior,
// i.i.d. nuisance coordinates shared across views, and one deterministic view
// map applied per view. Views are conditionally independent given the label.
struct GenerativeModel {
  int y_card = 0;
  std::vector<double> p_y;
  int m = 0;           // view count
  int d = 0;           // nuisance coordinates per view
  int coord_card = 0;  // coordinate alphabet size
  std::vector<double> p_coord;
  int x_card = 0;  // view feature alphabet size
  // theta[y * coord_card^d + v_index] = view symbol
  std::vector<int> theta;

  std::size_t v_space() const;  // coord_card^d
  int view_symbol(int y, std::size_t v_index) const;
  double v_prob(std::size_t v_index) const;  // product of coordinate priors
  void validate() const;
};

// Per-view encoder tables x -> (c, u), or stochastic kernels p(c,u | x).
struct RepresentationFunction {
  int m = 0;
  int x_card = 0;
  int c_card = 0;
  int u_card = 0;
  bool stochastic = false;
  // deterministic: [view][x] -> code
  std::vector<std::vector<int>> c_table, u_table;
  // stochastic: [view][x][z] with z = c * u_card + u, rows normalized to 1e-9
  std::vector<std::vector<std::vector<double>>> kernel;

  int code_card() const { return c_card * u_card; }
  int code_of(int view, int x) const;  // deterministic only
  void validate() const;

  static RepresentationFunction identity_into_c(int m, int x_card);
  static RepresentationFunction constant(int m, int x_card);
  // one table applied to every view
  static RepresentationFunction shared_table(int m, int x_card,
                                             std::vector<int> c_tab,
                                             std::vector<int> u_tab, int c_card,
                                             int u_card);
};

// Finite hypothesis space with a prior, for Renyi-entropy complexity terms.
struct HypothesisSpace {
  std::vector<RepresentationFunction> members;
  std::vector<double> prior;
  void validate() const;
};

struct MultiViewSample {
  std::vector<int> views;
  int label = 0;
};

struct MultiViewDataset {
  int m = 0;
  int d = 0;
  int x_card = 0;
  int y_card = 0;
  std::uint64_t seed = 0;
  std::vector<MultiViewSample> samples;
  int n() const { return static_cast<int>(samples.size()); }
  void validate() const;
};

// Leave-one-out split: n+1 samples and the held-out index.
struct LooPlan {
  MultiViewDataset data;
  int test_index = 0;
  void validate() const;
};

// Supersample split: n sample pairs and the train-side selector bits.
struct SupersamplePlan {
  int m = 0, d = 0, x_card = 0, y_card = 0;
  std::vector<std::array<MultiViewSample, 2>> pairs;
  std::vector<int> split_bits;  // 0/1, bit i picks the train side of pair i
  int n() const { return static_cast<int>(pairs.size()); }
  void validate() const;
};

// Maximum attainable and maximum samplewise losses.
struct LossEnvelope {
  double r_x = 0, r_xy = 0;      // sup over the reachable space
  double r_s_x = 0, r_s_xy = 0;  // sup over the dataset
};

enum class LossKind { zero_one, squared, absolute };
enum class Task { reconstruction, classification };

// Decoder tables over code cells z = c * u_card + u.
struct ReconstructionDecoder {
  int c_card = 0, u_card = 0, x_card = 0;
  std::vector<int> table;  // z -> view symbol
  int decode(int z) const { return table[static_cast<std::size_t>(z)]; }
};
struct ClassificationDecoder {
  int c_card = 0, u_card = 0, y_card = 0;
  std::vector<int> table;  // z -> label
  int decode(int z) const { return table[static_cast<std::size_t>(z)]; }
};
using Decoder = std::variant<ReconstructionDecoder, ClassificationDecoder>;

// Output of a training run (the trainer itself lives in experiments).
struct TrainedModel {
  RepresentationFunction rep;
  ReconstructionDecoder psi;
  ClassificationDecoder psi_hat;
  int param_count = 0;
  double weight_fnorm = 0.0;
  std::vector<double> raw_weights;
  double final_surrogate_loss = 0.0;
};

// Worst-case change of log p_z under a single nuisance-coordinate swap,
// per label and averaged over the label prior. p_z is the code distribution
// of a uniformly chosen view (encoder randomness included when stochastic).
struct SensitivityResult {
  double c_phi = 0.0;
  std::vector<double> per_label;
};
SensitivityResult sensitivity(const GenerativeModel& model,
                              const RepresentationFunction& rep);

// Typical subset of reachable (view symbol, code) pairs whose code
// log-probability sits within epsilon of the code entropy.
struct TypicalSet {
  struct Member {
    int x = 0;
    int z = 0;
  };
  std::vector<Member> members;
  int distinct_codes = 0;  // codes appearing in members; several view symbols
                           // may share one code
  double epsilon = 0.0;
  double complement_mass = 0.0;
  double h_z = 0.0;
  double mass_bound = 0.0;         // gamma / sqrt(nm)
  double cardinality_bound = 0.0;  // exp(h_z + epsilon), caps distinct_codes
};

// epsilon = c * sqrt(d log(sqrt(nm)/gamma) / 2) with c = c_phi, or the
// per-label constant when conditioned on a label. Construction conclusions
// (complement mass and cardinality caps) are verified and violations throw.
TypicalSet typical_set(const GenerativeModel& model,
                       const RepresentationFunction& rep, double gamma, int n,
                       int m_count, std::optional<int> conditioned_on = {});

// Per-sample average losses over views (expected over the encoder kernel
// when the representation is stochastic).
double avg_loss_rec(const RepresentationFunction& rep, const ReconstructionDecoder& psi,
                    const MultiViewSample& s, LossKind loss);
double avg_loss_cls(const RepresentationFunction& rep, const ClassificationDecoder& psi_hat,
                    const MultiViewSample& s, LossKind loss);

struct GapResult {
  double empirical = 0.0;
  double population = 0.0;
  double gap = 0.0;
  bool population_exact = true;
  double population_se = 0.0;  // nonzero only on the Monte Carlo path
};

// Empirical risk on the dataset, exact population risk by enumerating the
// finite (Y, V) space (Monte Carlo with a reported standard error beyond the
// 1e7-atom cap), and their difference.
GapResult generalization_gap(const GenerativeModel& model,
                             const RepresentationFunction& rep, const Decoder& decoder,
                             const MultiViewDataset& data, Task task, LossKind loss);

// LOO validation error: held-out loss minus the mean loss of the rest.
double delta_loo(const LooPlan& plan, const RepresentationFunction& rep,
                 const ClassificationDecoder& psi_hat, LossKind loss);

// Supersample validation error: mean test-side minus mean train-side loss.
double delta_sup(const SupersamplePlan& plan, const RepresentationFunction& rep,
                 const ClassificationDecoder& psi_hat, LossKind loss);

// Same quantity accumulated as (1/nm) sum_{i,j} (-1)^{U_i} (loss difference);
// kept as a second route for the identity check.
double delta_sup_signed(const SupersamplePlan& plan, const RepresentationFunction& rep,
                        const ClassificationDecoder& psi_hat, LossKind loss);

// sqrt((1/nm) sum_{i,j} (loss difference)^2), the Theorem-6 scale constant.
double sup_loss_rms(const SupersamplePlan& plan, const RepresentationFunction& rep,
                    const ClassificationDecoder& psi_hat, LossKind loss);

// Maximum attainable (over the reachable space) and samplewise (over the
// dataset) losses for both tasks.
LossEnvelope loss_envelope(const GenerativeModel& model, const RepresentationFunction& rep,
                           const ReconstructionDecoder& psi,
                           const ClassificationDecoder& psi_hat,
                           const MultiViewDataset& data, LossKind rec_loss,
                           LossKind cls_loss);

// Samples n labeled multi-view points from the model.
MultiViewDataset sample_dataset(const GenerativeModel& model, int n, std::uint64_t seed);

}  // namespace mvgb
