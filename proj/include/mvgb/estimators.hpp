#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mvgb/finite_info.hpp"
#include "mvgb/multiview.hpp"

namespace mvgb {

// Equal-width binning over the observed range, padded by 1e-12 on both ends.
struct BinningSpec {
  int bins_per_dim = 8;
};

struct BinnedColumns {
  std::vector<std::vector<int>> symbols;           // one vector per column
  std::vector<std::pair<double, double>> ranges;   // observed (lo, hi) per column
};

// Discretize continuous columns into bin indices.
BinnedColumns bin_columns(const std::vector<std::vector<double>>& columns,
                          const BinningSpec& spec);

// Counts (+ a pseudocount per cell) normalized into a JointDistribution.
// Symbols outside their alphabet raise an error naming the sample index.
JointDistribution empirical_joint(const std::vector<std::vector<int>>& samples,
                                  const std::vector<Alphabet>& axes, double smoothing);

// The bundle of information quantities consumed by the bound calculators.
// All values in nats. The model-information fields (mi_phi_*, h_phi_given_*)
// are filled by estimate_model_information, not by the profile builders.
struct InfoProfile {
  double h_c = 0.0;               // H of the joint common code across views
  double h_u_sum = 0.0;           // sum_j H(U^j)
  double mi_common_sum = 0.0;     // sum_j I(X^j; C^j)
  double mi_unique_sum = 0.0;     // sum_j I(X^j; U^j)
  double mi_code_sum = 0.0;       // sum_j I(X^j; C^j, U^j)
  double cmi_sum = 0.0;           // sum_j I(X^j; C^j, U^j | Y)
  double renyi_phi = 0.0;         // H_{1-lambda} of the hypothesis prior
  double h_c_given_x = 0.0;       // H(C | X)
  double h_u_given_x_sum = 0.0;   // sum_j H(U^j | X^j)
  double h_z_given_x1_y = 0.0;    // H(Z | X^(1), Y)
  double c_phi = 0.0;             // nuisance sensitivity (exact path only)
  int y_card = 0;
  std::optional<double> mi_phi_s, mi_phi_u, mi_phi_usup;
  std::optional<double> h_phi_given_u, h_phi_given_usup;
};

// Information profile of a representation. With a model, every field is
// computed exactly on the induced finite joint; without one, by plug-in from
// the empirical joint of (X^j, C, U^j, Y) with the given pseudocount (the
// plug-in path has no nuisance structure, so c_phi stays 0). lambda sets the
// Renyi order 1-lambda for the hypothesis prior when `space` is given.
InfoProfile estimate_info_profile(const MultiViewDataset& data,
                                  const RepresentationFunction& rep,
                                  const GenerativeModel* model, double smoothing,
                                  double lambda, const HypothesisSpace* space = nullptr);

// H_{1-lambda} of a hypothesis-space prior.
double hypothesis_renyi(const HypothesisSpace& space, double lambda);

// Deterministic discrete summary of a trained model: either its predictions
// (labels and codes) on a fixed probe set, or its quantized raw weights.
struct ModelFingerprint {
  enum class Mode { prediction_signature, quantized_weights };
  Mode mode = Mode::prediction_signature;
  std::vector<MultiViewSample> probes;
  int weight_levels = 16;
  double weight_clip = 4.0;  // quantization range [-clip, clip]
};

// Probe set drawn once from the source with a dedicated seed.
ModelFingerprint make_prediction_fingerprint(const GenerativeModel& source,
                                             int probe_count, std::uint64_t seed);
ModelFingerprint make_weight_fingerprint(int levels);

std::string fingerprint_symbol(const ModelFingerprint& fp, const TrainedModel& tm);

enum class InfoSetting { full, loo, supersample };

struct ModelInfoEstimate {
  double mi = 0.0;           // plug-in I(fingerprint; setting variable)
  double h_phi_given = 0.0;  // plug-in H(fingerprint | setting variable)
  double renyi_phi = 0.0;    // plug-in H_{1-lambda}(fingerprint)
  double mi_se = 0.0;        // delta-method standard error of the MI estimate
  int distinct_symbols = 0;
};

using Trainer = std::function<TrainedModel(const MultiViewDataset&, std::uint64_t)>;

// Train K replicates under the chosen randomness (fresh dataset draw, LOO
// index, or supersample split bits with the supersample held fixed),
// fingerprint each trained model, and estimate the information between the
// fingerprint and the setting's random variable by plug-in. The trainer must
// be deterministic given (data, seed); this is checked and violations raise.
ModelInfoEstimate estimate_model_information(const Trainer& trainer,
                                             const GenerativeModel& source, int n,
                                             InfoSetting setting, int replicates,
                                             const ModelFingerprint& fp,
                                             double smoothing, double lambda,
                                             std::uint64_t seed);

}  // namespace mvgb
