#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mvgb/bounds.hpp"
#include "mvgb/estimators.hpp"
#include "mvgb/multiview.hpp"

namespace mvgb {

// Synthetic multi-view generator families. Discrete-exact builds
// x = (class_stride * y + sum_i v_i) mod x_card with v_i = 0 w.p. 1-flip_prob;
// signal_noise emits the label symbol with probability 1-flip_prob and a
// label-independent noise symbol otherwise; gaussian_mixture quantizes
// class-conditional Gaussians onto a finite coordinate alphabet first, so
// population quantities stay exactly computable.
struct GeneratorSpec {
  enum class Mode { discrete_exact, signal_noise, gaussian_mixture };
  Mode mode = Mode::discrete_exact;
  int y_card = 2;
  int m = 2;
  int d = 1;
  int coord_card = 2;
  int x_card = 2;
  int class_stride = 1;
  double flip_prob = 0.1;
  std::vector<double> p_y;  // empty = uniform
  double gauss_sep = 2.0;   // class-mean separation in noise-sigma units
};

GenerativeModel build_generator(const GeneratorSpec& spec);

// Model plus an i.i.d. dataset of n samples; bitwise deterministic in seed.
std::pair<GenerativeModel, MultiViewDataset> generate_synthetic(const GeneratorSpec& spec,
                                                                int n, std::uint64_t seed);

// Per-view encoders with quantized (c, u) outputs, trained by SGD on a
// softmax surrogate; the regularizer folds penalty_weight times the current
// plug-in sum_j I(X^j;C,U^j|Y) into the weight decay, recomputed each epoch.
// Returned decoders are majority tables over code cells (ties toward the
// lowest index). Deterministic given (data, hyper, seed).
struct TrainerHyper {
  int code_levels = 4;
  int c_levels = 0;  // consensus-code levels; 0 = track code_levels
  int hidden = 0;    // 0 = linear encoder, else tanh layer width
  double lr = 0.3;
  int epochs = 60;
  double penalty_weight = 0.0;
  double penalty_scale = 0.6;  // maps penalty_weight * CMI to a decay rate
  double weight_decay = 0.0;
  bool label_head_reads_unique = false;  // feed s_u to the label head too
  Task objective = Task::classification;
};

TrainedModel train_model(const MultiViewDataset& data, const TrainerHyper& hyper,
                         std::uint64_t seed);

struct ExperimentConfig {
  GeneratorSpec generator;
  std::vector<int> n_grid = {50, 100, 200, 400, 800};
  std::vector<int> m_grid = {2, 4};
  int replicates = 200;
  double gamma = 1.0;
  double delta = 0.1;
  double lambda = 0.1;
  double beta_scale = 0.9;  // beta = beta_scale * log2 / (2 * attainable loss)
  TrainerHyper trainer;
  std::uint64_t master_seed = 0;
  // correlation study
  std::vector<int> width_grid = {2, 4, 8};
  std::vector<double> penalty_grid = {0.0, 0.1, 1.0};
  std::vector<double> decay_grid = {0.0, 1e-3};
  int corr_seeds = 6;
  int corr_draws = 2;
  int corr_n = 48;
  int phi_replicates = 24;
  int probe_count = 32;
};

// Flat record table plus summary blocks; serialization lives elsewhere.
struct StudyReport {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // NaN marks not-applicable cells
  std::vector<std::pair<std::string, double>> coverage;
  std::vector<std::pair<std::string, double>> slopes;
  std::vector<std::pair<std::string, double>> pearson_table;
  // named (x, y) series for external plotting
  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> plot_series;
};

// Monte Carlo validity study: per (n, m) cell, draw/train/evaluate
// `replicates` times; coverage = fraction of replicates with gap <= bound
// for theorems 1 and 3, and for theorem 7 over interpolating replicates.
StudyReport run_bound_validation(const ExperimentConfig& config);

// 216-model style hyperparameter sweep; Pearson correlation of each candidate
// complexity metric against the classification generalization gap.
StudyReport run_correlation_study(const ExperimentConfig& config);

// Log-log slope fits: analytic bound terms against nm (frozen profile), and
// the measured mean |gap| across replicates against n.
StudyReport run_scaling_study(const ExperimentConfig& config);

// Sample Pearson correlation; constant inputs are an error, not 0.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// Least-squares slope of y on x with its standard error.
std::pair<double, double> fit_slope(const std::vector<double>& x,
                                    const std::vector<double>& y);

}  // namespace mvgb
