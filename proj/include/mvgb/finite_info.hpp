#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "mvgb/errors.hpp"

namespace mvgb {

// One named finite axis of a joint distribution.
struct Alphabet {
  std::string name;
  int size = 0;
};

// Dense probability tensor over named finite axes, row-major in the axis
// order given at construction. Entries must be nonnegative and sum to 1
// within 1e-9; set renormalize to accept unnormalized nonnegative weights.
// All exact information measures below operate on this type.
class JointDistribution {
 public:
  static constexpr std::size_t kMaxCells = 10'000'000;

  JointDistribution(std::vector<Alphabet> axes, std::vector<double> probs,
                    bool renormalize = false);

  const std::vector<Alphabet>& axes() const { return axes_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t cells() const { return probs_.size(); }

  int axis_index(const std::string& name) const;  // ValidationError if unknown
  int axis_size(const std::string& name) const;

  // Marginal over the named axes, in the order listed.
  JointDistribution marginal(const std::vector<std::string>& names) const;

  // Probabilities of the marginal without constructing a JointDistribution.
  std::vector<double> marginal_probs(const std::vector<std::string>& names) const;

 private:
  std::vector<Alphabet> axes_;
  std::vector<double> probs_;
};

// All measures are in nats. Presentation layers divide by log 2 for bits.
inline double nats_to_bits(double nats) { return nats / 0.6931471805599453; }

// Shannon entropy of the marginal on target_axes, with 0*log 0 := 0.
double entropy(const JointDistribution& dist,
               const std::vector<std::string>& target_axes);

// Renyi entropy (1/(1-alpha)) log sum p^alpha of the marginal. Requires
// alpha > 0 and |alpha-1| > 1e-9; stable near alpha = 1.
double renyi_entropy(const JointDistribution& dist,
                     const std::vector<std::string>& target_axes, double alpha);

// H(target | given) = H(target, given) - H(given), clamped at 0.
double conditional_entropy(const JointDistribution& dist,
                           const std::vector<std::string>& target_axes,
                           const std::vector<std::string>& given_axes);

// KL(p || q) over identical axes. q = 0 where p > 0 is an explicit
// "infinite divergence" error, never a silent infinity.
double kl_divergence(const JointDistribution& p, const JointDistribution& q);

// I(a; b) = H(a) + H(b) - H(a,b), clamped at 0.
double mutual_information(const JointDistribution& dist,
                          const std::vector<std::string>& axes_a,
                          const std::vector<std::string>& axes_b);

// I(a; b | given) via the four-entropy form, clamped at 0.
double conditional_mutual_information(const JointDistribution& dist,
                                      const std::vector<std::string>& axes_a,
                                      const std::vector<std::string>& axes_b,
                                      const std::vector<std::string>& given_axes);

// TC over a partition of all axes: sum of block entropies minus the joint.
double total_correlation(const JointDistribution& dist,
                         const std::vector<std::vector<std::string>>& partition);

// Entropy of a bare probability vector (helper shared with sparse callers).
double entropy_of_probs(const std::vector<double>& probs);

}  // namespace mvgb
