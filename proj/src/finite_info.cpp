#include "mvgb/finite_info.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace mvgb {

namespace {

constexpr double kSumTolerance = 1e-9;
constexpr double kCancelTolerance = 1e-12;

// Negative values within cancellation noise of 0 are clamped; anything more
// negative indicates a caller bug and is rejected.
double clamp_cancellation(double x, const char* what) {
  if (x >= 0.0) return x;
  if (x >= -kCancelTolerance) return 0.0;
  std::ostringstream os;
  os << what << " came out negative (" << x << "), beyond cancellation noise";
  throw ValidationError(os.str());
}

std::vector<int> resolve_axes(const JointDistribution& dist,
                              const std::vector<std::string>& names) {
  if (names.empty()) throw ValidationError("axis set must be nonempty");
  std::vector<int> idx;
  idx.reserve(names.size());
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second)
      throw ValidationError("axis '" + n + "' listed twice");
    idx.push_back(dist.axis_index(n));
  }
  return idx;
}

void require_disjoint(const std::vector<std::string>& a,
                      const std::vector<std::string>& b, const char* what) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (x == y)
        throw ValidationError(std::string(what) + ": axis sets overlap on '" + x + "'");
}

}  // namespace

JointDistribution::JointDistribution(std::vector<Alphabet> axes,
                                     std::vector<double> probs, bool renormalize)
    : axes_(std::move(axes)), probs_(std::move(probs)) {
  if (axes_.empty()) throw ValidationError("distribution needs at least one axis");
  std::size_t expect = 1;
  std::set<std::string> names;
  for (const auto& a : axes_) {
    if (a.size < 1) throw ValidationError("axis '" + a.name + "' has size < 1");
    if (!names.insert(a.name).second)
      throw ValidationError("duplicate axis name '" + a.name + "'");
    if (expect > kMaxCells / static_cast<std::size_t>(a.size))
      throw ValidationError("product space exceeds the 1e7 dense-cell cap");
    expect *= static_cast<std::size_t>(a.size);
  }
  if (probs_.size() != expect) {
    std::ostringstream os;
    os << "tensor length " << probs_.size() << " != product of axis sizes " << expect;
    throw ValidationError(os.str());
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0))
      throw ValidationError("negative or non-finite probability entry");
    sum += p;
  }
  if (renormalize) {
    if (sum <= 0.0) throw ValidationError("cannot renormalize zero mass");
    for (double& p : probs_) p /= sum;
  } else if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os << "probabilities sum to " << sum
       << ", outside 1e-9 of 1 (pass renormalize to accept)";
    throw ValidationError(os.str());
  }
}

int JointDistribution::axis_index(const std::string& name) const {
  for (std::size_t i = 0; i < axes_.size(); ++i)
    if (axes_[i].name == name) return static_cast<int>(i);
  throw ValidationError("unknown axis '" + name + "'");
}

int JointDistribution::axis_size(const std::string& name) const {
  return axes_[static_cast<std::size_t>(axis_index(name))].size;
}

std::vector<double> JointDistribution::marginal_probs(
    const std::vector<std::string>& names) const {
  std::vector<int> keep = resolve_axes(*this, names);

  std::size_t out_cells = 1;
  for (int k : keep) out_cells *= static_cast<std::size_t>(axes_[k].size);

  // Stride of each kept axis inside the full row-major tensor, and inside
  // the reduced tensor (kept axes in the order listed).
  std::vector<std::size_t> full_stride(axes_.size(), 1);
  for (int i = static_cast<int>(axes_.size()) - 2; i >= 0; --i)
    full_stride[i] = full_stride[i + 1] * static_cast<std::size_t>(axes_[i + 1].size);
  std::vector<std::size_t> out_stride(keep.size(), 1);
  for (int i = static_cast<int>(keep.size()) - 2; i >= 0; --i)
    out_stride[i] = out_stride[i + 1] * static_cast<std::size_t>(axes_[keep[i + 1]].size);

  std::vector<double> out(out_cells, 0.0);
  for (std::size_t cell = 0; cell < probs_.size(); ++cell) {
    std::size_t reduced = 0;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      std::size_t digit = (cell / full_stride[keep[k]]) %
                          static_cast<std::size_t>(axes_[keep[k]].size);
      reduced += digit * out_stride[k];
    }
    out[reduced] += probs_[cell];
  }
  return out;
}

JointDistribution JointDistribution::marginal(
    const std::vector<std::string>& names) const {
  std::vector<Alphabet> out_axes;
  for (const auto& n : names) out_axes.push_back(axes_[axis_index(n)]);
  // Marginal sums can drift a hair past the tolerance; renormalizing a
  // marginal of a valid distribution is mass-preserving to fp noise.
  return JointDistribution(std::move(out_axes), marginal_probs(names), true);
}

double entropy_of_probs(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log(p);
  return clamp_cancellation(h, "entropy");
}

double entropy(const JointDistribution& dist,
               const std::vector<std::string>& target_axes) {
  return entropy_of_probs(dist.marginal_probs(target_axes));
}

double renyi_entropy(const JointDistribution& dist,
                     const std::vector<std::string>& target_axes, double alpha) {
  if (!(alpha > 0.0)) throw ValidationError("renyi alpha must be > 0");
  if (std::abs(alpha - 1.0) <= 1e-9)
    throw ValidationError("renyi alpha too close to 1; use entropy()");
  std::vector<double> p = dist.marginal_probs(target_axes);
  // sum p^alpha - 1 accumulated as sum p*expm1((alpha-1) log p), which stays
  // accurate when alpha is within 1e-4 of 1 (the H_{1-lambda} regime).
  double s = 0.0;
  for (double pi : p)
    if (pi > 0.0) s += pi * std::expm1((alpha - 1.0) * std::log(pi));
  double h = std::log1p(s) / (1.0 - alpha);
  return clamp_cancellation(h, "renyi entropy");
}

double conditional_entropy(const JointDistribution& dist,
                           const std::vector<std::string>& target_axes,
                           const std::vector<std::string>& given_axes) {
  require_disjoint(target_axes, given_axes, "conditional_entropy");
  std::vector<std::string> both = target_axes;
  both.insert(both.end(), given_axes.begin(), given_axes.end());
  double h = entropy(dist, both) - entropy(dist, given_axes);
  return clamp_cancellation(h, "conditional entropy");
}

double kl_divergence(const JointDistribution& p, const JointDistribution& q) {
  if (p.axes().size() != q.axes().size())
    throw ValidationError("kl_divergence: distributions have different axes");
  for (std::size_t i = 0; i < p.axes().size(); ++i)
    if (p.axes()[i].name != q.axes()[i].name || p.axes()[i].size != q.axes()[i].size)
      throw ValidationError("kl_divergence: distributions have different axes");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.cells(); ++i) {
    double pi = p.probs()[i], qi = q.probs()[i];
    if (pi <= 0.0) continue;
    if (qi <= 0.0) {
      std::ostringstream os;
      os << "infinite divergence: q has zero mass at cell " << i
         << " where p = " << pi;
      throw ValidationError(os.str());
    }
    kl += pi * std::log(pi / qi);
  }
  return clamp_cancellation(kl, "kl divergence");
}

double mutual_information(const JointDistribution& dist,
                          const std::vector<std::string>& axes_a,
                          const std::vector<std::string>& axes_b) {
  require_disjoint(axes_a, axes_b, "mutual_information");
  std::vector<std::string> ab = axes_a;
  ab.insert(ab.end(), axes_b.begin(), axes_b.end());
  double mi = entropy(dist, axes_a) + entropy(dist, axes_b) - entropy(dist, ab);
  return clamp_cancellation(mi, "mutual information");
}

double conditional_mutual_information(const JointDistribution& dist,
                                      const std::vector<std::string>& axes_a,
                                      const std::vector<std::string>& axes_b,
                                      const std::vector<std::string>& given_axes) {
  require_disjoint(axes_a, axes_b, "conditional_mutual_information");
  require_disjoint(axes_a, given_axes, "conditional_mutual_information");
  require_disjoint(axes_b, given_axes, "conditional_mutual_information");
  auto with_given = [&given_axes](std::vector<std::string> v) {
    v.insert(v.end(), given_axes.begin(), given_axes.end());
    return v;
  };
  std::vector<std::string> abg = axes_a;
  abg.insert(abg.end(), axes_b.begin(), axes_b.end());
  abg.insert(abg.end(), given_axes.begin(), given_axes.end());
  double cmi = entropy(dist, with_given(axes_a)) + entropy(dist, with_given(axes_b)) -
               entropy(dist, abg) - entropy(dist, given_axes);
  return clamp_cancellation(cmi, "conditional mutual information");
}

double total_correlation(const JointDistribution& dist,
                         const std::vector<std::vector<std::string>>& partition) {
  if (partition.size() < 2)
    throw ValidationError("total_correlation: partition needs >= 2 blocks");
  std::set<std::string> covered;
  std::size_t total = 0;
  for (const auto& block : partition) {
    if (block.empty()) throw ValidationError("total_correlation: empty block");
    for (const auto& n : block) {
      dist.axis_index(n);
      if (!covered.insert(n).second)
        throw ValidationError("total_correlation: axis '" + n + "' in two blocks");
      ++total;
    }
  }
  if (total != dist.axes().size())
    throw ValidationError("total_correlation: partition does not cover all axes");

  std::vector<std::string> all;
  for (const auto& a : dist.axes()) all.push_back(a.name);
  double tc = -entropy(dist, all);
  for (const auto& block : partition) tc += entropy(dist, block);
  return clamp_cancellation(tc, "total correlation");
}

}  // namespace mvgb
