#include "mvgb/common_info.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mvgb {

namespace {

constexpr double kNullMass = 1e-12;  // symbols below this marginal are pruned

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

struct SupportView {
  int m = 0;
  std::vector<int> sizes;              // per-view alphabet size
  std::vector<int> offset;             // node index base per view
  std::vector<std::vector<double>> marginal;
  std::vector<std::vector<bool>> pruned;
  std::vector<std::pair<std::vector<int>, double>> cells;  // positive, unpruned
};

SupportView scan_support(const JointDistribution& joint) {
  SupportView s;
  s.m = static_cast<int>(joint.axes().size());
  if (s.m < 2)
    throw ValidationError("common information needs at least 2 view axes");
  int base = 0;
  for (const auto& a : joint.axes()) {
    s.sizes.push_back(a.size);
    s.offset.push_back(base);
    base += a.size;
    s.marginal.emplace_back(a.size, 0.0);
  }
  std::vector<int> idx(static_cast<std::size_t>(s.m), 0);
  for (std::size_t cell = 0; cell < joint.cells(); ++cell) {
    double p = joint.probs()[cell];
    for (int j = 0; j < s.m; ++j) s.marginal[j][idx[j]] += p;
    if (p > 0.0) s.cells.emplace_back(idx, p);
    for (int k = s.m - 1; k >= 0; --k) {
      if (++idx[k] < s.sizes[k]) break;
      idx[k] = 0;
    }
  }
  for (int j = 0; j < s.m; ++j) {
    s.pruned.emplace_back();
    for (double p : s.marginal[j]) s.pruned.back().push_back(p < kNullMass);
  }
  std::erase_if(s.cells, [&s](const auto& cp) {
    for (int j = 0; j < s.m; ++j)
      if (s.pruned[j][cp.first[j]]) return true;
    return false;
  });
  return s;
}

double entropy_of_component_masses(const std::vector<double>& mass) {
  double total = 0.0;
  for (double v : mass) total += v;
  double h = 0.0;
  for (double v : mass)
    if (v > 0.0) h -= (v / total) * std::log(v / total);
  return std::max(h, 0.0);
}

}  // namespace

CommonPartLabeling gk_common_information(const JointDistribution& joint) {
  SupportView s = scan_support(joint);
  int nodes = s.offset.back() + s.sizes.back();
  UnionFind uf(nodes);
  for (const auto& [idx, p] : s.cells) {
    int anchor = s.offset[0] + idx[0];
    for (int j = 1; j < s.m; ++j) uf.join(s.offset[j] + idx[j], anchor);
  }

  CommonPartLabeling out;
  out.labels.assign(static_cast<std::size_t>(s.m), {});
  for (int j = 0; j < s.m; ++j)
    out.labels[j].assign(static_cast<std::size_t>(s.sizes[j]), -1);

  // Component ids in first-occurrence order of view-1 symbols.
  std::vector<int> root_to_id(static_cast<std::size_t>(nodes), -1);
  int next_id = 0;
  for (int x = 0; x < s.sizes[0]; ++x) {
    if (s.pruned[0][x]) continue;
    int r = uf.find(s.offset[0] + x);
    if (root_to_id[r] < 0) root_to_id[r] = next_id++;
  }
  out.component_count = next_id;
  for (int j = 0; j < s.m; ++j)
    for (int x = 0; x < s.sizes[j]; ++x) {
      if (s.pruned[j][x]) continue;
      int id = root_to_id[uf.find(s.offset[j] + x)];
      // a surviving symbol disconnected from view 1 gets its own component
      if (id < 0) id = root_to_id[uf.find(s.offset[j] + x)] = next_id++;
      out.labels[j][x] = id;
    }
  out.component_count = next_id;

  std::vector<double> mass(static_cast<std::size_t>(next_id), 0.0);
  for (const auto& [idx, p] : s.cells) mass[out.labels[0][idx[0]]] += p;
  out.value = entropy_of_component_masses(mass);
  out.per_view_mi.assign(static_cast<std::size_t>(s.m), out.value);
  out.status = "exact";
  return out;
}

CommonPartLabeling multiview_common_information(const JointDistribution& joint,
                                                std::uint64_t budget,
                                                bool allow_fallback) {
  SupportView s = scan_support(joint);
  CommonPartLabeling components = gk_common_information(joint);

  // Range never needs more values than the smallest view alphabet.
  int range = *std::min_element(s.sizes.begin(), s.sizes.end());
  long double space = 1.0L;
  for (int j = 0; j < s.m; ++j) space *= std::pow(static_cast<long double>(range), s.sizes[j]);
  if (space > static_cast<long double>(budget)) {
    if (!allow_fallback) components.status = "approximate only";
    return components;
  }

  // Exhaustive search over deterministic function tuples with a.s. agreement.
  int total_symbols = 0;
  for (int sz : s.sizes) total_symbols += sz;
  std::vector<int> f(static_cast<std::size_t>(total_symbols), 0);  // all views concatenated
  std::vector<int> best_f;
  double best_value = -1.0;
  for (;;) {
    bool agrees = true;
    for (const auto& [idx, p] : s.cells) {
      int c0 = f[static_cast<std::size_t>(s.offset[0] + idx[0])];
      for (int j = 1; j < s.m && agrees; ++j)
        agrees = f[static_cast<std::size_t>(s.offset[j] + idx[j])] == c0;
      if (!agrees) break;
    }
    if (agrees) {
      std::vector<double> mass(static_cast<std::size_t>(range), 0.0);
      for (const auto& [idx, p] : s.cells)
        mass[f[static_cast<std::size_t>(s.offset[0] + idx[0])]] += p;
      double value = entropy_of_component_masses(mass);
      // strict improvement keeps the lexicographically smallest maximizer
      if (value > best_value + 1e-15) {
        best_value = value;
        best_f = f;
      }
    }
    int k = total_symbols - 1;
    while (k >= 0 && f[static_cast<std::size_t>(k)] == range - 1) f[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
    ++f[static_cast<std::size_t>(k)];
  }

  // Relabel the winner into first-occurrence order of view-1 symbols.
  CommonPartLabeling out;
  out.labels.assign(static_cast<std::size_t>(s.m), {});
  std::vector<int> remap(static_cast<std::size_t>(range), -1);
  int next_id = 0;
  for (int j = 0; j < s.m; ++j)
    out.labels[j].assign(static_cast<std::size_t>(s.sizes[j]), -1);
  for (int pass = 0; pass < s.m; ++pass)
    for (int x = 0; x < s.sizes[pass]; ++x) {
      if (s.pruned[pass][x]) continue;
      int raw = best_f[static_cast<std::size_t>(s.offset[pass] + x)];
      if (remap[static_cast<std::size_t>(raw)] < 0) remap[static_cast<std::size_t>(raw)] = next_id++;
      out.labels[pass][x] = remap[static_cast<std::size_t>(raw)];
    }
  out.component_count = next_id;
  out.value = best_value;
  // I(X^(j); C) with C a deterministic function of each view: equals H(C);
  // computed per view as a consistency check on the equivalence claim.
  out.per_view_mi.assign(static_cast<std::size_t>(s.m), 0.0);
  for (int j = 0; j < s.m; ++j) {
    std::vector<double> mass(static_cast<std::size_t>(next_id), 0.0);
    for (const auto& [idx, p] : s.cells) mass[out.labels[j][idx[j]]] += p;
    out.per_view_mi[j] = entropy_of_component_masses(mass);
    if (std::abs(out.per_view_mi[j] - out.value) > 1e-12)
      throw ValidationError("per-view I(X;C) values disagree beyond 1e-12");
  }
  out.status = "exact";
  return out;
}

double disentanglement_tc(const JointDistribution& joint,
                          const std::vector<std::string>& axis_names) {
  if (axis_names.size() < 2)
    throw ValidationError("disentanglement_tc needs at least 2 axes");
  JointDistribution marg = joint.marginal(axis_names);
  std::vector<std::vector<std::string>> partition;
  for (const auto& n : axis_names) partition.push_back({n});
  return total_correlation(marg, partition);
}

double disentanglement_tc(const JointDistribution& joint) {
  std::vector<std::string> names;
  for (const auto& a : joint.axes()) names.push_back(a.name);
  return disentanglement_tc(joint, names);
}

}  // namespace mvgb
