#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "mvgb/finite_info.hpp"

namespace mvgb {

// A maximal common part of an m-view joint: per-view maps from view symbols
// to component ids, agreeing almost surely, plus the achieved value in nats.
struct CommonPartLabeling {
  // labels[j][symbol] = component id; -1 for symbols pruned as null
  // (marginal probability below 1e-12).
  std::vector<std::vector<int>> labels;
  int component_count = 0;
  double value = 0.0;  // H(C), equal to I(X^(j); C) for deterministic parts
  std::vector<double> per_view_mi;
  // "exact" when certified within the requested search budget,
  // "approximate only" when the enumeration budget was exceeded and the
  // deterministic component construction was reported instead.
  std::string status = "exact";
};

// Gacs-Korner common information of a joint over m >= 2 view axes.
// Components are the connected components of the support hypergraph
// (view symbols joined whenever they co-occur with positive probability);
// ids are assigned in first-occurrence order of view-1 symbols.
CommonPartLabeling gk_common_information(const JointDistribution& joint);

// Multi-view common information max I(X^(j); C) over deterministic agreeing
// function tuples. Exhaustive enumeration when the tuple-space size fits the
// budget, otherwise the component construction (which attains the
// deterministic optimum). With allow_fallback = false, exceeding the budget
// yields status "approximate only" instead of a certified search.
CommonPartLabeling multiview_common_information(const JointDistribution& joint,
                                                std::uint64_t budget,
                                                bool allow_fallback = true);

// TC(C, U^1, ..., U^m) over the named axes (singleton blocks); zero iff the
// components are mutually independent.
double disentanglement_tc(const JointDistribution& joint,
                          const std::vector<std::string>& axis_names);

// Convenience: every axis of the joint as its own block.
double disentanglement_tc(const JointDistribution& joint);

}  // namespace mvgb
