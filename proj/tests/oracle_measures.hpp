#pragma once
// Brute-force oracles for the information measures. These deliberately take
// the slow road: expand every cell into an explicit index tuple, marginalize
// through std::map keyed by tuples, and sum each measure term-by-term from
// its definition. Nothing here shares code with the library path it checks.
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "mvgb/finite_info.hpp"

namespace oracle {

using Tuple = std::vector<int>;
using Table = std::map<Tuple, double>;

// Full joint as tuple -> probability.
inline Table expand(const mvgb::JointDistribution& d) {
  Table t;
  std::size_t n_axes = d.axes().size();
  Tuple idx(n_axes, 0);
  for (std::size_t cell = 0; cell < d.cells(); ++cell) {
    t[idx] += d.probs()[cell];
    for (int k = static_cast<int>(n_axes) - 1; k >= 0; --k) {
      if (++idx[k] < d.axes()[k].size) break;
      idx[k] = 0;
    }
  }
  return t;
}

inline std::vector<int> positions(const mvgb::JointDistribution& d,
                                  const std::vector<std::string>& names) {
  std::vector<int> pos;
  for (const auto& n : names) pos.push_back(d.axis_index(n));
  return pos;
}

inline Table project(const Table& full, const std::vector<int>& pos) {
  Table out;
  for (const auto& [tuple, p] : full) {
    Tuple key;
    for (int k : pos) key.push_back(tuple[k]);
    out[key] += p;
  }
  return out;
}

inline double entropy_of(const Table& t) {
  double h = 0.0;
  for (const auto& [k, p] : t)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

inline double entropy(const mvgb::JointDistribution& d,
                      const std::vector<std::string>& names) {
  return entropy_of(project(expand(d), positions(d, names)));
}

inline double renyi_entropy(const mvgb::JointDistribution& d,
                            const std::vector<std::string>& names, double alpha) {
  double s = 0.0;
  for (const auto& [k, p] : project(expand(d), positions(d, names)))
    if (p > 0.0) s += std::pow(p, alpha);
  return std::log(s) / (1.0 - alpha);
}

// sum_{a,b} p(a,b) log(p(a,b) / (p(a) p(b))): a different algebraic route
// than the entropy-sum identity used by the library.
inline double mutual_information(const mvgb::JointDistribution& d,
                                 const std::vector<std::string>& a,
                                 const std::vector<std::string>& b) {
  Table full = expand(d);
  auto pa = positions(d, a), pb = positions(d, b);
  std::vector<int> pab = pa;
  pab.insert(pab.end(), pb.begin(), pb.end());
  Table ja = project(full, pa), jb = project(full, pb), jab = project(full, pab);
  double mi = 0.0;
  for (const auto& [k, p] : jab) {
    if (p <= 0.0) continue;
    Tuple ka(k.begin(), k.begin() + static_cast<long>(pa.size()));
    Tuple kb(k.begin() + static_cast<long>(pa.size()), k.end());
    mi += p * std::log(p / (ja.at(ka) * jb.at(kb)));
  }
  return mi;
}

// sum p(a,b,g) log( p(g) p(a,b,g) / (p(a,g) p(b,g)) ), term by term.
inline double conditional_mutual_information(const mvgb::JointDistribution& d,
                                             const std::vector<std::string>& a,
                                             const std::vector<std::string>& b,
                                             const std::vector<std::string>& g) {
  Table full = expand(d);
  auto pa = positions(d, a), pb = positions(d, b), pg = positions(d, g);
  auto cat = [](std::vector<int> x, const std::vector<int>& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  Table jag = project(full, cat(pa, pg));
  Table jbg = project(full, cat(pb, pg));
  Table jg = project(full, pg);
  Table jabg = project(full, cat(cat(pa, pb), pg));
  double cmi = 0.0;
  for (const auto& [k, p] : jabg) {
    if (p <= 0.0) continue;
    Tuple ka(k.begin(), k.begin() + static_cast<long>(pa.size()));
    Tuple kb(k.begin() + static_cast<long>(pa.size()),
             k.begin() + static_cast<long>(pa.size() + pb.size()));
    Tuple kg(k.begin() + static_cast<long>(pa.size() + pb.size()), k.end());
    cmi += p * std::log(jg.at(kg) * p / (jag.at(cat(ka, kg)) * jbg.at(cat(kb, kg))));
  }
  return cmi;
}

inline double kl_divergence(const mvgb::JointDistribution& p,
                            const mvgb::JointDistribution& q) {
  double kl = 0.0;
  for (std::size_t i = 0; i < p.cells(); ++i)
    if (p.probs()[i] > 0.0) kl += p.probs()[i] * std::log(p.probs()[i] / q.probs()[i]);
  return kl;
}

// KL(joint || product of block marginals), term by term.
inline double total_correlation(const mvgb::JointDistribution& d,
                                const std::vector<std::vector<std::string>>& blocks) {
  Table full = expand(d);
  std::vector<std::vector<int>> pos;
  std::vector<Table> margs;
  for (const auto& b : blocks) {
    pos.push_back(positions(d, b));
    margs.push_back(project(full, pos.back()));
  }
  double tc = 0.0;
  for (const auto& [k, p] : full) {
    if (p <= 0.0) continue;
    double prod = 1.0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      Tuple key;
      for (int c : pos[i]) key.push_back(k[c]);
      prod *= margs[i].at(key);
    }
    tc += p * std::log(p / prod);
  }
  return tc;
}

}  // namespace oracle
