#pragma once

// Simplifying assumptions B, C, D and rooted-tree order conditions.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "sbp_time/butcher.hpp"
#include "sbp_time/linalg.hpp"

namespace sbp_time {

/// A rooted tree stored as the indices (into the owning forest) of the
/// subtrees attached to its root, in non-increasing order.
struct RootedTree {
  int order = 1;
  std::vector<std::size_t> children;
  double density = 1.0;  // gamma(t)
  double symmetry = 1.0;  // sigma(t)
  std::string notation;
};

/// All rooted trees up to `max_order`, sorted by order. Tree 0 is the single
/// node; a tree of order n is a root plus a multiset of smaller trees whose
/// orders sum to n - 1.
inline std::vector<RootedTree> rooted_trees(int max_order) {
  std::vector<RootedTree> forest;
  if (max_order < 1) return forest;
  forest.push_back({1, {}, 1.0, 1.0, "t"});

  for (int n = 2; n <= max_order; ++n) {
    const std::size_t existing = forest.size();
    std::vector<RootedTree> fresh;
    std::vector<std::size_t> chosen;
    // Children are listed with non-increasing index so every multiset is
    // produced once.
    std::function<void(int, std::size_t)> extend = [&](int remaining, std::size_t max_index) {
      if (remaining == 0) {
        RootedTree tree;
        tree.order = n;
        tree.children = chosen;
        tree.density = n;
        tree.symmetry = 1.0;
        tree.notation = "[";
        for (std::size_t k = 0; k < chosen.size(); ++k) {
          const auto& child = forest[chosen[k]];
          tree.density *= child.density;
          tree.symmetry *= child.symmetry;
          if (k > 0) tree.notation += ",";
          tree.notation += child.notation;
        }
        tree.notation += "]";
        // sigma picks up m! for each child repeated m times.
        for (std::size_t k = 0; k < chosen.size();) {
          std::size_t run = 1;
          while (k + run < chosen.size() && chosen[k + run] == chosen[k]) ++run;
          for (std::size_t f = 2; f <= run; ++f) tree.symmetry *= static_cast<double>(f);
          k += run;
        }
        fresh.push_back(std::move(tree));
        return;
      }
      for (std::size_t idx = std::min(max_index + 1, existing); idx-- > 0;) {
        if (forest[idx].order > remaining) continue;
        chosen.push_back(idx);
        extend(remaining - forest[idx].order, idx);
        chosen.pop_back();
      }
    };
    extend(n - 1, existing - 1);
    for (auto& tree : fresh) forest.push_back(std::move(tree));
  }
  return forest;
}

/// Stage vectors Phi_i(t) with b^T Phi(t) the elementary weight of t.
inline std::vector<Vector> stage_weights(const ButcherTableau& tab,
                                         const std::vector<RootedTree>& forest) {
  std::vector<Vector> phi;
  phi.reserve(forest.size());
  for (const auto& tree : forest) {
    Vector v = Vector::Ones(tab.stages());
    for (std::size_t child : tree.children) v = v.cwiseProduct(tab.A * phi[child]);
    phi.push_back(std::move(v));
  }
  return phi;
}

struct TreeCondition {
  std::string notation;
  int order;
  double elementary_weight;  // b^T Phi(t)
  double expected;           // 1 / gamma(t)
  double residual;
};

struct OrderReport {
  int B_order = 0;
  int C_order = 0;
  int D_order = 0;
  int butcher_bound = 0;
  int tree_order = 0;
  std::vector<double> B_residuals;  // entry q-1 is the residual of B at q
  std::vector<double> C_residuals;
  std::vector<double> D_residuals;
  std::vector<TreeCondition> tree_conditions;

  const TreeCondition* find_tree(const std::string& notation) const {
    for (const auto& t : tree_conditions) {
      if (t.notation == notation) return &t;
    }
    return nullptr;
  }
};

inline constexpr double kOrderConditionTolerance = 1e-9;
inline constexpr int kMaxTreeOrder = 6;

namespace detail {

/// Largest q such that residuals[0..q-1] are all within tolerance.
inline int leading_passes(const std::vector<double>& residuals) {
  int q = 0;
  while (q < static_cast<int>(residuals.size()) &&
         residuals[static_cast<std::size_t>(q)] <= kOrderConditionTolerance) {
    ++q;
  }
  return q;
}

}  // namespace detail

inline OrderReport order_report(const ButcherTableau& tab, int max_tree_order = kMaxTreeOrder) {
  OrderReport report;
  const Eigen::Index s = tab.stages();
  const Vector& b = tab.b;
  const Vector& c = tab.c;
  const Vector ones = Vector::Ones(s);

  // B(q): b^T c^(q-1) = 1/q
  for (int q = 1; q <= 2 * static_cast<int>(s) + 2; ++q) {
    report.B_residuals.push_back(std::abs(b.dot(linalg::pow(c, q - 1)) - 1.0 / q));
  }
  // C(q): A c^(q-1) = c^q / q
  for (int q = 1; q <= static_cast<int>(s) + 1; ++q) {
    report.C_residuals.push_back(
        linalg::max_abs(tab.A * linalg::pow(c, q - 1) - linalg::pow(c, q) / q));
  }
  // D(q): A^T B c^(q-1) = B (1 - c^q) / q
  const Matrix B = b.asDiagonal();
  for (int q = 1; q <= static_cast<int>(s) + 1; ++q) {
    report.D_residuals.push_back(linalg::max_abs(
        tab.A.transpose() * B * linalg::pow(c, q - 1) - B * (ones - linalg::pow(c, q)) / q));
  }
  report.B_order = detail::leading_passes(report.B_residuals);
  report.C_order = detail::leading_passes(report.C_residuals);
  report.D_order = detail::leading_passes(report.D_residuals);
  report.butcher_bound = std::min({report.B_order, 1 + report.C_order + report.D_order,
                                   2 + 2 * report.C_order});

  const auto forest = rooted_trees(max_tree_order);
  const auto phi = stage_weights(tab, forest);
  std::vector<bool> order_ok(static_cast<std::size_t>(max_tree_order) + 1, true);
  for (std::size_t k = 0; k < forest.size(); ++k) {
    const double weight = b.dot(phi[k]);
    const double expected = 1.0 / forest[k].density;
    const double residual = std::abs(weight - expected);
    report.tree_conditions.push_back({forest[k].notation, forest[k].order, weight, expected, residual});
    if (residual > kOrderConditionTolerance) order_ok[static_cast<std::size_t>(forest[k].order)] = false;
  }
  for (int p = 1; p <= max_tree_order && order_ok[static_cast<std::size_t>(p)]; ++p) report.tree_order = p;
  return report;
}

}  // namespace sbp_time
