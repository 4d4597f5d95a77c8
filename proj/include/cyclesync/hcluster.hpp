#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cyclesync/error.hpp"

namespace cyclesync {

struct Merge {
  int left = 0;   // node ids: leaves 0..N-1, merge m creates node N+m
  int right = 0;  // left < right always
  double height = 0.0;
};

struct Dendrogram {
  int n_leaves = 0;
  std::vector<Merge> merges;
};

struct Clustering {
  std::vector<int> assignment;  // per leaf, cluster index 1..k
  int k = 0;
};

struct SilhouetteReport {
  std::vector<double> per_id;       // s_i
  std::vector<double> per_cluster;  // SC for cluster c at index c-1
  double global_mean = 0.0;
  double global_min = 0.0;
  bool single_cluster_warning = false;
};

enum class WardVariant { d2, d };

// Lance-Williams Ward update on squared dissimilarities (Ward.D2) or on the
// raw matrix (Ward.D).  Global minimum scan in row-major upper-triangle order,
// so ties go to the smallest (left, right) node-id pair.
template <typename Scalar>
Dendrogram ward_linkage(const Eigen::MatrixX<Scalar>& d, WardVariant variant = WardVariant::d2) {
  const int n = static_cast<int>(d.rows());
  require(n >= 1 && d.cols() == n, errc::bad_config, "dissimilarity matrix must be square");
  Dendrogram out;
  out.n_leaves = n;
  if (n == 1) return out;

  const int cap = 2 * n - 1;
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  Eigen::MatrixX<Scalar> e(cap, cap);
  e.setConstant(inf);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) e(i, j) = variant == WardVariant::d2 ? d(i, j) * d(i, j) : d(i, j);

  std::vector<bool> active(static_cast<std::size_t>(cap), false);
  std::vector<int> size(static_cast<std::size_t>(cap), 0);
  std::fill(active.begin(), active.begin() + n, true);
  std::fill(size.begin(), size.begin() + n, 1);

  int next = n;
  for (int step = 0; step < n - 1; ++step) {
    int bu = -1, bv = -1;
    Scalar best = inf;
    for (int u = 0; u < next; ++u) {
      if (!active[static_cast<std::size_t>(u)]) continue;
      for (int v = u + 1; v < next; ++v) {
        if (!active[static_cast<std::size_t>(v)]) continue;
        if (e(u, v) < best) {
          best = e(u, v);
          bu = u;
          bv = v;
        }
      }
    }
    require(bu >= 0, errc::internal, "ward scan found no active pair");
    const Scalar nu = Scalar(size[static_cast<std::size_t>(bu)]);
    const Scalar nv = Scalar(size[static_cast<std::size_t>(bv)]);
    for (int w = 0; w < next; ++w) {
      if (!active[static_cast<std::size_t>(w)] || w == bu || w == bv) continue;
      const Scalar nw = Scalar(size[static_cast<std::size_t>(w)]);
      const Scalar upd =
          ((nu + nw) * e(bu, w) + (nv + nw) * e(bv, w) - nw * e(bu, bv)) / (nu + nv + nw);
      e(next, w) = upd;
      e(w, next) = upd;
    }
    double height = variant == WardVariant::d2 ? std::sqrt(static_cast<double>(best))
                                               : static_cast<double>(best);
    out.merges.push_back(Merge{bu, bv, height});
    active[static_cast<std::size_t>(bu)] = false;
    active[static_cast<std::size_t>(bv)] = false;
    active[static_cast<std::size_t>(next)] = true;
    size[static_cast<std::size_t>(next)] =
        size[static_cast<std::size_t>(bu)] + size[static_cast<std::size_t>(bv)];
    ++next;
  }
  return out;
}

// Cut after n-k merges; clusters numbered 1..k by smallest member leaf.
inline Clustering cut(const Dendrogram& dendro, int k) {
  const int n = dendro.n_leaves;
  require(k >= 1 && k <= n, errc::bad_k,
          "k=" + std::to_string(k) + " outside 1..N=" + std::to_string(n));
  std::vector<std::vector<int>> members(static_cast<std::size_t>(2 * n - 1));
  for (int i = 0; i < n; ++i) members[static_cast<std::size_t>(i)] = {i};
  std::vector<bool> active(static_cast<std::size_t>(2 * n - 1), false);
  std::fill(active.begin(), active.begin() + n, true);
  for (int m = 0; m < n - k; ++m) {
    const Merge& mg = dendro.merges[static_cast<std::size_t>(m)];
    auto& dst = members[static_cast<std::size_t>(n + m)];
    dst = members[static_cast<std::size_t>(mg.left)];
    dst.insert(dst.end(), members[static_cast<std::size_t>(mg.right)].begin(),
               members[static_cast<std::size_t>(mg.right)].end());
    active[static_cast<std::size_t>(mg.left)] = false;
    active[static_cast<std::size_t>(mg.right)] = false;
    active[static_cast<std::size_t>(n + m)] = true;
  }
  std::vector<std::pair<int, int>> roots;  // (smallest member, node)
  for (int node = 0; node < 2 * n - 1; ++node)
    if (active[static_cast<std::size_t>(node)])
      roots.emplace_back(*std::min_element(members[static_cast<std::size_t>(node)].begin(),
                                           members[static_cast<std::size_t>(node)].end()),
                         node);
  std::sort(roots.begin(), roots.end());
  Clustering c;
  c.k = k;
  c.assignment.assign(static_cast<std::size_t>(n), 0);
  for (int ci = 0; ci < k; ++ci)
    for (int leaf : members[static_cast<std::size_t>(roots[static_cast<std::size_t>(ci)].second)])
      c.assignment[static_cast<std::size_t>(leaf)] = ci + 1;
  return c;
}

template <typename Scalar>
std::pair<Dendrogram, Clustering> ward_cluster(const Eigen::MatrixX<Scalar>& d, int k,
                                               WardVariant variant = WardVariant::d2) {
  Dendrogram dendro = ward_linkage(d, variant);
  return {dendro, cut(dendro, k)};
}

// s_i = (b_i - a_i)/max(a_i, b_i); singleton convention s_i = 0.
template <typename Scalar>
SilhouetteReport silhouette(const Eigen::MatrixX<Scalar>& d, const Clustering& clustering) {
  const int n = static_cast<int>(d.rows());
  require(static_cast<int>(clustering.assignment.size()) == n, errc::bad_config,
          "clustering does not cover the matrix");
  SilhouetteReport rep;
  rep.per_id.assign(static_cast<std::size_t>(n), 0.0);
  rep.per_cluster.assign(static_cast<std::size_t>(clustering.k), 0.0);
  rep.single_cluster_warning = clustering.k < 2;

  std::vector<std::vector<int>> members(static_cast<std::size_t>(clustering.k));
  for (int i = 0; i < n; ++i)
    members[static_cast<std::size_t>(clustering.assignment[static_cast<std::size_t>(i)] - 1)]
        .push_back(i);

  if (!rep.single_cluster_warning) {
    for (int i = 0; i < n; ++i) {
      const int own = clustering.assignment[static_cast<std::size_t>(i)] - 1;
      const auto& mine = members[static_cast<std::size_t>(own)];
      if (mine.size() <= 1) continue;  // singleton: s_i stays 0
      double a = 0.0;
      for (int j : mine)
        if (j != i) a += static_cast<double>(d(i, j));
      a /= static_cast<double>(mine.size() - 1);
      double b = std::numeric_limits<double>::infinity();
      for (int c = 0; c < clustering.k; ++c) {
        if (c == own || members[static_cast<std::size_t>(c)].empty()) continue;
        double m = 0.0;
        for (int j : members[static_cast<std::size_t>(c)]) m += static_cast<double>(d(i, j));
        m /= static_cast<double>(members[static_cast<std::size_t>(c)].size());
        b = std::min(b, m);
      }
      const double denom = std::max(a, b);
      rep.per_id[static_cast<std::size_t>(i)] = denom == 0.0 ? 0.0 : (b - a) / denom;
    }
  }

  double total = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (int c = 0; c < clustering.k; ++c) {
    double acc = 0.0;
    for (int i : members[static_cast<std::size_t>(c)]) acc += rep.per_id[static_cast<std::size_t>(i)];
    rep.per_cluster[static_cast<std::size_t>(c)] =
        members[static_cast<std::size_t>(c)].empty()
            ? 0.0
            : acc / static_cast<double>(members[static_cast<std::size_t>(c)].size());
  }
  for (int i = 0; i < n; ++i) {
    total += rep.per_id[static_cast<std::size_t>(i)];
    lo = std::min(lo, rep.per_id[static_cast<std::size_t>(i)]);
  }
  rep.global_mean = n > 0 ? total / n : 0.0;
  rep.global_min = n > 0 ? lo : 0.0;
  return rep;
}

struct CleanupResult {
  std::vector<int> retained;  // positions into the input matrix, ascending
  Clustering clustering;      // over retained, clusters renumbered 1..k'
  std::vector<int> removed;   // positions in removal order
};

// Iterate: score, stop when all s > kappa, else drop every id with s <= kappa
// at once, rescore on the submatrix; empty clusters reduce k.
template <typename Scalar>
CleanupResult silhouette_cleanup(const Eigen::MatrixX<Scalar>& d, const Clustering& clustering,
                                 double kappa) {
  require(kappa >= -1.0 && kappa < 1.0, errc::bad_config, "kappa must lie in [-1, 1)");
  const int n = static_cast<int>(d.rows());
  CleanupResult res;
  std::vector<int> ids(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
  std::vector<int> labels = clustering.assignment;

  for (;;) {
    require(!ids.empty(), errc::everything_removed, "silhouette cleanup removed every indicator");
    const int m = static_cast<int>(ids.size());
    Eigen::MatrixX<Scalar> sub(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        sub(a, b) = d(ids[static_cast<std::size_t>(a)], ids[static_cast<std::size_t>(b)]);
    // renumber surviving clusters 1..k', preserving numeric order
    std::vector<int> present;
    for (int i : ids) present.push_back(labels[static_cast<std::size_t>(i)]);
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    Clustering cur;
    cur.k = static_cast<int>(present.size());
    cur.assignment.resize(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) {
      int lab = labels[static_cast<std::size_t>(ids[static_cast<std::size_t>(a)])];
      cur.assignment[static_cast<std::size_t>(a)] = static_cast<int>(
          std::lower_bound(present.begin(), present.end(), lab) - present.begin() + 1);
    }
    SilhouetteReport rep = silhouette(sub, cur);
    bool all_above = true;
    for (double s : rep.per_id)
      if (s <= kappa) all_above = false;
    if (all_above) {
      res.retained = ids;
      res.clustering = cur;
      return res;
    }
    std::vector<int> keep;
    for (int a = 0; a < m; ++a) {
      if (rep.per_id[static_cast<std::size_t>(a)] <= kappa)
        res.removed.push_back(ids[static_cast<std::size_t>(a)]);
      else
        keep.push_back(ids[static_cast<std::size_t>(a)]);
    }
    ids.swap(keep);
  }
}

}  // namespace cyclesync
