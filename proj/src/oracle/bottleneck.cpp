#include <algorithm>
#include <cmath>
#include <functional>

#include "geotop/oracle.hpp"

namespace geotop::oracle {

namespace {

bool has_perfect_matching(const std::vector<std::vector<double>>& cost, double limit) {
  const std::size_t n = cost.size();
  std::vector<int> match_right(n, -1);
  std::vector<char> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (cost[u][v] > limit || seen[v]) continue;
      seen[v] = 1;
      if (match_right[v] < 0 || augment(static_cast<std::size_t>(match_right[v]))) {
        match_right[v] = static_cast<int>(u);
        return true;
      }
    }
    return false;
  };
  for (std::size_t u = 0; u < n; ++u) {
    seen.assign(n, 0);
    if (!augment(u)) return false;
  }
  return true;
}

}  // namespace

double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim) {
  const auto pa = a.of_dim(dim);
  const auto pb = b.of_dim(dim);
  const std::size_t m = pa.size(), k = pb.size(), n = m + k;
  if (n == 0) return 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  // Rows: points of a, then diagonal copies of b's points.
  // Columns: points of b, then diagonal copies of a's points.
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      cost[i][j] = std::max(std::abs(pa[i].birth - pb[j].birth), std::abs(pa[i].death - pb[j].death));
    }
    cost[i][k + i] = pa[i].persistence() / 2.0;
  }
  for (std::size_t j = 0; j < k; ++j) {
    cost[m + j][j] = pb[j].persistence() / 2.0;
    for (std::size_t i = 0; i < m; ++i) cost[m + j][k + i] = 0.0;
  }
  std::vector<double> candidates;
  for (const auto& row : cost) {
    for (double c : row) {
      if (c < inf) candidates.push_back(c);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (has_perfect_matching(cost, candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

}  // namespace geotop::oracle
