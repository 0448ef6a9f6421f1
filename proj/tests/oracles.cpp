#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "edgewise/featurize.hpp"
#include "edgewise/metrics.hpp"

namespace oracle {

std::vector<std::pair<std::size_t, std::size_t>> knn_edges_brute_force(
    const edgewise::Dense& similarity, std::size_t k) {
  const std::size_t n = similarity.rows();
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> row;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row.emplace_back(similarity(i, j), j);
    }
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (std::size_t r = 0; r < k; ++r) {
      const std::size_t j = row[r].second;
      edges.emplace(std::min(i, j), std::max(i, j));
    }
  }
  return {edges.begin(), edges.end()};
}

std::vector<double> jacobi_eigen_symmetric(const std::vector<double>& matrix,
                                           std::size_t n,
                                           std::vector<std::vector<double>>& vectors_out) {
  std::vector<double> a = matrix;
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    }
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p * n + q]) < 1e-30) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * a[p * n + q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a[i * n + p];
          const double aiq = a[i * n + q];
          a[i * n + p] = c * aip - s * aiq;
          a[i * n + q] = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = a[p * n + i];
          const double aqi = a[q * n + i];
          a[p * n + i] = c * api - s * aqi;
          a[q * n + i] = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v[i * n + p];
          const double viq = v[i * n + q];
          v[i * n + p] = c * vip - s * viq;
          v[i * n + q] = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * n + x] > a[y * n + y];
  });
  std::vector<double> eigenvalues(n);
  vectors_out.assign(n, std::vector<double>(n));
  for (std::size_t r = 0; r < n; ++r) {
    eigenvalues[r] = a[order[r] * n + order[r]];
    for (std::size_t i = 0; i < n; ++i) vectors_out[r][i] = v[i * n + order[r]];
  }
  return eigenvalues;
}

std::size_t ct_window_count_brute_force(std::string_view sequence) {
  // Same class table as the shipped default, keyed the dumb way.
  auto group = [](char r) -> int {
    switch (r) {
      case 'A': case 'G': case 'V': return 1;
      case 'I': case 'L': case 'F': case 'P': return 2;
      case 'Y': case 'M': case 'T': case 'S': return 3;
      case 'H': case 'N': case 'Q': case 'W': return 4;
      case 'R': case 'K': return 5;
      case 'D': case 'E': return 6;
      case 'C': return 7;
      default: return 0;
    }
  };
  std::size_t count = 0;
  for (std::size_t i = 0; i + 2 < sequence.size(); ++i) {
    if (group(sequence[i]) != 0 && group(sequence[i + 1]) != 0 &&
        group(sequence[i + 2]) != 0) {
      ++count;
    }
  }
  return count;
}

double f1_max_dense_sweep(const std::vector<double>& scores,
                          const std::vector<int>& labels, double lo, double hi,
                          std::size_t steps) {
  double best = 0.0;
  for (std::size_t s = 0; s < steps; ++s) {
    const double tau =
        lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(steps - 1);
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const bool positive = scores[i] >= tau;
      if (positive && labels[i] == 1) ++tp;
      if (positive && labels[i] == 0) ++fp;
      if (!positive && labels[i] == 1) ++fn;
    }
    const double p = (tp + fp) == 0 ? 0.0 : double(tp) / double(tp + fp);
    const double r = (tp + fn) == 0 ? 0.0 : double(tp) / double(tp + fn);
    const double f1 = (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
    best = std::max(best, f1);
  }
  return best;
}

std::vector<double> softmax_brute_force(const std::vector<double>& row) {
  double denom = 0.0;
  for (double x : row) denom += std::exp(x);
  std::vector<double> out;
  out.reserve(row.size());
  for (double x : row) out.push_back(std::exp(x) / denom);
  return out;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace oracle
