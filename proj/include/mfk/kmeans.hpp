#ifndef MFK_KMEANS_HPP
#define MFK_KMEANS_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mfk/error.hpp"
#include "mfk/geometry.hpp"
#include "mfk/random.hpp"

namespace mfk {

using Point = std::vector<double>;

enum class SeedMode { TaskInterpolated, PlusPlus };

/// Object positions that anchor task-interpolated seeding.
struct TaskAnchors {
  Vec2 start;  ///< object position before the motion
  Vec2 goal;   ///< object position after the motion
};

struct ClusterModel {
  std::size_t k = 0;
  std::vector<Point> centroids;
  std::vector<std::size_t> assignments;
  double inertia = 0.0;
  /// Inertia after each assignment step, first to last.
  std::vector<double> inertia_history;
  std::size_t iterations = 0;
  SeedMode seed_mode = SeedMode::PlusPlus;

  std::vector<std::size_t> cluster_sizes() const {
    std::vector<std::size_t> sizes(k, 0);
    for (auto a : assignments) ++sizes[a];
    return sizes;
  }
};

inline constexpr std::size_t kMaxLloydIterations = 100;

inline double squared_distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

/// Index of the nearest centroid; ties go to the lowest index.
inline std::size_t nearest(const Point& p, const std::vector<Point>& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

inline std::size_t count_distinct(const std::vector<Point>& samples) {
  return std::set<Point>(samples.begin(), samples.end()).size();
}

namespace detail {

inline std::vector<Point> seed_plus_plus(const std::vector<Point>& samples, std::size_t k,
                                         Rng& rng) {
  std::vector<Point> centroids;
  centroids.push_back(samples[rng.index(samples.size())]);
  std::vector<double> d2(samples.size());
  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      d2[i] = squared_distance(samples[i], centroids[nearest(samples[i], centroids)]);
      total += d2[i];
    }
    const double pick = rng.uniform() * total;
    double acc = 0.0;
    std::size_t chosen = samples.size();
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (d2[i] == 0.0) continue;
      acc += d2[i];
      chosen = i;
      if (acc > pick) break;
    }
    centroids.push_back(samples[chosen]);
  }
  return centroids;
}

inline std::optional<std::vector<Point>> seed_interpolated(const TaskAnchors& anchors,
                                                           std::size_t k) {
  std::vector<Point> centroids;
  for (std::size_t i = 0; i < k; ++i) {
    const double s = k == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(k - 1);
    const Vec2 p = anchors.start + s * (anchors.goal - anchors.start);
    centroids.push_back({p.x, p.y});
  }
  if (count_distinct(centroids) < k) return std::nullopt;
  return centroids;
}

}  // namespace detail

/// Lloyd's k-means. Runs to an assignment fixpoint or kMaxLloydIterations.
/// Task-interpolated seeding is used only for 2-D samples with anchors and a
/// non-degenerate start-goal segment; otherwise seeded k-means++.
inline ClusterModel kmeans(const std::vector<Point>& samples, std::size_t k, SeedMode seeding,
                           std::uint64_t seed, const std::optional<TaskAnchors>& anchors = {}) {
  if (samples.empty() || k == 0) {
    throw Error(ErrorCode::TooFewSamples, "k-means needs samples and k >= 1");
  }
  const std::size_t dim = samples.front().size();
  for (const auto& s : samples) {
    if (s.size() != dim) throw Error(ErrorCode::ValidationError, "k-means samples differ in dimension");
  }
  const std::size_t distinct = count_distinct(samples);
  if (distinct < k) {
    throw Error(ErrorCode::TooFewSamples, std::to_string(distinct) + " distinct samples for k = " +
                                              std::to_string(k));
  }

  ClusterModel model;
  model.k = k;
  std::optional<std::vector<Point>> seeded;
  if (seeding == SeedMode::TaskInterpolated && anchors && dim == 2) {
    seeded = detail::seed_interpolated(*anchors, k);
  }
  if (seeded) {
    model.centroids = std::move(*seeded);
    model.seed_mode = SeedMode::TaskInterpolated;
  } else {
    Rng rng(seed);
    model.centroids = detail::seed_plus_plus(samples, k, rng);
    model.seed_mode = SeedMode::PlusPlus;
  }

  model.assignments.assign(samples.size(), k);
  for (std::size_t iter = 0; iter < kMaxLloydIterations; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const std::size_t c = nearest(samples[i], model.centroids);
      changed |= c != model.assignments[i];
      model.assignments[i] = c;
      inertia += squared_distance(samples[i], model.centroids[c]);
    }
    model.inertia = inertia;
    model.inertia_history.push_back(inertia);
    model.iterations = iter + 1;
    if (!changed || iter + 1 == kMaxLloydIterations) break;

    // Update step; an empty cluster keeps its centroid.
    std::vector<Point> sums(k, Point(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      auto& acc = sums[model.assignments[i]];
      for (std::size_t d = 0; d < dim; ++d) acc[d] += samples[i][d];
      ++counts[model.assignments[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t d = 0; d < dim; ++d) {
        model.centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
      }
    }
  }
  return model;
}

}  // namespace mfk

#endif  // MFK_KMEANS_HPP
