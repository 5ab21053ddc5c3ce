#include <algorithm>
#include <stdexcept>

#include "specialists/clustering.hpp"
#include "specialists/confusion.hpp"

namespace specialists {

namespace {

void check_greedy_preconditions(const AnimosityMatrix& cm, int num_clusters) {
  const int c = static_cast<int>(cm.num_classes());
  if (cm.entries.rows() != cm.entries.cols()) {
    throw std::invalid_argument("animosity matrix must be square");
  }
  if (num_clusters < 1) {
    throw std::invalid_argument("cluster count must be positive");
  }
  if (c < 2 * num_clusters) {
    throw InfeasibleError("too many clusters for class count");
  }
}

struct Pair {
  int a;
  int b;
  double value;
};

/// All unordered pairs (a, b), a < b, sorted by descending animosity, ties
/// toward the lexicographically smallest pair.
std::vector<Pair> sorted_pairs(const AnimosityMatrix& cm) {
  const int c = static_cast<int>(cm.num_classes());
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(c) * (c - 1) / 2);
  for (int a = 0; a < c; ++a) {
    for (int b = a + 1; b < c; ++b) {
      pairs.push_back({a, b, cm.entries(a, b)});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& x, const Pair& y) { return x.value > y.value; });
  return pairs;
}

/// Index of the cluster with extremal score; ties toward the lowest index.
template <typename Score>
int pick_cluster(const std::vector<std::vector<int>>& clusters, bool argmin,
                 Score score) {
  int best = 0;
  double best_score = score(clusters[0]);
  for (std::size_t i = 1; i < clusters.size(); ++i) {
    const double s = score(clusters[i]);
    if (argmin ? s < best_score : s > best_score) {
      best = static_cast<int>(i);
      best_score = s;
    }
  }
  return best;
}

void insert_member(std::vector<int>& cluster, int cls) {
  auto pos = std::lower_bound(cluster.begin(), cluster.end(), cls);
  if (pos == cluster.end() || *pos != cls) cluster.insert(pos, cls);
}

}  // namespace

std::vector<std::pair<int, int>> init_pairs(const AnimosityMatrix& cm,
                                            int num_clusters) {
  check_greedy_preconditions(cm, num_clusters);
  const int c = static_cast<int>(cm.num_classes());
  std::vector<bool> touched(c, false);
  std::vector<std::pair<int, int>> seeds;
  seeds.reserve(num_clusters);
  const std::vector<Pair> pairs = sorted_pairs(cm);
  for (const Pair& p : pairs) {
    if (static_cast<int>(seeds.size()) == num_clusters) break;
    if (touched[p.a] || touched[p.b]) continue;
    touched[p.a] = touched[p.b] = true;
    seeds.emplace_back(p.a, p.b);
  }
  return seeds;
}

Clustering greedy_pairs(const AnimosityMatrix& cm, int num_clusters,
                        const GreedyOptions& opts) {
  const int c = static_cast<int>(cm.num_classes());
  const std::vector<std::pair<int, int>> seeds = init_pairs(cm, num_clusters);

  Clustering result;
  result.num_classes = c;
  result.overlapping = true;
  result.algorithm = to_string(Algorithm::greedy_pairs);

  std::vector<bool> assigned(c, false);
  int num_assigned = 0;
  for (const auto& [a, b] : seeds) {
    result.clusters.push_back({std::min(a, b), std::max(a, b)});
    assigned[a] = assigned[b] = true;
    num_assigned += 2;
  }

  // The remaining pairs, highest animosity first; seed pairs are consumed.
  // Every pair is popped at most once, including pairs whose classes are
  // already assigned (those still join a cluster and create overlap).
  std::vector<Pair> queue = sorted_pairs(cm);
  std::erase_if(queue, [&](const Pair& p) {
    return std::find(seeds.begin(), seeds.end(),
                     std::make_pair(p.a, p.b)) != seeds.end();
  });

  std::size_t next = 0;
  while (num_assigned < c) {
    const Pair p = queue[next++];
    const int target = pick_cluster(
        result.clusters, opts.argmin_cluster_choice,
        [&](const std::vector<int>& cluster) {
          return animosity(cm, p.a, cluster) + animosity(cm, p.b, cluster);
        });
    insert_member(result.clusters[target], p.a);
    insert_member(result.clusters[target], p.b);
    for (int cls : {p.a, p.b}) {
      if (!assigned[cls]) {
        assigned[cls] = true;
        ++num_assigned;
      }
    }
  }
  return result;
}

Clustering greedy_single(const AnimosityMatrix& cm, int num_clusters,
                         const GreedyOptions& opts) {
  const int c = static_cast<int>(cm.num_classes());
  const std::vector<std::pair<int, int>> seeds = init_pairs(cm, num_clusters);

  Clustering result;
  result.num_classes = c;
  result.overlapping = false;
  result.algorithm = to_string(Algorithm::greedy_single);

  std::vector<bool> assigned(c, false);
  std::vector<int> assigned_list;
  for (const auto& [a, b] : seeds) {
    result.clusters.push_back({std::min(a, b), std::max(a, b)});
    assigned[a] = assigned[b] = true;
    assigned_list.push_back(a);
    assigned_list.push_back(b);
  }

  while (static_cast<int>(assigned_list.size()) < c) {
    // The unassigned class with the largest total animosity toward the
    // classes assigned so far; ties toward the lowest class index.
    int next_class = -1;
    double best_score = 0.0;
    for (int x = 0; x < c; ++x) {
      if (assigned[x]) continue;
      double score = 0.0;
      for (int m : assigned_list) score += cm.entries(x, m);
      if (next_class < 0 || score > best_score) {
        next_class = x;
        best_score = score;
      }
    }
    const int target = pick_cluster(
        result.clusters, opts.argmin_cluster_choice,
        [&](const std::vector<int>& cluster) {
          return animosity(cm, next_class, cluster);
        });
    insert_member(result.clusters[target], next_class);
    assigned[next_class] = true;
    assigned_list.push_back(next_class);
  }
  return result;
}

Clustering cluster_classes(Algorithm algorithm, const AnimosityMatrix& cm,
                           int num_clusters, std::uint64_t seed,
                           const GreedyOptions& opts) {
  switch (algorithm) {
    case Algorithm::greedy_pairs:
      return greedy_pairs(cm, num_clusters, opts);
    case Algorithm::greedy_single:
      return greedy_single(cm, num_clusters, opts);
    case Algorithm::kmeans:
      return kmeans_clusters(cm, num_clusters, seed);
    case Algorithm::spectral:
      return spectral_clusters(cm, num_clusters, seed);
  }
  throw std::invalid_argument("unknown clustering algorithm");
}

}  // namespace specialists
