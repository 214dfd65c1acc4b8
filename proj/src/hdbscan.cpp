#include "evchain/hdbscan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "evchain/math.hpp"

namespace evchain {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_points(const Mat& points) {
  if (points.empty()) return;
  std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw std::invalid_argument("points have inconsistent dimensions");
    for (double x : p) {
      if (!std::isfinite(x)) throw std::invalid_argument("points contain non-finite coordinates");
    }
  }
}

double lambda_of(double distance) { return distance > 0.0 ? 1.0 / distance : kInf; }

// Union-find with path halving.
struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Dendrogram node created by one single-linkage merge. Leaves are the input
// points 0..k-1; merge nodes take ids k..2k-2.
struct MergeNode {
  int left = -1;
  int right = -1;
  double distance = 0.0;
  int size = 1;
};

// Leaves under a dendrogram node.
void collect_points(const std::vector<MergeNode>& nodes, int node, int k, std::vector<int>& out) {
  std::vector<int> stack{node};
  while (!stack.empty()) {
    int current = stack.back();
    stack.pop_back();
    if (current < k) {
      out.push_back(current);
      continue;
    }
    stack.push_back(nodes[static_cast<std::size_t>(current)].left);
    stack.push_back(nodes[static_cast<std::size_t>(current)].right);
  }
}

}  // namespace

Mat pairwise_distances(const Mat& points) {
  std::size_t k = points.size();
  Mat dist(k, Vec(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      double d = euclidean(points[i], points[j]);
      dist[i][j] = d;
      dist[j][i] = d;
    }
  }
  return dist;
}

Vec core_distances(const Mat& distances, int min_samples) {
  if (min_samples < 1) throw std::invalid_argument("min_samples must be at least 1");
  std::size_t k = distances.size();
  Vec core(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (k == 1) break;
    Vec row;
    row.reserve(k - 1);
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) row.push_back(distances[i][j]);
    }
    std::size_t rank = std::min<std::size_t>(static_cast<std::size_t>(min_samples), row.size());
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(rank - 1), row.end());
    core[i] = row[rank - 1];
  }
  return core;
}

Mat mutual_reachability_matrix(const Mat& distances, const Vec& core) {
  std::size_t k = distances.size();
  Mat mreach(k, Vec(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      double d = std::max(distances[i][j], std::max(core[i], core[j]));
      mreach[i][j] = d;
      mreach[j][i] = d;
    }
  }
  return mreach;
}

std::vector<MstEdge> minimum_spanning_tree(const Mat& weights) {
  int k = static_cast<int>(weights.size());
  std::vector<MstEdge> edges;
  edges.reserve(static_cast<std::size_t>(k) * (k - 1) / 2);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      edges.push_back({i, j, weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const MstEdge& x, const MstEdge& y) {
    if (x.weight != y.weight) return x.weight < y.weight;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  DisjointSet components(k);
  std::vector<MstEdge> tree;
  tree.reserve(static_cast<std::size_t>(std::max(0, k - 1)));
  for (const auto& edge : edges) {
    if (components.find(edge.a) != components.find(edge.b)) {
      components.unite(edge.a, edge.b);
      tree.push_back(edge);
      if (static_cast<int>(tree.size()) == k - 1) break;
    }
  }
  return tree;
}

namespace {

// Single-linkage dendrogram from MST edges already in merge order.
std::vector<MergeNode> build_dendrogram(const std::vector<MstEdge>& mst, int k) {
  std::vector<MergeNode> nodes(static_cast<std::size_t>(2 * k - 1));
  for (int i = 0; i < k; ++i) nodes[static_cast<std::size_t>(i)] = MergeNode{-1, -1, 0.0, 1};
  // rep[c] = current dendrogram node for the component containing c
  DisjointSet components(k);
  std::vector<int> rep(static_cast<std::size_t>(k));
  std::iota(rep.begin(), rep.end(), 0);
  int next_id = k;
  for (const auto& edge : mst) {
    int ra = components.find(edge.a);
    int rb = components.find(edge.b);
    MergeNode node;
    node.left = rep[static_cast<std::size_t>(ra)];
    node.right = rep[static_cast<std::size_t>(rb)];
    node.distance = edge.weight;
    node.size = nodes[static_cast<std::size_t>(node.left)].size +
                nodes[static_cast<std::size_t>(node.right)].size;
    nodes[static_cast<std::size_t>(next_id)] = node;
    components.unite(ra, rb);
    rep[static_cast<std::size_t>(components.find(ra))] = next_id;
    ++next_id;
  }
  return nodes;
}

struct CondensedTree {
  std::vector<CondensedEntry> entries;
  int root = 0;
  int next_cluster = 0;
  std::vector<int> cluster_parent;  // indexed by cluster id - k
};

// Walk the dendrogram top-down. Children smaller than min_cluster_size fall
// out of the current condensed cluster; a split where both sides are large
// enough births two child clusters.
CondensedTree condense_tree(const std::vector<MergeNode>& nodes, int k, int min_cluster_size) {
  CondensedTree tree;
  tree.root = k;
  tree.next_cluster = k + 1;
  tree.cluster_parent.push_back(-1);  // root has no parent

  struct Item {
    int dendroexact;
    int cluster;
  };
  if (k < 2) return tree;
  std::vector<Item> stack{{2 * k - 2, tree.root}};
  while (!stack.empty()) {
    Item item = stack.back();
    stack.pop_back();
    int node_id = item.dendroexact;
    if (node_id < k) continue;  // lone point in a cluster; nothing to record
    const MergeNode& node = nodes[static_cast<std::size_t>(node_id)];
    double lambda = lambda_of(node.distance);
    int left = node.left;
    int right = node.right;
    int size_left = nodes[static_cast<std::size_t>(left)].size;
    int size_right = nodes[static_cast<std::size_t>(right)].size;

    bool left_big = size_left >= min_cluster_size;
    bool right_big = size_right >= min_cluster_size;
    if (left_big && right_big) {
      int cl = tree.next_cluster++;
      tree.cluster_parent.push_back(item.cluster);
      tree.entries.push_back({item.cluster, cl, lambda, size_left});
      int cr = tree.next_cluster++;
      tree.cluster_parent.push_back(item.cluster);
      tree.entries.push_back({item.cluster, cr, lambda, size_right});
      stack.push_back({left, cl});
      stack.push_back({right, cr});
    } else if (left_big) {
      std::vector<int> fallen;
      collect_points(nodes, right, k, fallen);
      std::sort(fallen.begin(), fallen.end());
      for (int p : fallen) tree.entries.push_back({item.cluster, p, lambda, 1});
      stack.push_back({left, item.cluster});
    } else if (right_big) {
      std::vector<int> fallen;
      collect_points(nodes, left, k, fallen);
      std::sort(fallen.begin(), fallen.end());
      for (int p : fallen) tree.entries.push_back({item.cluster, p, lambda, 1});
      stack.push_back({right, item.cluster});
    } else {
      std::vector<int> fallen;
      collect_points(nodes, left, k, fallen);
      collect_points(nodes, right, k, fallen);
      std::sort(fallen.begin(), fallen.end());
      for (int p : fallen) tree.entries.push_back({item.cluster, p, lambda, 1});
    }
  }
  return tree;
}

// Stability per condensed cluster: sum over departures of
// (lambda_departure - lambda_birth) * size.
std::vector<double> cluster_stabilities(const CondensedTree& tree, int k) {
  int clusters = tree.next_cluster - k;
  std::vector<double> birth(static_cast<std::size_t>(clusters), 0.0);
  for (const auto& e : tree.entries) {
    if (e.child >= k) birth[static_cast<std::size_t>(e.child - k)] = e.lambda;
  }
  std::vector<double> stability(static_cast<std::size_t>(clusters), 0.0);
  for (const auto& e : tree.entries) {
    std::size_t c = static_cast<std::size_t>(e.parent - k);
    double b = birth[c];
    if (std::isinf(e.lambda) && std::isinf(b)) continue;  // degenerate, contributes nothing
    stability[c] += (e.lambda - b) * static_cast<double>(e.size);
  }
  return stability;
}

std::vector<bool> select_excess_of_mass(const CondensedTree& tree, int k,
                                        std::vector<double> stability) {
  int clusters = tree.next_cluster - k;
  std::vector<std::vector<int>> children(static_cast<std::size_t>(clusters));
  for (int c = 1; c < clusters; ++c) {
    children[static_cast<std::size_t>(tree.cluster_parent[static_cast<std::size_t>(c)] - k)]
        .push_back(c + k);
  }
  std::vector<bool> selected(static_cast<std::size_t>(clusters), false);
  // Reverse topological: child ids always exceed their parent's.
  for (int c = clusters - 1; c >= 1; --c) {
    std::size_t ci = static_cast<std::size_t>(c);
    double subtree = 0.0;
    for (int child : children[ci]) subtree += stability[static_cast<std::size_t>(child - k)];
    if (!children[ci].empty() && subtree > stability[ci]) {
      stability[ci] = subtree;
      selected[ci] = false;
    } else {
      selected[ci] = true;
      // Deselect every descendant.
      std::vector<int> stack(children[ci]);
      while (!stack.empty()) {
        int d = stack.back();
        stack.pop_back();
        selected[static_cast<std::size_t>(d - k)] = false;
        for (int grandchild : children[static_cast<std::size_t>(d - k)]) {
          stack.push_back(grandchild);
        }
      }
    }
  }
  selected[0] = false;  // the root cluster of everything is never selected
  return selected;
}

std::vector<bool> select_leaves(const CondensedTree& tree, int k) {
  int clusters = tree.next_cluster - k;
  std::vector<bool> has_children(static_cast<std::size_t>(clusters), false);
  for (int c = 1; c < clusters; ++c) {
    has_children[static_cast<std::size_t>(tree.cluster_parent[static_cast<std::size_t>(c)] - k)] =
        true;
  }
  std::vector<bool> selected(static_cast<std::size_t>(clusters), false);
  for (int c = 1; c < clusters; ++c) {
    selected[static_cast<std::size_t>(c)] = !has_children[static_cast<std::size_t>(c)];
  }
  return selected;
}

}  // namespace

HdbscanResult hdbscan(const Mat& points, const HdbscanParams& params) {
  validate_points(points);
  if (params.min_cluster_size < 2) {
    throw std::invalid_argument("min_cluster_size must be at least 2");
  }
  if (params.min_samples < 1) throw std::invalid_argument("min_samples must be at least 1");

  int k = static_cast<int>(points.size());
  HdbscanResult result;
  result.labels.assign(static_cast<std::size_t>(k), kNoiseLabel);
  if (k == 0) return result;
  if (k < params.min_cluster_size) return result;

  Mat dist = pairwise_distances(points);
  Vec core = core_distances(dist, params.min_samples);
  Mat mreach = mutual_reachability_matrix(dist, core);
  std::vector<MstEdge> mst = minimum_spanning_tree(mreach);
  std::vector<MergeNode> dendrogram = build_dendrogram(mst, k);
  CondensedTree tree = condense_tree(dendrogram, k, params.min_cluster_size);
  result.condensed = tree.entries;

  int clusters = tree.next_cluster - k;
  std::vector<bool> selected;
  if (clusters <= 1) {
    // No substructure. All-identical points are one cluster; anything else
    // is noise.
    bool all_zero = true;
    for (int i = 0; i < k && all_zero; ++i) {
      for (int j = i + 1; j < k && all_zero; ++j) {
        if (dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0.0) {
          all_zero = false;
        }
      }
    }
    if (all_zero) {
      std::fill(result.labels.begin(), result.labels.end(), 0);
      result.num_clusters = 1;
    }
    return result;
  }
  if (params.leaf_extraction) {
    selected = select_leaves(tree, k);
  } else {
    selected = select_excess_of_mass(tree, k, cluster_stabilities(tree, k));
  }

  // Each point departed exactly one condensed cluster; it belongs to the
  // nearest selected ancestor of that cluster, if any.
  std::vector<int> fell_from(static_cast<std::size_t>(k), -1);
  for (const auto& e : tree.entries) {
    if (e.child < k) fell_from[static_cast<std::size_t>(e.child)] = e.parent;
  }
  std::vector<int> cluster_label(static_cast<std::size_t>(clusters), -1);
  int next_label = 0;
  for (int p = 0; p < k; ++p) {
    int c = fell_from[static_cast<std::size_t>(p)];
    while (c >= k && !selected[static_cast<std::size_t>(c - k)]) {
      c = tree.cluster_parent[static_cast<std::size_t>(c - k)];
    }
    if (c < k) continue;  // reached past the root: noise
    std::size_t ci = static_cast<std::size_t>(c - k);
    if (cluster_label[ci] < 0) cluster_label[ci] = next_label++;
    result.labels[static_cast<std::size_t>(p)] = cluster_label[ci];
  }
  result.num_clusters = next_label;
  return result;
}

std::vector<int> dbscan(const Mat& points, double eps, int min_pts) {
  validate_points(points);
  if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
  if (min_pts < 1) throw std::invalid_argument("min_pts must be at least 1");
  int k = static_cast<int>(points.size());
  Mat dist = pairwise_distances(points);

  std::vector<std::vector<int>> neighbors(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] <= eps) {
        neighbors[static_cast<std::size_t>(i)].push_back(j);  // includes i itself
      }
    }
  }
  std::vector<int> labels(static_cast<std::size_t>(k), kNoiseLabel);
  std::vector<bool> visited(static_cast<std::size_t>(k), false);
  int next_label = 0;
  for (int i = 0; i < k; ++i) {
    if (visited[static_cast<std::size_t>(i)]) continue;
    if (static_cast<int>(neighbors[static_cast<std::size_t>(i)].size()) < min_pts) continue;
    int label = next_label++;
    std::vector<int> queue{i};
    visited[static_cast<std::size_t>(i)] = true;
    labels[static_cast<std::size_t>(i)] = label;
    while (!queue.empty()) {
      int p = queue.back();
      queue.pop_back();
      if (static_cast<int>(neighbors[static_cast<std::size_t>(p)].size()) < min_pts) continue;
      for (int q : neighbors[static_cast<std::size_t>(p)]) {
        if (labels[static_cast<std::size_t>(q)] == kNoiseLabel) {
          labels[static_cast<std::size_t>(q)] = label;
        }
        if (!visited[static_cast<std::size_t>(q)]) {
          visited[static_cast<std::size_t>(q)] = true;
          queue.push_back(q);
        }
      }
    }
  }
  return labels;
}

}  // namespace evchain
