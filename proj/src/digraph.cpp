#include "dextra/digraph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dextra/rng.hpp"

namespace dextra {

Digraph::Digraph(int n, const std::set<Edge>& edges) : n_(n) {
  if (n < 1) throw std::invalid_argument("digraph needs at least one node");
  in_.resize(n);
  out_.resize(n);
  edges_.reserve(edges.size());
  for (const auto& [i, j] : edges) {
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw std::invalid_argument("edge endpoint out of range");
    edges_.push_back({i, j});
    in_[i].push_back(j);
    out_[j].push_back(i);
  }
  for (int v = 0; v < n; ++v) {
    std::sort(in_[v].begin(), in_[v].end());
    std::sort(out_[v].begin(), out_[v].end());
    if (!std::binary_search(in_[v].begin(), in_[v].end(), v))
      throw std::invalid_argument("node " + std::to_string(v) +
                                  " is missing its self-loop");
  }
  // std::set iteration is already lexicographic; edges_ is sorted.
}

int Digraph::max_out_degree() const {
  int m = 0;
  for (int j = 0; j < n_; ++j) m = std::max(m, out_degree(j));
  return m;
}

bool Digraph::has_edge(int receiver, int sender) const {
  const auto& nb = in_[receiver];
  return std::binary_search(nb.begin(), nb.end(), sender);
}

namespace {

// BFS over an adjacency list; returns number of reachable nodes from 0.
int reach_count(const std::vector<std::vector<int>>& adj) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count;
}

}  // namespace

bool is_strongly_connected(const Digraph& g) {
  const int n = g.size();
  std::vector<std::vector<int>> fwd(n), rev(n);
  for (const auto& [i, j] : g.edges()) {
    fwd[j].push_back(i);  // j -> i along message flow
    rev[i].push_back(j);
  }
  return reach_count(fwd) == n && reach_count(rev) == n;
}

Digraph random_strongly_connected(int n, double extra_edge_prob,
                                  std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("digraph needs at least one node");
  if (extra_edge_prob < 0.0 || extra_edge_prob > 1.0)
    throw std::invalid_argument("extra_edge_prob must lie in [0, 1]");
  Rng rng(seed);

  std::set<Digraph::Edge> edges;
  for (int v = 0; v < n; ++v) edges.insert({v, v});

  std::vector<int> order(n);
  for (int v = 0; v < n; ++v) order[v] = v;
  rng.shuffle(order);
  for (int t = 0; t < n && n > 1; ++t) {
    const int sender = order[t];
    const int receiver = order[(t + 1) % n];
    edges.insert({receiver, sender});
  }

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool present = edges.count({i, j}) > 0;
      const double coin = rng.uniform();  // drawn unconditionally: the stream
                                          // does not depend on the cycle
      if (!present && coin < extra_edge_prob) edges.insert({i, j});
    }
  }
  return Digraph(n, edges);
}

Digraph random_balanced_strongly_connected(int n, int extra_cycles,
                                           std::uint64_t seed,
                                           int max_cycle_len) {
  if (n < 1) throw std::invalid_argument("digraph needs at least one node");
  if (extra_cycles < 0) throw std::invalid_argument("extra_cycles < 0");
  if (max_cycle_len <= 0 || max_cycle_len > n) max_cycle_len = n;
  max_cycle_len = std::max(max_cycle_len, 2);
  Rng rng(seed);

  std::set<Digraph::Edge> edges;
  for (int v = 0; v < n; ++v) edges.insert({v, v});

  std::vector<int> order(n);
  for (int v = 0; v < n; ++v) order[v] = v;
  rng.shuffle(order);
  for (int t = 0; t < n && n > 1; ++t)
    edges.insert({order[(t + 1) % n], order[t]});

  int committed = 0;
  int attempts = 0;
  const int max_attempts = 100 * (extra_cycles + 1);
  while (committed < extra_cycles && attempts < max_attempts && n > 2) {
    ++attempts;
    const int len = static_cast<int>(rng.uniform_int(2, max_cycle_len));
    std::vector<int> nodes(n);
    for (int v = 0; v < n; ++v) nodes[v] = v;
    rng.shuffle(nodes);
    nodes.resize(len);
    // Commit only if every edge of the candidate cycle is new; a partial
    // insert would break the in/out degree balance.
    bool fresh = true;
    for (int t = 0; t < len; ++t)
      if (edges.count({nodes[(t + 1) % len], nodes[t]})) fresh = false;
    if (!fresh) continue;
    for (int t = 0; t < len; ++t)
      edges.insert({nodes[(t + 1) % len], nodes[t]});
    ++committed;
  }
  return Digraph(n, edges);
}

void save_edge_list(const Digraph& g, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << g.size() << "\n";
  for (const auto& [i, j] : g.edges()) out << i << " " << j << "\n";
}

Digraph load_edge_list(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  int n = 0;
  if (!(in >> n)) throw std::runtime_error("bad edge list header in " + file.string());
  std::set<Digraph::Edge> edges;
  int i = 0, j = 0;
  while (in >> i >> j) edges.insert({i, j});
  return Digraph(n, edges);
}

}  // namespace dextra
