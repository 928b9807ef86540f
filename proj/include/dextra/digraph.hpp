#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <utility>
#include <vector>

namespace dextra {

/// Directed communication topology. An edge (i, j) means agent j sends to
/// agent i. Every node carries a self-loop so that an agent always keeps a
/// share of its own mass when mixing; the constructor rejects edge sets
/// without them. Strong connectivity is not enforced here -- generators
/// guarantee it and is_strongly_connected() checks it.
class Digraph {
 public:
  using Edge = std::pair<int, int>;  // (receiver, sender)

  Digraph(int n, const std::set<Edge>& edges);

  int size() const { return n_; }
  /// Agents that send to i (always contains i itself). Sorted.
  const std::vector<int>& in_neighbors(int i) const { return in_[i]; }
  /// Agents that receive from j (always contains j itself). Sorted.
  const std::vector<int>& out_neighbors(int j) const { return out_[j]; }
  int in_degree(int i) const { return static_cast<int>(in_[i].size()); }
  int out_degree(int j) const { return static_cast<int>(out_[j].size()); }
  int max_out_degree() const;
  bool has_edge(int receiver, int sender) const;
  /// All edges, sorted lexicographically.
  const std::vector<Edge>& edges() const { return edges_; }

  bool operator==(const Digraph& other) const {
    return n_ == other.n_ && edges_ == other.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> in_;
  std::vector<std::vector<int>> out_;
};

/// True iff every node reaches every node along directed edges.
bool is_strongly_connected(const Digraph& g);

/// Random digraph that is strongly connected by construction: a random
/// Hamiltonian directed cycle, self-loops on all nodes, and every remaining
/// ordered pair included independently with probability extra_edge_prob.
/// Deterministic for a fixed seed. Rejects n = 0.
Digraph random_strongly_connected(int n, double extra_edge_prob,
                                  std::uint64_t seed);

/// Random strongly connected digraph in which every node has equal in- and
/// out-degree: a Hamiltonian directed cycle plus extra_cycles additional
/// directed cycles over random node subsets. Each committed cycle adds one
/// in- and one out-edge to every node on it, so the balance is exact while
/// the degree distribution stays irregular. Cycle lengths are drawn from
/// [2, max_cycle_len] (0 means n); length-2 cycles are symmetric chords,
/// which keep the weight spectrum close to the real axis.
Digraph random_balanced_strongly_connected(int n, int extra_cycles,
                                           std::uint64_t seed,
                                           int max_cycle_len = 0);

/// Plain text edge list: first line "n", then one "i j" pair per line
/// (meaning j sends to i), sorted for diffability. Indices are 0-based.
void save_edge_list(const Digraph& g, const std::filesystem::path& file);
Digraph load_edge_list(const std::filesystem::path& file);

}  // namespace dextra
