#pragma once

#include <cstdint>
#include <vector>

namespace rvdom {

// Dinic max-flow on small graphs with 64-bit integer capacities.
class MaxFlow {
public:
  explicit MaxFlow(int n) : head_(n, -1), level_(n), it_(n) {}

  // Returns an edge id usable with flow_on after run().
  int add_edge(int u, int v, long long cap);
  long long run(int s, int t);
  long long flow_on(int id) const { return edges_[2 * id].init_cap - edges_[2 * id].cap; }

private:
  struct Edge {
    int to, next;
    long long cap, init_cap;
  };
  bool bfs(int s, int t);
  long long dfs(int u, int t, long long pushed);
  std::vector<Edge> edges_;
  std::vector<int> head_, level_, it_;
};

}  // namespace rvdom
