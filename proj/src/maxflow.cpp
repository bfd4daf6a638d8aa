#include "rvdom/maxflow.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace rvdom {

int MaxFlow::add_edge(int u, int v, long long cap) {
  int id = static_cast<int>(edges_.size());
  edges_.push_back({v, head_[u], cap, cap});
  head_[u] = id;
  edges_.push_back({u, head_[v], 0, 0});
  head_[v] = id + 1;
  return id / 2;
}

bool MaxFlow::bfs(int s, int t) {
  std::fill(level_.begin(), level_.end(), -1);
  std::deque<int> q{s};
  level_[s] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int e = head_[u]; e != -1; e = edges_[e].next)
      if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
        level_[edges_[e].to] = level_[u] + 1;
        q.push_back(edges_[e].to);
      }
  }
  return level_[t] >= 0;
}

long long MaxFlow::dfs(int u, int t, long long pushed) {
  if (u == t || pushed == 0) return pushed;
  long long total = 0;
  for (int& e = it_[u]; e != -1; e = edges_[e].next) {
    Edge& ed = edges_[e];
    if (ed.cap > 0 && level_[ed.to] == level_[u] + 1) {
      long long got = dfs(ed.to, t, std::min(pushed, ed.cap));
      if (got > 0) {
        ed.cap -= got;
        edges_[e ^ 1].cap += got;
        total += got;
        pushed -= got;
        if (pushed == 0) break;
      }
    }
  }
  if (total == 0) level_[u] = -1;
  return total;
}

long long MaxFlow::run(int s, int t) {
  long long flow = 0;
  while (bfs(s, t)) {
    it_ = head_;
    flow += dfs(s, t, std::numeric_limits<long long>::max());
  }
  return flow;
}

}  // namespace rvdom
