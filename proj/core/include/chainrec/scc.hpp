#pragma once

#include <cstdint>
#include <vector>

namespace chainrec {

/// Strongly connected components of a directed graph in CSR form.
/// Iterative Tarjan: one pass, no recursion, fine for multi-million-node
/// graphs. comp ids are assigned in reverse topological order.
struct SccResult {
  std::vector<int32_t> comp;       // node -> component id
  std::vector<int32_t> comp_size;  // component id -> node count
  int32_t count = 0;
};

template <typename EdgeFilter>
SccResult tarjan_scc(int32_t n, const std::vector<int32_t>& off,
                     const std::vector<int32_t>& to, EdgeFilter&& keep) {
  SccResult res;
  res.comp.assign(n, -1);
  std::vector<int32_t> low(n, 0), dfn(n, -1), stk, frame_node, frame_edge;
  std::vector<uint8_t> on_stack(n, 0);
  stk.reserve(1024);
  int32_t timer = 0;

  for (int32_t root = 0; root < n; ++root) {
    if (dfn[root] != -1) continue;
    frame_node.clear();
    frame_edge.clear();
    frame_node.push_back(root);
    frame_edge.push_back(off[root]);
    dfn[root] = low[root] = timer++;
    stk.push_back(root);
    on_stack[root] = 1;
    while (!frame_node.empty()) {
      const int32_t v = frame_node.back();
      int32_t& e = frame_edge.back();
      bool descended = false;
      while (e < off[v + 1]) {
        const int32_t idx = e++;
        if (!keep(idx)) continue;
        const int32_t w = to[idx];
        if (dfn[w] == -1) {
          dfn[w] = low[w] = timer++;
          stk.push_back(w);
          on_stack[w] = 1;
          frame_node.push_back(w);
          frame_edge.push_back(off[w]);
          descended = true;
          break;
        }
        if (on_stack[w] && dfn[w] < low[v]) low[v] = dfn[w];
      }
      if (descended) continue;
      if (low[v] == dfn[v]) {
        int32_t size = 0;
        int32_t w;
        do {
          w = stk.back();
          stk.pop_back();
          on_stack[w] = 0;
          res.comp[w] = res.count;
          ++size;
        } while (w != v);
        res.comp_size.push_back(size);
        ++res.count;
      }
      frame_node.pop_back();
      frame_edge.pop_back();
      if (!frame_node.empty()) {
        const int32_t parent = frame_node.back();
        if (low[v] < low[parent]) low[parent] = low[v];
      }
    }
  }
  return res;
}

}  // namespace chainrec
