#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace beepmis {

using VertexId = uint32_t;
using EdgeList = std::vector<std::pair<VertexId, VertexId>>;

// Immutable undirected simple graph; adjacency lists sorted ascending.
// Safe to share across concurrent runs once built.
class Graph {
 public:
  Graph() = default;

  uint32_t n() const { return n_; }
  uint64_t m() const { return m_; }
  const std::vector<VertexId>& neighbors(VertexId v) const { return adj_[v]; }
  uint32_t degree(VertexId v) const { return static_cast<uint32_t>(adj_[v].size()); }

  // All edges as (u, v) with u < v, sorted.
  EdgeList edge_list() const;

 private:
  friend Graph build_graph(uint32_t n, const EdgeList& edges);

  uint32_t n_ = 0;
  uint64_t m_ = 0;
  std::vector<std::vector<VertexId>> adj_;
};

// Rejects out-of-range endpoints, self-loops and duplicate edges.
Graph build_graph(uint32_t n, const EdgeList& edges);

enum class GraphFamily { PATH, CYCLE, CLIQUE, STAR, GNP, RANDOM_TREE, GRID };

struct GraphFamilySpec {
  GraphFamily family = GraphFamily::PATH;
  uint32_t n = 1;
  double p = 0.0;     // GNP only
  uint64_t seed = 0;  // GNP and RANDOM_TREE
};

// Deterministic for a fixed spec: repeated calls give byte-identical edge sets.
Graph generate(const GraphFamilySpec& spec);

uint32_t max_degree(const Graph& g);

// Max degree over v and its neighbors.
uint32_t two_hop_max_degree(const Graph& g, VertexId v);

// Edge-list text format: header "n m", then one "u v" line per edge, u < v.
void write_edge_list(const Graph& g, std::ostream& out);
Graph read_edge_list(std::istream& in);
void write_edge_list_file(const Graph& g, const std::string& path);
Graph read_edge_list_file(const std::string& path);

const char* family_name(GraphFamily f);
GraphFamily family_from_name(const std::string& name);

}  // namespace beepmis
