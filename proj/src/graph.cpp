#include "beepmis/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "beepmis/error.hpp"
#include "beepmis/rng.hpp"

namespace beepmis {

EdgeList Graph::edge_list() const {
  EdgeList out;
  out.reserve(m_);
  for (VertexId u = 0; u < n_; ++u)
    for (VertexId v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

Graph build_graph(uint32_t n, const EdgeList& edges) {
  Graph g;
  g.n_ = n;
  g.adj_.assign(n, {});
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n)
      fail(ErrorCode::ENDPOINT_OUT_OF_RANGE,
           "edge (" + std::to_string(u) + "," + std::to_string(v) + ") with n=" + std::to_string(n));
    if (u == v) fail(ErrorCode::SELF_LOOP, "vertex " + std::to_string(u));
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
  }
  for (VertexId v = 0; v < n; ++v) {
    auto& nb = g.adj_[v];
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
      fail(ErrorCode::DUPLICATE_EDGE, "at vertex " + std::to_string(v));
    g.m_ += nb.size();
  }
  g.m_ /= 2;
  return g;
}

namespace {

EdgeList path_edges(uint32_t n) {
  EdgeList e;
  for (VertexId v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return e;
}

EdgeList cycle_edges(uint32_t n) {
  EdgeList e = path_edges(n);
  if (n >= 3) e.emplace_back(0, n - 1);
  return e;
}

EdgeList clique_edges(uint32_t n) {
  EdgeList e;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return e;
}

EdgeList star_edges(uint32_t n) {
  EdgeList e;
  for (VertexId v = 1; v < n; ++v) e.emplace_back(0, v);
  return e;
}

EdgeList gnp_edges(uint32_t n, double p, uint64_t seed) {
  if (p < 0.0 || p > 1.0) fail(ErrorCode::INVALID_SPEC, "GNP requires p in [0,1]");
  const rng::Key key = rng::make_key(seed, rng::Stream::GraphGen);
  EdgeList e;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v)
      if (rng::bernoulli(key, u, v, p)) e.emplace_back(u, v);
  return e;
}

// Uniform random labeled tree via Pruefer sequence decode.
EdgeList random_tree_edges(uint32_t n, uint64_t seed) {
  EdgeList e;
  if (n < 2) return e;
  if (n == 2) {
    e.emplace_back(0, 1);
    return e;
  }
  const rng::Key key = rng::make_key(seed, rng::Stream::GraphGen);
  std::vector<VertexId> seq(n - 2);
  for (uint32_t i = 0; i < n - 2; ++i)
    seq[i] = static_cast<VertexId>(rng::uniform_below(key, i, 0, n));

  std::vector<uint32_t> deg(n, 1);
  for (VertexId s : seq) ++deg[s];
  uint32_t ptr = 0;
  while (deg[ptr] != 1) ++ptr;
  VertexId leaf = ptr;
  for (VertexId s : seq) {
    e.emplace_back(std::min(leaf, s), std::max(leaf, s));
    if (--deg[s] == 1 && s < ptr) {
      leaf = s;
    } else {
      ++ptr;
      while (deg[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  e.emplace_back(std::min(leaf, static_cast<VertexId>(n - 1)), std::max(leaf, static_cast<VertexId>(n - 1)));
  return e;
}

// Near-square grid covering exactly n vertices, 4-neighborhood, last row
// possibly partial.
EdgeList grid_edges(uint32_t n) {
  EdgeList e;
  if (n < 2) return e;
  const auto cols = static_cast<uint32_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  for (VertexId v = 0; v < n; ++v) {
    if ((v % cols) + 1 < cols && v + 1 < n) e.emplace_back(v, v + 1);
    if (v + cols < n) e.emplace_back(v, v + cols);
  }
  return e;
}

}  // namespace

Graph generate(const GraphFamilySpec& spec) {
  if (spec.n < 1) fail(ErrorCode::INVALID_SPEC, "n must be >= 1");
  switch (spec.family) {
    case GraphFamily::PATH: return build_graph(spec.n, path_edges(spec.n));
    case GraphFamily::CYCLE: return build_graph(spec.n, cycle_edges(spec.n));
    case GraphFamily::CLIQUE: return build_graph(spec.n, clique_edges(spec.n));
    case GraphFamily::STAR: return build_graph(spec.n, star_edges(spec.n));
    case GraphFamily::GNP: return build_graph(spec.n, gnp_edges(spec.n, spec.p, spec.seed));
    case GraphFamily::RANDOM_TREE: return build_graph(spec.n, random_tree_edges(spec.n, spec.seed));
    case GraphFamily::GRID: return build_graph(spec.n, grid_edges(spec.n));
  }
  fail(ErrorCode::INVALID_SPEC, "unknown family");
}

uint32_t max_degree(const Graph& g) {
  uint32_t best = 0;
  for (VertexId v = 0; v < g.n(); ++v) best = std::max(best, g.degree(v));
  return best;
}

uint32_t two_hop_max_degree(const Graph& g, VertexId v) {
  if (v >= g.n()) fail(ErrorCode::VERTEX_OUT_OF_RANGE, "vertex " + std::to_string(v));
  uint32_t best = g.degree(v);
  for (VertexId u : g.neighbors(v)) best = std::max(best, g.degree(u));
  return best;
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << g.n() << ' ' << g.m() << '\n';
  for (const auto& [u, v] : g.edge_list()) out << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& in) {
  uint64_t n = 0, m = 0;
  if (!(in >> n >> m)) fail(ErrorCode::PARSE, "missing 'n m' header");
  if (n > UINT32_MAX) fail(ErrorCode::PARSE, "n too large");
  EdgeList edges;
  edges.reserve(m);
  for (uint64_t i = 0; i < m; ++i) {
    uint64_t u = 0, v = 0;
    if (!(in >> u >> v)) fail(ErrorCode::PARSE, "expected " + std::to_string(m) + " edges, got " + std::to_string(i));
    if (u >= v) fail(ErrorCode::PARSE, "edge lines require u < v");
    edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
  }
  return build_graph(static_cast<uint32_t>(n), edges);
}

void write_edge_list_file(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IO, "cannot open " + path + " for writing");
  write_edge_list(g, out);
  if (!out) fail(ErrorCode::IO, "write failed for " + path);
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IO, "cannot open " + path);
  return read_edge_list(in);
}

const char* family_name(GraphFamily f) {
  switch (f) {
    case GraphFamily::PATH: return "path";
    case GraphFamily::CYCLE: return "cycle";
    case GraphFamily::CLIQUE: return "clique";
    case GraphFamily::STAR: return "star";
    case GraphFamily::GNP: return "gnp";
    case GraphFamily::RANDOM_TREE: return "random_tree";
    case GraphFamily::GRID: return "grid";
  }
  return "?";
}

GraphFamily family_from_name(const std::string& name) {
  if (name == "path") return GraphFamily::PATH;
  if (name == "cycle") return GraphFamily::CYCLE;
  if (name == "clique") return GraphFamily::CLIQUE;
  if (name == "star") return GraphFamily::STAR;
  if (name == "gnp") return GraphFamily::GNP;
  if (name == "random_tree") return GraphFamily::RANDOM_TREE;
  if (name == "grid") return GraphFamily::GRID;
  fail(ErrorCode::INVALID_SPEC, "unknown graph family '" + name + "'");
}

}  // namespace beepmis
