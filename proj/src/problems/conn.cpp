#include "rnnlab/conn.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace rnnlab {

void SortedConnInstance::validate() const {
  auto bad = [](const std::string& why) { throw MalformedInstance(why); };
  if (source > n || target > n) bad("source/target outside [0, n]");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    if (e.from > n || e.to > n) bad("edge " + std::to_string(k) + " references node outside [0, n]");
    if (e.to < e.from) bad("edge " + std::to_string(k) + " points backward");
    if (k > 0 && edges[k - 1].from >= e.from) bad("edge sources not strictly increasing at " + std::to_string(k));
  }
}

bool SortedConnInstance::target_is_sink() const {
  return std::none_of(edges.begin(), edges.end(), [&](const Edge& e) { return e.from == target; });
}

bool conn_oracle(const SortedConnInstance& inst) {
  inst.validate();
  std::map<std::size_t, std::size_t> next;
  for (const auto& e : inst.edges) next[e.from] = e.to;
  std::size_t cur = inst.source;
  while (true) {
    if (cur == inst.target) return true;
    auto it = next.find(cur);
    if (it == next.end() || it->second == cur) return false;
    cur = it->second;
  }
}

std::vector<ConnToken> encode_conn_unary(const SortedConnInstance& inst) {
  inst.validate();
  std::vector<ConnToken> out{ConnToken::bos};
  auto block = [&](std::size_t v, ConnToken closer) {
    out.insert(out.end(), v, ConnToken::mark);
    out.push_back(closer);
  };
  block(inst.source, ConnToken::sep);
  for (const auto& e : inst.edges) {
    block(e.from, ConnToken::sep);
    block(e.to, ConnToken::sep);
  }
  block(inst.target, ConnToken::end);
  return out;
}

SortedConnInstance decode_conn_unary(std::span<const ConnToken> tokens) {
  if (tokens.empty() || tokens.front() != ConnToken::bos) throw MalformedInstance("stream must start with BOS");
  std::vector<std::size_t> blocks;
  std::size_t run = 0;
  bool closed = false;
  for (std::size_t k = 1; k < tokens.size(); ++k) {
    if (closed) throw MalformedInstance("tokens after end marker");
    switch (tokens[k]) {
      case ConnToken::mark: ++run; break;
      case ConnToken::sep: blocks.push_back(run); run = 0; break;
      case ConnToken::end: blocks.push_back(run); run = 0; closed = true; break;
      case ConnToken::bos: throw MalformedInstance("BOS inside stream");
    }
  }
  if (!closed) throw MalformedInstance("missing end marker");
  if (blocks.size() % 2 != 0) throw MalformedInstance("unpaired edge block");
  SortedConnInstance inst;
  inst.source = blocks.front();
  inst.target = blocks.back();
  for (std::size_t k = 1; k + 1 < blocks.size(); k += 2) inst.edges.push_back({blocks[k], blocks[k + 1]});
  inst.n = *std::max_element(blocks.begin(), blocks.end());
  inst.validate();
  return inst;
}

std::string conn_tokens_str(std::span<const ConnToken> tokens) {
  static constexpr char glyph[] = {'$', '0', '|', '#'};
  std::string s;
  s.reserve(2 * tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    // runs of marks stay glued; everything else is space separated
    if (i && !(tokens[i] == ConnToken::mark && tokens[i - 1] == ConnToken::mark)) s += ' ';
    s += glyph[static_cast<int>(tokens[i])];
  }
  return s;
}

bool det_graph_reachable(const DetGraph& g, std::size_t s, std::size_t t) {
  std::vector<std::vector<std::size_t>> adj(g.n + 1);
  for (const auto& e : g.edges) adj.at(e.from).push_back(e.to);
  std::vector<bool> seen(g.n + 1, false);
  std::deque<std::size_t> q{s};
  seen.at(s) = true;
  while (!q.empty()) {
    auto u = q.front();
    q.pop_front();
    if (u == t) return true;
    for (auto v : adj[u]) {
      if (!seen.at(v)) {
        seen[v] = true;
        q.push_back(v);
      }
    }
  }
  return false;
}

SortedConnInstance reduce_to_sorted(const DetGraph& g, std::size_t s, std::size_t t) {
  const std::size_t n = g.n;
  if (s < 1 || s > n || t < 1 || t > n) throw MalformedInstance("source/target outside [1, n]");
  std::vector<bool> has_out(n + 1, false);
  for (const auto& e : g.edges) {
    if (e.from < 1 || e.from > n || e.to < 1 || e.to > n) throw MalformedInstance("edge outside [1, n]");
    if (has_out[e.from]) throw MalformedInstance("node " + std::to_string(e.from) + " has two out-edges");
    has_out[e.from] = true;
  }
  if (has_out[t]) throw MalformedInstance("target has an out-edge");

  const std::size_t m = g.edges.size();
  const std::size_t sink = (m + 1) * n + 1;
  SortedConnInstance out;
  out.n = sink;
  out.source = s;
  out.target = sink;
  for (std::size_t h = 0; h < m; ++h) {
    for (const auto& e : g.edges) out.edges.push_back({e.from + h * n, e.to + (h + 1) * n});
  }
  for (std::size_t h = 0; h <= m; ++h) out.edges.push_back({t + h * n, sink});
  std::sort(out.edges.begin(), out.edges.end(), [](const Edge& a, const Edge& b) { return a.from < b.from; });
  out.validate();
  return out;
}

DetConnQuery random_det_query(Rng& rng, std::size_t n, double edge_p) {
  DetConnQuery q;
  q.graph.n = n;
  q.source = 1 + rng.index(n);
  q.target = 1 + rng.index(n);
  for (std::size_t v = 1; v <= n; ++v) {
    const bool want = rng.bernoulli(edge_p);
    const std::size_t to = 1 + rng.index(n);
    if (want && v != q.target) q.graph.edges.push_back({v, to});
  }
  // Shuffle so the reduction has to sort.
  for (std::size_t k = q.graph.edges.size(); k > 1; --k) std::swap(q.graph.edges[k - 1], q.graph.edges[rng.index(k)]);
  return q;
}

SortedConnInstance gen_conn(Rng& rng, std::size_t n, double p, bool positive) {
  if (n < 1) throw std::invalid_argument("gen_conn: need n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gen_conn: p outside [0, 1]");
  std::vector<bool> in_first(n + 1);
  in_first[0] = true;
  for (std::size_t v = 1; v < n; ++v) in_first[v] = rng.bernoulli(p);
  in_first[n] = positive;

  SortedConnInstance inst;
  inst.n = n;
  inst.source = 0;
  inst.target = n;
  std::size_t last[2] = {0, 0};
  bool seen[2] = {false, false};
  for (std::size_t v = 0; v <= n; ++v) {
    const int b = in_first[v] ? 0 : 1;
    if (seen[b]) inst.edges.push_back({last[b], v});
    last[b] = v;
    seen[b] = true;
  }
  std::sort(inst.edges.begin(), inst.edges.end(), [](const Edge& a, const Edge& b) { return a.from < b.from; });
  inst.validate();
  return inst;
}

SortedConnInstance random_sorted_instance(Rng& rng, std::size_t max_nodes) {
  const std::size_t top = 1 + rng.index(std::max<std::size_t>(max_nodes, 2) - 1);
  SortedConnInstance inst;
  inst.n = top;
  inst.source = rng.index(top + 1);
  std::map<std::size_t, std::size_t> next;
  for (std::size_t v = 0; v < top; ++v) {
    if (rng.bernoulli(0.7)) next[v] = v + 1 + rng.index(top - v);
  }
  if (rng.bernoulli(0.5)) {
    std::vector<std::size_t> chain{inst.source};
    for (auto it = next.find(inst.source); it != next.end(); it = next.find(it->second)) chain.push_back(it->second);
    inst.target = chain[rng.index(chain.size())];
  } else {
    inst.target = rng.index(top + 1);
  }
  next.erase(inst.target);
  for (const auto& [from, to] : next) inst.edges.push_back({from, to});
  inst.validate();
  return inst;
}

}  // namespace rnnlab
