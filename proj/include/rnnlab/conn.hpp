#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rnnlab/random.hpp"

namespace rnnlab {

class MalformedInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unary connectivity alphabet: BOS '$', unary mark '0', separator '|', end '#'.
enum class ConnToken : std::uint8_t { bos = 0, mark = 1, sep = 2, end = 3 };
inline constexpr std::size_t kConnAlphabet = 4;

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Deterministic graph on nodes [0, n] whose edges are listed by strictly
/// increasing source, each pointing forward (to >= from).
struct SortedConnInstance {
  std::size_t n = 0;
  std::size_t source = 0;
  std::size_t target = 0;
  std::vector<Edge> edges;

  /// Throws MalformedInstance describing the first violated condition.
  void validate() const;
  bool target_is_sink() const;
};

/// Follows the unique out-edge chain from the source; true iff it visits the target.
bool conn_oracle(const SortedConnInstance& inst);

/// $ 0^s | (0^i | 0^j |)* 0^t #
std::vector<ConnToken> encode_conn_unary(const SortedConnInstance& inst);
/// Inverse of encode_conn_unary. The node bound n is set to the largest id seen.
SortedConnInstance decode_conn_unary(std::span<const ConnToken> tokens);
std::string conn_tokens_str(std::span<const ConnToken> tokens);

/// Deterministic graph with arbitrary edge order on nodes [1, n].
struct DetGraph {
  std::size_t n = 0;
  std::vector<Edge> edges;
};

/// BFS reachability; independent of the sortedness machinery.
bool det_graph_reachable(const DetGraph& g, std::size_t s, std::size_t t);

/// Layered-copy reduction to a sorted instance. Requires every node to have at
/// most one out-edge and the target to have none.
SortedConnInstance reduce_to_sorted(const DetGraph& g, std::size_t s, std::size_t t);

/// Random deterministic graph on [1, n]; roughly `edge_p` of the nodes get an
/// out-edge to a uniform node, and the chosen target's out-edge is dropped.
struct DetConnQuery {
  DetGraph graph;
  std::size_t source = 1;
  std::size_t target = 1;
};
DetConnQuery random_det_query(Rng& rng, std::size_t n, double edge_p);

/// Two-bucket generator over nodes [0, n]: nodes 0 and n share a bucket iff
/// `positive`; every other node joins node 0's bucket with probability p.
/// Consecutive members of a bucket are chained. Query is 0 -> n.
SortedConnInstance gen_conn(Rng& rng, std::size_t n, double p, bool positive);

/// A random sorted instance with a sink target, for machine-level testing.
/// With probability 1/2 the target is taken from the source's chain.
SortedConnInstance random_sorted_instance(Rng& rng, std::size_t max_nodes);

}  // namespace rnnlab
