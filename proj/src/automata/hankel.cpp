#include "rnnlab/hankel.hpp"

#include <vector>

#include "rnnlab/conn.hpp"

namespace rnnlab {

RMatrix conn_hankel_block(std::size_t k) {
  RMatrix h(k, k);
  for (std::size_t s = 1; s <= k; ++s) {
    std::vector<ConnToken> prefix{ConnToken::bos};
    prefix.insert(prefix.end(), s, ConnToken::mark);
    prefix.push_back(ConnToken::sep);
    for (std::size_t t = 1; t <= k; ++t) {
      std::vector<ConnToken> word = prefix;
      word.insert(word.end(), t, ConnToken::mark);
      word.push_back(ConnToken::end);
      h(s - 1, t - 1) = conn_oracle(decode_conn_unary(word)) ? 1 : 0;
    }
  }
  return h;
}

std::size_t hankel_identity_rank(std::size_t k) { return rank(conn_hankel_block(k)); }

}  // namespace rnnlab
