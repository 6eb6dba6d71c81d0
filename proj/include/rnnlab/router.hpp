#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rnnlab {

/// Router key at position t (1-based): t mod period and the last `width`
/// tokens, newest first. Positions before the stream are padding (nullopt).
template <class Token>
struct WindowKey {
  std::size_t phase = 0;
  std::vector<std::optional<Token>> recent;

  friend bool operator==(const WindowKey&, const WindowKey&) = default;
};

/// Maintains the key from the running prefix only.
template <class Token>
class WindowTracker {
 public:
  WindowTracker(std::size_t period, std::size_t width) : period_(period), width_(width) {
    if (period == 0 || width == 0) throw std::invalid_argument("window tracker: zero period or width");
  }

  void push(const Token& tok) {
    ++t_;
    recent_.push_front(tok);
    if (recent_.size() > width_) recent_.pop_back();
  }

  std::size_t position() const noexcept { return t_; }

  WindowKey<Token> key() const {
    WindowKey<Token> k;
    k.phase = t_ % period_;
    k.recent.assign(width_, std::nullopt);
    for (std::size_t i = 0; i < recent_.size(); ++i) k.recent[i] = recent_[i];
    return k;
  }

 private:
  std::size_t period_, width_;
  std::size_t t_ = 0;
  std::deque<Token> recent_;
};

/// Splits a key whose period is 2·block into the within-block offset τ in
/// [1, block], the tokens of the current block so far, and the previous block
/// (empty when it lies entirely in the padding).
template <class Token>
struct BlockView {
  std::size_t offset = 0;
  bool first_position = false;
  std::vector<Token> current;
  std::optional<std::vector<Token>> previous;
};

template <class Token>
BlockView<Token> split_blocks(const WindowKey<Token>& key, std::size_t block) {
  if (key.recent.size() < 2 * block) throw std::invalid_argument("router key narrower than two blocks");
  BlockView<Token> v;
  v.offset = (key.phase + 2 * block - 1) % block + 1;
  v.first_position = !key.recent[1].has_value();
  for (std::size_t i = v.offset; i-- > 0;) {
    if (!key.recent[i]) throw std::invalid_argument("router key: padding inside the current block");
    v.current.push_back(*key.recent[i]);
  }
  if (key.recent[v.offset].has_value()) {
    std::vector<Token> prev;
    for (std::size_t i = v.offset + block; i-- > v.offset;) {
      if (!key.recent[i]) throw std::invalid_argument("router key: partial previous block");
      prev.push_back(*key.recent[i]);
    }
    v.previous = std::move(prev);
  }
  return v;
}

}  // namespace rnnlab
