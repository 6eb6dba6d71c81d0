#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace rnnlab {

/// Size knobs shared by every construction; 0 selects the construction's default.
struct VerifyParams {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t states = 0;
  std::size_t len = 0;
  std::size_t blocks = 0;
  std::size_t nodes = 0;
  std::size_t steps = 0;
  std::size_t dim = 0;
};

struct VerifyOutcome {
  std::size_t trials = 0;
  std::size_t failures = 0;
  /// Replayable description of the first failing trial: seed, inputs, and
  /// expected/actual values in canonical rational text.
  std::string counterexample;
  /// Construction-specific one-line summary (sizes, depths, timings).
  std::string summary;

  bool passed() const noexcept { return trials > 0 && failures == 0; }
};

struct Construction {
  std::string name;
  std::string description;
  std::size_t default_trials;
  std::function<VerifyOutcome(const VerifyParams&)> run;
};

const std::vector<Construction>& verification_registry();
/// nullptr for an unknown name.
const Construction* find_construction(std::string_view name);
VerifyOutcome run_construction(const Construction& c, VerifyParams p);

}  // namespace rnnlab
