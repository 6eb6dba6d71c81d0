#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace rnnlab {

enum class DatasetTask { conn, imm_mod, imm_z };

std::optional<DatasetTask> parse_dataset_task(std::string_view name);
std::string_view dataset_task_name(DatasetTask t);

/// One JSON object per line:
///   {"task", "tokens", "label" | "targets", "meta": {"n" | "T", "m", "q_k", "seed"}}
/// Instance i is drawn from child_seed(seed, i) with size uniform in [lo, hi].
struct DatasetConfig {
  DatasetTask task = DatasetTask::conn;
  std::size_t count = 1;
  std::size_t lo = 1;
  std::size_t hi = 1;
  std::uint64_t seed = 0;
  double bucket_p = 0.5;                 // conn
  std::uint64_t modulus = 5;             // imm-mod
  std::size_t query = 0;                 // imm-mod
  bool balanced = true;                  // conn and imm-z alternate labels
  std::optional<std::int64_t> clip;      // imm-z

  void validate() const;
};

/// Conn tokens are the compact form [s, t, i_1, j_1, …]; IMM tokens are the
/// header fields as decimal strings followed by row-major entries.
std::string dataset_line(const DatasetConfig& cfg, std::size_t index);
std::string generate_dataset(const DatasetConfig& cfg);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

struct DatasetAudit {
  std::size_t lines = 0;
  std::size_t mismatches = 0;
  std::size_t first_bad_line = 0;  // 1-based; 0 when none
};

/// Re-derives every label or target from the tokens alone with the oracles.
DatasetAudit audit_dataset(std::istream& in, std::optional<std::int64_t> clip = std::nullopt);

}  // namespace rnnlab
