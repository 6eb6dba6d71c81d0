#include "rnnlab/datasets.hpp"

#include <fstream>
#include <istream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"
#include "rnnlab/conn.hpp"
#include "rnnlab/imm.hpp"
#include "rnnlab/random.hpp"

namespace rnnlab {
namespace {

using nlohmann::json;

json matrix_tokens(const std::vector<IntMatrix3>& mats, json tokens) {
  for (const auto& a : mats) {
    for (const auto& row : a) {
      for (auto x : row) tokens.push_back(x);
    }
  }
  return tokens;
}

std::vector<IntMatrix3> parse_matrices(const json& tokens, std::size_t header, std::size_t blocks) {
  if (tokens.size() != header + 9 * blocks) throw std::invalid_argument("dataset: token count does not match T");
  std::vector<IntMatrix3> out(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t e = 0; e < 9; ++e) out[b][e / 3][e % 3] = tokens.at(header + 9 * b + e).get<std::int64_t>();
  }
  return out;
}

std::uint64_t parse_decimal(const json& token) { return std::stoull(token.get<std::string>()); }

// Unreduced big-integer prefix products, independent of the generators' arithmetic.
std::vector<std::array<std::array<mpz_class, 3>, 3>> exact_prefixes(const std::vector<IntMatrix3>& mats) {
  std::vector<std::array<std::array<mpz_class, 3>, 3>> out;
  std::array<std::array<mpz_class, 3>, 3> p;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) p[i][j] = i == j;
  }
  for (const auto& a : mats) {
    std::array<std::array<mpz_class, 3>, 3> q;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) q[i][j] += p[i][k] * a[k][j];
      }
    }
    p = q;
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace

std::optional<DatasetTask> parse_dataset_task(std::string_view name) {
  if (name == "conn") return DatasetTask::conn;
  if (name == "imm-mod") return DatasetTask::imm_mod;
  if (name == "imm-z") return DatasetTask::imm_z;
  return std::nullopt;
}

std::string_view dataset_task_name(DatasetTask t) {
  switch (t) {
    case DatasetTask::conn: return "conn";
    case DatasetTask::imm_mod: return "imm-mod";
    case DatasetTask::imm_z: return "imm-z";
  }
  return "?";
}

void DatasetConfig::validate() const {
  if (lo < 1 || hi < lo) throw std::invalid_argument("dataset: size range must satisfy 1 <= lo <= hi");
  if (task == DatasetTask::conn && !(bucket_p > 0.0 && bucket_p < 1.0)) {
    throw std::invalid_argument("dataset: bucket probability must lie in (0, 1)");
  }
  if (task == DatasetTask::imm_mod && !is_prime(modulus)) throw std::invalid_argument("dataset: modulus must be prime");
  if (task == DatasetTask::imm_mod && query >= 9) throw std::invalid_argument("dataset: query index must be in [0, 9)");
  if (clip && *clip < 0) throw std::invalid_argument("dataset: clip cap must be nonnegative");
}

std::string dataset_line(const DatasetConfig& cfg, std::size_t index) {
  const std::uint64_t seed = child_seed(cfg.seed, index);
  Rng rng(seed);
  const std::size_t size = cfg.lo + rng.index(cfg.hi - cfg.lo + 1);
  json line;
  line["task"] = std::string(dataset_task_name(cfg.task));
  switch (cfg.task) {
    case DatasetTask::conn: {
      const bool positive = cfg.balanced ? index % 2 == 0 : rng.bernoulli(0.5);
      const auto inst = gen_conn(rng, size, cfg.bucket_p, positive);
      json tokens = json::array({inst.source, inst.target});
      for (const auto& e : inst.edges) {
        tokens.push_back(e.from);
        tokens.push_back(e.to);
      }
      line["tokens"] = std::move(tokens);
      line["label"] = conn_oracle(inst) ? 1 : 0;
      line["meta"] = {{"n", size}, {"seed", seed}};
      break;
    }
    case DatasetTask::imm_mod: {
      const auto inst = gen_imm_mod(rng, size, cfg.modulus, cfg.query);
      line["tokens"] = matrix_tokens(inst.matrices, json::array({std::to_string(size), std::to_string(cfg.modulus),
                                                                 std::to_string(cfg.query)}));
      line["targets"] = imm_mod_oracle(inst);
      line["meta"] = {{"T", size}, {"m", cfg.modulus}, {"q_k", cfg.query}, {"seed", seed}};
      break;
    }
    case DatasetTask::imm_z: {
      const auto inst = cfg.balanced ? gen_imm_z_with_label(rng, size, index % 2 == 1, cfg.clip) : gen_imm_z(rng, size);
      line["tokens"] = matrix_tokens(inst.matrices, json::array({std::to_string(size)}));
      line["label"] = imm_z_oracle(inst, cfg.clip) ? 1 : 0;
      line["meta"] = {{"T", size}, {"seed", seed}};
      break;
    }
  }
  return line.dump();
}

std::string generate_dataset(const DatasetConfig& cfg) {
  cfg.validate();
  std::string out;
  for (std::size_t i = 0; i < cfg.count; ++i) {
    out += dataset_line(cfg, i);
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!f.flush()) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move dataset into " + path.string() + ": " + ec.message());
  }
}

DatasetAudit audit_dataset(std::istream& in, std::optional<std::int64_t> clip) {
  DatasetAudit audit;
  std::string text;
  while (std::getline(in, text)) {
    if (text.empty()) continue;
    ++audit.lines;
    bool ok = false;
    try {
      const json line = json::parse(text);
      const auto task = parse_dataset_task(line.at("task").get<std::string>());
      const json& tokens = line.at("tokens");
      if (task == DatasetTask::conn) {
        DetGraph g;
        g.n = line.at("meta").at("n").get<std::size_t>();
        const auto s = tokens.at(0).get<std::size_t>();
        const auto t = tokens.at(1).get<std::size_t>();
        for (std::size_t k = 2; k + 1 < tokens.size(); k += 2) {
          g.edges.push_back({tokens[k].get<std::size_t>(), tokens[k + 1].get<std::size_t>()});
        }
        ok = tokens.size() % 2 == 0 && line.at("label").get<int>() == (det_graph_reachable(g, s, t) ? 1 : 0);
      } else if (task == DatasetTask::imm_mod) {
        const auto blocks = parse_decimal(tokens.at(0));
        const mpz_class m(std::to_string(parse_decimal(tokens.at(1))));
        const auto q = parse_decimal(tokens.at(2));
        const auto mats = parse_matrices(tokens, 3, blocks);
        bool invertible = true;
        for (const auto& a : mats) invertible = invertible && det_mod(a, m.get_ui()) != 0;
        std::vector<std::int64_t> expect;
        for (const auto& p : exact_prefixes(mats)) {
          mpz_class r;
          mpz_fdiv_r(r.get_mpz_t(), p[q / 3][q % 3].get_mpz_t(), m.get_mpz_t());
          expect.push_back(r.get_si());
        }
        ok = invertible && line.at("targets").get<std::vector<std::int64_t>>() == expect;
      } else if (task == DatasetTask::imm_z) {
        ImmZInstance inst;
        inst.matrices = parse_matrices(tokens, 1, parse_decimal(tokens.at(0)));
        bool zero = true;
        if (clip) {
          zero = imm_z_oracle(inst, clip);
        } else if (!inst.matrices.empty()) {
          zero = exact_prefixes(inst.matrices).back()[0][0] == 0;
        }
        ok = line.at("label").get<int>() == (zero ? 1 : 0);
      }
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) {
      ++audit.mismatches;
      if (audit.first_bad_line == 0) audit.first_bad_line = audit.lines;
    }
  }
  return audit;
}

}  // namespace rnnlab
