#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rnnlab/datasets.hpp"
#include "rnnlab/lrnn.hpp"
#include "rnnlab/reports.hpp"
#include "rnnlab/verify.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kCounterexample = 1;
constexpr int kUsage = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RNNLAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "ignoring malformed RNNLAB_SEED\n";
    }
  }
  return 0;
}

int run_verify(const std::string& name, rnnlab::VerifyParams params) {
  const auto* c = rnnlab::find_construction(name);
  if (!c) {
    std::cerr << "unknown construction '" << name << "'; known:";
    for (const auto& k : rnnlab::verification_registry()) std::cerr << ' ' << k.name;
    std::cerr << '\n';
    return kUsage;
  }
  const auto out = rnnlab::run_construction(*c, params);
  std::cout << c->name << ": " << (out.passed() ? "pass" : "FAIL") << " (" << out.trials - out.failures << '/'
            << out.trials << " trials exact, seed " << params.seed << ")\n";
  if (!out.summary.empty()) std::cout << "  " << out.summary << '\n';
  if (!out.passed()) {
    std::cout << "first counterexample:\n" << out.counterexample << '\n';
    return kCounterexample;
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-arithmetic recurrent model laboratory"};
  app.require_subcommand(1);
  const std::uint64_t env_seed = default_seed();

  // verify
  auto* verify = app.add_subcommand("verify", "Check a construction against its oracle");
  std::string construction;
  rnnlab::VerifyParams vp;
  vp.seed = env_seed;
  bool list = false;
  verify->add_option("construction", construction, "Construction id");
  verify->add_flag("--list", list, "List construction ids");
  verify->add_option("--trials", vp.trials, "Number of trials")->check(CLI::PositiveNumber);
  verify->add_option("--seed", vp.seed, "Base seed (default: $RNNLAB_SEED or 0)");
  verify->add_option("--states", vp.states, "WFA states / machine states");
  verify->add_option("--len", vp.len, "Word or trace length");
  verify->add_option("--blocks", vp.blocks, "Matrices per IMM stream");
  verify->add_option("--nodes", vp.nodes, "Graph size");
  verify->add_option("--steps", vp.steps, "Stack machine steps");
  verify->add_option("--dim", vp.dim, "State dimension or stack count");

  // gen
  auto* gen = app.add_subcommand("gen", "Write a line-delimited JSON dataset");
  std::string task_name, out_path;
  rnnlab::DatasetConfig dc;
  dc.seed = env_seed;
  std::vector<std::size_t> size_range;
  bool unbalanced = false;
  std::optional<std::int64_t> clip;
  gen->add_option("task", task_name, "conn | imm-mod | imm-z")->required();
  gen->add_option("--count", dc.count, "Instances")->check(CLI::PositiveNumber);
  gen->add_option("--range", size_range, "Size range a,b (nodes or matrices)")->delimiter(',')->expected(2);
  gen->add_option("--seed", dc.seed, "Base seed (default: $RNNLAB_SEED or 0)");
  gen->add_option("--out", out_path, "Output path")->required();
  gen->add_option("--p", dc.bucket_p, "conn: bucket probability");
  gen->add_option("--modulus", dc.modulus, "imm-mod: prime modulus");
  gen->add_option("--query", dc.query, "imm-mod: queried entry, row-major 0..8");
  gen->add_option("--clip", clip, "imm-z: saturate intermediate entries at this magnitude");
  gen->add_flag("--unbalanced", unbalanced, "Draw labels freely instead of alternating");

  // report
  auto* report = app.add_subcommand("report", "Emit measurements as CSV");
  report->require_subcommand(1);
  auto* depth = report->add_subcommand("depth", "Scan depth against sequential steps");
  std::vector<std::size_t> n_list;
  std::string trace_path;
  std::size_t depth_dim = 2;
  std::uint64_t report_seed = env_seed;
  depth->add_option("--n-list", n_list, "Trace lengths")->delimiter(',');
  depth->add_option("--dim", depth_dim, "State dimension")->check(CLI::PositiveNumber);
  depth->add_option("--trace", trace_path, "Read a dumped trace instead of sampling");
  depth->add_option("--seed", report_seed, "Base seed");
  auto* precision = report->add_subcommand("precision", "Largest encoded value in an MLP RNN run");
  std::string precision_task = "conn";
  std::vector<std::size_t> p_list;
  precision->add_option("--task", precision_task, "conn | stack")->check(CLI::IsMember({"conn", "stack"}));
  precision->add_option("--n-list", p_list, "Input sizes")->delimiter(',');
  precision->add_option("--seed", report_seed, "Base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*verify) {
      if (list) {
        for (const auto& c : rnnlab::verification_registry()) {
          std::cout << c.name << "\t" << c.default_trials << " trials\t" << c.description << '\n';
        }
        return kPass;
      }
      if (construction.empty()) {
        std::cerr << "verify: missing construction id (try --list)\n";
        return kUsage;
      }
      return run_verify(construction, vp);
    }
    if (*gen) {
      const auto task = rnnlab::parse_dataset_task(task_name);
      if (!task) {
        std::cerr << "gen: unknown task '" << task_name << "'\n";
        return kUsage;
      }
      dc.task = *task;
      if (size_range.size() == 2) {
        dc.lo = size_range[0];
        dc.hi = size_range[1];
      } else {
        dc.lo = dc.hi = *task == rnnlab::DatasetTask::conn ? 16 : 10;
      }
      dc.balanced = !unbalanced;
      dc.clip = clip;
      try {
        dc.validate();
      } catch (const std::invalid_argument& e) {
        std::cerr << "gen: " << e.what() << '\n';
        return kUsage;
      }
      rnnlab::write_file_atomic(out_path, rnnlab::generate_dataset(dc));
      std::cout << "wrote " << dc.count << " " << task_name << " instances to " << out_path << '\n';
      return kPass;
    }
    if (*depth) {
      std::cout << "n,scan_depth,sequential_steps\n";
      std::vector<rnnlab::DepthRow> rows;
      if (!trace_path.empty()) {
        std::ifstream in(trace_path);
        if (!in) {
          std::cerr << "report depth: cannot read " << trace_path << '\n';
          return kUsage;
        }
        rows.push_back(rnnlab::depth_of_trace(rnnlab::parse_trace(in)));
      } else {
        if (n_list.empty()) n_list = {16, 64, 256, 1024};
        rows = rnnlab::depth_report(n_list, report_seed, depth_dim);
      }
      for (const auto& r : rows) std::cout << r.n << ',' << r.scan_depth << ',' << r.sequential_steps << '\n';
      return kPass;
    }
    if (*precision) {
      if (p_list.empty()) p_list = {16, 64, 256, 1024};
      std::cout << "n,tokens,max_value_bits\n";
      for (auto n : p_list) {
        const auto r = precision_task == "conn" ? rnnlab::conn_precision(n, report_seed)
                                                : rnnlab::stack_precision(n, report_seed);
        std::cout << r.n << ',' << r.tokens << ',' << r.max_value_bits << '\n';
      }
      return kPass;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
