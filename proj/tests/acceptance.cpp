// One PASS/FAIL line per acceptance criterion. Oracles here are written
// against plain data (edge lists, mpz matrices, explicit bit stacks) rather
// than the library's own reference functions wherever that is practical.
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rnnlab/conn.hpp"
#include "rnnlab/counter_machine.hpp"
#include "rnnlab/datasets.hpp"
#include "rnnlab/deltanet_gadgets.hpp"
#include "rnnlab/dwfa_pd.hpp"
#include "rnnlab/hankel.hpp"
#include "rnnlab/imm.hpp"
#include "rnnlab/lrnn.hpp"
#include "rnnlab/mlp_rnn.hpp"
#include "rnnlab/pd.hpp"
#include "rnnlab/reports.hpp"
#include "rnnlab/rwkv_gadgets.hpp"
#include "rnnlab/stack_machine.hpp"
#include "rnnlab/wfa.hpp"

using namespace rnnlab;
using json = nlohmann::json;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

// ---------- plain oracles ----------

std::vector<Rational> wfa_prefixes(const Wfa& a, const Word& w) {
  std::vector<Rational> out;
  std::vector<Rational> row(a.initial.begin(), a.initial.end());
  auto value = [&] {
    Rational v;
    for (std::size_t i = 0; i < row.size(); ++i) v += row[i] * a.final[i];
    return v;
  };
  out.push_back(value());
  for (auto s : w) {
    std::vector<Rational> next(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i].is_zero()) continue;
      for (std::size_t j = 0; j < row.size(); ++j) next[j] += row[i] * a.transitions[s](i, j);
    }
    row = std::move(next);
    out.push_back(value());
  }
  return out;
}

using ZMatrix = std::array<std::array<mpz_class, 3>, 3>;

ZMatrix z_product(std::span<const Rational> stream) {
  ZMatrix p{};
  for (int i = 0; i < 3; ++i) p[i][i] = 1;
  for (std::size_t b = 0; b < stream.size(); b += 9) {
    ZMatrix next{};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) next[i][j] += p[i][k] * stream[b + 3 * k + j].num();
      }
    }
    p = next;
  }
  return p;
}

bool bfs(std::size_t n, const std::vector<Edge>& edges, std::size_t s, std::size_t t) {
  std::vector<std::vector<std::size_t>> adj(n + 1);
  for (const auto& e : edges) adj[e.from].push_back(e.to);
  std::vector<char> seen(n + 1, 0);
  std::deque<std::size_t> q{s};
  seen[s] = 1;
  while (!q.empty()) {
    const auto v = q.front();
    q.pop_front();
    if (v == t) return true;
    for (auto u : adj[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        q.push_back(u);
      }
    }
  }
  return false;
}

Word symbols_of(const std::vector<ConnToken>& toks) {
  Word w;
  w.reserve(toks.size());
  for (auto t : toks) w.push_back(static_cast<std::size_t>(t));
  return w;
}

// Explicit-list stack encoding: empty is 1, pushing v gives v + s/2.
Rational encode_stack(const std::vector<bool>& bits) {
  Rational s(1);
  for (bool b : bits) s = Rational(b ? 1 : 0) + s * Rational(1, 2);
  return s;
}

std::size_t ceil_log2(std::size_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }

Rational half_weight(Rng& rng) { return Rational(rng.uniform(-2, 2), 2); }

// ---------- criteria ----------

Verdict wfa_rwkv() {
  Verdict v;
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.index(3), sigma = 1 + rng.index(3);
    const Wfa a = random_wfa(rng, n, sigma);
    const RwkvWfaNet net(a);
    const Word w = random_word(rng, sigma, 1 + rng.index(12 * n));
    const auto want = wfa_prefixes(a, w);
    const auto got = rwkv_wfa_forward(net, w);
    for (std::size_t t = 0; t < w.size(); ++t) {
      if (got[t] != want[t + 1]) v.fail("trial " + std::to_string(trial) + " prefix " + std::to_string(t + 1));
    }
  }
  return v;
}

Verdict wfa_deltanet() {
  Verdict v;
  Rng rng(102);
  if (DnetWfaNet(random_wfa(rng, 1, 1)).block() != 14) v.fail("block length at n=1");
  if (DnetWfaNet(random_wfa(rng, 2, 1)).block() != 43) v.fail("block length at n=2");
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.index(3), sigma = 1 + rng.index(3);
    const Wfa a = random_wfa(rng, n, sigma);
    const DnetWfaNet net(a);
    const std::size_t m = net.block();
    const Word w = random_word(rng, sigma, 2 * m + 1 + rng.index(m));
    const auto want = wfa_prefixes(a, w);
    const auto got = dnet_wfa_forward(net, w);
    for (std::size_t t = 0; t < w.size(); ++t) {
      if (got[t] != want[t + 1]) v.fail("trial " + std::to_string(trial) + " prefix " + std::to_string(t + 1));
    }
  }
  return v;
}

Verdict imm_constants() {
  Verdict v;
  if (apply_matrix_program(RMatrix::identity(9)).steps.size() != 694) v.fail("program length is not 694");
  if (8 * 81 + 5 * 9 + 1 != 694) v.fail("arithmetic");
  const DnetImmNet net;
  const auto f = net.superblock_factors(RMatrix::identity(3));
  if (f.size() != 702 || DnetImmNet::kTokens != 702) v.fail("superblock is not 702 tokens");
  std::size_t pads = 0;
  for (std::size_t k = 694; k < f.size(); ++k) pads += h_matrix(f[k]) == RMatrix::identity(19);
  if (pads != 8 || DnetImmNet::kPads != 8) v.fail("expected 8 identity pads");
  return v;
}

Verdict imm_correctness() {
  Verdict v;
  Rng rng(104);
  auto check = [&](const RMatrix& got, std::span<const Rational> stream, const std::string& label) {
    const auto want = z_product(stream);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (got(i, j).den() != 1 || got(i, j).num() != want[i][j]) v.fail(label + " entry mismatch");
      }
    }
    if ((got(0, 0).sign() > 0) != (sgn(want[0][0]) > 0)) v.fail(label + " sign mismatch");
  };
  auto stream_of = [&](std::size_t blocks) {
    std::vector<Rational> s(9 * blocks);
    for (auto& x : s) x = Rational(rng.uniform(-1, 1));
    return s;
  };
  const RwkvImmNet rwkv;
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = stream_of(1 + rng.index(20));
    check(rwkv_imm_forward(rwkv, s), s, "rwkv trial " + std::to_string(trial));
  }
  const DnetImmNet dnet;
  for (std::size_t blocks : {1u, 78u, 100u, 156u}) {
    const auto s = stream_of(blocks);
    check(dnet_imm_forward(dnet, s), s, "deltanet N=" + std::to_string(blocks));
  }
  return v;
}

Verdict transvection() {
  Verdict v;
  const auto f = unit_transvection(0, 1, 2);
  // H(2, e1+e2), H(1/2, e1), H(1/3, e1+2e2)
  const RMatrix h1{{-1, -2}, {-2, -1}};
  const RMatrix h2{{Rational(1, 2), 0}, {0, 1}};
  const RMatrix h3{{Rational(2, 3), Rational(-2, 3)}, {Rational(-2, 3), Rational(-1, 3)}};
  if (h_matrix(f[0]) != h1 || h_matrix(f[1]) != h2 || h_matrix(f[2]) != h3) v.fail("factor matrices differ");
  if (h1 * h2 * h3 != RMatrix{{1, 1}, {0, 1}}) v.fail("product is not [[1,1],[0,1]]");
  return v;
}

Verdict counter_task() {
  Verdict v;
  const auto cm = build_conn_counter_machine();
  Rng rng(106);
  std::size_t mlp_runs = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto inst = random_sorted_instance(rng, 200);
    const bool truth = bfs(inst.n, inst.edges, inst.source, inst.target);
    if (conn_oracle(inst) != truth) v.fail("conn_oracle disagrees with BFS");
    const Word w = symbols_of(encode_conn_unary(inst));
    const auto run = cm_run(cm, w);
    if (run.accept != truth) v.fail("counter machine wrong on trial " + std::to_string(trial));
    if (mlp_runs < 50 && trial % 20 == 0) {
      ++mlp_runs;
      const auto net = cm_to_mlp_rnn(cm, static_cast<std::int64_t>(w.size()));
      const auto r = run_mlp_rnn(net.rnn, std::span<const std::size_t>(w));
      for (std::size_t t = 0; t <= w.size(); ++t) {
        const auto c = net.decode(r.states[t]);
        if (c.state != run.states[t] || c.counters != run.counters[t]) {
          v.fail("mlp trace differs at step " + std::to_string(t));
          break;
        }
      }
      if (r.accept != run.accept) v.fail("mlp acceptance differs");
    }
  }
  if (mlp_runs != 50) v.fail("ran " + std::to_string(mlp_runs) + " mlp traces");
  return v;
}

Verdict stack_task() {
  Verdict v;
  Rng rng(107);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_stack_machine(rng, 4, 3, 2);
    const Word w = random_word(rng, 3, 100);
    const auto net = sm_to_mlp_rnn(m, w.size());
    const auto r = run_mlp_rnn(net.rnn, std::span<const std::size_t>(w));
    const auto ref = sm_run(m, w);
    std::size_t q = m.start();
    std::vector<std::vector<bool>> st(2);
    for (std::size_t t = 0; t <= w.size(); ++t) {
      if (t > 0) {
        std::size_t mask = 0;
        for (std::size_t i = 0; i < 2; ++i) {
          if (st[i].empty() || st[i].back()) mask |= std::size_t{1} << i;
        }
        const auto& a = m.action(q, w[t - 1], mask);
        for (std::size_t i = 0; i < 2; ++i) {
          switch (a.ops[i]) {
            case StackOp::push0: st[i].push_back(false); break;
            case StackOp::push1: st[i].push_back(true); break;
            case StackOp::pop:
              if (!st[i].empty()) st[i].pop_back();
              break;
            case StackOp::noop: break;
          }
        }
        q = a.next;
      }
      const auto c = net.decode(r.states[t]);
      const std::vector<Rational> want{encode_stack(st[0]), encode_stack(st[1])};
      if (c.state != q || c.stacks != want || ref.states[t] != q || ref.stacks[t] != want) {
        v.fail("trial " + std::to_string(trial) + " step " + std::to_string(t));
        break;
      }
    }
    if (r.accept != m.accepting(q)) v.fail("acceptance on trial " + std::to_string(trial));
  }
  return v;
}

Verdict pd_algebra() {
  Verdict v;
  const Rational values[] = {Rational(-1), Rational(), Rational(1, 2), Rational(1)};
  std::vector<PdStep> options;
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      for (const auto& x : values) {
        for (const auto& y : values) options.push_back({RelaxedPermutation({a, b}), RVector{x, y}});
      }
    }
  }
  std::vector<RMatrix> dense;
  for (const auto& o : options) dense.push_back(o.perm.to_matrix() * RMatrix::diag(o.diag));

  std::vector<PdStep> seq;
  std::size_t cases = 0;
  auto rec = [&](auto&& self, const RMatrix& prefix) -> void {
    if (!seq.empty()) {
      ++cases;
      if (pd_product_closed_form(seq).matrix() != prefix || pd_product_tree(seq).first.matrix() != prefix) {
        v.fail("exhaustive d=2 case " + std::to_string(cases));
      }
    }
    if (seq.size() == 4 || !v.ok) return;
    for (std::size_t k = 0; k < options.size(); ++k) {
      seq.push_back(options[k]);
      self(self, prefix * dense[k]);
      seq.pop_back();
    }
  };
  rec(rec, RMatrix::identity(2));
  const std::size_t expect = 64 + 64 * 64 + 64 * 64 * 64 + 64ull * 64 * 64 * 64;
  if (v.ok && cases != expect) v.fail("enumerated " + std::to_string(cases) + " sequences");

  Rng rng(108);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + rng.index(5), n = 1 + rng.index(64);
    std::vector<PdStep> steps;
    RMatrix prod = RMatrix::identity(d);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> t(d);
      RVector diag(d);
      for (std::size_t k = 0; k < d; ++k) {
        t[k] = rng.index(d);
        diag[k] = half_weight(rng);
      }
      steps.push_back({RelaxedPermutation(t), diag});
      prod = prod * (steps.back().perm.to_matrix() * RMatrix::diag(diag));
    }
    if (pd_product_closed_form(steps).matrix() != prod || pd_product_tree(steps).first.matrix() != prod) {
      v.fail("random case " + std::to_string(trial));
    }
  }

  for (int mach = 0; mach < 10; ++mach) {
    const Wfa a = random_deterministic_wfa(rng, 1 + rng.index(4), 1 + rng.index(3));
    const auto r = dwfa_to_pd(a);
    for (int i = 0; i < 500; ++i) {
      const Word w = random_word(rng, a.alphabet(), rng.index(13));
      if (r.accepts(w) != (wfa_prefixes(a, w).back().sign() > 0)) v.fail("dwfa machine " + std::to_string(mach));
    }
  }
  return v;
}

Verdict scan_depth() {
  Verdict v;
  Rng rng(109);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + rng.index(3), n = 1 + rng.index(128);
    std::vector<LinStep> steps;
    for (std::size_t i = 0; i < n; ++i) {
      RMatrix a(d, d), b(d, d);
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
          a(r, c) = half_weight(rng);
          b(r, c) = half_weight(rng);
        }
      }
      steps.push_back({a, b});
    }
    for (auto action : {Action::left, Action::right}) {
      RMatrix s(d, d);
      std::vector<RMatrix> want;
      for (const auto& st : steps) {
        s = (action == Action::left ? st.transition * s : s * st.transition) + st.input;
        want.push_back(s);
      }
      const auto scan = lrnn_run_scan(steps, RMatrix(d, d), action);
      if (scan.states != want || lrnn_run_sequential(steps, RMatrix(d, d), action) != want) {
        v.fail("trace " + std::to_string(trial));
      }
      if (scan.stats.depth > 2 * std::max<std::size_t>(1, ceil_log2(n))) v.fail("depth on trace " + std::to_string(trial));
    }
  }
  for (std::size_t n = 1; n <= 4096; n *= 2) {
    for (std::size_t len : {n, n + 1}) {
      if (len > 4096) continue;
      std::vector<LinStep> steps;
      for (std::size_t i = 0; i < len; ++i) {
        steps.push_back({RMatrix{{rng.bernoulli(0.5) ? 1 : -1}}, RMatrix{{Rational(rng.uniform(-1, 1))}}});
      }
      const auto scan = lrnn_run_scan(steps, RMatrix(1, 1));
      if (scan.stats.depth > 2 * std::max<std::size_t>(1, ceil_log2(len))) v.fail("depth at n=" + std::to_string(len));
      Rational s;
      for (const auto& st : steps) s = st.transition(0, 0) * s + st.input(0, 0);
      if (scan.states.back()(0, 0) != s) v.fail("final state at n=" + std::to_string(len));
    }
  }
  return v;
}

Verdict reduction() {
  Verdict v;
  Rng rng(110);
  for (int trial = 0; trial < 500; ++trial) {
    const auto q = random_det_query(rng, 1 + rng.index(30), 0.5 + 0.5 * rng.unit());
    const auto red = reduce_to_sorted(q.graph, q.source, q.target);
    for (std::size_t i = 0; i < red.edges.size(); ++i) {
      if (i && red.edges[i].from <= red.edges[i - 1].from) v.fail("edges not strictly sorted");
      if (red.edges[i].to < red.edges[i].from || red.edges[i].to > red.n) v.fail("edge points backwards");
    }
    const bool before = bfs(q.graph.n, q.graph.edges, q.source, q.target);
    const bool after = bfs(red.n, red.edges, red.source, red.target);
    if (before != after) v.fail("reachability changed on trial " + std::to_string(trial));
  }
  return v;
}

Verdict precision(std::string& note) {
  Verdict v;
  std::vector<PrecisionRow> conn, stack;
  for (std::size_t n = 16; n <= 1024; n *= 2) {
    conn.push_back(conn_precision(n, 111));
    stack.push_back(stack_precision(n, 111));
  }
  const auto fit = fit_log2(conn);
  std::vector<double> x, y;
  for (const auto& r : stack) {
    x.push_back(static_cast<double>(r.n));
    y.push_back(static_cast<double>(r.max_value_bits));
    if (r.max_value_bits < r.n) v.fail("stack bits below n at n=" + std::to_string(r.n));
  }
  const auto lin = fit_line(x, y);
  char buf[160];
  std::snprintf(buf, sizeof buf, "conn bits ~ %.2f log2 n + %.2f; stack bits ~ %.2f n + %.2f", fit.slope, fit.intercept,
                lin.slope, lin.intercept);
  note = buf;
  if (fit.slope > 1.5) v.fail("conn slope above 1.5");
  if (lin.slope < 1.0) v.fail("stack growth below linear");
  return v;
}

Verdict hankel() {
  Verdict v;
  for (std::size_t k = 1; k <= 32; ++k) {
    if (hankel_identity_rank(k) != k || conn_hankel_block(k) != RMatrix::identity(k)) v.fail("k=" + std::to_string(k));
  }
  return v;
}

bool audit_line(const json& j, std::string& why) {
  const std::string task = j.at("task");
  const auto& tok = j.at("tokens");
  if (task == "conn") {
    const std::size_t s = tok[0], t = tok[1];
    std::vector<Edge> edges;
    std::size_t n = std::max(s, t);
    for (std::size_t i = 2; i + 1 < tok.size(); i += 2) {
      edges.push_back({tok[i].get<std::size_t>(), tok[i + 1].get<std::size_t>()});
      n = std::max({n, edges.back().from, edges.back().to});
    }
    if (j.at("label").get<int>() != static_cast<int>(bfs(n, edges, s, t))) why = "conn label";
  } else if (task == "imm-mod") {
    const std::size_t len = std::stoul(tok[0].get<std::string>());
    const long m = std::stol(tok[1].get<std::string>());
    const std::size_t q = std::stoul(tok[2].get<std::string>());
    std::array<std::array<long, 3>, 3> p{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    const auto& targets = j.at("targets");
    if (targets.size() != len || tok.size() != 3 + 9 * len) why = "imm-mod shape";
    for (std::size_t b = 0; b < len && why.empty(); ++b) {
      std::array<std::array<long, 3>, 3> next{};
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          long acc = 0;
          for (int k = 0; k < 3; ++k) acc += p[r][k] * tok[3 + 9 * b + 3 * k + c].get<long>();
          next[r][c] = ((acc % m) + m) % m;
        }
      }
      p = next;
      if (targets[b].get<long>() != p[q / 3][q % 3]) why = "imm-mod target";
    }
  } else if (task == "imm-z") {
    const std::size_t len = std::stoul(tok[0].get<std::string>());
    std::vector<Rational> stream;
    for (std::size_t k = 1; k < tok.size(); ++k) stream.emplace_back(tok[k].get<std::int64_t>());
    if (stream.size() != 9 * len) why = "imm-z shape";
    else if (j.at("label").get<int>() != static_cast<int>(z_product(stream)[0][0] == 0)) why = "imm-z label";
  } else {
    why = "unknown task";
  }
  return why.empty();
}

Verdict determinism() {
  Verdict v;
  struct Task {
    DatasetTask task;
    std::size_t lo, hi;
  };
  for (const auto& t : {Task{DatasetTask::conn, 4, 64}, Task{DatasetTask::imm_mod, 4, 32}, Task{DatasetTask::imm_z, 4, 12}}) {
    DatasetConfig cfg;
    cfg.task = t.task;
    cfg.count = 10000;
    cfg.lo = t.lo;
    cfg.hi = t.hi;
    cfg.seed = 113;
    const auto first = generate_dataset(cfg);
    if (first != generate_dataset(cfg)) v.fail(std::string(dataset_task_name(t.task)) + " not byte-identical");
    std::istringstream in(first);
    std::size_t lines = 0;
    for (std::string line; std::getline(in, line);) {
      ++lines;
      std::string why;
      if (!audit_line(json::parse(line), why)) {
        v.fail(std::string(dataset_task_name(t.task)) + " line " + std::to_string(lines) + ": " + why);
        break;
      }
    }
    if (lines != 10000) v.fail("line count");
  }
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Verdict(std::string&)> run;
  };
  auto plain = [](Verdict (*f)()) { return [f](std::string&) { return f(); }; };
  const std::vector<Criterion> criteria{
      {1, "WFA simulation (RWKV-7)", 60, plain(wfa_rwkv)},
      {2, "WFA simulation (DeltaNet)", 120, plain(wfa_deltanet)},
      {3, "IMM constants 694 / 702 / 8", 1, plain(imm_constants)},
      {4, "IMM correctness", 300, plain(imm_correctness)},
      {5, "Transvection identity", 1, plain(transvection)},
      {6, "Counter-machine task", 60, plain(counter_task)},
      {7, "Stack simulation", 30, plain(stack_task)},
      {8, "PD algebra", 120, plain(pd_algebra)},
      {9, "Scan equivalence and depth", 60, plain(scan_depth)},
      {10, "Reduction soundness", 30, plain(reduction)},
      {11, "Precision witnesses", 120, precision},
      {12, "Hankel demo", 5, plain(hankel)},
      {13, "Determinism", 600, plain(determinism)},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    std::string note;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run(note);
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (v.ok && secs > c.budget_s) v.fail("over the time budget");
    failures += !v.ok;
    std::printf("%s %2d %s (%.2f s)", v.ok ? "PASS" : "FAIL", c.id, c.name, secs);
    if (!note.empty()) std::printf(" [%s]", note.c_str());
    if (!v.ok) std::printf(" -- %s", v.detail.c_str());
    std::printf("\n");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
