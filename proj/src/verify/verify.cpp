#include "rnnlab/verify.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "rnnlab/conn.hpp"
#include "rnnlab/counter_machine.hpp"
#include "rnnlab/deltanet_gadgets.hpp"
#include "rnnlab/dwfa_pd.hpp"
#include "rnnlab/lrnn.hpp"
#include "rnnlab/mlp_rnn.hpp"
#include "rnnlab/pd.hpp"
#include "rnnlab/rwkv_gadgets.hpp"
#include "rnnlab/stack_machine.hpp"
#include "rnnlab/wfa.hpp"

namespace rnnlab {
namespace {

std::size_t pick(std::size_t given, std::size_t fallback) { return given ? given : fallback; }

std::string word_str(std::span<const std::size_t> w) {
  std::string s;
  for (auto x : w) {
    if (!s.empty()) s += ' ';
    s += std::to_string(x);
  }
  return s;
}

std::string stream_str(std::span<const Rational> w) {
  std::string s;
  for (const auto& x : w) {
    if (!s.empty()) s += ' ';
    s += x.str();
  }
  return s;
}

std::size_t ceil_log2(std::size_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }

Rational small_weight(Rng& rng) {
  static const Rational values[] = {Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(1)};
  return values[rng.index(5)];
}

RMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  RMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) m(i, j) = small_weight(rng);
  }
  return m;
}

PdStep random_pd(Rng& rng, std::size_t d) {
  std::vector<std::size_t> t(d);
  RVector diag(d);
  for (std::size_t i = 0; i < d; ++i) {
    t[i] = rng.index(d);
    diag[i] = small_weight(rng);
  }
  return PdStep{RelaxedPermutation(std::move(t)), std::move(diag)};
}

std::vector<Rational> random_imm_stream(Rng& rng, std::size_t blocks) {
  std::vector<Rational> s(9 * blocks);
  for (auto& x : s) x = Rational(static_cast<std::int64_t>(rng.index(3)) - 1);
  return s;
}

RMatrix list_product(std::span<const RMatrix> ms, std::size_t d) {
  RMatrix p = RMatrix::identity(d);
  for (const auto& m : ms) p = p * m;
  return p;
}

struct Recorder {
  VerifyOutcome out;
  void trial(bool ok, const std::function<std::string()>& describe) {
    ++out.trials;
    if (ok) return;
    if (out.failures++ == 0) out.counterexample = describe();
  }
};

template <typename Net>
VerifyOutcome verify_wfa_net(const VerifyParams& p, const char* label, bool long_words) {
  Recorder rec;
  std::size_t longest = 0;
  for (std::size_t trial = 0; trial < p.trials; ++trial) {
    const auto seed = child_seed(p.seed, trial);
    Rng rng(seed);
    const std::size_t n = pick(p.states, 1 + rng.index(3));
    const std::size_t alphabet = 1 + rng.index(3);
    Wfa a = random_wfa(rng, n, alphabet);
    Net net(a);
    const std::size_t len = pick(p.len, long_words ? 2 * net.block() + 1 + rng.index(net.block()) : 6 * 2 * n);
    longest = std::max(longest, len);
    const Word w = random_word(rng, alphabet, len);
    const auto want = wfa_eval_prefixes(a, w);
    const auto got = net.forward(w).outputs;
    std::size_t bad = w.size();
    for (std::size_t t = 0; t < w.size(); ++t) {
      if (got[t] != want[t + 1]) {
        bad = t;
        break;
      }
    }
    rec.trial(bad == w.size(), [&] {
      std::ostringstream os;
      os << label << " trial " << trial << " seed " << seed << " states " << n << " alphabet " << alphabet
         << "\nword: " << word_str(w) << "\nprefix " << bad + 1 << ": expected " << want[bad + 1] << " actual "
         << got[bad];
      return os.str();
    });
  }
  rec.out.summary = "longest word " + std::to_string(longest);
  return rec.out;
}

VerifyOutcome verify_imm(const VerifyParams& p, bool deltanet) {
  Recorder rec;
  for (std::size_t trial = 0; trial < p.trials; ++trial) {
    const auto seed = child_seed(p.seed, trial);
    Rng rng(seed);
    const std::size_t blocks = pick(p.blocks, 1 + rng.index(20));
    const auto stream = random_imm_stream(rng, blocks);
    const auto mats = imm_matrices(stream);
    const RMatrix want = list_product(mats, 3);
    const RMatrix got = deltanet ? dnet_imm_forward(DnetImmNet{}, stream) : rwkv_imm_forward(RwkvImmNet{}, stream);
    const bool sign_ok = (want(0, 0).sign() > 0) == (got(0, 0).sign() > 0);
    rec.trial(got == want && sign_ok, [&] {
      std::ostringstream os;
      os << (deltanet ? "dnet-imm" : "rwkv-imm") << " trial " << trial << " seed " << seed << " blocks " << blocks
         << "\nstream: " << stream_str(stream) << "\nexpected " << want.str() << "\nactual " << got.str();
      return os.str();
    });
  }
  return rec.out;
}

VerifyOutcome verify_cm_rnn(const VerifyParams& p) {
  Recorder rec;
  const auto cm = build_conn_counter_machine();
  std::size_t max_bits = 0, longest = 0;
  for (std::size_t trial = 0; trial < p.trials; ++trial) {
    const auto seed = child_seed(p.seed, trial);
    Rng rng(seed);
    const auto inst = random_sorted_instance(rng, pick(p.nodes, 200));
    const auto tokens = encode_conn_unary(inst);
    std::vector<std::size_t> w;
    for (auto t : tokens) w.push_back(static_cast<std::size_t>(t));
    longest = std::max(longest, w.size());
    const auto ref = cm_run(cm, w);
    const bool oracle = conn_oracle(inst);
    const auto net = cm_to_mlp_rnn(cm, static_cast<std::int64_t>(w.size()));
    const auto run = run_mlp_rnn(net.rnn, std::span<const std::size_t>(w));
    max_bits = std::max(max_bits, run.precision.max_value_bits);
    std::size_t bad = w.size() + 1;
    std::string actual;
    for (std::size_t t = 0; t <= w.size(); ++t) {
      try {
        const auto c = net.decode(run.states[t]);
        if (c.state == ref.states[t] && c.counters == ref.counters[t]) continue;
        actual = "state " + std::to_string(c.state);
      } catch (const std::exception& e) {
        actual = e.what();
      }
      bad = t;
      break;
    }
    const bool ok = bad == w.size() + 1 && run.accept == ref.accept && ref.accept == oracle;
    rec.trial(ok, [&] {
      std::ostringstream os;
      os << "cm-rnn trial " << trial << " seed " << seed << "\ntokens: " << conn_tokens_str(tokens)
         << "\noracle " << oracle << " machine " << ref.accept << " rnn " << run.accept;
      if (bad <= w.size()) os << "\nfirst divergence at step " << bad << ": expected state " << ref.states[bad]
                              << ", actual " << actual;
      return os.str();
    });
  }
  rec.out.summary = "longest input " + std::to_string(longest) + ", max value bits " + std::to_string(max_bits);
  return rec.out;
}

VerifyOutcome verify_sm_rnn(const VerifyParams& p) {
  Recorder rec;
  for (std::size_t trial = 0; trial < p.trials; ++trial) {
    const auto seed = child_seed(p.seed, trial);
    Rng rng(seed);
    const std::size_t stacks = pick(p.dim, 2);
    const std::size_t steps = pick(p.steps, 100);
    const auto m = random_stack_machine(rng, pick(p.states, 4), 3, stacks);
    const auto w = random_word(rng, 3, steps);
    const auto ref = sm_run(m, w);
    const auto net = sm_to_mlp_rnn(m, steps);
    const auto run = run_mlp_rnn(net.rnn, std::span<const std::size_t>(w));
    std::size_t bad = steps + 1;
    for (std::size_t t = 0; t <= steps; ++t) {
      const auto c = net.decode(run.states[t]);
      if (c.state != ref.states[t] || c.stacks != ref.stacks[t]) {
        bad = t;
        break;
      }
    }
    rec.trial(bad == steps + 1 && run.accept == ref.accept, [&] {
      std::ostringstream os;
      os << "sm-rnn trial " << trial << " seed " << seed << "\nword: " << word_str(w);
      if (bad <= steps) {
        os << "\nfirst divergence at step " << bad << ": expected " << ref.states[bad];
        for (const auto& s : ref.stacks[bad]) os << ' ' << s;
        os << "; actual " << run.states[bad].str();
      }
      return os.str();
    });
  }
  return rec.out;
}

VerifyOutcome verify_pd_product(const VerifyParams& p) {
  Recorder rec;
  std::size_t deepest = 0;
  for (std::size_t trial = 0; trial < p.trials; ++trial) {
    const auto seed = child_seed(p.seed, trial);
    Rng rng(seed);
    const std::size_t d = pick(p.dim, 1 + rng.index(5));
    const std::size_t n = pick(p.len, 1 + rng.index(64));
    std::vector<PdStep> steps;
    RMatrix dense = RMatrix::identity(d);
    for (std::size_t i = 0; i < n; ++i) {
      steps.push_back(random_pd(rng, d));
      dense = dense * steps.back().matrix();
    }
    const auto closed = pd_product_closed_form(steps);
    const auto [tree, stats] = pd_product_tree(steps);
    deepest = std::max(deepest, stats.depth);
    rec.trial(closed.matrix() == dense && tree.matrix() == dense && stats.depth <= ceil_log2(n), [&] {
      std::ostringstream os;
      os << "pd-product trial " << trial << " seed " << seed << " d " << d << " n " << n << "\nexpected "
         << dense.str() << "\nclosed form " << closed.matrix().str() << "\ntree " << tree.matrix().str();
      return os.str();
    });
  }
  rec.out.summary = "deepest tree " + std::to_string(deepest);
  return rec.out;
}

VerifyOutcome verify_dwfa_pd(const VerifyParams& p) {
  Recorder rec;
  const std::size_t words = pick(p.len, 500);
  for (std::size_t trial = 0; trial < p.trials; ++trial) {
    const auto seed = child_seed(p.seed, trial);
    Rng rng(seed);
    const std::size_t n = pick(p.states, 1 + rng.index(4));
    const std::size_t alphabet = 1 + rng.index(3);
    const Wfa a = random_deterministic_wfa(rng, n, alphabet);
    const auto rec_net = dwfa_to_pd(a);
    for (std::size_t k = 0; k < words; ++k) {
      const Word w = random_word(rng, alphabet, rng.index(13));
      const Rational f = wfa_eval(a, w);
      const bool got = rec_net.accepts(w);
      rec.trial(got == (f.sign() > 0), [&] {
        std::ostringstream os;
        os << "dwfa-pd trial " << trial << " seed " << seed << " states " << n << "\nword: " << word_str(w)
           << "\nf(w) = " << f << " recognizer " << got << " score " << rec_net.score(w);
        return os.str();
      });
    }
  }
  return rec.out;
}

VerifyOutcome verify_reduction(const VerifyParams& p) {
  Recorder rec;
  for (std::size_t trial = 0; trial < p.trials; ++trial) {
    const auto seed = child_seed(p.seed, trial);
    Rng rng(seed);
    const auto q = random_det_query(rng, pick(p.nodes, 2 + rng.index(30)), 0.3 + 0.6 * rng.unit());
    const bool want = det_graph_reachable(q.graph, q.source, q.target);
    const auto sorted = reduce_to_sorted(q.graph, q.source, q.target);
    bool structural = true;
    try {
      sorted.validate();
    } catch (const std::exception&) {
      structural = false;
    }
    for (std::size_t i = 1; i < sorted.edges.size(); ++i) {
      structural = structural && sorted.edges[i - 1].from < sorted.edges[i].from;
    }
    for (const auto& e : sorted.edges) structural = structural && e.from < e.to;
    DetGraph copy{sorted.n, sorted.edges};
    const bool bfs = det_graph_reachable(copy, sorted.source, sorted.target);
    const bool chain = conn_oracle(sorted);
    rec.trial(structural && bfs == want && chain == want, [&] {
      std::ostringstream os;
      os << "reduction trial " << trial << " seed " << seed << " n " << q.graph.n << " s " << q.source << " t "
         << q.target << "\nedges:";
      for (const auto& e : q.graph.edges) os << ' ' << e.from << "->" << e.to;
      os << "\nexpected " << want << " sorted-bfs " << bfs << " sorted-chain " << chain << " structural "
         << structural;
      return os.str();
    });
  }
  return rec.out;
}

VerifyOutcome verify_scan_depth(const VerifyParams& p) {
  Recorder rec;
  std::size_t worst = 0;
  for (std::size_t trial = 0; trial < p.trials; ++trial) {
    const auto seed = child_seed(p.seed, trial);
    Rng rng(seed);
    const std::size_t d = pick(p.dim, 1 + rng.index(3));
    const std::size_t n = pick(p.len, 1 + rng.index(256));
    std::vector<LinStep> steps;
    for (std::size_t i = 0; i < n; ++i) steps.push_back({random_matrix(rng, d, d), random_matrix(rng, d, d)});
    const RMatrix s0 = rng.bernoulli(0.5) ? random_matrix(rng, d, d) : RMatrix(d, d);
    const auto action = rng.bernoulli(0.5) ? Action::left : Action::right;
    const auto seq = lrnn_run_sequential(steps, s0, action);
    const auto scan = lrnn_run_scan(steps, s0, action);
    worst = std::max(worst, scan.stats.depth);
    const std::size_t bound = 2 * std::max<std::size_t>(1, ceil_log2(n));
    rec.trial(scan.states == seq && scan.stats.depth <= bound, [&] {
      std::ostringstream os;
      os << "scan-depth trial " << trial << " seed " << seed << " d " << d << " n " << n << " depth "
         << scan.stats.depth << " bound " << bound << "\n" << dump_trace(steps);
      return os.str();
    });
  }
  rec.out.summary = "deepest scan " + std::to_string(worst);
  return rec.out;
}

}  // namespace

const std::vector<Construction>& verification_registry() {
  static const std::vector<Construction> registry = {
      {"rwkv-wfa", "RWKV-7 network vs WFA prefix values", 50,
       [](const VerifyParams& p) { return verify_wfa_net<RwkvWfaNet>(p, "rwkv-wfa", false); }},
      {"dnet-wfa", "DeltaNet network vs WFA prefix values, crossing two block boundaries", 50,
       [](const VerifyParams& p) { return verify_wfa_net<DnetWfaNet>(p, "dnet-wfa", true); }},
      {"rwkv-imm", "RWKV-7 iterated 3x3 product vs exact product", 20,
       [](const VerifyParams& p) { return verify_imm(p, false); }},
      {"dnet-imm", "DeltaNet iterated 3x3 product vs exact product", 3,
       [](const VerifyParams& p) { return verify_imm(p, true); }},
      {"cm-rnn", "MLP RNN vs connectivity counter machine, full trace", 50, verify_cm_rnn},
      {"sm-rnn", "MLP RNN vs random 2-stack machine, full trace", 50, verify_sm_rnn},
      {"pd-product", "PD closed form and tree product vs dense product", 200, verify_pd_product},
      {"dwfa-pd", "PD recognizer vs sign of deterministic WFA", 10, verify_dwfa_pd},
      {"reduction", "layered-copy reduction preserves reachability", 500, verify_reduction},
      {"scan-depth", "prefix scan vs sequential recurrence, depth bound", 200, verify_scan_depth},
  };
  return registry;
}

const Construction* find_construction(std::string_view name) {
  for (const auto& c : verification_registry()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

VerifyOutcome run_construction(const Construction& c, VerifyParams p) {
  if (p.trials == 0) p.trials = c.default_trials;
  return c.run(p);
}

}  // namespace rnnlab
