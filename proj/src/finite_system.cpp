#include "canon/finite_system.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

#include "canon/errors.hpp"

namespace canon {

namespace {

constexpr double kNoRho = std::numeric_limits<double>::quiet_NaN();

// Unordered pairs {x, y} with x < y, indexed x * n + y.
struct PairGraph {
  std::size_t n;
  std::size_t id(State x, State y) const {
    return x < y ? x * n + y : y * n + x;
  }
  std::pair<State, State> pair(std::size_t id) const {
    return {id / n, id % n};
  }
};

Partition refine(const FiniteSystem& sys, std::span<const State> states,
                 std::vector<int> initial) {
  const std::size_t n = sys.n_states();
  std::vector<int> cls(n, Partition::kUnreachable);
  for (State x : states) cls[x] = initial[x];
  std::size_t count = 0;
  for (;;) {
    std::map<std::vector<int>, int> ids;
    std::vector<int> next(n, Partition::kUnreachable);
    for (State x : states) {
      std::vector<int> key{cls[x]};
      for (Symbol z = 0; z < sys.n_inputs(); ++z) {
        key.push_back(cls[sys.next(x, z)]);
      }
      auto [it, inserted] = ids.try_emplace(key, static_cast<int>(ids.size()));
      next[x] = it->second;
    }
    cls = std::move(next);
    if (ids.size() == count) break;
    count = ids.size();
  }
  // Renumber by smallest member.
  std::map<int, int> renumber;
  std::vector<State> sorted(states.begin(), states.end());
  std::sort(sorted.begin(), sorted.end());
  for (State x : sorted) {
    renumber.try_emplace(cls[x], static_cast<int>(renumber.size()));
  }
  Partition p;
  p.class_of.assign(n, Partition::kUnreachable);
  for (State x : sorted) p.class_of[x] = renumber[cls[x]];
  p.n_classes = renumber.size();
  return p;
}

void require_esp_finite(const FiniteSystem& sys) {
  if (!esp_check_finite(sys)) {
    throw EspViolation("echo state property fails: the pair graph has a cycle",
                       kNoRho);
  }
}

}  // namespace

FiniteSystem::FiniteSystem(std::vector<std::vector<State>> transition,
                           std::vector<int> output)
    : transition_(std::move(transition)), output_(std::move(output)) {
  if (transition_.empty()) {
    throw std::invalid_argument("FiniteSystem: need at least one state");
  }
  if (output_.size() != transition_.size()) {
    throw std::invalid_argument("FiniteSystem: one output per state");
  }
  const std::size_t inputs = transition_.front().size();
  if (inputs == 0) {
    throw std::invalid_argument("FiniteSystem: need at least one input");
  }
  for (const auto& row : transition_) {
    if (row.size() != inputs) {
      throw std::invalid_argument("FiniteSystem: ragged transition table");
    }
    for (State x : row) {
      if (x >= transition_.size()) {
        throw std::invalid_argument("FiniteSystem: transition out of range");
      }
    }
  }
}

State FiniteSystem::run(State x, std::span<const Symbol> word) const {
  for (Symbol z : word) x = next(x, z);
  return x;
}

std::optional<PairCycle> find_pair_cycle(const FiniteSystem& sys) {
  const std::size_t n = sys.n_states();
  const PairGraph g{n};
  enum Color : unsigned char { kWhite, kGrey, kBlack };
  std::vector<Color> color(n * n, kWhite);
  std::vector<std::size_t> parent(n * n);
  std::vector<Symbol> parent_input(n * n);

  struct Frame {
    std::size_t node;
    Symbol next_input;
  };
  for (State x0 = 0; x0 < n; ++x0) {
    for (State y0 = x0 + 1; y0 < n; ++y0) {
      const std::size_t root = g.id(x0, y0);
      if (color[root] != kWhite) continue;
      std::vector<Frame> stack{{root, 0}};
      color[root] = kGrey;
      while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next_input == sys.n_inputs()) {
          color[f.node] = kBlack;
          stack.pop_back();
          continue;
        }
        const Symbol z = f.next_input++;
        const auto [x, y] = g.pair(f.node);
        const State fx = sys.next(x, z);
        const State fy = sys.next(y, z);
        if (fx == fy) continue;
        const std::size_t to = g.id(fx, fy);
        if (color[to] == kGrey) {
          // Walk the DFS stack back from f.node to `to`.
          PairCycle cycle;
          std::vector<std::size_t> nodes{f.node};
          std::vector<Symbol> inputs{z};
          std::size_t cur = f.node;
          while (cur != to) {
            inputs.push_back(parent_input[cur]);
            cur = parent[cur];
            nodes.push_back(cur);
          }
          std::reverse(nodes.begin(), nodes.end());
          std::reverse(inputs.begin(), inputs.end());
          for (std::size_t id : nodes) cycle.pairs.push_back(g.pair(id));
          cycle.inputs = std::move(inputs);
          return cycle;
        }
        if (color[to] == kWhite) {
          color[to] = kGrey;
          parent[to] = f.node;
          parent_input[to] = z;
          stack.push_back({to, 0});
        }
      }
    }
  }
  return std::nullopt;
}

bool esp_check_finite(const FiniteSystem& sys) {
  return !find_pair_cycle(sys).has_value();
}

std::size_t pair_graph_depth(const FiniteSystem& sys) {
  require_esp_finite(sys);
  const std::size_t n = sys.n_states();
  const PairGraph g{n};
  // Longest path from each pair, by memoized DFS over an acyclic graph.
  constexpr std::size_t kUnknown = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> depth(n * n, kUnknown);
  std::size_t best = 0;
  for (State x0 = 0; x0 < n; ++x0) {
    for (State y0 = x0 + 1; y0 < n; ++y0) {
      std::vector<std::pair<std::size_t, Symbol>> stack{{g.id(x0, y0), 0}};
      while (!stack.empty()) {
        auto& [node, z] = stack.back();
        if (depth[node] != kUnknown && z == 0) {
          stack.pop_back();
          continue;
        }
        if (z == sys.n_inputs()) {
          std::size_t d = 0;
          const auto [x, y] = g.pair(node);
          for (Symbol a = 0; a < sys.n_inputs(); ++a) {
            const State fx = sys.next(x, a), fy = sys.next(y, a);
            if (fx != fy) d = std::max(d, depth[g.id(fx, fy)] + 1);
          }
          depth[node] = d;
          stack.pop_back();
          continue;
        }
        const auto [x, y] = g.pair(node);
        const State fx = sys.next(x, z), fy = sys.next(y, z);
        ++z;
        if (fx != fy && depth[g.id(fx, fy)] == kUnknown) {
          stack.push_back({g.id(fx, fy), 0});
        }
      }
      best = std::max(best, depth[g.id(x0, y0)]);
    }
  }
  return best;
}

std::vector<State> reachable_states_finite(const FiniteSystem& sys) {
  require_esp_finite(sys);
  std::vector<bool> current(sys.n_states(), true);
  for (;;) {
    std::vector<bool> next(sys.n_states(), false);
    for (State x = 0; x < sys.n_states(); ++x) {
      if (!current[x]) continue;
      for (Symbol z = 0; z < sys.n_inputs(); ++z) next[sys.next(x, z)] = true;
    }
    if (next == current) break;
    current = std::move(next);
  }
  std::vector<State> out;
  for (State x = 0; x < sys.n_states(); ++x) {
    if (current[x]) out.push_back(x);
  }
  return out;
}

Partition nerode_partition(const FiniteSystem& sys) {
  const std::vector<State> reach = reachable_states_finite(sys);
  return refine(sys, reach, sys.outputs());
}

FiniteSystem reduce_finite(const FiniteSystem& sys) {
  const Partition p = nerode_partition(sys);
  const std::size_t k = p.n_classes;
  std::vector<State> rep(k, sys.n_states());
  for (State x = 0; x < sys.n_states(); ++x) {
    const int c = p.class_of[x];
    if (c != Partition::kUnreachable && rep[c] == sys.n_states()) rep[c] = x;
  }
  std::vector<std::vector<State>> transition(k,
                                             std::vector<State>(sys.n_inputs()));
  std::vector<int> output(k);
  for (std::size_t c = 0; c < k; ++c) {
    output[c] = sys.output(rep[c]);
    for (Symbol z = 0; z < sys.n_inputs(); ++z) {
      transition[c][z] = static_cast<State>(p.class_of[sys.next(rep[c], z)]);
    }
  }
  for (State x = 0; x < sys.n_states(); ++x) {
    const int c = p.class_of[x];
    if (c == Partition::kUnreachable) continue;
    bool ok = sys.output(x) == output[c];
    for (Symbol z = 0; z < sys.n_inputs() && ok; ++z) {
      ok = static_cast<State>(p.class_of[sys.next(x, z)]) == transition[c][z];
    }
    if (!ok) {
      throw std::logic_error("reduce_finite: quotient is not well defined");
    }
  }
  return FiniteSystem(std::move(transition), std::move(output));
}

std::vector<int> ifp_empirical(const FiniteSystem& sys, const Word& u,
                               const Word& v, const Word& z) {
  require_esp_finite(sys);
  const std::size_t washout = 4 * sys.n_states() * sys.n_states();
  if (u.size() < washout || v.size() < washout) {
    throw std::invalid_argument(
        "ifp_empirical: washout prefixes must have length >= 4 n_states^2");
  }
  for (const Word* w : {&u, &v, &z}) {
    for (Symbol s : *w) {
      if (s >= sys.n_inputs()) {
        throw std::invalid_argument("ifp_empirical: symbol out of range");
      }
    }
  }
  State xu = sys.run(0, u);
  State xv = sys.run(0, v);
  std::vector<int> gaps;
  gaps.reserve(z.size());
  for (Symbol s : z) {
    xu = sys.next(xu, s);
    xv = sys.next(xv, s);
    gaps.push_back(sys.output(xu) != sys.output(xv) ? 1 : 0);
  }
  return gaps;
}

std::optional<std::vector<State>> find_finite_isomorphism(
    const FiniteSystem& a, const FiniteSystem& b) {
  if (a.n_states() != b.n_states() || a.n_inputs() != b.n_inputs()) {
    return std::nullopt;
  }
  const std::size_t n = a.n_states();
  std::vector<std::vector<State>> table = a.transition();
  std::vector<int> out = a.outputs();
  for (State x = 0; x < n; ++x) {
    std::vector<State> row = b.transition()[x];
    for (State& y : row) y += n;
    table.push_back(std::move(row));
    out.push_back(b.output(x));
  }
  const FiniteSystem joint(std::move(table), out);
  std::vector<State> all(2 * n);
  for (State x = 0; x < 2 * n; ++x) all[x] = x;
  const Partition p = refine(joint, all, out);

  std::vector<State> in_b(p.n_classes, 2 * n);
  for (State y = 0; y < n; ++y) {
    const int c = p.class_of[n + y];
    if (in_b[c] != 2 * n) return std::nullopt;
    in_b[c] = y;
  }
  std::vector<State> phi(n);
  std::vector<bool> used(n, false);
  for (State x = 0; x < n; ++x) {
    const State y = in_b[p.class_of[x]];
    if (y == 2 * n || used[y]) return std::nullopt;
    used[y] = true;
    phi[x] = y;
  }
  for (State x = 0; x < n; ++x) {
    if (a.output(x) != b.output(phi[x])) return std::nullopt;
    for (Symbol z = 0; z < a.n_inputs(); ++z) {
      if (phi[a.next(x, z)] != b.next(phi[x], z)) return std::nullopt;
    }
  }
  return phi;
}

std::vector<int> behavior_signature(const FiniteSystem& sys, State x,
                                    std::size_t depth) {
  std::vector<int> sig{sys.output(x)};
  std::vector<State> frontier{x};
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<State> next;
    next.reserve(frontier.size() * sys.n_inputs());
    for (State s : frontier) {
      for (Symbol z = 0; z < sys.n_inputs(); ++z) {
        const State t = sys.next(s, z);
        next.push_back(t);
        sig.push_back(sys.output(t));
      }
    }
    frontier = std::move(next);
  }
  return sig;
}

Partition partition_by_words(const FiniteSystem& sys,
                             std::span<const State> states, std::size_t depth) {
  std::vector<State> sorted(states.begin(), states.end());
  std::sort(sorted.begin(), sorted.end());
  std::map<std::vector<int>, int> ids;
  Partition p;
  p.class_of.assign(sys.n_states(), Partition::kUnreachable);
  for (State x : sorted) {
    auto [it, inserted] = ids.try_emplace(behavior_signature(sys, x, depth),
                                          static_cast<int>(ids.size()));
    p.class_of[x] = it->second;
  }
  p.n_classes = ids.size();
  return p;
}

Word random_word(std::size_t n_inputs, std::size_t length,
                 std::mt19937_64& rng) {
  std::uniform_int_distribution<Symbol> pick(0, n_inputs - 1);
  Word w(length);
  for (Symbol& s : w) s = pick(rng);
  return w;
}

bool simulation_merges(const FiniteSystem& sys, std::size_t trials,
                       std::size_t length, std::mt19937_64& rng) {
  std::uniform_int_distribution<State> start(0, sys.n_states() - 1);
  for (std::size_t i = 0; i < trials; ++i) {
    const State x = start(rng);
    const State y = start(rng);
    const Word w = random_word(sys.n_inputs(), length, rng);
    if (sys.run(x, w) != sys.run(y, w)) return false;
  }
  return true;
}

}  // namespace canon
