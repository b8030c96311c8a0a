#pragma once

// Finite-state, finite-alphabet state-space systems x_t = F(x_{t-1}, z_t),
// y_t = h(x_t). Everything the linear theory states about reachability,
// indistinguishability and reduction is exactly decidable here, which makes
// these systems a brute-force reference for the linear pipeline's contracts.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace canon {

using State = std::size_t;
using Symbol = std::size_t;
using Word = std::vector<Symbol>;

class FiniteSystem {
 public:
  /// `transition[x][z]` is F(x, z); `output[x]` is h(x). Throws
  /// std::invalid_argument unless there is at least one state and one input,
  /// every row has the same length and all targets are in range.
  FiniteSystem(std::vector<std::vector<State>> transition,
               std::vector<int> output);

  std::size_t n_states() const { return transition_.size(); }
  std::size_t n_inputs() const { return transition_.front().size(); }
  State next(State x, Symbol z) const { return transition_[x][z]; }
  int output(State x) const { return output_[x]; }
  State run(State x, std::span<const Symbol> word) const;

  const std::vector<std::vector<State>>& transition() const {
    return transition_;
  }
  const std::vector<int>& outputs() const { return output_; }

  friend bool operator==(const FiniteSystem&, const FiniteSystem&) = default;

 private:
  std::vector<std::vector<State>> transition_;
  std::vector<int> output_;
};

/// A cycle in the distinct-pair graph: reading inputs[k] from the pair
/// pairs[k] leads to pairs[(k + 1) % size] without merging. Repeating the
/// inputs periodically into the past gives two distinct solutions.
struct PairCycle {
  std::vector<std::pair<State, State>> pairs;
  std::vector<Symbol> inputs;
};

/// The graph on unordered pairs {x, y}, x != y, with an edge labelled z to
/// {F(x, z), F(y, z)} whenever those stay distinct.
std::optional<PairCycle> find_pair_cycle(const FiniteSystem& sys);

/// Every left-infinite input has a unique solution iff the pair graph is
/// acyclic.
bool esp_check_finite(const FiniteSystem& sys);

/// Longest path (in edges) of the acyclic pair graph. Any two states agree
/// after depth + 1 common inputs. Throws EspViolation on a cycle.
std::size_t pair_graph_depth(const FiniteSystem& sys);

/// States reached at time 0 by left-infinite inputs: the fixed point of
/// S_{T+1} = union_z F(S_T, z) from S_0 = all states. Sorted ascending.
std::vector<State> reachable_states_finite(const FiniteSystem& sys);

struct Partition {
  static constexpr int kUnreachable = -1;
  /// Class of each state, or kUnreachable. Classes are numbered by their
  /// smallest member.
  std::vector<int> class_of;
  std::size_t n_classes = 0;

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Indistinguishability classes of the reachable states by Moore refinement.
Partition nerode_partition(const FiniteSystem& sys);

/// Quotient of the reachable states by the Nerode partition.
FiniteSystem reduce_finite(const FiniteSystem& sys);

/// gaps[t-1] = [h(state after u z_1..z_t) != h(state after v z_1..z_t)] for
/// t = 1..|z|. u and v act as washout prefixes and must have length at least
/// 4 n_states^2.
std::vector<int> ifp_empirical(const FiniteSystem& sys, const Word& u,
                               const Word& v, const Word& z);

/// Bijection phi between the state sets with F2(phi(x), z) = phi(F1(x, z))
/// and h2(phi(x)) = h1(x), found by refining the disjoint union. Only
/// meaningful for observable systems with all states reachable.
std::optional<std::vector<State>> find_finite_isomorphism(
    const FiniteSystem& a, const FiniteSystem& b);

// Brute-force cross-checks. These enumerate or sample words directly and do
// not use the pair graph or Moore refinement.

/// Outputs after every word of length <= depth (shortlex order) from x.
std::vector<int> behavior_signature(const FiniteSystem& sys, State x,
                                    std::size_t depth);

/// Partition of `states` by equality of behavior_signature at `depth`.
Partition partition_by_words(const FiniteSystem& sys,
                             std::span<const State> states, std::size_t depth);

/// Uniform random word.
Word random_word(std::size_t n_inputs, std::size_t length, std::mt19937_64& rng);

/// True if every sampled pair of random starts is merged by every sampled
/// word of the given length.
bool simulation_merges(const FiniteSystem& sys, std::size_t trials,
                       std::size_t length, std::mt19937_64& rng);

}  // namespace canon
