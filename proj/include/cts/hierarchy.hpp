#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "cts/structure.hpp"

namespace cts {

class Prefix;
using PrefixPtr = std::shared_ptr<const Prefix>;

// A point (s, q) of S x H_other^k: a primitive state paired with the other
// player's order-k prefix. Peers are shared immutable values.
struct LevelPoint {
  int state = 0;
  PrefixPtr peer;
};

// Finitely supported measure over level points: strictly positive masses,
// points sorted by canonical order, no duplicates.
struct LevelMeasure {
  std::vector<std::pair<LevelPoint, Rational>> mass;
};

// One order-(k+1) belief: a CPS over S x H_other^k whose conditioning
// events are the cylinders B x H_other^k. Conditionals are index-aligned
// with the player's base family over S.
struct LevelCps {
  std::vector<LevelMeasure> conditionals;
};

// Order-n tower mu^1..mu^n of one player's conditional beliefs.
// Immutable after construction; equality is structural and exact.
class Prefix {
 public:
  Prefix(Cps first, std::vector<LevelCps> higher);

  // mu^1: a CPS over S with the player's base family.
  const Cps& first() const { return first_; }
  // higher()[k] is mu^{k+2}.
  const std::vector<LevelCps>& higher() const { return higher_; }
  int order() const { return 1 + static_cast<int>(higher_.size()); }
  // mu^k for 1 <= k <= order; only valid for k >= 2.
  const LevelCps& level(int k) const { return higher_.at(k - 2); }
  std::size_t hash() const { return hash_; }

 private:
  Cps first_;
  std::vector<LevelCps> higher_;
  std::size_t hash_;
};

// Canonical total order (negative / zero / positive like strcmp). Drives
// support sorting, partition block signatures, and serialization order.
int compare(const Rational& a, const Rational& b);
int compare(const Cps& a, const Cps& b);
int compare(const LevelPoint& a, const LevelPoint& b);
int compare(const LevelMeasure& a, const LevelMeasure& b);
int compare(const LevelCps& a, const LevelCps& b);
int compare(const Prefix& a, const Prefix& b);

bool operator==(const Prefix& a, const Prefix& b);

// Structural equality through the pointer (PrefixPtr's own == compares
// identity, which is only a fast path).
bool prefix_equal(const PrefixPtr& a, const PrefixPtr& b);

// The ambient data a prefix tower lives over: S and both base families.
struct HierarchyContext {
  FiniteSpace space;
  PerPlayer<ConditioningFamily> families;

  friend bool operator==(const HierarchyContext&,
                         const HierarchyContext&) = default;
};
HierarchyContext context_of(const TypeStructure& ts);

// Grouping of a type set into blocks; ids are dense and assigned by first
// occurrence in canonical type order.
struct Partition {
  std::vector<int> block_of;
  int block_count = 0;

  bool discrete() const {
    return block_count == static_cast<int>(block_of.size());
  }
  friend bool operator==(const Partition&, const Partition&) = default;
};

// Unfolds every type of both players into its order-n prefix. Level 1 is
// the marginal of the belief on S; level k+1 pushes the belief forward
// through the other player's order-k prefix classes.
PerPlayer<std::vector<PrefixPtr>> unfold(const TypeStructure& ts, int depth);

// Drops levels above m. Identity when m equals the order.
PrefixPtr truncate(const PrefixPtr& p, int m);

// Valid iff every level is a CPS on its stage and marginalizing mu^{k+1}
// through (s, q) -> (s, truncate(q, k-1)) recovers mu^k exactly, including
// inside support peers. Malformed nesting (unsorted or zero-mass support,
// peer order mismatch) throws std::invalid_argument.
ValidationReport check_prefix_coherence(const Prefix& p);
inline ValidationReport check_prefix_coherence(const PrefixPtr& p) {
  return check_prefix_coherence(*p);
}

// Image of a belief CPS on S x T_other under (s, t) -> (s, reps[block(t)]).
// reps must cover every block that carries mass.
LevelCps pushforward_under_partition(const Cps& mu, int s_size,
                                     const Partition& part,
                                     const std::vector<PrefixPtr>& reps);

// Groups indices by structural prefix equality; reps (when non-null)
// receives one representative per block.
Partition partition_by_prefixes(const std::vector<PrefixPtr>& prefixes,
                                std::vector<PrefixPtr>* reps = nullptr);

PrefixPtr extended_with_level(const PrefixPtr& p, LevelCps level);

}  // namespace cts
