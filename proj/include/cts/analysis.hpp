#pragma once

#include <optional>

#include "cts/hierarchy.hpp"

namespace cts {

// Iterated refinement of the type sets by equality of beliefs pushed
// through the previous round's blocks. The fixpoint partition is the
// all-orders hierarchy-equality kernel.
struct RefineResult {
  std::vector<PerPlayer<Partition>> rounds;  // P_0 .. P_fix
  int fixpoint_index = 0;                    // first n with P_{n+1} == P_n
};

RefineResult refine(const TypeStructure& ts);

// P_0 .. P_k, continuing past the fixpoint (stable rounds repeat).
std::vector<PerPlayer<Partition>> refine_rounds(const TypeStructure& ts,
                                                int k);

struct RedundancyReport {
  bool non_redundant = false;
  // (player, type, type) generating the same hierarchy, when redundant.
  std::optional<std::array<int, 3>> witness;
};

RedundancyReport is_non_redundant(const TypeStructure& ts);

// Both structures must share S and the conditioning families exactly.
// Decides h^{*,n}(T_i^*) subset-of h^n(T_i) per player at order n = depth,
// or at all orders when depth is empty (fixpoint of the union refinement).
struct InclusionReport {
  bool included = false;
  // (player, star type index) with no matching base hierarchy.
  std::optional<std::pair<Player, int>> witness;
  // S is a singleton and every family is {S}: a single hierarchy exists,
  // so inclusion certifies terminality within this class.
  bool unique_hierarchy_class = false;
};

InclusionReport hierarchies_included(const TypeStructure& star,
                                     const TypeStructure& base,
                                     std::optional<int> depth);

// Per-player total type maps star -> base, index-aligned with star's types.
using TypeMap = PerPlayer<std::vector<int>>;

struct TypeMorphismReport {
  bool ok = false;
  struct Witness {
    Player player;
    int type;   // star type index
    int event;  // base-family event index
    int point;  // point index of S x T_other(base)
  };
  std::optional<Witness> witness;
};

// Exact check of beta_i(phi_i(t)) = image of beta_i^*(t) under
// (Id_S, phi_other), for every player, type, event, and point.
TypeMorphismReport check_type_morphism(const TypeStructure& star,
                                       const TypeStructure& base,
                                       const TypeMap& phi);

struct HierarchyMorphismReport {
  bool ok = false;
  std::optional<std::pair<Player, int>> witness;  // star type index
};

// t and phi(t) generate the same hierarchy up to `depth` (all orders when
// empty), via the union refinement.
HierarchyMorphismReport check_hierarchy_morphism(const TypeStructure& star,
                                                 const TypeStructure& base,
                                                 const TypeMap& phi,
                                                 std::optional<int> depth);

struct CompletenessReport {
  struct Side {
    bool complete = false;
    // Every conditioning cylinder is a singleton, forcing a one-element
    // CPS codomain.
    bool forced_singleton = false;
    // A valid CPS outside the belief map's image, when incomplete.
    std::optional<Cps> witness;
  };
  PerPlayer<Side> side;

  bool complete() const { return side[0].complete && side[1].complete; }
};

// Decides surjectivity of each belief map. A finite type set can only cover
// the CPS codomain when the codomain is the forced singleton; otherwise a
// witness outside the image is constructed from a family of full-support
// conditionals pairwise separated at the largest event.
CompletenessReport completeness_report(const TypeStructure& ts);

// Disjoint union of two structures over the same (S, families): star types
// first, then base types, with beliefs embedded by zero mass on the foreign
// types. Type labels gain "s:" / "b:" prefixes.
struct UnionStructure {
  TypeStructure ts;
  PerPlayer<int> star_types{};  // per player, count of star types
};

UnionStructure disjoint_union(const TypeStructure& star,
                              const TypeStructure& base);

}  // namespace cts
