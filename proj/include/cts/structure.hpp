#pragma once

#include <array>
#include <string>

#include "cts/cps.hpp"

namespace cts {

using Player = int;  // 0 or 1
inline constexpr Player other(Player i) { return 1 - i; }

template <typename T>
using PerPlayer = std::array<T, 2>;

// Two-player type structure: common space of primitive uncertainty S and,
// per player, a conditioning family over S, a finite type set, and one
// belief CPS per type over S x T_other with the cylinder family.
struct TypeStructure {
  struct Side {
    std::string name;
    ConditioningFamily family;  // over S
    FiniteSpace types;
    std::vector<Cps> beliefs;  // index-aligned with types
  };

  FiniteSpace space;
  PerPlayer<Side> side;

  Player player_by_name(std::string_view name) const;  // -1 when unknown
  // S x T_other, the domain of player i's beliefs.
  FiniteSpace belief_space(Player i) const {
    return product_space(space, side[other(i)].types);
  }
  ConditioningFamily belief_family(Player i) const {
    return cylinder_family(side[i].family, side[other(i)].types.size());
  }
};

// Structural and semantic validation: belief shapes (right product space,
// right cylinder family) and every belief passing validate_cps. Violations
// are located by (player, type, event).
ValidationReport validate_structure(const TypeStructure& ts);

// Throws std::invalid_argument carrying the first violation when invalid.
void require_valid_structure(const TypeStructure& ts);

}  // namespace cts
