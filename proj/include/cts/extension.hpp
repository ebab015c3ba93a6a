#pragma once

#include "cts/hierarchy.hpp"

namespace cts {

// The of-a-uniform-measure CPS: the deterministic seed for coherent
// extension. conditional_of_measure(uniform, family).
Cps canonical_base_cps(const FiniteSpace& space,
                       const ConditioningFamily& family);

// Appends one level to a coherent order-n prefix of player i so that the
// result is coherent and truncates back to the input exactly. The new level
// is the image of mu^n under the section that pairs every support point
// with its own canonical extension (seeded by canonical_base_cps of the
// co-player). Throws on an incoherent input.
PrefixPtr coherent_extend(const PrefixPtr& p, const HierarchyContext& ctx,
                          Player i);

// Minimum-index section of a surjection: g(z) = first y with f(y) = z.
// Throws naming an uncovered point when f is not surjective.
std::vector<int> right_inverse(const std::vector<int>& f,
                               const FiniteSpace& codomain);

// Lifts a CPS on X x Z with cylinder family through a surjection
// f1 : Y -> Z, by pushing forward under (Id_X, right_inverse(f1)). The
// result pushes back onto nu exactly; that postcondition is re-checked
// before returning. (On finite powersets every set is measurable, so the
// measure-completion step of the general construction is a no-op here.)
Cps lift_cps(const Cps& nu, const FiniteSpace& x, const FiniteSpace& z,
             const std::vector<int>& f1, const FiniteSpace& y);

}  // namespace cts
