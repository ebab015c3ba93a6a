#pragma once

#include <vector>

#include "cts/space.hpp"
#include "cts/validation.hpp"

namespace cts {

// Conditional probability system: one probability measure per conditioning
// event, concentrated on the event and tied together by the chain rule.
// Conditionals are index-aligned with family.events.
struct Cps {
  FiniteSpace space;
  ConditioningFamily family;
  std::vector<Measure> conditionals;

  const Measure& conditional(int event_index) const {
    return conditionals.at(event_index);
  }

  friend bool operator==(const Cps&, const Cps&) = default;
};

// Checks that `candidate` is a CPS on (space, family):
//   (a) each conditional is a probability measure,
//   (b) each conditional gives its event total mass 1,
//   (c) mu({x}|B) * mu(B|C) = mu({x}|C) for all nested B subset C and x in B.
// The singleton form of (c) is equivalent to the full quantification over
// subsets by finite additivity. Shape mismatches (wrong measure length,
// wrong conditional count) throw; rule violations go into the report.
ValidationReport validate_cps(const FiniteSpace& space,
                              const ConditioningFamily& family,
                              const std::vector<Measure>& candidate);
ValidationReport validate_cps(const Cps& cps);

// { B x Y : B in family } over the product X x Y in lexicographic index
// order (pair_index). Event order follows the family's declared order.
ConditioningFamily cylinder_family(const ConditioningFamily& family_on_x,
                                   int y_size);

// True when `family` over a |x_size| * |y_size| product consists purely of
// cylinders B x Y; recovered base events are written to `base` (declared
// order kept) when non-null.
bool detect_cylinder_family(const ConditioningFamily& family, int x_size,
                            int y_size, std::vector<Event>* base);

// Image conditional law of mu under the point map f (f[x] = index in
// target). Requires { f^-1(C) : C in family_y } == mu.family as sets of
// sets; throws naming the first unmatched event otherwise.
Cps pushforward_cps(const Cps& mu, const std::vector<int>& f,
                    const FiniteSpace& target,
                    const ConditioningFamily& family_y);

// Marginal on X of a CPS over X x Y whose family is cylinder-shaped
// (detected structurally; throws otherwise). Equals the pushforward under
// the coordinate projection.
Cps marginal_cps(const Cps& mu, const FiniteSpace& x, const FiniteSpace& y);

// mu(A|B) = p(A & B) / p(B) for a full-support p; always a valid CPS.
Cps conditional_of_measure(const FiniteSpace& space, const Measure& p,
                           const ConditioningFamily& family);

}  // namespace cts
