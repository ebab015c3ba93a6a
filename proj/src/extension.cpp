#include "cts/extension.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cts {

Cps canonical_base_cps(const FiniteSpace& space,
                       const ConditioningFamily& family) {
  return conditional_of_measure(space, uniform_measure(space.size()), family);
}

namespace {

// One extension pass shares section values across repeated peers.
struct Extender {
  const HierarchyContext& ctx;
  std::map<const Prefix*, PrefixPtr> memo;

  PrefixPtr seed(Player j) const {
    return std::make_shared<Prefix>(
        canonical_base_cps(ctx.space, ctx.families[j]),
        std::vector<LevelCps>{});
  }

  // The image of p's top level under the section psi_i^n, where n is p's
  // order: every support point (s, q) is sent to (s, extend(q)).
  LevelCps lifted_top(const Prefix& p, Player i) {
    const ConditioningFamily& family = ctx.families[i];
    if (p.first().family != family)
      throw std::invalid_argument(
          "prefix nesting does not match the context families");
    LevelCps out;
    out.conditionals.reserve(family.size());
    if (p.order() == 1) {
      PrefixPtr base = seed(other(i));
      for (int e = 0; e < family.size(); ++e) {
        LevelMeasure lifted;
        const Measure& cond = p.first().conditionals[e];
        for (int s = 0; s < p.first().space.size(); ++s)
          if (!cond.mass[s].is_zero())
            lifted.mass.push_back({LevelPoint{s, base}, cond.mass[s]});
        out.conditionals.push_back(std::move(lifted));
      }
      return out;
    }
    const LevelCps& top = p.level(p.order());
    for (const LevelMeasure& cond : top.conditionals) {
      std::vector<std::pair<LevelPoint, Rational>> atoms;
      atoms.reserve(cond.mass.size());
      for (const auto& [point, mass] : cond.mass)
        atoms.push_back(
            {LevelPoint{point.state, extend(point.peer, other(i))}, mass});
      std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) {
        return compare(a.first, b.first) < 0;
      });
      LevelMeasure lifted;
      for (auto& [point, mass] : atoms) {
        if (!lifted.mass.empty() &&
            compare(lifted.mass.back().first, point) == 0)
          lifted.mass.back().second += mass;
        else
          lifted.mass.push_back({std::move(point), mass});
      }
      out.conditionals.push_back(std::move(lifted));
    }
    return out;
  }

  PrefixPtr extend(const PrefixPtr& p, Player i) {
    auto it = memo.find(p.get());
    if (it != memo.end()) return it->second;
    PrefixPtr result = extended_with_level(p, lifted_top(*p, i));
    memo.emplace(p.get(), result);
    return result;
  }
};

}  // namespace

PrefixPtr coherent_extend(const PrefixPtr& p, const HierarchyContext& ctx,
                          Player i) {
  if (!p) throw std::invalid_argument("null prefix");
  if (i != 0 && i != 1) throw std::invalid_argument("player must be 0 or 1");
  if (p->first().space != ctx.space)
    throw std::invalid_argument("prefix is not over the context's space");
  if (p->first().family != ctx.families[i])
    throw std::invalid_argument(
        "prefix does not carry the player's conditioning family");
  if (ValidationReport report = check_prefix_coherence(*p); !report.ok())
    throw std::invalid_argument("incoherent prefix: " +
                                report.violations.front().message);
  Extender extender{ctx, {}};
  return extender.extend(p, i);
}

std::vector<int> right_inverse(const std::vector<int>& f,
                               const FiniteSpace& codomain) {
  std::vector<int> g(codomain.size(), -1);
  for (std::size_t y = 0; y < f.size(); ++y) {
    if (f[y] < 0 || f[y] >= codomain.size())
      throw std::invalid_argument("map value out of codomain range");
    if (g[f[y]] < 0) g[f[y]] = static_cast<int>(y);
  }
  for (int z = 0; z < codomain.size(); ++z)
    if (g[z] < 0)
      throw std::invalid_argument("map is not surjective: " +
                                  codomain.label(z) + " is not covered");
  return g;
}

Cps lift_cps(const Cps& nu, const FiniteSpace& x, const FiniteSpace& z,
             const std::vector<int>& f1, const FiniteSpace& y) {
  if (nu.space != product_space(x, z))
    throw std::invalid_argument("CPS is not over the stated X x Z product");
  std::vector<Event> base;
  if (!detect_cylinder_family(nu.family, x.size(), z.size(), &base))
    throw std::invalid_argument(
        "conditioning family is not of cylinder form over the product");
  if (static_cast<int>(f1.size()) != y.size())
    throw std::invalid_argument("surjection has wrong domain size");
  std::vector<int> g = right_inverse(f1, z);

  FiniteSpace target = product_space(x, y);
  ConditioningFamily base_family{std::move(base)};
  ConditioningFamily target_family = cylinder_family(base_family, y.size());

  std::vector<int> section(nu.space.size());
  for (int p = 0; p < nu.space.size(); ++p)
    section[p] =
        pair_index(pair_left(p, z.size()), g[pair_right(p, z.size())], y.size());
  Cps lifted = pushforward_cps(nu, section, target, target_family);

  // Re-check the defining property before handing the result out.
  std::vector<int> forward(target.size());
  for (int p = 0; p < target.size(); ++p)
    forward[p] =
        pair_index(pair_left(p, y.size()), f1[pair_right(p, y.size())], z.size());
  if (pushforward_cps(lifted, forward, nu.space, nu.family) != nu)
    throw std::logic_error("lift postcondition failed");
  return lifted;
}

}  // namespace cts
