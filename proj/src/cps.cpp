#include "cts/cps.hpp"

#include <algorithm>
#include <stdexcept>

namespace cts {

namespace {

void require_shape(const FiniteSpace& space, const ConditioningFamily& family,
                   const std::vector<Measure>& candidate) {
  if (static_cast<int>(candidate.size()) != family.size())
    throw std::invalid_argument(
        "candidate keyed by " + std::to_string(candidate.size()) +
        " events, family has " + std::to_string(family.size()));
  for (const auto& measure : candidate)
    if (static_cast<int>(measure.mass.size()) != space.size())
      throw std::invalid_argument("measure over wrong space (expected " +
                                  std::to_string(space.size()) + " points, got " +
                                  std::to_string(measure.mass.size()) + ")");
}

}  // namespace

ValidationReport validate_cps(const FiniteSpace& space,
                              const ConditioningFamily& family,
                              const std::vector<Measure>& candidate) {
  require_shape(space, family, candidate);
  ValidationReport report;
  const Rational one(1);

  for (int b = 0; b < family.size(); ++b) {
    const Event& event = family.events[b];
    const Measure& mu = candidate[b];
    std::string at = event_label(space, event);
    for (int x = 0; x < space.size(); ++x)
      if (mu.mass[x].is_negative())
        report.add("negative-mass",
                   "mu(" + space.label(x) + "|" + at + ") = " +
                       mu.mass[x].str() + " < 0",
                   {{"event", at}, {"point", space.label(x)}});
    if (Rational total = mu.total(); total != one)
      report.add("measure-sum",
                 "mu(.|" + at + ") has total mass " + total.str(),
                 {{"event", at}, {"total", total.str()}});
    if (Rational on_event = mu.mass_of(event); on_event != one) {
      // Locate a support point outside the event when one exists.
      std::string witness;
      for (int x = 0; x < space.size(); ++x)
        if (!event.contains(x) && !mu.mass[x].is_zero()) {
          witness = space.label(x);
          break;
        }
      report.add("off-event-mass",
                 "mu(" + at + "|" + at + ") = " + on_event.str() +
                     (witness.empty() ? "" : ", mass escapes at " + witness),
                 {{"event", at}, {"on_event", on_event.str()}});
    }
  }

  // Chain rule over nested event pairs, reduced to singletons.
  for (int b = 0; b < family.size(); ++b) {
    for (int c = 0; c < family.size(); ++c) {
      if (b == c) continue;
      const Event& inner = family.events[b];
      const Event& outer = family.events[c];
      if (!inner.subset_of(outer)) continue;
      Rational inner_given_outer = candidate[c].mass_of(inner);
      for (int x : inner.members) {
        Rational lhs = candidate[b].mass[x] * inner_given_outer;
        Rational rhs = candidate[c].mass[x];
        if (lhs != rhs) {
          std::string bl = event_label(space, inner);
          std::string cl = event_label(space, outer);
          report.add("chain-rule",
                     "mu(" + space.label(x) + "|" + bl + ") * mu(" + bl + "|" +
                         cl + ") = " + lhs.str() + " but mu(" +
                         space.label(x) + "|" + cl + ") = " + rhs.str(),
                     {{"point", space.label(x)},
                      {"inner", bl},
                      {"outer", cl}});
        }
      }
    }
  }
  return report;
}

ValidationReport validate_cps(const Cps& cps) {
  return validate_cps(cps.space, cps.family, cps.conditionals);
}

ConditioningFamily cylinder_family(const ConditioningFamily& family_on_x,
                                   int y_size) {
  ConditioningFamily out;
  out.events.reserve(family_on_x.events.size());
  for (const Event& base : family_on_x.events) {
    Event cyl;
    cyl.members.reserve(base.members.size() * y_size);
    for (int ix : base.members)
      for (int iy = 0; iy < y_size; ++iy)
        cyl.members.push_back(pair_index(ix, iy, y_size));
    std::sort(cyl.members.begin(), cyl.members.end());
    out.events.push_back(std::move(cyl));
  }
  return out;
}

bool detect_cylinder_family(const ConditioningFamily& family, int x_size,
                            int y_size, std::vector<Event>* base) {
  std::vector<Event> recovered;
  for (const Event& event : family.events) {
    if (event.size() % y_size != 0) return false;
    Event b;
    for (int i = 0; i < event.size(); i += y_size) {
      int ix = pair_left(event.members[i], y_size);
      if (ix >= x_size) return false;
      for (int iy = 0; iy < y_size; ++iy)
        if (event.members[i + iy] != pair_index(ix, iy, y_size)) return false;
      b.members.push_back(ix);
    }
    recovered.push_back(std::move(b));
  }
  if (base) *base = std::move(recovered);
  return true;
}

Cps pushforward_cps(const Cps& mu, const std::vector<int>& f,
                    const FiniteSpace& target,
                    const ConditioningFamily& family_y) {
  if (static_cast<int>(f.size()) != mu.space.size())
    throw std::invalid_argument("point map has wrong domain size");
  for (int fx : f)
    if (fx < 0 || fx >= target.size())
      throw std::invalid_argument("point map value out of range");

  // Preimage of every target event, matched against mu.family as sets.
  std::vector<int> source_index(family_y.size(), -1);
  std::vector<bool> used(mu.family.size(), false);
  for (int c = 0; c < family_y.size(); ++c) {
    Event pre;
    for (int x = 0; x < mu.space.size(); ++x)
      if (family_y.events[c].contains(f[x])) pre.members.push_back(x);
    int match = mu.family.index_of(pre);
    if (match < 0)
      throw std::invalid_argument(
          "preimage of event " + event_label(target, family_y.events[c]) +
          " is not a conditioning event of the source");
    source_index[c] = match;
    used[match] = true;
  }
  for (int b = 0; b < mu.family.size(); ++b)
    if (!used[b])
      throw std::invalid_argument(
          "source event " + event_label(mu.space, mu.family.events[b]) +
          " is not the preimage of any target event");

  Cps out;
  out.space = target;
  out.family = family_y;
  out.conditionals.resize(family_y.size());
  for (int c = 0; c < family_y.size(); ++c) {
    Measure pushed;
    pushed.mass.assign(target.size(), Rational(0));
    const Measure& src = mu.conditionals[source_index[c]];
    for (int x = 0; x < mu.space.size(); ++x)
      if (!src.mass[x].is_zero()) pushed.mass[f[x]] += src.mass[x];
    out.conditionals[c] = std::move(pushed);
  }
  return out;
}

Cps marginal_cps(const Cps& mu, const FiniteSpace& x, const FiniteSpace& y) {
  if (mu.space != product_space(x, y))
    throw std::invalid_argument("CPS is not over the stated product space");
  std::vector<Event> base;
  if (!detect_cylinder_family(mu.family, x.size(), y.size(), &base))
    throw std::invalid_argument(
        "conditioning family is not of cylinder form over the product");
  std::vector<int> projection(mu.space.size());
  for (int p = 0; p < mu.space.size(); ++p)
    projection[p] = pair_left(p, y.size());
  return pushforward_cps(mu, projection, x,
                         ConditioningFamily{std::move(base)});
}

Cps conditional_of_measure(const FiniteSpace& space, const Measure& p,
                           const ConditioningFamily& family) {
  if (static_cast<int>(p.mass.size()) != space.size())
    throw std::invalid_argument("measure over wrong space");
  for (int i = 0; i < space.size(); ++i)
    if (p.mass[i].is_zero() || p.mass[i].is_negative())
      throw std::invalid_argument("measure must have full support, fails at " +
                                  space.label(i));
  Cps out;
  out.space = space;
  out.family = family;
  out.conditionals.reserve(family.events.size());
  for (const Event& event : family.events) {
    Rational on_event = p.mass_of(event);
    Measure cond;
    cond.mass.assign(space.size(), Rational(0));
    for (int m : event.members) cond.mass[m] = p.mass[m] / on_event;
    out.conditionals.push_back(std::move(cond));
  }
  return out;
}

}  // namespace cts
