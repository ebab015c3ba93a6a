#include "cts/analysis.hpp"

#include <algorithm>
#include <stdexcept>

namespace cts {

namespace {

// Pushforward of a belief onto (state, block id) pairs: the block-id form
// of one refinement signature. Entries sorted by (state, block).
using Signature =
    std::vector<std::vector<std::pair<std::pair<int, int>, Rational>>>;

Signature block_signature(const Cps& belief, int s_size,
                          const Partition& peer_blocks) {
  int t_size = belief.space.size() / s_size;
  Signature sig;
  sig.reserve(belief.conditionals.size());
  for (const Measure& cond : belief.conditionals) {
    std::vector<std::pair<std::pair<int, int>, Rational>> entry;
    for (int p = 0; p < belief.space.size(); ++p) {
      if (cond.mass[p].is_zero()) continue;
      entry.push_back({{pair_left(p, t_size),
                        peer_blocks.block_of[pair_right(p, t_size)]},
                       cond.mass[p]});
    }
    std::sort(entry.begin(), entry.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<std::pair<int, int>, Rational>> merged;
    for (auto& e : entry) {
      if (!merged.empty() && merged.back().first == e.first)
        merged.back().second += e.second;
      else
        merged.push_back(std::move(e));
    }
    sig.push_back(std::move(merged));
  }
  return sig;
}

PerPlayer<Partition> trivial_partitions(const TypeStructure& ts) {
  PerPlayer<Partition> parts;
  for (Player i = 0; i < 2; ++i) {
    parts[i].block_of.assign(ts.side[i].types.size(), 0);
    parts[i].block_count = 1;
  }
  return parts;
}

PerPlayer<Partition> refine_step(const TypeStructure& ts,
                                 const PerPlayer<Partition>& prev) {
  PerPlayer<Partition> next;
  for (Player i = 0; i < 2; ++i) {
    std::vector<Signature> seen;  // block id = first-occurrence order
    Partition part;
    part.block_of.resize(ts.side[i].types.size());
    for (int t = 0; t < ts.side[i].types.size(); ++t) {
      Signature sig = block_signature(ts.side[i].beliefs[t], ts.space.size(),
                                      prev[other(i)]);
      int block = -1;
      for (std::size_t b = 0; b < seen.size(); ++b)
        if (seen[b] == sig) {
          block = static_cast<int>(b);
          break;
        }
      if (block < 0) {
        block = static_cast<int>(seen.size());
        seen.push_back(std::move(sig));
      }
      part.block_of[t] = block;
    }
    part.block_count = static_cast<int>(seen.size());
    next[i] = std::move(part);
  }
  return next;
}

}  // namespace

RefineResult refine(const TypeStructure& ts) {
  require_valid_structure(ts);
  RefineResult result;
  result.rounds.push_back(trivial_partitions(ts));
  int bound = ts.side[0].types.size() + ts.side[1].types.size();
  for (int round = 0; round <= bound; ++round) {
    PerPlayer<Partition> next = refine_step(ts, result.rounds.back());
    if (next == result.rounds.back()) {
      result.fixpoint_index = static_cast<int>(result.rounds.size()) - 1;
      return result;
    }
    result.rounds.push_back(std::move(next));
  }
  throw std::logic_error("refinement failed to stabilize within |T1|+|T2|");
}

std::vector<PerPlayer<Partition>> refine_rounds(const TypeStructure& ts,
                                                int k) {
  require_valid_structure(ts);
  if (k < 0) throw std::invalid_argument("round count must be >= 0");
  std::vector<PerPlayer<Partition>> rounds{trivial_partitions(ts)};
  for (int n = 1; n <= k; ++n)
    rounds.push_back(refine_step(ts, rounds.back()));
  return rounds;
}

RedundancyReport is_non_redundant(const TypeStructure& ts) {
  RefineResult fix = refine(ts);
  const PerPlayer<Partition>& last = fix.rounds.back();
  RedundancyReport report;
  for (Player i = 0; i < 2; ++i) {
    if (last[i].discrete()) continue;
    for (int t = 0; t < ts.side[i].types.size(); ++t)
      for (int u = t + 1; u < ts.side[i].types.size(); ++u)
        if (last[i].block_of[t] == last[i].block_of[u]) {
          report.non_redundant = false;
          report.witness = {{i, t, u}};
          return report;
        }
  }
  report.non_redundant = true;
  return report;
}

UnionStructure disjoint_union(const TypeStructure& star,
                              const TypeStructure& base) {
  if (star.space != base.space)
    throw std::invalid_argument(
        "structures do not share the space of primitive uncertainty");
  for (Player i = 0; i < 2; ++i)
    if (star.side[i].family != base.side[i].family)
      throw std::invalid_argument("structures do not share player " +
                                  star.side[i].name + "'s conditioning family");

  UnionStructure out;
  out.ts.space = star.space;
  for (Player i = 0; i < 2; ++i) {
    auto& side = out.ts.side[i];
    side.name = star.side[i].name;
    side.family = star.side[i].family;
    std::vector<std::string> labels;
    for (const auto& t : star.side[i].types.points) labels.push_back("s:" + t);
    for (const auto& t : base.side[i].types.points) labels.push_back("b:" + t);
    side.types = make_space(std::move(labels));
    out.star_types[i] = star.side[i].types.size();
  }

  for (Player i = 0; i < 2; ++i) {
    auto& side = out.ts.side[i];
    FiniteSpace domain = out.ts.belief_space(i);
    ConditioningFamily cylinders = out.ts.belief_family(i);
    int star_j = star.side[other(i)].types.size();
    int base_j = base.side[other(i)].types.size();
    int union_j = star_j + base_j;
    auto embed = [&](const Cps& belief, int j_size, int j_offset) {
      Cps lifted;
      lifted.space = domain;
      lifted.family = cylinders;
      lifted.conditionals.reserve(belief.conditionals.size());
      for (const Measure& cond : belief.conditionals) {
        Measure wide;
        wide.mass.assign(domain.size(), Rational(0));
        for (int p = 0; p < belief.space.size(); ++p) {
          if (cond.mass[p].is_zero()) continue;
          int target = pair_index(pair_left(p, j_size),
                                  j_offset + pair_right(p, j_size), union_j);
          wide.mass[target] = cond.mass[p];
        }
        lifted.conditionals.push_back(std::move(wide));
      }
      return lifted;
    };
    for (const Cps& belief : star.side[i].beliefs)
      side.beliefs.push_back(embed(belief, star_j, 0));
    for (const Cps& belief : base.side[i].beliefs)
      side.beliefs.push_back(embed(belief, base_j, star_j));
  }
  return out;
}

InclusionReport hierarchies_included(const TypeStructure& star,
                                     const TypeStructure& base,
                                     std::optional<int> depth) {
  if (depth && *depth < 1)
    throw std::invalid_argument("comparison depth must be >= 1");
  require_valid_structure(star);
  require_valid_structure(base);
  UnionStructure u = disjoint_union(star, base);

  PerPlayer<Partition> parts =
      depth ? refine_rounds(u.ts, *depth).back() : refine(u.ts).rounds.back();

  InclusionReport report;
  report.unique_hierarchy_class = star.space.size() == 1;
  for (Player i = 0; i < 2 && report.unique_hierarchy_class; ++i)
    if (star.side[i].family.size() != 1 ||
        star.side[i].family.events[0].size() != 1)
      report.unique_hierarchy_class = false;

  for (Player i = 0; i < 2; ++i) {
    int star_count = u.star_types[i];
    int total = u.ts.side[i].types.size();
    for (int t = 0; t < star_count; ++t) {
      bool matched = false;
      for (int b = star_count; b < total && !matched; ++b)
        matched = parts[i].block_of[t] == parts[i].block_of[b];
      if (!matched) {
        report.included = false;
        report.witness = {{i, t}};
        return report;
      }
    }
  }
  report.included = true;
  return report;
}

namespace {

void require_total_map(const TypeStructure& star, const TypeStructure& base,
                       const TypeMap& phi) {
  for (Player i = 0; i < 2; ++i) {
    if (static_cast<int>(phi[i].size()) != star.side[i].types.size())
      throw std::invalid_argument("type map for player " + star.side[i].name +
                                  " is not total");
    for (int target : phi[i])
      if (target < 0 || target >= base.side[i].types.size())
        throw std::invalid_argument("type map for player " +
                                    star.side[i].name +
                                    " hits an unknown target type");
  }
}

}  // namespace

TypeMorphismReport check_type_morphism(const TypeStructure& star,
                                       const TypeStructure& base,
                                       const TypeMap& phi) {
  require_valid_structure(star);
  require_valid_structure(base);
  if (star.space != base.space)
    throw std::invalid_argument(
        "structures do not share the space of primitive uncertainty");
  for (Player i = 0; i < 2; ++i)
    if (star.side[i].family != base.side[i].family)
      throw std::invalid_argument("structures do not share player " +
                                  star.side[i].name + "'s conditioning family");
  require_total_map(star, base, phi);

  TypeMorphismReport report;
  for (Player i = 0; i < 2; ++i) {
    Player j = other(i);
    int star_j = star.side[j].types.size();
    int base_j = base.side[j].types.size();
    FiniteSpace target = base.belief_space(i);
    ConditioningFamily target_family = base.belief_family(i);
    // (s, t_j) -> (s, phi_j(t_j)) on product point indices.
    std::vector<int> point_map(star.belief_space(i).size());
    for (std::size_t p = 0; p < point_map.size(); ++p)
      point_map[p] =
          pair_index(pair_left(static_cast<int>(p), star_j),
                     phi[j][pair_right(static_cast<int>(p), star_j)], base_j);

    for (int t = 0; t < star.side[i].types.size(); ++t) {
      Cps pushed = pushforward_cps(star.side[i].beliefs[t], point_map, target,
                                   target_family);
      const Cps& expected = base.side[i].beliefs[phi[i][t]];
      if (pushed == expected) continue;
      for (int e = 0; e < target_family.size(); ++e)
        for (int p = 0; p < target.size(); ++p)
          if (pushed.conditionals[e].mass[p] !=
              expected.conditionals[e].mass[p]) {
            report.ok = false;
            report.witness = TypeMorphismReport::Witness{i, t, e, p};
            return report;
          }
    }
  }
  report.ok = true;
  return report;
}

HierarchyMorphismReport check_hierarchy_morphism(const TypeStructure& star,
                                                 const TypeStructure& base,
                                                 const TypeMap& phi,
                                                 std::optional<int> depth) {
  if (depth && *depth < 1)
    throw std::invalid_argument("comparison depth must be >= 1");
  require_valid_structure(star);
  require_valid_structure(base);
  require_total_map(star, base, phi);
  UnionStructure u = disjoint_union(star, base);
  PerPlayer<Partition> parts =
      depth ? refine_rounds(u.ts, *depth).back() : refine(u.ts).rounds.back();

  HierarchyMorphismReport report;
  for (Player i = 0; i < 2; ++i) {
    int star_count = u.star_types[i];
    for (int t = 0; t < star_count; ++t)
      if (parts[i].block_of[t] != parts[i].block_of[star_count + phi[i][t]]) {
        report.ok = false;
        report.witness = {{i, t}};
        return report;
      }
  }
  report.ok = true;
  return report;
}

CompletenessReport completeness_report(const TypeStructure& ts) {
  require_valid_structure(ts);
  CompletenessReport report;
  for (Player i = 0; i < 2; ++i) {
    auto& side = report.side[i];
    FiniteSpace domain = ts.belief_space(i);
    ConditioningFamily cylinders = ts.belief_family(i);

    bool all_singleton = true;
    for (const Event& event : cylinders.events)
      all_singleton = all_singleton && event.size() == 1;
    if (all_singleton) {
      // Every conditional is a forced Dirac: the codomain has exactly one
      // element and any type hits it.
      side.complete = true;
      side.forced_singleton = true;
      continue;
    }

    // First maximal-cardinality event, then its first point.
    int best = 0;
    for (int e = 1; e < cylinders.size(); ++e)
      if (cylinders.events[e].size() > cylinders.events[best].size()) best = e;
    int star_point = cylinders.events[best].members.front();

    int candidates = ts.side[i].types.size() + 1;
    for (int k = 1; k <= candidates; ++k) {
      // Weight star_point with k, everything else with 1; the conditional
      // at the largest event separates distinct k exactly.
      Rational total(k - 1 + domain.size());
      Measure p;
      p.mass.assign(domain.size(), Rational(1) / total);
      p.mass[star_point] = Rational(k) / total;
      Cps candidate = conditional_of_measure(domain, p, cylinders);
      bool in_image = false;
      for (const Cps& belief : ts.side[i].beliefs)
        if (belief == candidate) {
          in_image = true;
          break;
        }
      if (!in_image) {
        side.complete = false;
        side.witness = std::move(candidate);
        break;
      }
    }
    if (!side.witness && !side.forced_singleton)
      throw std::logic_error(
          "completeness witness family exhausted without a gap");
  }
  return report;
}

}  // namespace cts
