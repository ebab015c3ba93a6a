#include "cts/hierarchy.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace cts {

namespace {

std::size_t hash_mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_string(const std::string& s) {
  std::size_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

std::size_t hash_cps(const Cps& cps) {
  std::size_t h = 0;
  for (const auto& p : cps.space.points) h = hash_mix(h, hash_string(p));
  for (const auto& e : cps.family.events)
    for (int m : e.members) h = hash_mix(h, static_cast<std::size_t>(m));
  for (const auto& cond : cps.conditionals)
    for (const auto& mass : cond.mass) h = hash_mix(h, hash_value(mass));
  return h;
}

std::size_t hash_level(const LevelCps& level) {
  std::size_t h = 0;
  for (const auto& cond : level.conditionals) {
    h = hash_mix(h, cond.mass.size());
    for (const auto& [point, mass] : cond.mass) {
      h = hash_mix(h, static_cast<std::size_t>(point.state));
      h = hash_mix(h, point.peer ? point.peer->hash() : 0);
      h = hash_mix(h, hash_value(mass));
    }
  }
  return h;
}

template <typename T>
int compare_sequences(const std::vector<T>& a, const std::vector<T>& b,
                      int (*cmp)(const T&, const T&)) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = cmp(a[i], b[i]); c != 0) return c;
  return a.size() < b.size() ? -1 : a.size() > b.size() ? 1 : 0;
}

}  // namespace

Prefix::Prefix(Cps first, std::vector<LevelCps> higher)
    : first_(std::move(first)), higher_(std::move(higher)) {
  std::size_t h = hash_cps(first_);
  for (const auto& level : higher_) h = hash_mix(h, hash_level(level));
  hash_ = h;
}

int compare(const Rational& a, const Rational& b) {
  auto c = a <=> b;
  return c < 0 ? -1 : c > 0 ? 1 : 0;
}

static int compare_measure(const Measure& a, const Measure& b) {
  return compare_sequences(a.mass, b.mass, compare);
}

static int compare_event(const Event& a, const Event& b) {
  std::size_t n = std::min(a.members.size(), b.members.size());
  for (std::size_t i = 0; i < n; ++i)
    if (a.members[i] != b.members[i]) return a.members[i] < b.members[i] ? -1 : 1;
  return a.members.size() < b.members.size()   ? -1
         : a.members.size() > b.members.size() ? 1
                                               : 0;
}

int compare(const Cps& a, const Cps& b) {
  if (int c = compare_sequences(
          a.space.points, b.space.points,
          +[](const std::string& x, const std::string& y) {
            return x.compare(y) < 0 ? -1 : x.compare(y) > 0 ? 1 : 0;
          });
      c != 0)
    return c;
  if (int c = compare_sequences(a.family.events, b.family.events,
                                compare_event);
      c != 0)
    return c;
  return compare_sequences(a.conditionals, b.conditionals, compare_measure);
}

int compare(const LevelPoint& a, const LevelPoint& b) {
  if (a.state != b.state) return a.state < b.state ? -1 : 1;
  if (a.peer == b.peer) return 0;
  if (!a.peer || !b.peer) return !a.peer ? -1 : 1;
  return compare(*a.peer, *b.peer);
}

int compare(const LevelMeasure& a, const LevelMeasure& b) {
  std::size_t n = std::min(a.mass.size(), b.mass.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare(a.mass[i].first, b.mass[i].first); c != 0) return c;
    if (int c = compare(a.mass[i].second, b.mass[i].second); c != 0) return c;
  }
  return a.mass.size() < b.mass.size() ? -1 : a.mass.size() > b.mass.size() ? 1 : 0;
}

int compare(const LevelCps& a, const LevelCps& b) {
  return compare_sequences(a.conditionals, b.conditionals, compare);
}

int compare(const Prefix& a, const Prefix& b) {
  if (&a == &b) return 0;
  if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
  if (int c = compare(a.first(), b.first()); c != 0) return c;
  return compare_sequences(a.higher(), b.higher(), compare);
}

bool operator==(const Prefix& a, const Prefix& b) {
  if (&a == &b) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

bool prefix_equal(const PrefixPtr& a, const PrefixPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

HierarchyContext context_of(const TypeStructure& ts) {
  return HierarchyContext{ts.space, {ts.side[0].family, ts.side[1].family}};
}

PrefixPtr extended_with_level(const PrefixPtr& p, LevelCps level) {
  std::vector<LevelCps> higher = p->higher();
  higher.push_back(std::move(level));
  return std::make_shared<Prefix>(p->first(), std::move(higher));
}

PrefixPtr truncate(const PrefixPtr& p, int m) {
  if (!p) throw std::invalid_argument("null prefix");
  if (m < 1 || m > p->order())
    throw std::invalid_argument("truncation order " + std::to_string(m) +
                                " out of range for order " +
                                std::to_string(p->order()));
  if (m == p->order()) return p;
  std::vector<LevelCps> higher(p->higher().begin(),
                               p->higher().begin() + (m - 1));
  return std::make_shared<Prefix>(p->first(), std::move(higher));
}

Partition partition_by_prefixes(const std::vector<PrefixPtr>& prefixes,
                                std::vector<PrefixPtr>* reps) {
  Partition part;
  part.block_of.resize(prefixes.size());
  std::vector<PrefixPtr> block_reps;
  for (std::size_t t = 0; t < prefixes.size(); ++t) {
    int block = -1;
    for (std::size_t b = 0; b < block_reps.size(); ++b)
      if (prefix_equal(block_reps[b], prefixes[t])) {
        block = static_cast<int>(b);
        break;
      }
    if (block < 0) {
      block = static_cast<int>(block_reps.size());
      block_reps.push_back(prefixes[t]);
    }
    part.block_of[t] = block;
  }
  part.block_count = static_cast<int>(block_reps.size());
  if (reps) *reps = std::move(block_reps);
  return part;
}

LevelCps pushforward_under_partition(const Cps& mu, int s_size,
                                     const Partition& part,
                                     const std::vector<PrefixPtr>& reps) {
  if (s_size <= 0 || mu.space.size() % s_size != 0)
    throw std::invalid_argument("belief space is not a product over S");
  int t_size = mu.space.size() / s_size;
  if (static_cast<int>(part.block_of.size()) != t_size)
    throw std::invalid_argument("partition does not cover the type set");

  LevelCps out;
  out.conditionals.reserve(mu.conditionals.size());
  for (const Measure& cond : mu.conditionals) {
    std::vector<std::pair<LevelPoint, Rational>> atoms;
    for (int p = 0; p < mu.space.size(); ++p) {
      if (cond.mass[p].is_zero()) continue;
      int block = part.block_of[pair_right(p, t_size)];
      if (block >= static_cast<int>(reps.size()) || !reps[block])
        throw std::invalid_argument("missing representative for block " +
                                    std::to_string(block));
      atoms.push_back(
          {LevelPoint{pair_left(p, t_size), reps[block]}, cond.mass[p]});
    }
    std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) {
      return compare(a.first, b.first) < 0;
    });
    LevelMeasure merged;
    for (auto& [point, mass] : atoms) {
      if (!merged.mass.empty() &&
          compare(merged.mass.back().first, point) == 0)
        merged.mass.back().second += mass;
      else
        merged.mass.push_back({std::move(point), mass});
    }
    out.conditionals.push_back(std::move(merged));
  }
  return out;
}

PerPlayer<std::vector<PrefixPtr>> unfold(const TypeStructure& ts, int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  require_valid_structure(ts);

  PerPlayer<std::vector<PrefixPtr>> current;
  for (Player i = 0; i < 2; ++i) {
    const auto& side = ts.side[i];
    FiniteSpace domain = ts.space;
    FiniteSpace peer_types = ts.side[other(i)].types;
    current[i].reserve(side.beliefs.size());
    for (const Cps& belief : side.beliefs)
      current[i].push_back(std::make_shared<Prefix>(
          marginal_cps(belief, domain, peer_types), std::vector<LevelCps>{}));
  }

  for (int k = 2; k <= depth; ++k) {
    PerPlayer<Partition> parts;
    PerPlayer<std::vector<PrefixPtr>> reps;
    for (Player j = 0; j < 2; ++j)
      parts[j] = partition_by_prefixes(current[j], &reps[j]);
    PerPlayer<std::vector<PrefixPtr>> next;
    for (Player i = 0; i < 2; ++i) {
      const auto& side = ts.side[i];
      next[i].reserve(side.beliefs.size());
      for (int t = 0; t < side.types.size(); ++t) {
        LevelCps level = pushforward_under_partition(
            side.beliefs[t], ts.space.size(), parts[other(i)],
            reps[other(i)]);
        next[i].push_back(extended_with_level(current[i][t], std::move(level)));
      }
    }
    current = std::move(next);
  }
  return current;
}

namespace {

// Shared scratch for coherence checking across nested peers.
struct CoherenceChecker {
  ValidationReport report;
  std::set<const Prefix*> visited_ok;

  void fail_structure(const std::string& why) {
    throw std::invalid_argument("malformed prefix: " + why);
  }

  std::string point_name(const Prefix& p, int state) {
    return p.first().space.label(state);
  }

  void check_level_structure(const Prefix& p, int level_index,
                             const std::string& path) {
    const LevelCps& level = p.level(level_index);
    const ConditioningFamily& family = p.first().family;
    if (static_cast<int>(level.conditionals.size()) != family.size())
      fail_structure(path + "level " + std::to_string(level_index) +
                     " has wrong conditional count");
    for (int e = 0; e < family.size(); ++e) {
      const auto& atoms = level.conditionals[e].mass;
      for (std::size_t a = 0; a < atoms.size(); ++a) {
        const auto& [point, mass] = atoms[a];
        if (point.state < 0 || point.state >= p.first().space.size())
          fail_structure(path + "state index out of range in level " +
                         std::to_string(level_index));
        if (mass.is_zero())
          fail_structure(path + "zero mass stored in level " +
                         std::to_string(level_index));
        if (!point.peer)
          fail_structure(path + "null peer in level " +
                         std::to_string(level_index));
        if (point.peer->order() != level_index - 1)
          fail_structure(path + "support point order mismatch in level " +
                         std::to_string(level_index) + ": expected order " +
                         std::to_string(level_index - 1) + ", found " +
                         std::to_string(point.peer->order()));
        if (point.peer->first().space != p.first().space)
          fail_structure(path + "peer over a different primitive space");
        if (a > 0 && compare(atoms[a - 1].first, point) >= 0)
          fail_structure(path + "support point order mismatch in level " +
                         std::to_string(level_index));
      }
    }
  }

  // Measure axioms plus the per-level chain rule, on the sparse form.
  void check_level_cps(const Prefix& p, int level_index,
                       const std::string& path) {
    const LevelCps& level = p.level(level_index);
    const ConditioningFamily& family = p.first().family;
    const FiniteSpace& space = p.first().space;
    const Rational one(1);
    for (int e = 0; e < family.size(); ++e) {
      const auto& atoms = level.conditionals[e].mass;
      Rational total;
      for (const auto& [point, mass] : atoms) {
        if (mass.is_negative())
          report.add("negative-mass",
                     path + "level " + std::to_string(level_index) +
                         ": negative mass at (" + point_name(p, point.state) +
                         ", .)",
                     {{"level", std::to_string(level_index)},
                      {"event", event_label(space, family.events[e])}});
        if (!family.events[e].contains(point.state))
          report.add("off-event-mass",
                     path + "level " + std::to_string(level_index) +
                         ": mass outside cylinder of " +
                         event_label(space, family.events[e]) + " at state " +
                         point_name(p, point.state),
                     {{"level", std::to_string(level_index)},
                      {"event", event_label(space, family.events[e])},
                      {"point", point_name(p, point.state)}});
        total += mass;
      }
      if (total != one)
        report.add("measure-sum",
                   path + "level " + std::to_string(level_index) + ": mu(.|" +
                       event_label(space, family.events[e]) +
                       " x H) has total mass " + total.str(),
                   {{"level", std::to_string(level_index)},
                    {"event", event_label(space, family.events[e])},
                    {"total", total.str()}});
    }

    for (int b = 0; b < family.size(); ++b) {
      for (int c = 0; c < family.size(); ++c) {
        if (b == c) continue;
        if (!family.events[b].subset_of(family.events[c])) continue;
        const auto& inner = level.conditionals[b].mass;
        const auto& outer = level.conditionals[c].mass;
        Rational inner_given_outer;
        for (const auto& [point, mass] : outer)
          if (family.events[b].contains(point.state)) inner_given_outer += mass;
        // Walk the union of supports restricted to states of B.
        std::size_t ib = 0, ic = 0;
        while (true) {
          while (ib < inner.size() &&
                 !family.events[b].contains(inner[ib].first.state))
            ++ib;
          while (ic < outer.size() &&
                 !family.events[b].contains(outer[ic].first.state))
            ++ic;
          if (ib >= inner.size() && ic >= outer.size()) break;
          int cmp;
          if (ib < inner.size() && ic < outer.size())
            cmp = compare(inner[ib].first, outer[ic].first);
          else
            cmp = ib < inner.size() ? -1 : 1;
          LevelPoint at = cmp <= 0 ? inner[ib].first : outer[ic].first;
          Rational in_b = cmp <= 0 ? inner[ib].second : Rational(0);
          Rational in_c = cmp >= 0 ? outer[ic].second : Rational(0);
          if (in_b * inner_given_outer != in_c)
            report.add(
                "chain-rule",
                path + "level " + std::to_string(level_index) +
                    ": chain rule fails at state " + point_name(p, at.state) +
                    " for " + event_label(space, family.events[b]) +
                    " inside " + event_label(space, family.events[c]),
                {{"level", std::to_string(level_index)},
                 {"point", point_name(p, at.state)},
                 {"inner", event_label(space, family.events[b])},
                 {"outer", event_label(space, family.events[c])}});
          if (cmp <= 0) ++ib;
          if (cmp >= 0) ++ic;
        }
      }
    }
  }

  // mu^{k+1} pushed through (s, q) -> (s, truncate(q, k-1)) must be mu^k.
  void check_adjacent(const Prefix& p, int upper, const std::string& path) {
    const ConditioningFamily& family = p.first().family;
    const FiniteSpace& space = p.first().space;
    const LevelCps& above = p.level(upper);
    for (int e = 0; e < family.size(); ++e) {
      if (upper == 2) {
        Measure margin;
        margin.mass.assign(space.size(), Rational(0));
        for (const auto& [point, mass] : above.conditionals[e].mass)
          margin.mass[point.state] += mass;
        if (margin != p.first().conditionals[e]) {
          int witness = 0;
          for (int x = 0; x < space.size(); ++x)
            if (margin.mass[x] != p.first().conditionals[e].mass[x]) {
              witness = x;
              break;
            }
          report.add("level-coherence",
                     path + "level 2 marginal disagrees with level 1 at (" +
                         space.label(witness) + " | " +
                         event_label(space, family.events[e]) + ")",
                     {{"level", "1"},
                      {"event", event_label(space, family.events[e])},
                      {"point", space.label(witness)}});
        }
      } else {
        std::vector<std::pair<LevelPoint, Rational>> atoms;
        for (const auto& [point, mass] : above.conditionals[e].mass)
          atoms.push_back(
              {LevelPoint{point.state, truncate(point.peer, upper - 2)},
               mass});
        std::sort(atoms.begin(), atoms.end(),
                  [](const auto& a, const auto& b) {
                    return compare(a.first, b.first) < 0;
                  });
        LevelMeasure merged;
        for (auto& [point, mass] : atoms) {
          if (!merged.mass.empty() &&
              compare(merged.mass.back().first, point) == 0)
            merged.mass.back().second += mass;
          else
            merged.mass.push_back({std::move(point), mass});
        }
        if (compare(merged, p.level(upper - 1).conditionals[e]) != 0)
          report.add("level-coherence",
                     path + "level " + std::to_string(upper) +
                         " marginal disagrees with level " +
                         std::to_string(upper - 1) + " given " +
                         event_label(space, family.events[e]),
                     {{"level", std::to_string(upper - 1)},
                      {"event", event_label(space, family.events[e])}});
      }
    }
  }

  void check(const Prefix& p, const std::string& path) {
    if (visited_ok.count(&p)) return;
    if (static_cast<int>(p.first().conditionals.size()) !=
        p.first().family.size())
      fail_structure(path + "level 1 has wrong conditional count");

    ValidationReport level1 = validate_cps(p.first());
    for (Violation v : level1.violations) {
      v.message = path + "level 1: " + v.message;
      v.detail.insert(v.detail.begin(), {"level", "1"});
      report.violations.push_back(std::move(v));
    }

    for (int k = 2; k <= p.order(); ++k) {
      check_level_structure(p, k, path);
      check_level_cps(p, k, path);
      check_adjacent(p, k, path);
      for (const auto& cond : p.level(k).conditionals)
        for (const auto& [point, mass] : cond.mass)
          check(*point.peer, path + "level " + std::to_string(k) + " peer: ");
    }
    visited_ok.insert(&p);
  }
};

}  // namespace

ValidationReport check_prefix_coherence(const Prefix& p) {
  CoherenceChecker checker;
  checker.check(p, "");
  return checker.report;
}

}  // namespace cts
