#include "cts/structure.hpp"

#include <stdexcept>

namespace cts {

Player TypeStructure::player_by_name(std::string_view name) const {
  for (Player i = 0; i < 2; ++i)
    if (side[i].name == name) return i;
  return -1;
}

ValidationReport validate_structure(const TypeStructure& ts) {
  ValidationReport report;
  if (ts.side[0].name == ts.side[1].name)
    report.add("player-names", "players must have distinct names",
               {{"name", ts.side[0].name}});

  for (Player i = 0; i < 2; ++i) {
    const auto& side = ts.side[i];
    if (static_cast<int>(side.beliefs.size()) != side.types.size()) {
      report.add("belief-count",
                 "player " + side.name + " has " +
                     std::to_string(side.beliefs.size()) + " beliefs for " +
                     std::to_string(side.types.size()) + " types",
                 {{"player", side.name}});
      continue;
    }
    FiniteSpace domain = ts.belief_space(i);
    ConditioningFamily cylinders = ts.belief_family(i);
    for (int t = 0; t < side.types.size(); ++t) {
      const Cps& belief = side.beliefs[t];
      const std::string& type = side.types.label(t);
      if (belief.space != domain) {
        report.add("belief-space",
                   "belief of (" + side.name + ", " + type +
                       ") is not over S x T_" + ts.side[other(i)].name,
                   {{"player", side.name}, {"type", type}});
        continue;
      }
      if (belief.family != cylinders) {
        report.add("belief-family",
                   "belief of (" + side.name + ", " + type +
                       ") does not carry the cylinder family",
                   {{"player", side.name}, {"type", type}});
        continue;
      }
      ValidationReport inner = validate_cps(belief);
      for (Violation v : inner.violations) {
        v.message =
            "(" + side.name + ", " + type + "): " + v.message;
        v.detail.insert(v.detail.begin(),
                        {{"player", side.name}, {"type", type}});
        report.violations.push_back(std::move(v));
      }
    }
  }
  return report;
}

void require_valid_structure(const TypeStructure& ts) {
  ValidationReport report = validate_structure(ts);
  if (!report.ok())
    throw std::invalid_argument("invalid type structure: " +
                                report.violations.front().message);
}

}  // namespace cts
