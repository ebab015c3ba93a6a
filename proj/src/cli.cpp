#include "cts/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cts/io.hpp"

namespace cts::io {

namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int output_width() {
  if (const char* env = std::getenv("CTS_OUTPUT_WIDTH")) {
    int w = std::atoi(env);
    if (w >= 40 && w <= 400) return w;
  }
  return 72;
}

struct Printer {
  std::ostream& out;
  bool machine;

  void rule() const {
    if (!machine) out << std::string(output_width(), '-') << "\n";
  }
  void line(const std::string& text) const {
    if (!machine) out << text << "\n";
  }
  void doc(const Json& j) const { out << j.dump(2) << "\n"; }
  void raw(const std::string& text) const { out << text; }
};

Json violations_json(const ValidationReport& report) {
  Json arr = Json::array();
  for (const Violation& v : report.violations) {
    Json item = Json::object();
    item["code"] = v.code;
    item["message"] = v.message;
    Json detail = Json::object();
    for (const auto& [key, value] : v.detail) detail[key] = value;
    item["detail"] = std::move(detail);
    arr.push_back(std::move(item));
  }
  return arr;
}

int cmd_validate(const std::string& file, Printer& p) {
  TypeStructure ts = parse_structure(read_file(file));
  ValidationReport report = validate_structure(ts);
  if (p.machine) {
    Json j = Json::object();
    j["command"] = "validate";
    j["valid"] = report.ok();
    j["violations"] = violations_json(report);
    p.doc(j);
  } else if (report.ok()) {
    p.line("valid");
  } else {
    p.line("invalid: " + std::to_string(report.violations.size()) +
           " violation(s)");
    p.rule();
    for (const Violation& v : report.violations)
      p.line("[" + v.code + "] " + v.message);
  }
  return report.ok() ? 0 : 1;
}

int cmd_unfold(const std::string& file, const std::string& player_name,
               int depth, const std::string& type_label, Printer& p) {
  TypeStructure ts = parse_structure(read_file(file));
  Player i = ts.player_by_name(player_name);
  if (i < 0) throw InputError("unknown player \"" + player_name + "\"");
  auto prefixes = unfold(ts, depth);

  PrefixDocument doc;
  doc.ctx = context_of(ts);
  doc.player_names = {ts.side[0].name, ts.side[1].name};
  doc.player = i;

  if (!type_label.empty()) {
    int t = ts.side[i].types.index_of(type_label);
    if (t < 0) throw InputError("unknown type \"" + type_label + "\"");
    doc.prefix = prefixes[i][t];
    p.line("order-" + std::to_string(depth) + " prefix of (" + player_name +
           ", " + type_label + "):");
    p.raw(serialize_prefix(doc));
    return 0;
  }

  Json j = Json::object();
  j["format_version"] = kFormatVersion;
  j["kind"] = "unfold";
  j["player"] = player_name;
  j["depth"] = depth;
  Json entries = Json::object();
  for (int t = 0; t < ts.side[i].types.size(); ++t) {
    doc.prefix = prefixes[i][t];
    entries[ts.side[i].types.label(t)] =
        Json::parse(serialize_prefix(doc));
  }
  j["prefixes"] = std::move(entries);
  p.line("order-" + std::to_string(depth) + " prefixes of player " +
         player_name + ":");
  p.doc(j);
  return 0;
}

std::optional<int> resolve_depth(bool fixpoint, int depth) {
  if (fixpoint && depth > 0)
    throw InputError("--depth and --fixpoint are mutually exclusive");
  if (!fixpoint && depth <= 0)
    throw InputError("one of --depth N or --fixpoint is required");
  if (fixpoint) return std::nullopt;
  return depth;
}

int cmd_compare(const std::string& star_file, const std::string& base_file,
                bool fixpoint, int depth, Printer& p) {
  TypeStructure star = parse_structure(read_file(star_file));
  TypeStructure base = parse_structure(read_file(base_file));
  std::optional<int> at = resolve_depth(fixpoint, depth);
  InclusionReport report = hierarchies_included(star, base, at);
  std::string scope =
      at ? "order " + std::to_string(*at) : "all orders (fixpoint)";
  if (p.machine) {
    Json j = Json::object();
    j["command"] = "compare";
    j["scope"] = scope;
    j["included"] = report.included;
    if (report.witness) {
      Json w = Json::object();
      w["player"] = star.side[report.witness->first].name;
      w["type"] =
          star.side[report.witness->first].types.label(report.witness->second);
      j["witness"] = std::move(w);
    }
    j["terminal_within_class"] =
        report.included && !at && report.unique_hierarchy_class;
    p.doc(j);
  } else if (report.included) {
    p.line("included-in holds at " + scope +
           ": every starred hierarchy is generated by the base structure");
    if (!at && report.unique_hierarchy_class)
      p.line("note: a single hierarchy exists over this singleton space, so "
             "the base structure is terminal within this class");
  } else {
    p.line("included-in fails at " + scope + ": type \"" +
           star.side[report.witness->first].types.label(
               report.witness->second) +
           "\" of player " + star.side[report.witness->first].name +
           " has no matching base hierarchy");
  }
  return report.included ? 0 : 1;
}

Json partition_json(const TypeStructure& ts, const PerPlayer<Partition>& parts) {
  Json j = Json::object();
  for (Player i = 0; i < 2; ++i) {
    Json blocks = Json::array();
    for (int b = 0; b < parts[i].block_count; ++b) {
      Json block = Json::array();
      for (int t = 0; t < ts.side[i].types.size(); ++t)
        if (parts[i].block_of[t] == b) block.push_back(ts.side[i].types.label(t));
      blocks.push_back(std::move(block));
    }
    j[ts.side[i].name] = std::move(blocks);
  }
  return j;
}

int cmd_refine(const std::string& file, Printer& p) {
  TypeStructure ts = parse_structure(read_file(file));
  RefineResult result = refine(ts);
  if (p.machine) {
    Json j = Json::object();
    j["command"] = "refine";
    j["fixpoint_index"] = result.fixpoint_index;
    Json rounds = Json::array();
    for (const auto& parts : result.rounds)
      rounds.push_back(partition_json(ts, parts));
    j["rounds"] = std::move(rounds);
    p.doc(j);
  } else {
    p.line("fixpoint index: " + std::to_string(result.fixpoint_index));
    for (std::size_t n = 0; n < result.rounds.size(); ++n) {
      p.rule();
      p.line("P_" + std::to_string(n) + ":");
      for (Player i = 0; i < 2; ++i) {
        std::string row = "  " + ts.side[i].name + ": ";
        for (int b = 0; b < result.rounds[n][i].block_count; ++b) {
          row += "{";
          bool first = true;
          for (int t = 0; t < ts.side[i].types.size(); ++t)
            if (result.rounds[n][i].block_of[t] == b) {
              if (!first) row += ",";
              row += ts.side[i].types.label(t);
              first = false;
            }
          row += "} ";
        }
        p.line(row);
      }
    }
  }
  return 0;
}

int cmd_redundancy(const std::string& file, Printer& p) {
  TypeStructure ts = parse_structure(read_file(file));
  RedundancyReport report = is_non_redundant(ts);
  if (p.machine) {
    Json j = Json::object();
    j["command"] = "redundancy";
    j["non_redundant"] = report.non_redundant;
    if (report.witness) {
      const auto& [player, t, u] = *report.witness;
      Json w = Json::object();
      w["player"] = ts.side[player].name;
      w["types"] = Json::array({ts.side[player].types.label(t),
                                ts.side[player].types.label(u)});
      j["witness"] = std::move(w);
    }
    p.doc(j);
  } else if (report.non_redundant) {
    p.line("non-redundant: distinct types generate distinct hierarchies");
  } else {
    const auto& [player, t, u] = *report.witness;
    p.line("redundant: (" + ts.side[player].name + ", " +
           ts.side[player].types.label(t) + ", " +
           ts.side[player].types.label(u) + ") generate the same hierarchy");
  }
  return report.non_redundant ? 0 : 1;
}

int cmd_morphism(const std::string& star_file, const std::string& base_file,
                 const std::string& map_file, bool hierarchy, bool fixpoint,
                 int depth, Printer& p) {
  TypeStructure star = parse_structure(read_file(star_file));
  TypeStructure base = parse_structure(read_file(base_file));
  TypeMap phi = resolve_type_map(parse_type_map(read_file(map_file)), star, base);

  if (!hierarchy) {
    if (fixpoint || depth > 0)
      throw InputError("--depth/--fixpoint apply only with --hierarchy");
    TypeMorphismReport report = check_type_morphism(star, base, phi);
    if (p.machine) {
      Json j = Json::object();
      j["command"] = "morphism";
      j["kind"] = "type";
      j["morphism"] = report.ok;
      if (report.witness) {
        const auto& w = *report.witness;
        Json wj = Json::object();
        wj["player"] = star.side[w.player].name;
        wj["type"] = star.side[w.player].types.label(w.type);
        wj["event"] =
            event_label(base.space, base.side[w.player].family.events[w.event]);
        wj["point"] = base.belief_space(w.player).label(w.point);
        j["witness"] = std::move(wj);
      }
      p.doc(j);
    } else if (report.ok) {
      p.line("type morphism: the map commutes with the belief maps");
    } else {
      const auto& w = *report.witness;
      p.line("not a type morphism: mismatch at (" +
             star.side[w.player].name + ", " +
             star.side[w.player].types.label(w.type) + "), event " +
             event_label(base.space,
                         base.side[w.player].family.events[w.event]) +
             ", point " + base.belief_space(w.player).label(w.point));
    }
    return report.ok ? 0 : 1;
  }

  std::optional<int> at =
      (fixpoint || depth > 0) ? resolve_depth(fixpoint, depth) : std::nullopt;
  HierarchyMorphismReport report = check_hierarchy_morphism(star, base, phi, at);
  std::string scope = at ? "order " + std::to_string(*at) : "all orders (fixpoint)";
  if (p.machine) {
    Json j = Json::object();
    j["command"] = "morphism";
    j["kind"] = "hierarchy";
    j["scope"] = scope;
    j["morphism"] = report.ok;
    if (report.witness) {
      Json wj = Json::object();
      wj["player"] = star.side[report.witness->first].name;
      wj["type"] =
          star.side[report.witness->first].types.label(report.witness->second);
      j["witness"] = std::move(wj);
    }
    p.doc(j);
  } else if (report.ok) {
    p.line("hierarchy morphism at " + scope +
           ": every type maps to a type with the same hierarchy");
  } else {
    p.line("not a hierarchy morphism at " + scope + ": type \"" +
           star.side[report.witness->first].types.label(
               report.witness->second) +
           "\" of player " + star.side[report.witness->first].name +
           " maps to a different hierarchy");
  }
  return report.ok ? 0 : 1;
}

int cmd_completeness(const std::string& file, Printer& p) {
  TypeStructure ts = parse_structure(read_file(file));
  CompletenessReport report = completeness_report(ts);
  auto witness_doc = [&](Player i) {
    ProductCpsDocument doc;
    doc.left = ts.space;
    doc.right = ts.side[other(i)].types;
    doc.cps = *report.side[i].witness;
    return Json::parse(serialize_product_cps(doc));
  };
  if (p.machine) {
    Json j = Json::object();
    j["command"] = "completeness";
    j["complete"] = report.complete();
    Json players = Json::array();
    for (Player i = 0; i < 2; ++i) {
      Json pj = Json::object();
      pj["name"] = ts.side[i].name;
      pj["complete"] = report.side[i].complete;
      pj["forced_singleton_codomain"] = report.side[i].forced_singleton;
      if (report.side[i].witness) pj["witness"] = witness_doc(i);
      players.push_back(std::move(pj));
    }
    j["players"] = std::move(players);
    p.doc(j);
  } else {
    for (Player i = 0; i < 2; ++i) {
      if (report.side[i].complete) {
        p.line("player " + ts.side[i].name + ": complete" +
               (report.side[i].forced_singleton
                    ? " (one-element CPS codomain)"
                    : ""));
      } else {
        p.line("player " + ts.side[i].name +
               ": incomplete; a CPS outside the belief image:");
        p.raw(serialize_product_cps({ts.space, ts.side[other(i)].types,
                                     *report.side[i].witness}));
      }
    }
    p.line(report.complete() ? "complete" : "incomplete");
  }
  return report.complete() ? 0 : 1;
}

int cmd_extend(const std::string& file, int order, Printer& p) {
  PrefixDocument doc = parse_prefix(read_file(file));
  int target = order > 0 ? order : doc.prefix->order() + 1;
  if (target <= doc.prefix->order())
    throw InputError("target order " + std::to_string(target) +
                     " does not exceed the prefix order " +
                     std::to_string(doc.prefix->order()));
  try {
    while (doc.prefix->order() < target)
      doc.prefix = coherent_extend(doc.prefix, doc.ctx, doc.player);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  p.line("coherent extension to order " + std::to_string(target) + ":");
  p.raw(serialize_prefix(doc));
  return 0;
}

int cmd_lift(const std::string& file, const std::string& map_file, Printer& p) {
  ProductCpsDocument doc = parse_product_cps(read_file(file));
  PointMapDocument f1 = parse_point_map(read_file(map_file));
  if (f1.codomain != doc.right)
    throw InputError(
        "surjection codomain does not match the CPS's right factor");
  Cps lifted;
  try {
    lifted = lift_cps(doc.cps, doc.left, doc.right, f1.map, f1.domain);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  p.line("lift through the surjection (pushforward recovers the input):");
  p.raw(serialize_product_cps({doc.left, f1.domain, std::move(lifted)}));
  return 0;
}

int cmd_ingest_signals(const std::string& file, Printer& p) {
  SignalsDocument doc = parse_signals(read_file(file));
  PerPlayer<ConditioningFamily> fams;
  for (Player i = 0; i < 2; ++i)
    fams[i] = derive_conditioning_from_signals(doc.space, doc.signal[i]);
  p.line("conditioning families derived from the signal partitions:");
  p.raw(serialize_conditioning(doc, fams));
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"exact toolkit for finite conditional type structures"};
  app.name("cts");
  app.require_subcommand(1);
  // Let --format appear before or after the subcommand.
  app.fallthrough();
  std::string format = "text";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "machine"}));

  std::string file, base_file, map_file, player_name, type_label;
  int depth = 0, order = 0;
  bool fixpoint = false, hierarchy = false;

  auto* validate = app.add_subcommand("validate", "check a structure document");
  validate->add_option("file", file, "structure document")->required();

  auto* unfold_cmd =
      app.add_subcommand("unfold", "unfold types into hierarchy prefixes");
  unfold_cmd->add_option("file", file, "structure document")->required();
  unfold_cmd->add_option("--player", player_name, "player name")->required();
  unfold_cmd->add_option("--depth", depth, "prefix order")
      ->required()
      ->check(CLI::PositiveNumber);
  unfold_cmd->add_option("--type", type_label,
                         "emit a single type's prefix document");

  auto* compare = app.add_subcommand(
      "compare", "decide included-in between generated hierarchy sets");
  compare->add_option("star", file, "candidate structure")->required();
  compare->add_option("base", base_file, "base structure")->required();
  compare->add_option("--depth", depth, "compare order-n prefixes")
      ->check(CLI::PositiveNumber);
  compare->add_flag("--fixpoint", fixpoint, "compare at all orders");

  auto* refine_cmd =
      app.add_subcommand("refine", "partition types by hierarchy equality");
  refine_cmd->add_option("file", file, "structure document")->required();

  auto* redundancy =
      app.add_subcommand("redundancy", "decide non-redundancy");
  redundancy->add_option("file", file, "structure document")->required();

  auto* morphism = app.add_subcommand("morphism", "verify a type map");
  morphism->add_option("star", file, "source structure")->required();
  morphism->add_option("base", base_file, "target structure")->required();
  morphism->add_option("--map-file", map_file, "type-map document")->required();
  morphism->add_flag("--hierarchy", hierarchy,
                     "check hierarchy preservation instead of the belief "
                     "equation");
  morphism->add_option("--depth", depth, "hierarchy check order")
      ->check(CLI::PositiveNumber);
  morphism->add_flag("--fixpoint", fixpoint, "hierarchy check at all orders");

  auto* completeness =
      app.add_subcommand("completeness", "decide belief-map surjectivity");
  completeness->add_option("file", file, "structure document")->required();

  auto* extend = app.add_subcommand("extend", "coherently extend a prefix");
  extend->add_option("file", file, "prefix document")->required();
  extend->add_option("--order", order, "target order (default: +1)")
      ->check(CLI::PositiveNumber);

  auto* lift = app.add_subcommand("lift", "lift a CPS through a surjection");
  lift->add_option("file", file, "product-cps document")->required();
  lift->add_option("--surjection-file", map_file, "point-map document")
      ->required();

  auto* ingest = app.add_subcommand(
      "ingest-signals", "derive conditioning families from signal maps");
  ingest->add_option("file", file, "signals document")->required();

  std::vector<const char*> argv;
  argv.push_back("cts");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << app.help();
    return 2;
  }

  Printer printer{out, format == "machine"};
  try {
    if (app.got_subcommand(validate)) return cmd_validate(file, printer);
    if (app.got_subcommand(unfold_cmd))
      return cmd_unfold(file, player_name, depth, type_label, printer);
    if (app.got_subcommand(compare))
      return cmd_compare(file, base_file, fixpoint, depth, printer);
    if (app.got_subcommand(refine_cmd)) return cmd_refine(file, printer);
    if (app.got_subcommand(redundancy)) return cmd_redundancy(file, printer);
    if (app.got_subcommand(morphism))
      return cmd_morphism(file, base_file, map_file, hierarchy, fixpoint,
                          depth, printer);
    if (app.got_subcommand(completeness))
      return cmd_completeness(file, printer);
    if (app.got_subcommand(extend)) return cmd_extend(file, order, printer);
    if (app.got_subcommand(lift)) return cmd_lift(file, map_file, printer);
    if (app.got_subcommand(ingest)) return cmd_ingest_signals(file, printer);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace cts::io
