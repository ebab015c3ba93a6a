#include "cts/io.hpp"

#include <algorithm>

#include "json.hpp"

namespace cts::io {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw InputError(message);
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Convert the byte offset into line/column.
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    fail("syntax error at line " + std::to_string(line) + ", column " +
         std::to_string(column));
  }
}

const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing field \"") + key + "\"");
  return *it;
}

std::string string_field(const Json& j, const char* key) {
  const Json& value = field(j, key);
  if (!value.is_string()) fail(std::string("field \"") + key + "\" must be a string");
  return value.get<std::string>();
}

void check_header(const Json& j, const char* kind) {
  if (!j.is_object()) fail("document must be an object");
  if (string_field(j, "format_version") != kFormatVersion)
    fail("unsupported format_version (expected \"" +
         std::string(kFormatVersion) + "\")");
  if (string_field(j, "kind") != kind)
    fail("expected a \"" + std::string(kind) + "\" document");
}

FiniteSpace parse_space_field(const Json& j, const char* key) {
  const Json& arr = field(j, key);
  if (!arr.is_array() || arr.empty())
    fail(std::string("field \"") + key + "\" must be a nonempty array");
  std::vector<std::string> labels;
  for (const Json& item : arr) {
    if (!item.is_string()) fail("point labels must be strings");
    labels.push_back(item.get<std::string>());
  }
  try {
    return make_space(std::move(labels));
  } catch (const std::invalid_argument& e) {
    fail(std::string(key) + ": " + e.what());
  }
}

ConditioningFamily parse_family(const Json& arr, const FiniteSpace& space,
                                const std::string& where) {
  if (!arr.is_array() || arr.empty())
    fail(where + ": conditioning must be a nonempty array of events");
  std::vector<Event> events;
  for (const Json& raw : arr) {
    if (!raw.is_array()) fail(where + ": each event must be an array of labels");
    std::vector<int> members;
    for (const Json& label : raw) {
      if (!label.is_string()) fail(where + ": event members must be strings");
      int p = space.index_of(label.get<std::string>());
      if (p < 0)
        fail(where + ": unknown point \"" + label.get<std::string>() +
             "\" in conditioning event");
      members.push_back(p);
    }
    try {
      events.push_back(make_event(std::move(members), space.size()));
    } catch (const std::invalid_argument& e) {
      fail(where + ": " + e.what());
    }
  }
  try {
    return make_family(std::move(events), space.size());
  } catch (const std::invalid_argument& e) {
    fail(where + ": " + e.what());
  }
}

Rational parse_rational(const Json& value, const std::string& where) {
  if (!value.is_string()) fail(where + ": masses must be \"num/den\" strings");
  try {
    return Rational::parse(value.get<std::string>());
  } catch (const std::exception& e) {
    fail(where + ": " + e.what());
  }
}

// Conditionals given as { event-label: { point-label: "num/den" } }.
std::vector<Measure> parse_conditionals(const Json& obj,
                                        const FiniteSpace& space,
                                        const ConditioningFamily& family,
                                        const FiniteSpace& base_space,
                                        const std::string& where) {
  if (!obj.is_object()) fail(where + ": conditionals must be an object");
  std::vector<Measure> conds(family.size());
  std::vector<bool> seen(family.size(), false);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    int e = -1;
    for (int k = 0; k < family.size(); ++k)
      if (event_label(base_space, family.events[k]) == it.key()) {
        e = k;
        break;
      }
    if (e < 0) fail(where + ": unknown conditioning event " + it.key());
    if (seen[e]) fail(where + ": duplicate conditional for " + it.key());
    seen[e] = true;
    Measure m;
    m.mass.assign(space.size(), Rational(0));
    if (!it.value().is_object())
      fail(where + ": conditional " + it.key() + " must be an object");
    for (auto pt = it.value().begin(); pt != it.value().end(); ++pt) {
      int p = space.index_of(pt.key());
      if (p < 0) fail(where + ": unknown point \"" + pt.key() + "\"");
      m.mass[p] = parse_rational(pt.value(), where + " at " + pt.key());
    }
    conds[e] = std::move(m);
  }
  for (int k = 0; k < family.size(); ++k)
    if (!seen[k])
      fail(where + ": missing conditional for event " +
           event_label(base_space, family.events[k]));
  return conds;
}

Json dump_conditionals(const FiniteSpace& space,
                       const ConditioningFamily& family,
                       const std::vector<Measure>& conds,
                       const FiniteSpace& base_space) {
  Json out = Json::object();
  for (int e = 0; e < family.size(); ++e) {
    Json entry = Json::object();
    for (int p = 0; p < space.size(); ++p)
      if (!conds[e].mass[p].is_zero())
        entry[space.label(p)] = conds[e].mass[p].str();
    out[event_label(base_space, family.events[e])] = std::move(entry);
  }
  return out;
}

Json dump_family(const FiniteSpace& space, const ConditioningFamily& family) {
  Json out = Json::array();
  for (const Event& event : family.events) {
    Json labels = Json::array();
    for (int m : event.members) labels.push_back(space.label(m));
    out.push_back(std::move(labels));
  }
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

TypeStructure parse_structure(const std::string& text) {
  Json j = parse_json(text);
  check_header(j, "structure");
  TypeStructure ts;
  ts.space = parse_space_field(j, "space");

  const Json& players = field(j, "players");
  if (!players.is_array() || players.size() != 2)
    fail("\"players\" must list exactly two players");

  for (Player i = 0; i < 2; ++i) {
    const Json& pj = players[i];
    auto& side = ts.side[i];
    side.name = string_field(pj, "name");
    side.family =
        parse_family(field(pj, "conditioning"), ts.space, "player " + side.name);
    side.types = parse_space_field(pj, "types");
  }
  if (ts.side[0].name == ts.side[1].name)
    fail("players must have distinct names");

  for (Player i = 0; i < 2; ++i) {
    const Json& pj = players[i];
    auto& side = ts.side[i];
    FiniteSpace domain = ts.belief_space(i);
    ConditioningFamily cylinders = ts.belief_family(i);
    const Json& beliefs = field(pj, "beliefs");
    if (!beliefs.is_object()) fail("\"beliefs\" must be an object");
    for (auto it = beliefs.begin(); it != beliefs.end(); ++it)
      if (side.types.index_of(it.key()) < 0)
        fail("player " + side.name + ": belief for unknown type \"" +
             it.key() + "\"");
    for (int t = 0; t < side.types.size(); ++t) {
      const std::string& type = side.types.label(t);
      auto it = beliefs.find(type);
      if (it == beliefs.end())
        fail("player " + side.name + ": missing belief for type \"" + type +
             "\"");
      Cps belief;
      belief.space = domain;
      belief.family = cylinders;
      belief.conditionals = parse_conditionals(
          *it, domain, side.family, ts.space,
          "belief of (" + side.name + ", " + type + ")");
      side.beliefs.push_back(std::move(belief));
    }
  }
  return ts;
}

std::string serialize_structure(const TypeStructure& ts) {
  Json j = Json::object();
  j["format_version"] = kFormatVersion;
  j["kind"] = "structure";
  j["space"] = ts.space.points;
  Json players = Json::array();
  for (Player i = 0; i < 2; ++i) {
    const auto& side = ts.side[i];
    Json pj = Json::object();
    pj["name"] = side.name;
    pj["conditioning"] = dump_family(ts.space, side.family);
    pj["types"] = side.types.points;
    Json beliefs = Json::object();
    FiniteSpace domain = ts.belief_space(i);
    for (int t = 0; t < side.types.size(); ++t)
      beliefs[side.types.label(t)] =
          dump_conditionals(domain, side.family, side.beliefs[t].conditionals,
                            ts.space);
    pj["beliefs"] = std::move(beliefs);
    players.push_back(std::move(pj));
  }
  j["players"] = std::move(players);
  return dump(j);
}

namespace {

// Conditionals of the base family over S, keyed by the base event labels.
// Hierarchy conditionals are keyed the same way at every level.
Json dump_prefix_value(const Prefix& p, const HierarchyContext& ctx) {
  Json out = Json::object();
  out["order"] = p.order();
  Json levels = Json::array();
  const ConditioningFamily& family = p.first().family;
  Json first = Json::object();
  for (int e = 0; e < family.size(); ++e) {
    Json entry = Json::object();
    const Measure& cond = p.first().conditionals[e];
    for (int s = 0; s < ctx.space.size(); ++s)
      if (!cond.mass[s].is_zero()) entry[ctx.space.label(s)] = cond.mass[s].str();
    first[event_label(ctx.space, family.events[e])] = std::move(entry);
  }
  levels.push_back(std::move(first));
  for (int k = 2; k <= p.order(); ++k) {
    Json level = Json::object();
    for (int e = 0; e < family.size(); ++e) {
      Json atoms = Json::array();
      for (const auto& [point, mass] : p.level(k).conditionals[e].mass) {
        Json atom = Json::object();
        atom["state"] = ctx.space.label(point.state);
        atom["peer"] = dump_prefix_value(*point.peer, ctx);
        atom["mass"] = mass.str();
        atoms.push_back(std::move(atom));
      }
      level[event_label(ctx.space, family.events[e])] = std::move(atoms);
    }
    levels.push_back(std::move(level));
  }
  out["levels"] = std::move(levels);
  return out;
}

PrefixPtr parse_prefix_value(const Json& j, const HierarchyContext& ctx,
                             Player player, const std::string& where) {
  if (!j.is_object()) fail(where + ": prefix must be an object");
  const Json& order_field = field(j, "order");
  if (!order_field.is_number_integer() || order_field.get<int>() < 1)
    fail(where + ": \"order\" must be a positive integer");
  int order = order_field.get<int>();
  const Json& levels = field(j, "levels");
  if (!levels.is_array() || static_cast<int>(levels.size()) != order)
    fail(where + ": \"levels\" must list exactly " + std::to_string(order) +
         " levels");
  const ConditioningFamily& family = ctx.families[player];

  Cps first;
  first.space = ctx.space;
  first.family = family;
  first.conditionals = parse_conditionals(levels[0], ctx.space, family,
                                          ctx.space, where + " level 1");

  std::vector<LevelCps> higher;
  for (int k = 2; k <= order; ++k) {
    const Json& level = levels[k - 1];
    if (!level.is_object())
      fail(where + ": level " + std::to_string(k) + " must be an object");
    LevelCps parsed;
    parsed.conditionals.resize(family.size());
    std::vector<bool> seen(family.size(), false);
    for (auto it = level.begin(); it != level.end(); ++it) {
      int e = -1;
      for (int c = 0; c < family.size(); ++c)
        if (event_label(ctx.space, family.events[c]) == it.key()) {
          e = c;
          break;
        }
      if (e < 0)
        fail(where + ": unknown conditioning event " + it.key() +
             " in level " + std::to_string(k));
      if (seen[e]) fail(where + ": duplicate conditional for " + it.key());
      seen[e] = true;
      if (!it.value().is_array())
        fail(where + ": conditional " + it.key() + " must be an array");
      std::vector<std::pair<LevelPoint, Rational>> atoms;
      int index = 0;
      for (const Json& atom : it.value()) {
        std::string at = where + " level " + std::to_string(k) + " atom " +
                         std::to_string(index++);
        if (!atom.is_object()) fail(at + ": must be an object");
        int state = ctx.space.index_of(string_field(atom, "state"));
        if (state < 0)
          fail(at + ": unknown state \"" + string_field(atom, "state") + "\"");
        PrefixPtr peer =
            parse_prefix_value(field(atom, "peer"), ctx, other(player), at);
        if (peer->order() != k - 1)
          fail(at + ": peer must have order " + std::to_string(k - 1));
        Rational mass = parse_rational(field(atom, "mass"), at);
        if (mass.is_zero()) continue;
        atoms.push_back({LevelPoint{state, std::move(peer)}, mass});
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
      parsed.conditionals[e] = std::move(merged);
    }
    for (int c = 0; c < family.size(); ++c)
      if (!seen[c])
        fail(where + ": level " + std::to_string(k) +
             " missing conditional for event " +
             event_label(ctx.space, family.events[c]));
    higher.push_back(std::move(parsed));
  }
  return std::make_shared<Prefix>(std::move(first), std::move(higher));
}

}  // namespace

PrefixDocument parse_prefix(const std::string& text) {
  Json j = parse_json(text);
  check_header(j, "prefix");
  PrefixDocument doc;
  doc.ctx.space = parse_space_field(j, "space");
  const Json& players = field(j, "players");
  if (!players.is_array() || players.size() != 2)
    fail("\"players\" must list exactly two players");
  for (Player i = 0; i < 2; ++i) {
    doc.player_names[i] = string_field(players[i], "name");
    doc.ctx.families[i] =
        parse_family(field(players[i], "conditioning"), doc.ctx.space,
                     "player " + doc.player_names[i]);
  }
  if (doc.player_names[0] == doc.player_names[1])
    fail("players must have distinct names");
  std::string owner = string_field(j, "player");
  if (owner == doc.player_names[0])
    doc.player = 0;
  else if (owner == doc.player_names[1])
    doc.player = 1;
  else
    fail("unknown player \"" + owner + "\"");
  doc.prefix = parse_prefix_value(j, doc.ctx, doc.player, "prefix");
  return doc;
}

std::string serialize_prefix(const PrefixDocument& doc) {
  Json j = Json::object();
  j["format_version"] = kFormatVersion;
  j["kind"] = "prefix";
  j["space"] = doc.ctx.space.points;
  Json players = Json::array();
  for (Player i = 0; i < 2; ++i) {
    Json pj = Json::object();
    pj["name"] = doc.player_names[i];
    pj["conditioning"] = dump_family(doc.ctx.space, doc.ctx.families[i]);
    players.push_back(std::move(pj));
  }
  j["players"] = std::move(players);
  j["player"] = doc.player_names[doc.player];
  Json value = dump_prefix_value(*doc.prefix, doc.ctx);
  j["order"] = value["order"];
  j["levels"] = value["levels"];
  return dump(j);
}

ProductCpsDocument parse_product_cps(const std::string& text) {
  Json j = parse_json(text);
  check_header(j, "product-cps");
  ProductCpsDocument doc;
  doc.left = parse_space_field(j, "left");
  doc.right = parse_space_field(j, "right");
  ConditioningFamily base =
      parse_family(field(j, "conditioning"), doc.left, "conditioning");
  doc.cps.space = product_space(doc.left, doc.right);
  doc.cps.family = cylinder_family(base, doc.right.size());
  doc.cps.conditionals = parse_conditionals(field(j, "conditionals"),
                                            doc.cps.space, base, doc.left,
                                            "conditionals");
  return doc;
}

std::string serialize_product_cps(const ProductCpsDocument& doc) {
  Json j = Json::object();
  j["format_version"] = kFormatVersion;
  j["kind"] = "product-cps";
  j["left"] = doc.left.points;
  j["right"] = doc.right.points;
  std::vector<Event> base;
  if (!detect_cylinder_family(doc.cps.family, doc.left.size(),
                              doc.right.size(), &base))
    throw std::invalid_argument("product CPS family is not cylinder-shaped");
  ConditioningFamily base_family{std::move(base)};
  j["conditioning"] = dump_family(doc.left, base_family);
  j["conditionals"] = dump_conditionals(doc.cps.space, base_family,
                                        doc.cps.conditionals, doc.left);
  return dump(j);
}

PointMapDocument parse_point_map(const std::string& text) {
  Json j = parse_json(text);
  check_header(j, "point-map");
  PointMapDocument doc;
  doc.domain = parse_space_field(j, "domain");
  doc.codomain = parse_space_field(j, "codomain");
  const Json& map = field(j, "map");
  if (!map.is_object()) fail("\"map\" must be an object");
  doc.map.assign(doc.domain.size(), -1);
  for (auto it = map.begin(); it != map.end(); ++it) {
    int from = doc.domain.index_of(it.key());
    if (from < 0) fail("map key \"" + it.key() + "\" is not a domain point");
    if (!it.value().is_string()) fail("map values must be point labels");
    int to = doc.codomain.index_of(it.value().get<std::string>());
    if (to < 0)
      fail("map value \"" + it.value().get<std::string>() +
           "\" is not a codomain point");
    if (doc.map[from] >= 0) fail("duplicate map entry for \"" + it.key() + "\"");
    doc.map[from] = to;
  }
  for (int yidx = 0; yidx < doc.domain.size(); ++yidx)
    if (doc.map[yidx] < 0)
      fail("map is missing domain point \"" + doc.domain.label(yidx) + "\"");
  return doc;
}

TypeMapDocument parse_type_map(const std::string& text) {
  Json j = parse_json(text);
  check_header(j, "type-map");
  TypeMapDocument doc;
  const Json& players = field(j, "players");
  if (!players.is_array() || players.size() != 2)
    fail("\"players\" must list exactly two players");
  for (const Json& pj : players) {
    std::string name = string_field(pj, "name");
    const Json& map = field(pj, "map");
    if (!map.is_object()) fail("\"map\" must be an object");
    std::map<std::string, std::string> entries;
    for (auto it = map.begin(); it != map.end(); ++it) {
      if (!it.value().is_string()) fail("map values must be type labels");
      entries[it.key()] = it.value().get<std::string>();
    }
    doc.players.push_back({std::move(name), std::move(entries)});
  }
  return doc;
}

TypeMap resolve_type_map(const TypeMapDocument& doc, const TypeStructure& star,
                         const TypeStructure& base) {
  TypeMap out;
  PerPlayer<bool> covered{false, false};
  for (const auto& [name, entries] : doc.players) {
    Player i = star.player_by_name(name);
    if (i < 0) fail("map names unknown player \"" + name + "\"");
    if (covered[i]) fail("duplicate map for player \"" + name + "\"");
    covered[i] = true;
    out[i].assign(star.side[i].types.size(), -1);
    for (const auto& [from, to] : entries) {
      int t = star.side[i].types.index_of(from);
      if (t < 0)
        fail("map names unknown type \"" + from + "\" of player " + name);
      int u = base.side[i].types.index_of(to);
      if (u < 0)
        fail("map targets unknown type \"" + to + "\" of player " + name);
      out[i][t] = u;
    }
    for (int t = 0; t < star.side[i].types.size(); ++t)
      if (out[i][t] < 0)
        fail("map is partial: no image for type \"" +
             star.side[i].types.label(t) + "\" of player " + name);
  }
  if (!covered[0] || !covered[1]) fail("map must cover both players");
  return out;
}

SignalsDocument parse_signals(const std::string& text) {
  Json j = parse_json(text);
  check_header(j, "signals");
  SignalsDocument doc;
  doc.space = parse_space_field(j, "space");
  const Json& players = field(j, "players");
  if (!players.is_array() || players.size() != 2)
    fail("\"players\" must list exactly two players");
  for (Player i = 0; i < 2; ++i) {
    const Json& pj = players[i];
    doc.player_names[i] = string_field(pj, "name");
    const Json& map = field(pj, "signal");
    if (!map.is_object()) fail("\"signal\" must be an object");
    doc.signal[i].assign(doc.space.size(), "");
    std::vector<bool> seen(doc.space.size(), false);
    for (auto it = map.begin(); it != map.end(); ++it) {
      int p = doc.space.index_of(it.key());
      if (p < 0) fail("signal keyed by unknown point \"" + it.key() + "\"");
      if (seen[p]) fail("duplicate signal entry for \"" + it.key() + "\"");
      if (!it.value().is_string()) fail("signal values must be strings");
      seen[p] = true;
      doc.signal[i][p] = it.value().get<std::string>();
    }
    for (int p = 0; p < doc.space.size(); ++p)
      if (!seen[p])
        fail("signal of player " + doc.player_names[i] +
             " is missing point \"" + doc.space.label(p) + "\"");
  }
  if (doc.player_names[0] == doc.player_names[1])
    fail("players must have distinct names");
  return doc;
}

ConditioningFamily derive_conditioning_from_signals(
    const FiniteSpace& space, const std::vector<std::string>& signal) {
  if (static_cast<int>(signal.size()) != space.size())
    throw std::invalid_argument("signal map must be total on the space");
  std::vector<std::string> order;  // signal values by first occurrence
  for (const std::string& v : signal)
    if (std::find(order.begin(), order.end(), v) == order.end())
      order.push_back(v);
  std::vector<Event> events;
  for (const std::string& v : order) {
    Event e;
    for (int p = 0; p < space.size(); ++p)
      if (signal[p] == v) e.members.push_back(p);
    events.push_back(std::move(e));
  }
  return ConditioningFamily{std::move(events)};
}

std::string serialize_conditioning(const SignalsDocument& doc,
                                   const PerPlayer<ConditioningFamily>& fams) {
  Json j = Json::object();
  j["format_version"] = kFormatVersion;
  j["kind"] = "conditioning";
  j["space"] = doc.space.points;
  Json players = Json::array();
  for (Player i = 0; i < 2; ++i) {
    Json pj = Json::object();
    pj["name"] = doc.player_names[i];
    pj["conditioning"] = dump_family(doc.space, fams[i]);
    players.push_back(std::move(pj));
  }
  j["players"] = std::move(players);
  return dump(j);
}

}  // namespace cts::io
