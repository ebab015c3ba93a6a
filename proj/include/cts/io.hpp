#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "cts/analysis.hpp"
#include "cts/extension.hpp"

namespace cts::io {

inline constexpr const char* kFormatVersion = "cts/1";

// Bad input documents: syntax errors carry line/column, semantic errors
// name the offending label.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structures ----------------------------------------------------------

TypeStructure parse_structure(const std::string& text);
std::string serialize_structure(const TypeStructure& ts);

// Hierarchy prefixes ---------------------------------------------------

// A prefix document is self-contained: the ambient space, both conditioning
// families, the owning player, and the nested levels.
struct PrefixDocument {
  HierarchyContext ctx;
  PerPlayer<std::string> player_names;
  Player player = 0;
  PrefixPtr prefix;
};

PrefixDocument parse_prefix(const std::string& text);
std::string serialize_prefix(const PrefixDocument& doc);

// CPSs over explicit products (lift input/output) ----------------------

struct ProductCpsDocument {
  FiniteSpace left;
  FiniteSpace right;
  Cps cps;  // over product_space(left, right) with a cylinder family
};

ProductCpsDocument parse_product_cps(const std::string& text);
std::string serialize_product_cps(const ProductCpsDocument& doc);

// Maps ------------------------------------------------------------------

struct PointMapDocument {
  FiniteSpace domain;
  FiniteSpace codomain;
  std::vector<int> map;  // domain index -> codomain index
};

PointMapDocument parse_point_map(const std::string& text);

// Per-player type maps by label; resolved against structures later.
struct TypeMapDocument {
  std::vector<std::pair<std::string, std::map<std::string, std::string>>>
      players;
};

TypeMapDocument parse_type_map(const std::string& text);

// Resolves labels to a total index map star -> base; throws InputError on
// unknown players/types or missing entries.
TypeMap resolve_type_map(const TypeMapDocument& doc, const TypeStructure& star,
                         const TypeStructure& base);

// Signal partitions ------------------------------------------------------

struct SignalsDocument {
  FiniteSpace space;
  PerPlayer<std::string> player_names;
  PerPlayer<std::vector<std::string>> signal;  // per point, aligned to space
};

SignalsDocument parse_signals(const std::string& text);

// The conditioning events observable through a signal map: nonempty
// preimages, ordered by first occurrence of the signal value.
ConditioningFamily derive_conditioning_from_signals(
    const FiniteSpace& space, const std::vector<std::string>& signal);

std::string serialize_conditioning(const SignalsDocument& doc,
                                   const PerPlayer<ConditioningFamily>& fams);

}  // namespace cts::io
