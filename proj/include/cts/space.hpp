#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cts/rational.hpp"

namespace cts {

// Named finite point set. The declaration order of the labels is the
// canonical total order used everywhere: tie-breaking, right inverses,
// serialization.
struct FiniteSpace {
  std::vector<std::string> points;

  int size() const { return static_cast<int>(points.size()); }
  // -1 when absent.
  int index_of(std::string_view label) const;
  const std::string& label(int index) const { return points.at(index); }

  friend bool operator==(const FiniteSpace&, const FiniteSpace&) = default;
};

// Validates: nonempty, labels unique.
FiniteSpace make_space(std::vector<std::string> labels);

// Product space with lexicographic point order; labels "(x,y)".
// Point (ix, iy) sits at index ix * |Y| + iy.
FiniteSpace product_space(const FiniteSpace& x, const FiniteSpace& y);
inline int pair_index(int ix, int iy, int y_size) { return ix * y_size + iy; }
inline int pair_left(int index, int y_size) { return index / y_size; }
inline int pair_right(int index, int y_size) { return index % y_size; }

// Subset of a FiniteSpace as strictly increasing point indices.
struct Event {
  std::vector<int> members;

  int size() const { return static_cast<int>(members.size()); }
  bool contains(int point) const;
  bool subset_of(const Event& other) const;

  friend bool operator==(const Event&, const Event&) = default;
};

Event make_event(std::vector<int> members, int space_size);

// Rendered as "{a,b}" with members in canonical order.
std::string event_label(const FiniteSpace& space, const Event& event);

// Nonempty list of nonempty, pairwise distinct events. The declared order is
// kept (it drives serialization and largest-event selection).
struct ConditioningFamily {
  std::vector<Event> events;

  int size() const { return static_cast<int>(events.size()); }
  // -1 when no event equals `needle`.
  int index_of(const Event& needle) const;

  friend bool operator==(const ConditioningFamily&,
                         const ConditioningFamily&) = default;
};

ConditioningFamily make_family(std::vector<Event> events, int space_size);

// Dense mass function over a FiniteSpace; a probability measure when all
// masses are >= 0 and sum to exactly 1 (callers validate where required).
struct Measure {
  std::vector<Rational> mass;

  Rational total() const;
  Rational mass_of(const Event& event) const;

  friend bool operator==(const Measure&, const Measure&) = default;
};

Measure uniform_measure(int space_size);
Measure dirac_measure(int space_size, int point);

}  // namespace cts
