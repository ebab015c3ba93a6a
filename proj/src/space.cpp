#include "cts/space.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace cts {

int FiniteSpace::index_of(std::string_view label) const {
  for (int i = 0; i < size(); ++i)
    if (points[i] == label) return i;
  return -1;
}

FiniteSpace make_space(std::vector<std::string> labels) {
  if (labels.empty()) throw std::invalid_argument("space must be nonempty");
  std::unordered_set<std::string_view> seen;
  for (const auto& label : labels)
    if (!seen.insert(label).second)
      throw std::invalid_argument("duplicate point label \"" + label + "\"");
  return FiniteSpace{std::move(labels)};
}

FiniteSpace product_space(const FiniteSpace& x, const FiniteSpace& y) {
  FiniteSpace out;
  out.points.reserve(x.points.size() * y.points.size());
  for (const auto& a : x.points)
    for (const auto& b : y.points) out.points.push_back("(" + a + "," + b + ")");
  return out;
}

bool Event::contains(int point) const {
  return std::binary_search(members.begin(), members.end(), point);
}

bool Event::subset_of(const Event& other) const {
  return std::includes(other.members.begin(), other.members.end(),
                       members.begin(), members.end());
}

Event make_event(std::vector<int> members, int space_size) {
  std::sort(members.begin(), members.end());
  if (members.empty()) throw std::invalid_argument("event must be nonempty");
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] < 0 || members[i] >= space_size)
      throw std::invalid_argument("event member out of range");
    if (i > 0 && members[i] == members[i - 1])
      throw std::invalid_argument("duplicate event member");
  }
  return Event{std::move(members)};
}

std::string event_label(const FiniteSpace& space, const Event& event) {
  std::string out = "{";
  for (std::size_t i = 0; i < event.members.size(); ++i) {
    if (i > 0) out += ",";
    out += space.label(event.members[i]);
  }
  out += "}";
  return out;
}

int ConditioningFamily::index_of(const Event& needle) const {
  for (int i = 0; i < size(); ++i)
    if (events[i] == needle) return i;
  return -1;
}

ConditioningFamily make_family(std::vector<Event> events, int space_size) {
  if (events.empty())
    throw std::invalid_argument("conditioning family must be nonempty");
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].members.empty())
      throw std::invalid_argument("conditioning event must be nonempty");
    for (int m : events[i].members)
      if (m < 0 || m >= space_size)
        throw std::invalid_argument("conditioning event member out of range");
    // Duplicates are an error, never silently merged.
    for (std::size_t k = 0; k < i; ++k)
      if (events[k] == events[i])
        throw std::invalid_argument("duplicate conditioning event");
  }
  return ConditioningFamily{std::move(events)};
}

Rational Measure::total() const {
  Rational sum;
  for (const auto& m : mass) sum += m;
  return sum;
}

Rational Measure::mass_of(const Event& event) const {
  Rational sum;
  for (int m : event.members) sum += mass.at(m);
  return sum;
}

Measure uniform_measure(int space_size) {
  Measure out;
  out.mass.assign(space_size, Rational(1, space_size));
  return out;
}

Measure dirac_measure(int space_size, int point) {
  Measure out;
  out.mass.assign(space_size, Rational(0));
  out.mass.at(point) = Rational(1);
  return out;
}

}  // namespace cts
