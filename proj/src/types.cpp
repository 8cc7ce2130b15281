#include "domtest/types.hpp"

#include <algorithm>
#include <cctype>

namespace domtest {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::lasbd: return "LASBD";
    case Criterion::lasbd2: return "LASBD2";
    case Criterion::iasd: return "IASD";
    case Criterion::iasd2: return "IASD2";
    case Criterion::liasd: return "LIASD";
    case Criterion::liasd2: return "LIASD2";
    case Criterion::kr_additive: return "KR_ADDITIVE";
  }
  return "?";
}

std::string_view to_string(Direction d) {
  return d == Direction::a_over_b ? "A_over_B" : "B_over_A";
}

std::string_view to_string(DirectionSet d) {
  switch (d) {
    case DirectionSet::a_over_b: return "A_over_B";
    case DirectionSet::b_over_a: return "B_over_A";
    case DirectionSet::both: return "both";
  }
  return "?";
}

std::optional<Criterion> parse_criterion(std::string_view name) {
  const std::string n = lower(name);
  if (n == "kr" || n == "kr_additive") return Criterion::kr_additive;
  for (Criterion c : kAllCriteria) {
    if (lower(to_string(c)) == n) return c;
  }
  return std::nullopt;
}

std::optional<Direction> parse_direction(std::string_view name) {
  const std::string n = lower(name);
  if (n == "ab" || n == "a_over_b") return Direction::a_over_b;
  if (n == "ba" || n == "b_over_a") return Direction::b_over_a;
  return std::nullopt;
}

std::optional<DirectionSet> parse_direction_set(std::string_view name) {
  const std::string n = lower(name);
  if (n == "both") return DirectionSet::both;
  if (auto d = parse_direction(n)) {
    return *d == Direction::a_over_b ? DirectionSet::a_over_b : DirectionSet::b_over_a;
  }
  return std::nullopt;
}

}  // namespace domtest
