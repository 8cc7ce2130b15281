#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace domtest {

/// Dominance criteria that can be tested. KrAdditive is the marginal-only
/// criterion for additively separable value functions.
enum class Criterion { lasbd, lasbd2, iasd, iasd2, liasd, liasd2, kr_additive };

inline constexpr std::array<Criterion, 7> kAllCriteria = {
    Criterion::lasbd, Criterion::lasbd2, Criterion::iasd, Criterion::iasd2,
    Criterion::liasd, Criterion::liasd2, Criterion::kr_additive};

/// The six criteria excluding KrAdditive.
inline constexpr std::array<Criterion, 6> kSixCriteria = {
    Criterion::lasbd, Criterion::lasbd2, Criterion::iasd,
    Criterion::iasd2, Criterion::liasd,  Criterion::liasd2};

/// Null hypothesis orientation. AOverB tests H0: A dominates B.
enum class Direction { a_over_b, b_over_a };

/// Which directions a run covers.
enum class DirectionSet { a_over_b, b_over_a, both };

std::string_view to_string(Criterion c);
std::string_view to_string(Direction d);
std::string_view to_string(DirectionSet d);

/// Accepts both display names ("LASBD", "KR_ADDITIVE") and CLI names ("lasbd", "kr").
std::optional<Criterion> parse_criterion(std::string_view name);
std::optional<Direction> parse_direction(std::string_view name);
/// Accepts "ab", "ba", "both" as well as the to_string() spellings.
std::optional<DirectionSet> parse_direction_set(std::string_view name);

/// Stable numeric tag folded into bootstrap seeds.
constexpr unsigned direction_tag(Direction d) { return d == Direction::a_over_b ? 0u : 1u; }

}  // namespace domtest
