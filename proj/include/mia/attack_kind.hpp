#pragma once

#include <array>
#include <string_view>

namespace mia {

enum class AttackKind { gap, inquiry, repeat, brainwash, hybrid, other };

inline constexpr std::array<AttackKind, 5> kAllAttacks = {
    AttackKind::gap, AttackKind::inquiry, AttackKind::repeat, AttackKind::brainwash,
    AttackKind::hybrid};

std::string_view to_string(AttackKind kind);
AttackKind attack_kind_from(std::string_view name);

}  // namespace mia
