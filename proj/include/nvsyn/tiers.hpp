#pragma once

#include <optional>
#include <string>

namespace nvsyn {

enum class ComponentTier { T1 = 1, T2, T3, T4, T5 };
enum class RelationshipTier { R1 = 1, R2, R3, R4, R5, R6 };
enum class CombinedConfidence { VeryHigh, High, Moderate, Low, VeryLow };
enum class ActionabilityLevel { HighlyActionable, ModeratelyActionable, WeaklyActionable, NonActionable };
enum class Specificity { Specific, General };

const char* tier_code(ComponentTier t);      // "T1"
const char* tier_display(ComponentTier t);   // "Strong"
const char* tier_code(RelationshipTier t);   // "R1"
const char* tier_display(RelationshipTier t);
const char* confidence_name(CombinedConfidence c);
const char* actionability_name(ActionabilityLevel a);
const char* specificity_name(Specificity s);

std::optional<ComponentTier> parse_component_tier(const std::string& s);
std::optional<RelationshipTier> parse_relationship_tier(const std::string& s);
std::optional<CombinedConfidence> parse_confidence(const std::string& s);
std::optional<ActionabilityLevel> parse_actionability(const std::string& s);
std::optional<Specificity> parse_specificity(const std::string& s);

inline bool is_actionable_tier(RelationshipTier t) { return t <= RelationshipTier::R4; }

}  // namespace nvsyn
