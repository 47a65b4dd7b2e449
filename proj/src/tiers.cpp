#include "nvsyn/tiers.hpp"

#include "nvsyn/text.hpp"

namespace nvsyn {

const char* tier_code(ComponentTier t) {
    static const char* codes[] = {"T1", "T2", "T3", "T4", "T5"};
    return codes[static_cast<int>(t) - 1];
}

const char* tier_display(ComponentTier t) {
    static const char* names[] = {"Strong", "Moderate", "Supported", "Emerging", "Exploratory"};
    return names[static_cast<int>(t) - 1];
}

const char* tier_code(RelationshipTier t) {
    static const char* codes[] = {"R1", "R2", "R3", "R4", "R5", "R6"};
    return codes[static_cast<int>(t) - 1];
}

const char* tier_display(RelationshipTier t) {
    static const char* names[] = {"Strong", "Substantial", "Moderate", "Supported", "Emerging", "Exploratory"};
    return names[static_cast<int>(t) - 1];
}

const char* confidence_name(CombinedConfidence c) {
    static const char* names[] = {"VeryHigh", "High", "Moderate", "Low", "VeryLow"};
    return names[static_cast<int>(c)];
}

const char* actionability_name(ActionabilityLevel a) {
    static const char* names[] = {"HighlyActionable", "ModeratelyActionable", "WeaklyActionable",
                                  "NonActionable"};
    return names[static_cast<int>(a)];
}

const char* specificity_name(Specificity s) { return s == Specificity::General ? "General" : "Specific"; }

std::optional<ComponentTier> parse_component_tier(const std::string& s) {
    auto f = fold_label(s);
    for (int i = 1; i <= 5; ++i) {
        auto t = static_cast<ComponentTier>(i);
        if (f == fold_label(tier_code(t))) return t;
    }
    return std::nullopt;
}

std::optional<RelationshipTier> parse_relationship_tier(const std::string& s) {
    auto f = fold_label(s);
    for (int i = 1; i <= 6; ++i) {
        auto t = static_cast<RelationshipTier>(i);
        if (f == fold_label(tier_code(t))) return t;
    }
    return std::nullopt;
}

std::optional<CombinedConfidence> parse_confidence(const std::string& s) {
    auto f = fold_label(s);
    for (int i = 0; i < 5; ++i) {
        auto c = static_cast<CombinedConfidence>(i);
        if (f == fold_label(confidence_name(c))) return c;
    }
    return std::nullopt;
}

std::optional<ActionabilityLevel> parse_actionability(const std::string& s) {
    auto f = fold_label(s);
    for (int i = 0; i < 4; ++i) {
        auto a = static_cast<ActionabilityLevel>(i);
        if (f == fold_label(actionability_name(a))) return a;
    }
    return std::nullopt;
}

std::optional<Specificity> parse_specificity(const std::string& s) {
    auto f = fold_label(s);
    if (f == "specific") return Specificity::Specific;
    if (f == "general") return Specificity::General;
    return std::nullopt;
}

}  // namespace nvsyn
