#pragma once

#include <optional>
#include <string>

#include "archkit/diagnostics.hpp"
#include "archkit/model.hpp"

namespace archkit {

enum class Classification { Catastrophic, Hazardous, Major, Minor, NoSafetyEffect };

inline const char* to_string(Classification c) {
    switch (c) {
        case Classification::Catastrophic: return "catastrophic";
        case Classification::Hazardous: return "hazardous";
        case Classification::Major: return "major";
        case Classification::Minor: return "minor";
        case Classification::NoSafetyEffect: return "no_safety_effect";
    }
    return "?";
}

inline std::optional<Classification> classification_from(const std::string& s) {
    if (s == "catastrophic") return Classification::Catastrophic;
    if (s == "hazardous") return Classification::Hazardous;
    if (s == "major") return Classification::Major;
    if (s == "minor") return Classification::Minor;
    if (s == "no_safety_effect") return Classification::NoSafetyEffect;
    return std::nullopt;
}

// Classification to FDAL assignment, ARP4754A convention.
inline char fdal_for(Classification c) {
    switch (c) {
        case Classification::Catastrophic: return 'A';
        case Classification::Hazardous: return 'B';
        case Classification::Major: return 'C';
        case Classification::Minor: return 'D';
        case Classification::NoSafetyEffect: return 'E';
    }
    return 'E';
}

struct FhaResult {
    std::string id;               // failure condition id, e.g. FC-001
    QualifiedPath function_path;  // model-qualified function
    std::string condition;
    std::string effect;
    Classification classification = Classification::NoSafetyEffect;
    std::optional<char> fdal;     // must match the mapping table when present
    SourceSpan span;

    bool operator==(const FhaResult&) const = default;
};

struct FhaFile {
    std::string model_name;
    std::vector<FhaResult> results;
    SourceSpan span;
};

}  // namespace archkit
