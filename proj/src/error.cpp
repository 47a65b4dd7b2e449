#include "nvsyn/error.hpp"

namespace nvsyn {

const char* error_code_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ExcludedCue: return "ExcludedCue";
    case ErrorCode::MalformedAuCode: return "MalformedAuCode";
    case ErrorCode::UnknownState: return "UnknownState";
    case ErrorCode::UnknownCue: return "UnknownCue";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::NoKnownCues: return "NoKnownCues";
    case ErrorCode::InconsistentObservation: return "InconsistentObservation";
    case ErrorCode::MalformedRequest: return "MalformedRequest";
    case ErrorCode::DegenerateTail: return "DegenerateTail";
    case ErrorCode::InsufficientTail: return "InsufficientTail";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::AlternativeFitFailure: return "AlternativeFitFailure";
    case ErrorCode::Internal: return "Internal";
    }
    return "Internal";
}

static int status_for(ErrorCode c) {
    switch (c) {
    case ErrorCode::UnknownState:
    case ErrorCode::UnknownCue:
    case ErrorCode::UnknownSession:
    case ErrorCode::NoKnownCues:
        return 404;
    case ErrorCode::InconsistentObservation:
        return 409;
    case ErrorCode::ParseError:
    case ErrorCode::DomainError:
    case ErrorCode::ExcludedCue:
    case ErrorCode::MalformedAuCode:
    case ErrorCode::MalformedRequest:
    case ErrorCode::DegenerateTail:
    case ErrorCode::InsufficientTail:
    case ErrorCode::InsufficientData:
        return 400;
    case ErrorCode::IoError:
    case ErrorCode::AlternativeFitFailure:
    case ErrorCode::Internal:
        return 500;
    }
    return 500;
}

bool is_caller_fault(ErrorCode c) { return status_for(c) < 500; }

ApiError to_api_error(const Error& e) {
    return {status_for(e.code()), error_code_name(e.code()), e.what()};
}

}  // namespace nvsyn
