#pragma once

#include <stdexcept>
#include <string>

namespace nvsyn {

enum class ErrorCode {
    IoError,
    ParseError,
    DomainError,
    ExcludedCue,
    MalformedAuCode,
    UnknownState,
    UnknownCue,
    UnknownSession,
    NoKnownCues,
    InconsistentObservation,
    MalformedRequest,
    DegenerateTail,
    InsufficientTail,
    InsufficientData,
    AlternativeFitFailure,
    Internal,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg, long row = -1)
        : std::runtime_error(msg), code_(code), row_(row) {}
    ErrorCode code() const { return code_; }
    // 1-based row for ParseError, -1 otherwise
    long row() const { return row_; }

private:
    ErrorCode code_;
    long row_;
};

struct ApiError {
    int http_status;
    std::string machine_code;
    std::string human_message;
};

ApiError to_api_error(const Error& e);
// caller faults are 4xx
bool is_caller_fault(ErrorCode c);

}  // namespace nvsyn
