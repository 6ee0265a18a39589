#include "prefco/error.hpp"

namespace prefco {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::kInvalidArgument:
        return "invalid-argument";
    case ErrorCode::kInvalidTour:
        return "invalid-tour";
    case ErrorCode::kParseError:
        return "parse-error";
    case ErrorCode::kUnsupportedFormat:
        return "unsupported-format";
    case ErrorCode::kTooLarge:
        return "too-large";
    case ErrorCode::kWrongModel:
        return "wrong-model";
    case ErrorCode::kInvalidConfig:
        return "invalid-config";
    case ErrorCode::kIo:
        return "io-error";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace prefco
