#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace prefco {

enum class ErrorCode {
    kInvalidArgument,
    kInvalidTour,
    kParseError,
    kUnsupportedFormat,
    kTooLarge,
    kWrongModel,
    kInvalidConfig,
    kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto a stable exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace prefco
