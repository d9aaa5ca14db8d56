#ifndef WEBDIR_ERROR_HPP
#define WEBDIR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace webdir {

enum class Errc {
    // directory structure
    UnknownCategory,
    UnknownParent,
    DuplicateUrl,
    SelfLoop,
    ParallelEdge,
    TreeEdgeShadow,
    Unreachable,
    RootNonSemantic,
    DuplicateResource,
    // semantics
    EmptyResource,
    InvalidVector,
    ModeConditionUnmet,
    // construction
    OnlyRootPresent,
    InvalidThresholds,
    DirectoryNotEmpty,
    ReplayMismatch,
    // metrics
    InvalidTrace,
    MissingSemantics,
    TraceNotFromRoot,
    EmptyReportSet,
    // simulation
    UnknownTarget,
    // io
    ParseError,
    DuplicateId,
    SchemaInvalid,
    IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message),
          code_(code), message_(message) {}

    Errc code() const { return code_; }

    /// Message without the code-name prefix.
    const std::string& message() const { return message_; }

private:
    Errc code_;
    std::string message_;
};

} // namespace webdir

#endif
