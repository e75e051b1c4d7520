#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace papsim {

enum class ErrorCode {
    UnknownComponent,
    DuplicateComponent,
    InvalidComponent,
    EmptyInletList,
    PhiOutOfRange,
    FractionOutOfRange,
    NegativeFlow,
    PressureDecrease,
    InvalidReaction,
    InvalidSpec,
    CyclicWithoutTear,
    DanglingPort,
    DuplicateStreamProducer,
    DuplicateStreamConsumer,
    UnknownStream,
    BlockError,
    StressLimitExceeded,
    NeverRecovers,
    DivisionByZeroInvestment,
    FileUnreadable,
    ParseError,
    ValidationFailed,
};

inline constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnknownComponent: return "UnknownComponent";
    case ErrorCode::DuplicateComponent: return "DuplicateComponent";
    case ErrorCode::InvalidComponent: return "InvalidComponent";
    case ErrorCode::EmptyInletList: return "EmptyInletList";
    case ErrorCode::PhiOutOfRange: return "PhiOutOfRange";
    case ErrorCode::FractionOutOfRange: return "FractionOutOfRange";
    case ErrorCode::NegativeFlow: return "NegativeFlow";
    case ErrorCode::PressureDecrease: return "PressureDecrease";
    case ErrorCode::InvalidReaction: return "InvalidReaction";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::CyclicWithoutTear: return "CyclicWithoutTear";
    case ErrorCode::DanglingPort: return "DanglingPort";
    case ErrorCode::DuplicateStreamProducer: return "DuplicateStreamProducer";
    case ErrorCode::DuplicateStreamConsumer: return "DuplicateStreamConsumer";
    case ErrorCode::UnknownStream: return "UnknownStream";
    case ErrorCode::BlockError: return "BlockError";
    case ErrorCode::StressLimitExceeded: return "StressLimitExceeded";
    case ErrorCode::NeverRecovers: return "NeverRecovers";
    case ErrorCode::DivisionByZeroInvestment: return "DivisionByZeroInvestment";
    case ErrorCode::FileUnreadable: return "FileUnreadable";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by the solver when a block fails; wraps the block's own error.
class BlockFailure : public Error {
public:
    BlockFailure(std::string block_id, ErrorCode cause, const std::string& what)
        : Error(ErrorCode::BlockError, "block '" + block_id + "': " + what),
          block_id_(std::move(block_id)), cause_(cause) {}

    const std::string& block_id() const noexcept { return block_id_; }
    ErrorCode cause() const noexcept { return cause_; }

private:
    std::string block_id_;
    ErrorCode cause_;
};

/// A non-fatal finding reported by validation passes.
struct Diagnostic {
    ErrorCode code;
    std::string where; // dotted location, e.g. "blocks[3].inlets"
    std::string message;
};

} // namespace papsim
