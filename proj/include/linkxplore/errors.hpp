#pragma once

#include <stdexcept>
#include <string>

namespace lx {

// Stable machine-readable fault codes, shared by the CLI and the HTTP gateway.
enum class ErrorCode {
    SourceUnavailable,
    SlotOutOfRange,
    FutureTimestamp,
    TimestampBeforeHistory,
    MalformedMeta,
    MalformedInstruction,
    NoSwapFound,
    FailedTransaction,
    AmbiguousSwap,
    RateUnavailable,
    MissingSolUsd,
    NegativeOffset,
    EmptySample,
    BadRequest,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct SourceUnavailable : Error {
    explicit SourceUnavailable(const std::string& what)
        : Error(ErrorCode::SourceUnavailable, what) {}
};

struct SlotOutOfRange : Error {
    explicit SlotOutOfRange(const std::string& what)
        : Error(ErrorCode::SlotOutOfRange, what) {}
};

struct FutureTimestamp : Error {
    explicit FutureTimestamp(const std::string& what)
        : Error(ErrorCode::FutureTimestamp, what) {}
};

struct TimestampBeforeHistory : Error {
    explicit TimestampBeforeHistory(const std::string& what)
        : Error(ErrorCode::TimestampBeforeHistory, what) {}
};

struct MalformedMeta : Error {
    explicit MalformedMeta(const std::string& what)
        : Error(ErrorCode::MalformedMeta, what) {}
};

struct MalformedInstruction : Error {
    explicit MalformedInstruction(const std::string& what)
        : Error(ErrorCode::MalformedInstruction, what) {}
};

struct NoSwapFound : Error {
    explicit NoSwapFound(const std::string& what)
        : Error(ErrorCode::NoSwapFound, what) {}
};

struct FailedTransaction : Error {
    explicit FailedTransaction(const std::string& what)
        : Error(ErrorCode::FailedTransaction, what) {}
};

struct AmbiguousSwap : Error {
    explicit AmbiguousSwap(const std::string& what)
        : Error(ErrorCode::AmbiguousSwap, what) {}
};

struct RateUnavailable : Error {
    explicit RateUnavailable(const std::string& what)
        : Error(ErrorCode::RateUnavailable, what) {}
};

struct MissingSolUsd : Error {
    explicit MissingSolUsd(const std::string& what)
        : Error(ErrorCode::MissingSolUsd, what) {}
};

struct NegativeOffset : Error {
    explicit NegativeOffset(const std::string& what)
        : Error(ErrorCode::NegativeOffset, what) {}
};

struct EmptySample : Error {
    explicit EmptySample(const std::string& what)
        : Error(ErrorCode::EmptySample, what) {}
};

struct BadRequest : Error {
    explicit BadRequest(const std::string& what)
        : Error(ErrorCode::BadRequest, what) {}
};

} // namespace lx
