#include "linkxplore/errors.hpp"

namespace lx {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::SourceUnavailable: return "source_unavailable";
        case ErrorCode::SlotOutOfRange: return "slot_out_of_range";
        case ErrorCode::FutureTimestamp: return "future_timestamp";
        case ErrorCode::TimestampBeforeHistory: return "timestamp_before_history";
        case ErrorCode::MalformedMeta: return "malformed_meta";
        case ErrorCode::MalformedInstruction: return "malformed_instruction";
        case ErrorCode::NoSwapFound: return "no_swap_found";
        case ErrorCode::FailedTransaction: return "failed_transaction";
        case ErrorCode::AmbiguousSwap: return "ambiguous_swap";
        case ErrorCode::RateUnavailable: return "rate_unavailable";
        case ErrorCode::MissingSolUsd: return "missing_sol_usd";
        case ErrorCode::NegativeOffset: return "negative_offset";
        case ErrorCode::EmptySample: return "empty_sample";
        case ErrorCode::BadRequest: return "bad_request";
    }
    return "unknown";
}

} // namespace lx
