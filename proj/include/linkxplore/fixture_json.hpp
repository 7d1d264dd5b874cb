#pragma once

#include <string>

#include <json.hpp>

#include "linkxplore/ledger.hpp"

namespace lx::ledger {

// Newline-delimited block records, one JSON object per line:
//   {"slot": u64, "blockTime": i64|null, "transactions": [...]}
// Transactions mirror the standard Solana getBlock response with raw
// (base58 or base64) instruction data, so real RPC captures replay as-is.
// A record with a null blockTime and no transactions marks a skipped slot.

Block block_from_json(const nlohmann::json& record);
nlohmann::json block_to_json(const Block& block);

// The inner {"transaction": ..., "meta": ...} object.
TransactionWithMeta transaction_from_json(const nlohmann::json& entry);
nlohmann::json transaction_to_json(const TransactionWithMeta& entry);

std::string encode_instruction_data(const codec::Bytes& data);

} // namespace lx::ledger
