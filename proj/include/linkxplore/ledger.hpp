#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "linkxplore/codec.hpp"

namespace lx::ledger {

using Slot = std::uint64_t;
using UnixSeconds = std::int64_t;
using Lamports = std::int64_t;

// Raw base-unit token amount. Never stored as floating point.
using RawAmount = std::uint64_t;

// Token decimals, 0..18. SOL is fixed at 9.
using Decimals = std::uint8_t;
constexpr Decimals kSolDecimals = 9;

// SPL mint identity. Native SOL is spelled as the wrapped-SOL mint with the
// native flag set, so address equality already coalesces wSOL and SOL.
struct Mint {
    std::string address;
    bool is_native = false;

    bool operator==(const Mint& other) const { return address == other.address; }
    bool operator!=(const Mint& other) const { return address != other.address; }
    bool operator<(const Mint& other) const { return address < other.address; }
};

struct Instruction {
    std::uint32_t program_id_index = 0;
    std::vector<std::uint32_t> account_indexes;
    codec::Bytes data;

    bool operator==(const Instruction&) const = default;
};

struct TokenBalanceEntry {
    std::uint32_t account_index = 0;
    Mint mint;
    Decimals decimals = 0;
    RawAmount post_amount = 0;

    bool operator==(const TokenBalanceEntry&) const = default;
};

struct TransactionRecord {
    std::vector<std::string> signatures; // first entry is the primary signature
    std::vector<std::string> message_account_keys;
    std::vector<std::string> loaded_addresses;
    std::vector<Instruction> outer_instructions;

    bool operator==(const TransactionRecord&) const = default;
};

struct TransactionMeta {
    std::vector<Lamports> pre_balances;
    std::vector<Lamports> post_balances;
    std::vector<TokenBalanceEntry> pre_token_balances;
    std::vector<TokenBalanceEntry> post_token_balances;
    std::map<std::uint32_t, std::vector<Instruction>> inner_instructions;
    std::vector<std::string> log_messages;
    std::optional<std::string> err;

    bool operator==(const TransactionMeta&) const = default;
};

struct TransactionWithMeta {
    TransactionRecord tx;
    TransactionMeta meta;

    bool operator==(const TransactionWithMeta&) const = default;
};

struct Block {
    Slot slot = 0;
    std::optional<UnixSeconds> block_time;
    std::vector<TransactionWithMeta> transactions;

    bool operator==(const Block&) const = default;
};

// Decoded swap: the one record every downstream consumer works from.
struct SwapInfo {
    Mint token_in_mint;
    RawAmount token_in_amount = 0;
    Decimals token_in_decimals = 0;
    Mint token_out_mint;
    RawAmount token_out_amount = 0;
    Decimals token_out_decimals = 0;
    std::set<std::string> amm_tags;
    std::string signer;
    std::vector<std::string> signatures;
    UnixSeconds timestamp = 0;

    const std::string& primary_signature() const {
        static const std::string empty;
        return signatures.empty() ? empty : signatures.front();
    }

    bool operator==(const SwapInfo&) const = default;
};

// Message account keys followed by loaded addresses; instruction indexes
// resolve against this table.
std::vector<std::string> account_key_table(const TransactionRecord& tx);

// Resolves an index against the table, throwing MalformedMeta past the end.
const std::string& resolve_account(const std::vector<std::string>& table,
                                   std::uint32_t index);

} // namespace lx::ledger
