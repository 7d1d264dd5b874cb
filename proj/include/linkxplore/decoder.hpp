#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "linkxplore/ledger.hpp"
#include "linkxplore/registry.hpp"

namespace lx::decode {

using ledger::Decimals;
using ledger::Instruction;
using ledger::Mint;
using ledger::ProgramRegistry;
using ledger::RawAmount;
using ledger::SwapInfo;
using ledger::TransactionMeta;
using ledger::TransactionRecord;
using ledger::UnixSeconds;

// acct -> (mint, decimals), seeded from post token balances and transfers.
struct TokenAccountInfo {
    std::map<std::string, std::pair<Mint, Decimals>> entries;

    const std::pair<Mint, Decimals>* find(const std::string& account) const {
        auto it = entries.find(account);
        return it == entries.end() ? nullptr : &it->second;
    }
};

// mint -> decimals. Unseen mints are absent; lookups substitute 0.
struct DecimalsTable {
    std::map<Mint, Decimals> entries;

    Decimals lookup(const Mint& mint) const {
        auto it = entries.find(mint);
        return it == entries.end() ? Decimals{0} : it->second;
    }
};

enum class LegDirection { In, Out }; // relative to the signer

struct SwapLeg {
    Mint mint;
    RawAmount amount = 0;
    LegDirection direction = LegDirection::In;
    std::string source_account;
    std::string dest_account;
    std::string authority_account;
    std::uint32_t outer_index = 0;
    std::uint32_t inner_position = 0;

    // Content-based identity: the same transfer occurrence collected through
    // two harvest paths (or literally duplicated in the record) collapses.
    std::string leg_key() const;
};

struct RouteEvent {
    Mint in_mint;
    RawAmount in_amount = 0;
    Mint out_mint;
    RawAmount out_amount = 0;
};

struct OkxAggregate {
    Mint in_mint;
    RawAmount in_amount = 0;
    Mint out_mint;
    RawAmount out_amount = 0;
};

struct PumpTradeEvent {
    Mint mint;
    RawAmount sol_amount = 0;
    RawAmount token_amount = 0;
    bool is_buy = false;
};

// Priority order: RouteEvent > OkxAggregate > PumpTradeEvent > SwapLeg.
struct Evidence {
    std::variant<RouteEvent, OkxAggregate, PumpTradeEvent, SwapLeg> payload;
    std::set<std::string> venue_tags;
};

std::pair<TokenAccountInfo, DecimalsTable>
build_token_tables(const TransactionRecord& tx, const TransactionMeta& meta,
                   const ProgramRegistry& registry);

// Decodes a Token / Token-2022 Transfer (opcode 3) or TransferChecked
// (opcode 12). nullopt when the instruction is no transfer or its mint cannot
// be resolved; throws MalformedInstruction on truncated data or accounts.
std::optional<SwapLeg> parse_token_transfer(const Instruction& inst,
                                            const std::vector<std::string>& account_table,
                                            const TokenAccountInfo& tinfo);

std::vector<Evidence> harvest_evidence(const TransactionRecord& tx,
                                       const TransactionMeta& meta,
                                       const ProgramRegistry& registry,
                                       std::vector<std::string>* diagnostics = nullptr);

// The full per-transaction decode. block_time stamps the resulting SwapInfo.
SwapInfo decode_swap(const TransactionRecord& tx, const TransactionMeta& meta,
                     const ProgramRegistry& registry, UnixSeconds block_time = 0,
                     std::vector<std::string>* diagnostics = nullptr);

// Effective signer: AK[0], or AK[2] when a Jupiter DCA program appears among
// the outer instructions.
std::string effective_signer(const TransactionRecord& tx,
                             const std::vector<std::string>& account_table,
                             const ProgramRegistry& registry);

} // namespace lx::decode
