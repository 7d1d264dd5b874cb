#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "linkxplore/codec.hpp"
#include "linkxplore/ledger.hpp"

namespace lx::ledger {

// Venue tags carried through to SwapInfo.amm_tags.
namespace venue {
inline constexpr const char* kJupiter = "JUPITER";
inline constexpr const char* kOkx = "OKX";
inline constexpr const char* kPumpFun = "PUMP_FUN";
inline constexpr const char* kPumpFunAmm = "PUMP_FUN_AMM";
inline constexpr const char* kRaydium = "RAYDIUM";
inline constexpr const char* kOrca = "ORCA";
inline constexpr const char* kMeteora = "METEORA";
inline constexpr const char* kBotRouter = "BOT_ROUTER";
inline constexpr const char* kToken = "TOKEN";
inline constexpr const char* kToken2022 = "TOKEN_2022";
} // namespace venue

// Per-venue 8-byte discriminators, plus an optional 8-byte CPI prefix that
// precedes event payloads for venues that relay events through self-CPI.
struct VenueDiscriminators {
    codec::Bytes event;
    codec::Bytes event_cpi_prefix;
    codec::Bytes buy;
    codec::Bytes sell;
};

struct OkxLogPatterns {
    std::string source;      // one capture group: raw source amount
    std::string destination; // one capture group: raw destination amount
};

// Program-id -> venue map and the per-venue decode configuration. Ships as a
// data file with mainnet defaults; tests construct synthetic instances.
class ProgramRegistry {
public:
    static ProgramRegistry from_json_text(const std::string& text);
    static ProgramRegistry from_file(const std::string& path);

    void add_program(const std::string& program_id, const std::string& tag);
    void set_discriminators(const std::string& tag, VenueDiscriminators d);
    void set_okx_log_patterns(OkxLogPatterns p);
    void add_dca_program(const std::string& program_id);
    void add_bot_router(const std::string& program_id);
    void set_base_mints(std::string wsol, std::string usdc, std::string usdt);

    // Venue tag for a program id, empty optional if unknown.
    std::optional<std::string> venue_of(const std::string& program_id) const;

    bool is_token_program(const std::string& program_id) const;
    bool is_dca_program(const std::string& program_id) const;
    bool is_bot_router(const std::string& program_id) const;

    // Venues whose outer instructions count as a swap-program hit. Token
    // programs are excluded: a bare transfer is not a swap.
    bool is_swap_venue(const std::string& tag) const;

    // Venues swept by the no-router-evidence fallback.
    bool is_fallback_venue(const std::string& tag) const;

    const VenueDiscriminators* discriminators(const std::string& tag) const;
    const OkxLogPatterns& okx_log_patterns() const { return okx_patterns_; }

    const std::string& wsol_mint() const { return wsol_mint_; }
    const std::string& usdc_mint() const { return usdc_mint_; }
    const std::string& usdt_mint() const { return usdt_mint_; }

    Mint sol() const { return Mint{wsol_mint_, true}; }

    // Canonical spelling: wSOL gains the native flag, everything else is
    // passed through untouched.
    Mint coalesce_sol(const Mint& m) const;

private:
    std::map<std::string, std::string> program_tags_;
    std::map<std::string, VenueDiscriminators> discriminators_;
    OkxLogPatterns okx_patterns_;
    std::set<std::string> dca_programs_;
    std::set<std::string> bot_routers_;
    std::string wsol_mint_;
    std::string usdc_mint_;
    std::string usdt_mint_;
};

} // namespace lx::ledger
