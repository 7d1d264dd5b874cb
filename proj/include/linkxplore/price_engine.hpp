#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linkxplore/decoder.hpp"
#include "linkxplore/numeric.hpp"
#include "linkxplore/registry.hpp"
#include "linkxplore/slot_locator.hpp"
#include "linkxplore/source.hpp"

namespace lx::price {

using ledger::Block;
using ledger::Mint;
using ledger::ProgramRegistry;
using ledger::Slot;
using ledger::SwapInfo;
using ledger::TransactionWithMeta;
using ledger::UnixSeconds;
using slots::ClockCalibration;
using slots::SlotChoice;
using source::ChainSource;

enum class BaseCurrency { Sol, Usdc, Usdt };

// Preference order SOL > USDC > USDT.
constexpr std::array<BaseCurrency, 3> kDefaultBaseOrder = {
    BaseCurrency::Sol, BaseCurrency::Usdc, BaseCurrency::Usdt};

const char* base_currency_name(BaseCurrency base);
std::optional<BaseCurrency> base_currency_from_name(const std::string& name);
Mint base_mint(BaseCurrency base, const ProgramRegistry& registry);
std::optional<BaseCurrency> base_of_mint(const Mint& mint, const ProgramRegistry& registry);

enum class RateSource { DexPool, Oracle, CexMidquote };

const char* rate_source_name(RateSource source);

// Pairwise conversion rates between base currencies near a slot. Diagonal is
// 1; storing a rate also stores its reciprocal.
class RateMatrix {
public:
    struct Entry {
        Real rate = 0.0L;
        RateSource source = RateSource::DexPool;
        Slot as_of_slot = 0;
    };

    void set(BaseCurrency from, BaseCurrency to, Real rate, RateSource source, Slot as_of);
    std::optional<Entry> lookup(BaseCurrency from, BaseCurrency to) const;

private:
    std::map<std::pair<int, int>, Entry> entries_;
};

struct TradePoint {
    Real price = 0.0L;  // base units per token
    Real weight = 0.0L; // base units
    std::string signature;
    Slot slot = 0;
};

struct PriceInfo {
    Real vwap = 0.0L;
    BaseCurrency base = BaseCurrency::Sol;
    Slot slot = 0; // min of contributing slots
    std::string method;
    std::size_t trade_count = 0;
    Real total_weight = 0.0L;
};

// PriceInfo plus bookkeeping the gateway surfaces (rate provenance).
struct PriceOutcome {
    PriceInfo info;
    std::vector<std::string> source_notes;
};

struct PriceConfig {
    Real dust_sol = 1e-4L;
    Real dust_usdc = 1e-2L;
    Real dust_usdt = 1e-2L;
    Real fence_ratio = 1.5L; // sensible range [1.5, 2]
    unsigned max_backoff = 64;
    UnixSeconds widen_window_seconds = 3600;
    Slot rate_lookback_slots = 32;
    std::string rate_fallback_csv; // optional CSV: timestamp,pair,rate
    RateSource rate_fallback_source = RateSource::Oracle;

    Real dust_for(BaseCurrency base) const;
};

// Transactions worth decoding for this mint: a token-balance hit on the mint
// or a known swap-venue program among the outer instructions. Guaranteed a
// superset of the transactions decode_swap would accept for the mint.
std::vector<const TransactionWithMeta*> prefilter_block(const Block& block, const Mint& mint,
                                                        const ProgramRegistry& registry);

// Price of X in quote currency C for a single decoded swap, with the trade's
// quote-side size as weight. nullopt when the swap pair is not {X, C}.
std::optional<std::pair<Real, Real>> per_trade_price(const SwapInfo& info, const Mint& x,
                                                     BaseCurrency c,
                                                     const ProgramRegistry& registry);

struct VwapResult {
    Real vwap = 0.0L;
    std::size_t kept_count = 0;
    Real total_weight = 0.0L;
    std::vector<std::size_t> kept_indices;
};

// Dust drop, symmetric log fence around the median, then the weighted
// average of the survivors. nullopt when nothing survives.
std::optional<VwapResult> filter_and_vwap(const std::vector<TradePoint>& points,
                                          const PriceConfig& cfg, BaseCurrency base);

// Rates for the requested pairs near the given slots: trade-size-weighted
// DEX prices first, composition through SOL, then the fallback file. Throws
// RateUnavailable when require_all is set and a pair stays unresolved.
RateMatrix build_rate_matrix(const std::vector<Slot>& anchor_slots,
                             const std::vector<std::pair<BaseCurrency, BaseCurrency>>& needed,
                             ChainSource& source, const ProgramRegistry& registry,
                             const PriceConfig& cfg, UnixSeconds as_of_time,
                             bool require_all = true);

// The full lookup: nearest slot(s), slot-by-slot backoff, then one pooled
// window pass. nullopt when no price can be produced.
std::optional<PriceOutcome> price_at(const Mint& x, UnixSeconds t,
                                     const std::vector<BaseCurrency>& requested_bases,
                                     ChainSource& source, const PriceConfig& cfg,
                                     const ProgramRegistry& registry,
                                     const ClockCalibration& cal = {});

} // namespace lx::price
