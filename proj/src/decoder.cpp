#include "linkxplore/decoder.hpp"

#include <algorithm>
#include <cstring>
#include <regex>

#include "linkxplore/errors.hpp"

namespace lx::decode {

namespace {

constexpr std::uint8_t kOpTransfer = 3;
constexpr std::uint8_t kOpTransferChecked = 12;
constexpr std::size_t kPubkeyLen = 32;

RawAmount read_u64_le(const codec::Bytes& data, std::size_t offset) {
    RawAmount value = 0;
    for (int i = 7; i >= 0; --i)
        value = (value << 8) | data[offset + static_cast<std::size_t>(i)];
    return value;
}

Mint read_mint(const codec::Bytes& data, std::size_t offset) {
    codec::Bytes raw(data.begin() + static_cast<std::ptrdiff_t>(offset),
                     data.begin() + static_cast<std::ptrdiff_t>(offset + kPubkeyLen));
    return Mint{codec::base58_encode(raw)};
}

void note(std::vector<std::string>* diagnostics, std::string message) {
    if (diagnostics) diagnostics->push_back(std::move(message));
}

// Payload offset past [event_cpi_prefix?][discriminator], or nullopt.
std::optional<std::size_t> match_discriminator(const codec::Bytes& data,
                                               const codec::Bytes& prefix,
                                               const codec::Bytes& disc) {
    if (disc.empty()) return std::nullopt;
    codec::Bytes expected = prefix;
    expected.insert(expected.end(), disc.begin(), disc.end());
    if (data.size() < expected.size()) return std::nullopt;
    if (!std::equal(expected.begin(), expected.end(), data.begin())) return std::nullopt;
    return expected.size();
}

struct DecodeContext {
    std::vector<std::string> account_table;
    TokenAccountInfo tinfo;
    DecimalsTable decs;
    std::string signer;
};

std::optional<RouteEvent> parse_route_event(const codec::Bytes& data,
                                            const ledger::VenueDiscriminators& disc) {
    auto offset = match_discriminator(data, disc.event_cpi_prefix, disc.event);
    if (!offset) return std::nullopt;
    if (data.size() < *offset + 2 * kPubkeyLen + 16) return std::nullopt;
    RouteEvent ev;
    ev.in_mint = read_mint(data, *offset);
    ev.in_amount = read_u64_le(data, *offset + kPubkeyLen);
    ev.out_mint = read_mint(data, *offset + kPubkeyLen + 8);
    ev.out_amount = read_u64_le(data, *offset + 2 * kPubkeyLen + 8);
    return ev;
}

std::optional<PumpTradeEvent> parse_pump_event(const codec::Bytes& data,
                                               const ledger::VenueDiscriminators& disc) {
    auto offset = match_discriminator(data, disc.event_cpi_prefix, disc.event);
    if (!offset) return std::nullopt;
    if (data.size() < *offset + kPubkeyLen + 17) return std::nullopt;
    PumpTradeEvent ev;
    ev.mint = read_mint(data, *offset);
    ev.sol_amount = read_u64_le(data, *offset + kPubkeyLen);
    ev.token_amount = read_u64_le(data, *offset + kPubkeyLen + 8);
    ev.is_buy = data[*offset + kPubkeyLen + 16] != 0;
    return ev;
}

// Router logs expose the raw source/destination amounts through a pair of
// configured patterns; mints come from the outer instruction's accounts.
std::optional<OkxAggregate> parse_okx_aggregate(const Instruction& outer,
                                                const std::vector<std::string>& log_messages,
                                                const DecodeContext& ctx,
                                                const ProgramRegistry& registry) {
    const auto& patterns = registry.okx_log_patterns();
    if (patterns.source.empty() || patterns.destination.empty()) return std::nullopt;

    std::optional<RawAmount> src_amount, dst_amount;
    try {
        std::regex src_re(patterns.source);
        std::regex dst_re(patterns.destination);
        std::smatch m;
        for (const auto& line : log_messages) {
            if (!src_amount && std::regex_search(line, m, src_re) && m.size() > 1)
                src_amount = std::stoull(m[1].str());
            if (!dst_amount && std::regex_search(line, m, dst_re) && m.size() > 1)
                dst_amount = std::stoull(m[1].str());
            if (src_amount && dst_amount) break;
        }
    } catch (const std::regex_error&) {
        return std::nullopt;
    } catch (const std::out_of_range&) {
        return std::nullopt;
    }
    if (!src_amount || !dst_amount || *src_amount == 0 || *dst_amount == 0)
        return std::nullopt;

    // First and last distinct token accounts of the outer give (in, out).
    std::optional<Mint> in_mint, out_mint;
    for (auto idx : outer.account_indexes) {
        if (idx >= ctx.account_table.size()) continue;
        const auto* info = ctx.tinfo.find(ctx.account_table[idx]);
        if (!info) continue;
        if (!in_mint) {
            in_mint = info->first;
        } else if (info->first != *in_mint) {
            out_mint = info->first;
        }
    }
    if (!in_mint || !out_mint) return std::nullopt;

    OkxAggregate agg;
    agg.in_mint = *in_mint;
    agg.in_amount = *src_amount;
    agg.out_mint = *out_mint;
    agg.out_amount = *dst_amount;
    return agg;
}

const std::vector<Instruction>* inner_list(const TransactionMeta& meta, std::uint32_t outer_index) {
    auto it = meta.inner_instructions.find(outer_index);
    return it == meta.inner_instructions.end() ? nullptr : &it->second;
}

std::optional<std::string> resolve_program(const DecodeContext& ctx, const Instruction& inst) {
    if (inst.program_id_index >= ctx.account_table.size()) return std::nullopt;
    return ctx.account_table[inst.program_id_index];
}

std::vector<Evidence> harvest_with_context(const TransactionRecord& tx,
                                           const TransactionMeta& meta,
                                           const ProgramRegistry& registry,
                                           const DecodeContext& ctx,
                                           std::vector<std::string>* diagnostics) {
    std::vector<Evidence> evidence;
    bool found = false;
    bool okx_aggregate_emitted = false;

    // Token-transfer legs under one outer index.
    auto collect_legs = [&](std::uint32_t outer_index, const std::set<std::string>& tags,
                            bool checked_only, bool signer_only) {
        std::vector<Evidence> legs;
        const auto* inners = inner_list(meta, outer_index);
        if (!inners) return legs;
        for (std::uint32_t pos = 0; pos < inners->size(); ++pos) {
            const auto& inner = (*inners)[pos];
            auto pid = resolve_program(ctx, inner);
            if (!pid) {
                note(diagnostics, "inner program index out of range under outer " +
                                      std::to_string(outer_index));
                continue;
            }
            if (!registry.is_token_program(*pid)) continue;
            if (checked_only && (inner.data.empty() || inner.data[0] != kOpTransferChecked))
                continue;
            try {
                auto leg = parse_token_transfer(inner, ctx.account_table, ctx.tinfo);
                if (!leg) continue;
                leg->direction = leg->authority_account == ctx.signer ? LegDirection::Out
                                                                      : LegDirection::In;
                if (signer_only && leg->direction != LegDirection::Out) continue;
                leg->outer_index = outer_index;
                leg->inner_position = pos;
                legs.push_back(Evidence{std::move(*leg), tags});
            } catch (const MalformedInstruction& e) {
                note(diagnostics, std::string("skipped malformed transfer: ") + e.what());
            }
        }
        return legs;
    };

    auto append = [&](std::vector<Evidence> items) {
        const bool any = !items.empty();
        for (auto& item : items) evidence.push_back(std::move(item));
        return any;
    };

    for (std::uint32_t i = 0; i < tx.outer_instructions.size(); ++i) {
        const auto& outer = tx.outer_instructions[i];
        auto pid = resolve_program(ctx, outer);
        if (!pid) {
            note(diagnostics, "outer program index out of range at " + std::to_string(i));
            continue;
        }
        auto tag = registry.venue_of(*pid);
        if (!tag) continue;

        if (*tag == ledger::venue::kJupiter) {
            const auto* disc = registry.discriminators(*tag);
            std::vector<Evidence> events;
            if (disc && inner_list(meta, i)) {
                for (const auto& inner : *inner_list(meta, i)) {
                    if (auto ev = parse_route_event(inner.data, *disc))
                        events.push_back(Evidence{std::move(*ev), {*tag}});
                }
            }
            if (!events.empty()) {
                append(std::move(events));
                found = true;
            } else if (append(collect_legs(i, {*tag}, false, false))) {
                found = true;
            }
        } else if (*tag == ledger::venue::kOkx) {
            if (!okx_aggregate_emitted) {
                if (auto agg = parse_okx_aggregate(outer, meta.log_messages, ctx, registry)) {
                    evidence.push_back(Evidence{std::move(*agg), {*tag}});
                    okx_aggregate_emitted = true;
                }
            }
            if (append(collect_legs(i, {*tag}, false, false))) found = true;
        } else if (*tag == ledger::venue::kPumpFun || *tag == ledger::venue::kPumpFunAmm) {
            const auto* disc = registry.discriminators(*tag);
            std::optional<PumpTradeEvent> event;
            if (disc && inner_list(meta, i)) {
                for (const auto& inner : *inner_list(meta, i)) {
                    if ((event = parse_pump_event(inner.data, *disc))) break;
                }
            }
            if (event) {
                evidence.push_back(Evidence{std::move(*event), {*tag}});
                found = true;
            } else if (disc) {
                const bool is_buy = match_discriminator(outer.data, {}, disc->buy).has_value();
                const bool is_sell = match_discriminator(outer.data, {}, disc->sell).has_value();
                if (is_buy || is_sell) {
                    auto legs = collect_legs(i, {*tag}, true, true);
                    // Consistency gate: exactly two distinct mints moved.
                    std::set<std::string> mints;
                    for (const auto& item : legs)
                        mints.insert(std::get<SwapLeg>(item.payload).mint.address);
                    if (mints.size() == 2) {
                        append(std::move(legs));
                        found = true;
                    } else {
                        note(diagnostics, "pump.fun " + std::string(is_buy ? "buy" : "sell") +
                                              " legs inconsistent (" +
                                              std::to_string(mints.size()) + " mints)");
                    }
                }
            }
        } else if (registry.is_bot_router(*pid)) {
            // Sweep known AMM CPIs under this index; transfers inherit the
            // venue of the nearest preceding AMM invocation.
            const auto* inners = inner_list(meta, i);
            if (!inners) continue;
            std::optional<std::string> current_amm;
            std::vector<Evidence> legs;
            for (std::uint32_t pos = 0; pos < inners->size(); ++pos) {
                const auto& inner = (*inners)[pos];
                auto inner_pid = resolve_program(ctx, inner);
                if (!inner_pid) continue;
                auto inner_tag = registry.venue_of(*inner_pid);
                if (inner_tag && registry.is_fallback_venue(*inner_tag)) {
                    current_amm = *inner_tag;
                    continue;
                }
                if (!current_amm || !registry.is_token_program(*inner_pid)) continue;
                try {
                    auto leg = parse_token_transfer(inner, ctx.account_table, ctx.tinfo);
                    if (!leg) continue;
                    leg->direction = leg->authority_account == ctx.signer ? LegDirection::Out
                                                                          : LegDirection::In;
                    leg->outer_index = i;
                    leg->inner_position = pos;
                    legs.push_back(
                        Evidence{std::move(*leg), {ledger::venue::kBotRouter, *current_amm}});
                } catch (const MalformedInstruction& e) {
                    note(diagnostics, std::string("skipped malformed transfer: ") + e.what());
                }
            }
            if (append(std::move(legs))) found = true;
        }
    }

    if (!found) {
        for (std::uint32_t i = 0; i < tx.outer_instructions.size(); ++i) {
            auto pid = resolve_program(ctx, tx.outer_instructions[i]);
            if (!pid) continue;
            auto tag = registry.venue_of(*pid);
            if (!tag || !registry.is_fallback_venue(*tag)) continue;
            append(collect_legs(i, {*tag}, false, false));
        }
    }

    return evidence;
}

DecodeContext make_context(const TransactionRecord& tx, const TransactionMeta& meta,
                           const ProgramRegistry& registry) {
    DecodeContext ctx;
    ctx.account_table = ledger::account_key_table(tx);
    auto tables = build_token_tables(tx, meta, registry);
    ctx.tinfo = std::move(tables.first);
    ctx.decs = std::move(tables.second);
    ctx.signer = effective_signer(tx, ctx.account_table, registry);
    return ctx;
}

} // namespace

std::string SwapLeg::leg_key() const {
    return source_account + "|" + dest_account + "|" + mint.address + "|" +
           std::to_string(amount) + "|" + std::to_string(outer_index);
}

std::pair<TokenAccountInfo, DecimalsTable>
build_token_tables(const TransactionRecord& tx, const TransactionMeta& meta,
                   const ProgramRegistry& registry) {
    const auto table = ledger::account_key_table(tx);
    TokenAccountInfo tinfo;
    DecimalsTable decs;

    for (const auto& tb : meta.post_token_balances) {
        const auto& account = ledger::resolve_account(table, tb.account_index);
        tinfo.entries[account] = {tb.mint, tb.decimals};
        decs.entries[tb.mint] = tb.decimals;
    }

    // Second pass: Transfer/TransferChecked operands fill accounts the
    // balance lists never mention.
    auto seed_from = [&](const Instruction& inst) {
        if (inst.program_id_index >= table.size()) return;
        if (!registry.is_token_program(table[inst.program_id_index])) return;
        if (inst.data.empty()) return;
        if (inst.data[0] == kOpTransferChecked && inst.data.size() >= 10 &&
            inst.account_indexes.size() >= 4) {
            auto src_idx = inst.account_indexes[0];
            auto mint_idx = inst.account_indexes[1];
            auto dst_idx = inst.account_indexes[2];
            if (mint_idx >= table.size() || src_idx >= table.size() || dst_idx >= table.size())
                return;
            Mint mint{table[mint_idx]};
            Decimals dec = inst.data[9];
            tinfo.entries.emplace(table[src_idx], std::make_pair(mint, dec));
            tinfo.entries.emplace(table[dst_idx], std::make_pair(mint, dec));
            decs.entries.emplace(mint, dec);
        } else if (inst.data[0] == kOpTransfer && inst.data.size() >= 9 &&
                   inst.account_indexes.size() >= 3) {
            auto src_idx = inst.account_indexes[0];
            auto dst_idx = inst.account_indexes[1];
            if (src_idx >= table.size() || dst_idx >= table.size()) return;
            const auto* src = tinfo.find(table[src_idx]);
            const auto* dst = tinfo.find(table[dst_idx]);
            if (src && !dst) tinfo.entries.emplace(table[dst_idx], *src);
            else if (dst && !src) tinfo.entries.emplace(table[src_idx], *dst);
        }
    };

    for (const auto& outer : tx.outer_instructions) seed_from(outer);
    for (const auto& [index, list] : meta.inner_instructions)
        for (const auto& inner : list) seed_from(inner);

    decs.entries[registry.sol()] = ledger::kSolDecimals;
    return {std::move(tinfo), std::move(decs)};
}

std::optional<SwapLeg> parse_token_transfer(const Instruction& inst,
                                            const std::vector<std::string>& account_table,
                                            const TokenAccountInfo& tinfo) {
    if (inst.data.empty()) return std::nullopt;
    const std::uint8_t opcode = inst.data[0];
    if (opcode != kOpTransfer && opcode != kOpTransferChecked) return std::nullopt;

    SwapLeg leg;
    if (opcode == kOpTransfer) {
        if (inst.data.size() < 9)
            throw MalformedInstruction("Transfer data truncated");
        if (inst.account_indexes.size() < 3)
            throw MalformedInstruction("Transfer expects 3 accounts");
        leg.amount = read_u64_le(inst.data, 1);
        leg.source_account = ledger::resolve_account(account_table, inst.account_indexes[0]);
        leg.dest_account = ledger::resolve_account(account_table, inst.account_indexes[1]);
        leg.authority_account = ledger::resolve_account(account_table, inst.account_indexes[2]);
        const auto* info = tinfo.find(leg.source_account);
        if (!info) info = tinfo.find(leg.dest_account);
        if (!info) return std::nullopt; // mint unresolvable, unusable as evidence
        leg.mint = info->first;
    } else {
        if (inst.data.size() < 10)
            throw MalformedInstruction("TransferChecked data truncated");
        if (inst.account_indexes.size() < 4)
            throw MalformedInstruction("TransferChecked expects 4 accounts");
        leg.amount = read_u64_le(inst.data, 1);
        leg.source_account = ledger::resolve_account(account_table, inst.account_indexes[0]);
        leg.mint = Mint{ledger::resolve_account(account_table, inst.account_indexes[1])};
        leg.dest_account = ledger::resolve_account(account_table, inst.account_indexes[2]);
        leg.authority_account = ledger::resolve_account(account_table, inst.account_indexes[3]);
    }
    if (leg.amount == 0) return std::nullopt;
    return leg;
}

std::string effective_signer(const TransactionRecord& tx,
                             const std::vector<std::string>& account_table,
                             const ProgramRegistry& registry) {
    if (account_table.empty())
        throw MalformedMeta("transaction has no account keys");
    bool dca = false;
    for (const auto& outer : tx.outer_instructions) {
        if (outer.program_id_index < account_table.size() &&
            registry.is_dca_program(account_table[outer.program_id_index])) {
            dca = true;
            break;
        }
    }
    if (dca) {
        if (account_table.size() < 3)
            throw MalformedMeta("DCA transaction lacks AK[2]");
        return account_table[2];
    }
    return account_table[0];
}

std::vector<Evidence> harvest_evidence(const TransactionRecord& tx,
                                       const TransactionMeta& meta,
                                       const ProgramRegistry& registry,
                                       std::vector<std::string>* diagnostics) {
    return harvest_with_context(tx, meta, registry, make_context(tx, meta, registry),
                                diagnostics);
}

SwapInfo decode_swap(const TransactionRecord& tx, const TransactionMeta& meta,
                     const ProgramRegistry& registry, UnixSeconds block_time,
                     std::vector<std::string>* diagnostics) {
    if (meta.err)
        throw FailedTransaction("transaction failed on chain: " + *meta.err);

    const DecodeContext ctx = make_context(tx, meta, registry);
    const auto evidence = harvest_with_context(tx, meta, registry, ctx, diagnostics);

    std::vector<const Evidence*> route_events, okx_aggregates, pump_events, legs;
    for (const auto& item : evidence) {
        if (std::holds_alternative<RouteEvent>(item.payload)) route_events.push_back(&item);
        else if (std::holds_alternative<OkxAggregate>(item.payload)) okx_aggregates.push_back(&item);
        else if (std::holds_alternative<PumpTradeEvent>(item.payload)) pump_events.push_back(&item);
        else legs.push_back(&item);
    }

    SwapInfo info;
    info.signer = ctx.signer;
    info.signatures = tx.signatures;
    info.timestamp = block_time;

    auto finish = [&](const Mint& in_mint, RawAmount in_amount, const Mint& out_mint,
                      RawAmount out_amount, std::set<std::string> tags) -> SwapInfo& {
        if (in_mint == out_mint)
            throw AmbiguousSwap("input and output mint coincide");
        if (in_amount == 0 || out_amount == 0)
            throw AmbiguousSwap("swap leg with zero amount");
        info.token_in_mint = registry.coalesce_sol(in_mint);
        info.token_in_amount = in_amount;
        info.token_in_decimals = ctx.decs.lookup(in_mint);
        info.token_out_mint = registry.coalesce_sol(out_mint);
        info.token_out_amount = out_amount;
        info.token_out_decimals = ctx.decs.lookup(out_mint);
        info.amm_tags = std::move(tags);
        return info;
    };

    if (!route_events.empty()) {
        // Route-level aggregation: input of the first hop, output of the
        // last, amounts summed over hops entering/leaving the route ends.
        std::set<std::string> tags;
        const auto& first = std::get<RouteEvent>(route_events.front()->payload);
        const auto& last = std::get<RouteEvent>(route_events.back()->payload);
        RawAmount in_total = 0, out_total = 0;
        for (const auto* item : route_events) {
            const auto& ev = std::get<RouteEvent>(item->payload);
            if (ev.in_mint == first.in_mint) in_total += ev.in_amount;
            if (ev.out_mint == last.out_mint) out_total += ev.out_amount;
            tags.insert(item->venue_tags.begin(), item->venue_tags.end());
        }
        return finish(first.in_mint, in_total, last.out_mint, out_total, std::move(tags));
    }

    if (!okx_aggregates.empty()) {
        const auto& agg = std::get<OkxAggregate>(okx_aggregates.front()->payload);
        return finish(agg.in_mint, agg.in_amount, agg.out_mint, agg.out_amount,
                      okx_aggregates.front()->venue_tags);
    }

    if (!pump_events.empty()) {
        const auto& ev = std::get<PumpTradeEvent>(pump_events.front()->payload);
        const Mint sol = registry.sol();
        if (ev.is_buy)
            return finish(sol, ev.sol_amount, ev.mint, ev.token_amount,
                          pump_events.front()->venue_tags);
        return finish(ev.mint, ev.token_amount, sol, ev.sol_amount,
                      pump_events.front()->venue_tags);
    }

    if (legs.empty())
        throw NoSwapFound("no router evidence and no AMM transfer legs");

    // Leg aggregation: sum unique legs per mint.
    std::set<std::string> seen_keys;
    std::map<std::string, RawAmount> sums; // mint address -> total
    std::vector<Mint> appearance;          // first-appearance order
    std::optional<Mint> signer_outflow;
    std::set<std::string> tags;
    for (const auto* item : legs) {
        const auto& leg = std::get<SwapLeg>(item->payload);
        if (!seen_keys.insert(leg.leg_key()).second) continue;
        if (sums.emplace(leg.mint.address, 0).second) appearance.push_back(leg.mint);
        sums[leg.mint.address] += leg.amount;
        if (!signer_outflow && leg.direction == LegDirection::Out) signer_outflow = leg.mint;
        tags.insert(item->venue_tags.begin(), item->venue_tags.end());
    }

    if (appearance.size() < 2)
        throw AmbiguousSwap("leg aggregation found " + std::to_string(appearance.size()) +
                            " distinct mint(s)");

    Mint in_mint = signer_outflow ? *signer_outflow : appearance.front();
    Mint out_mint = appearance.back();
    if (out_mint == in_mint) {
        for (auto it = appearance.rbegin(); it != appearance.rend(); ++it) {
            if (*it != in_mint) {
                out_mint = *it;
                break;
            }
        }
    }

    finish(in_mint, sums[in_mint.address], out_mint, sums[out_mint.address], std::move(tags));

    // Direction sanity: a signer whose lamports grew cannot have paid SOL in.
    auto signer_it = std::find(ctx.account_table.begin(), ctx.account_table.end(), ctx.signer);
    const auto signer_index =
        static_cast<std::size_t>(std::distance(ctx.account_table.begin(), signer_it));
    if (signer_index >= meta.pre_balances.size() || signer_index >= meta.post_balances.size())
        throw MalformedMeta("balance arrays shorter than account table");
    const ledger::Lamports delta_sol =
        meta.post_balances[signer_index] - meta.pre_balances[signer_index];
    if (delta_sol > 0 && info.token_in_mint == registry.sol()) {
        std::swap(info.token_in_mint, info.token_out_mint);
        std::swap(info.token_in_amount, info.token_out_amount);
        std::swap(info.token_in_decimals, info.token_out_decimals);
    }

    return info;
}

} // namespace lx::decode
