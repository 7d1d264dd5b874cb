#include "linkxplore/slot_locator.hpp"

#include <cmath>
#include <map>

#include "linkxplore/errors.hpp"

namespace lx::slots {

namespace {

// Neighbor probing span used when a slot turns out to be skipped. Runs of
// bare slots longer than 2*span+1 read as the edge of history.
constexpr std::int64_t kProbeSpan = 32;

struct Resolved {
    Slot slot;
    UnixSeconds time;
};

// Memoizing view over get_block_time. Skipped slots and slots outside the
// source's history both read as "no time here".
class SlotProbe {
public:
    explicit SlotProbe(ChainSource& source) : source_(source) {}

    std::optional<UnixSeconds> time_at(Slot slot) {
        auto it = memo_.find(slot);
        if (it != memo_.end()) return it->second;
        std::optional<UnixSeconds> value;
        try {
            value = source_.get_block_time(slot);
        } catch (const SlotOutOfRange&) {
            value = std::nullopt;
        }
        ++calls_;
        memo_.emplace(slot, value);
        return value;
    }

    // Nearest slot with a block time, probing outward from `center` while
    // staying inside [lo, hi]. nullopt when the whole neighborhood is bare.
    std::optional<Resolved> resolve(Slot center, Slot lo, Slot hi) {
        if (lo > hi) return std::nullopt;
        if (center < lo) center = lo;
        if (center > hi) center = hi;
        if (auto t = time_at(center)) return Resolved{center, *t};
        for (std::int64_t d = 1; d <= kProbeSpan; ++d) {
            const auto up = static_cast<std::int64_t>(center) + d;
            if (up <= static_cast<std::int64_t>(hi)) {
                if (auto t = time_at(static_cast<Slot>(up)))
                    return Resolved{static_cast<Slot>(up), *t};
            }
            const auto down = static_cast<std::int64_t>(center) - d;
            if (down >= static_cast<std::int64_t>(lo)) {
                if (auto t = time_at(static_cast<Slot>(down)))
                    return Resolved{static_cast<Slot>(down), *t};
            }
        }
        return std::nullopt;
    }

    std::uint64_t calls() const { return calls_; }

private:
    ChainSource& source_;
    std::map<Slot, std::optional<UnixSeconds>> memo_;
    std::uint64_t calls_ = 0;
};

Resolved resolve_tip(SlotProbe& probe, Slot tip) {
    // The tip itself may be a skipped marker on odd sources; walk down.
    const Slot lo = tip > 256 ? tip - 256 : 0;
    if (auto r = probe.resolve(tip, lo, tip)) return *r;
    throw SourceUnavailable("no block time near tip slot " + std::to_string(tip));
}

struct BracketResult {
    Resolved lo; // time <= t
    Resolved hi; // time >= t
};

BracketResult find_bracket(UnixSeconds t, Slot guess, const Resolved& tip, SlotProbe& probe) {
    if (guess > tip.slot) guess = tip.slot;

    // Anchor near the guess; a guess below the history floor resolves by
    // escalating upward (everything below the floor reads as bare).
    std::optional<Resolved> anchor = probe.resolve(guess, 0, tip.slot);
    for (std::int64_t step = kProbeSpan * 2; !anchor; step *= 2) {
        const auto cand = static_cast<std::int64_t>(guess) + step;
        const Slot clamped =
            cand >= static_cast<std::int64_t>(tip.slot) ? tip.slot : static_cast<Slot>(cand);
        anchor = probe.resolve(clamped, 0, tip.slot);
        if (!anchor && clamped == tip.slot)
            throw SourceUnavailable("no resolvable block times in source");
    }

    if (anchor->time == t) return {*anchor, *anchor};

    if (anchor->time < t) {
        // Walk up until a time at or past t appears; the tip time bounds the
        // walk because the caller checked t <= tip.time.
        Resolved lo = *anchor;
        std::int64_t step = 1;
        for (;;) {
            const auto cand_i = static_cast<std::int64_t>(lo.slot) + step;
            const Slot cand = cand_i >= static_cast<std::int64_t>(tip.slot)
                                  ? tip.slot
                                  : static_cast<Slot>(cand_i);
            auto r = probe.resolve(cand, lo.slot + 1, tip.slot);
            if (!r)
                throw SourceUnavailable("bare stretch between anchor and tip");
            if (r->time >= t) return {lo, *r};
            lo = *r;
            step *= 2;
        }
    }

    // anchor->time > t: walk down. Hitting slot 0 or a bare region below the
    // history floor without finding a time <= t means t predates history.
    Resolved hi = *anchor;
    std::int64_t step = 1;
    for (;;) {
        if (hi.slot == 0)
            throw TimestampBeforeHistory("timestamp " + std::to_string(t) +
                                         " precedes available history");
        const auto cand_i = static_cast<std::int64_t>(hi.slot) - step;
        const Slot cand = cand_i <= 0 ? 0 : static_cast<Slot>(cand_i);
        auto r = probe.resolve(cand, 0, hi.slot - 1);
        if (!r)
            throw TimestampBeforeHistory("timestamp " + std::to_string(t) +
                                         " precedes available history");
        if (r->time <= t) return {*r, hi};
        hi = *r;
        step *= 2;
    }
}

// Rightmost resolvable slot with time <= t inside [known_le.slot, hi_bound].
Resolved search_floor(UnixSeconds t, Resolved known_le, Slot hi_bound, SlotProbe& probe) {
    Resolved lo = known_le;
    std::int64_t hi_excl = static_cast<std::int64_t>(hi_bound) + 1;
    while (hi_excl - static_cast<std::int64_t>(lo.slot) > 1) {
        const auto mid_i = (static_cast<std::int64_t>(lo.slot) + hi_excl) / 2;
        auto r = probe.resolve(static_cast<Slot>(mid_i), lo.slot + 1,
                               static_cast<Slot>(hi_excl - 1));
        if (!r) break; // bare gap: nothing beyond the current anchor
        if (r->time <= t) lo = *r;
        else hi_excl = static_cast<std::int64_t>(r->slot);
    }
    return lo;
}

// Leftmost resolvable slot with time >= t above lo_excl.
Resolved search_ceil(UnixSeconds t, Resolved known_ge, std::int64_t lo_excl, SlotProbe& probe) {
    Resolved hi = known_ge;
    while (static_cast<std::int64_t>(hi.slot) - lo_excl > 1) {
        const auto mid_i = (lo_excl + static_cast<std::int64_t>(hi.slot)) / 2;
        auto r = probe.resolve(static_cast<Slot>(mid_i), static_cast<Slot>(lo_excl + 1),
                               hi.slot - 1);
        if (!r) {
            // Bare region below; treat it as the history floor.
            lo_excl = mid_i;
            continue;
        }
        if (r->time >= t) hi = *r;
        else lo_excl = static_cast<std::int64_t>(r->slot);
    }
    return hi;
}

} // namespace

Slot estimate_slot(UnixSeconds t, Slot s_now, UnixSeconds t_now, const ClockCalibration& cal) {
    if (t > t_now)
        throw FutureTimestamp("timestamp " + std::to_string(t) + " is past the tip time " +
                              std::to_string(t_now));
    const double offset = static_cast<double>(t_now - t) / cal.avg_block_time;
    const auto back = std::llround(offset); // rounds half away from zero
    if (back < 0) return s_now;
    if (static_cast<std::uint64_t>(back) >= s_now) return 0;
    return s_now - static_cast<Slot>(back);
}

std::pair<Slot, Slot> bracket(UnixSeconds t, Slot guess, ChainSource& source) {
    SlotProbe probe(source);
    const Resolved tip = resolve_tip(probe, source.get_slot());
    if (t > tip.time) throw FutureTimestamp("timestamp past tip time");
    const auto b = find_bracket(t, guess, tip, probe);
    return {b.lo.slot, b.hi.slot};
}

SlotChoice nearest_slot(UnixSeconds t, ChainSource& source, const ClockCalibration& cal,
                        LocateStats* stats) {
    SlotProbe probe(source);
    const Resolved tip = resolve_tip(probe, source.get_slot());
    if (t > tip.time)
        throw FutureTimestamp("timestamp " + std::to_string(t) + " is past the tip time " +
                              std::to_string(tip.time));

    const Slot guess = estimate_slot(t, tip.slot, tip.time, cal);
    const BracketResult br = find_bracket(t, guess, tip, probe);

    // Integer block times plateau: several slots can share the exact value t,
    // and the true floor/ceil may sit outside the bracket. Extend each side
    // until a strictly greater / smaller time bounds the search.
    Resolved floor_anchor = br.lo; // time <= t
    Slot floor_hi_bound = br.hi.slot;
    if (br.hi.time == t) {
        Resolved walker = br.hi;
        std::int64_t step = 1;
        while (walker.time <= t && walker.slot < tip.slot) {
            const auto cand_i = static_cast<std::int64_t>(walker.slot) + step;
            const Slot cand = cand_i >= static_cast<std::int64_t>(tip.slot)
                                  ? tip.slot
                                  : static_cast<Slot>(cand_i);
            auto r = probe.resolve(cand, walker.slot + 1, tip.slot);
            if (!r) break;
            if (r->time <= t) floor_anchor = *r;
            walker = *r;
            step *= 2;
        }
        floor_hi_bound = walker.slot;
    }

    Resolved ceil_anchor = br.hi; // time >= t
    std::int64_t ceil_lo_excl;
    if (br.lo.time < t) {
        ceil_lo_excl = static_cast<std::int64_t>(br.lo.slot);
    } else {
        // br.lo.time == t: the plateau may extend left of the bracket.
        ceil_anchor = br.lo;
        std::optional<std::int64_t> lt_bound;
        Resolved walker = br.lo;
        std::int64_t step = 1;
        while (walker.slot > 0) {
            const auto cand_i = static_cast<std::int64_t>(walker.slot) - step;
            const Slot cand = cand_i <= 0 ? 0 : static_cast<Slot>(cand_i);
            auto r = probe.resolve(cand, 0, walker.slot - 1);
            if (!r) break; // bare region: history floor
            if (r->time < t) {
                lt_bound = static_cast<std::int64_t>(r->slot);
                break;
            }
            walker = *r;
            ceil_anchor = walker;
            step *= 2;
        }
        ceil_lo_excl = lt_bound ? *lt_bound : static_cast<std::int64_t>(ceil_anchor.slot) - 1;
    }

    const Resolved floor_r = search_floor(t, floor_anchor, floor_hi_bound, probe);
    const Resolved ceil_r = search_ceil(t, ceil_anchor, ceil_lo_excl, probe);

    SlotChoice choice;
    choice.floor_slot = floor_r.slot;
    choice.floor_time = floor_r.time;
    choice.ceil_slot = ceil_r.slot;
    choice.ceil_time = ceil_r.time;

    const UnixSeconds d_floor = t - floor_r.time;
    const UnixSeconds d_ceil = ceil_r.time - t;
    if (d_floor < d_ceil) choice.slots = {floor_r.slot};
    else if (d_ceil < d_floor) choice.slots = {ceil_r.slot};
    else choice.slots = {floor_r.slot, ceil_r.slot};

    if (stats) {
        stats->time_calls = probe.calls();
        stats->bracket_lo = br.lo.slot;
        stats->bracket_hi = br.hi.slot;
    }
    return choice;
}

} // namespace lx::slots
