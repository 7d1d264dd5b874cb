#pragma once

#include <optional>
#include <set>

#include "linkxplore/source.hpp"

namespace lx::slots {

using ledger::Slot;
using ledger::UnixSeconds;
using source::ChainSource;

struct ClockCalibration {
    double avg_block_time = 0.4; // seconds per slot
};

// Nearest finalized slot(s) for a timestamp. Two slots only when the floor
// and ceiling are equidistant from t.
struct SlotChoice {
    std::set<Slot> slots;
    Slot floor_slot = 0;
    Slot ceil_slot = 0;
    UnixSeconds floor_time = 0;
    UnixSeconds ceil_time = 0;
};

// Filled on request so tests can assert the probe budget.
struct LocateStats {
    std::uint64_t time_calls = 0;
    Slot bracket_lo = 0;
    Slot bracket_hi = 0;
};

// S0 = s_now - round((t_now - t) / avg), round half away from zero,
// clamped at slot 0. Throws FutureTimestamp for t beyond t_now.
Slot estimate_slot(UnixSeconds t, Slot s_now, UnixSeconds t_now, const ClockCalibration& cal);

// Doubling search outward from the guess until blockTime(L) <= t <= blockTime(H),
// skipping over slots that produced no block.
std::pair<Slot, Slot> bracket(UnixSeconds t, Slot guess, ChainSource& source);

SlotChoice nearest_slot(UnixSeconds t, ChainSource& source, const ClockCalibration& cal,
                        LocateStats* stats = nullptr);

} // namespace lx::slots
