#pragma once

#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "linkxplore/ledger.hpp"

namespace lx::source {

using ledger::Block;
using ledger::Slot;
using ledger::TransactionWithMeta;
using ledger::UnixSeconds;

struct SourceConfig {
    std::optional<std::string> endpoint_url;
    std::optional<std::string> fixture_path;
    double max_requests_per_second = 100.0;
    std::size_t cache_capacity_blocks = 512;
    double retention_boundary_hours = 36.0;
    // finalized is the only commitment level the source speaks.
};

struct UsageReport {
    std::map<std::string, std::uint64_t> request_count; // per RPC method
    double request_units = 0.0;
};

// A transaction found by signature, with enough context to decode it.
struct TransactionLocation {
    TransactionWithMeta entry;
    Slot slot = 0;
    std::optional<UnixSeconds> block_time;
};

// Raw access to ledger data. Implementations do transport, retries and
// pacing; they do not cache or meter.
class Backend {
public:
    virtual ~Backend() = default;

    virtual Slot fetch_slot() = 0;
    // nullopt = slot was skipped (no block produced).
    virtual std::optional<UnixSeconds> fetch_block_time(Slot slot) = 0;
    virtual std::optional<Block> fetch_block(Slot slot) = 0;
    virtual std::optional<TransactionLocation> fetch_transaction(const std::string& signature) = 0;

    // True when the backend never leaves the process (fixture replay).
    virtual bool is_local() const = 0;
};

std::unique_ptr<Backend> make_fixture_backend(const std::string& path);
std::unique_ptr<Backend> make_rpc_backend(const std::string& endpoint_url,
                                          double max_requests_per_second);

// Uniform access point: block-granular LRU cache, request counters and
// request-unit metering on top of a backend. Thread-safe.
class ChainSource {
public:
    ChainSource(std::unique_ptr<Backend> backend, const SourceConfig& config);

    static std::shared_ptr<ChainSource> open(const SourceConfig& config);

    // Highest finalized slot known to the source.
    Slot get_slot();

    // Block time, or nullopt for a skipped slot.
    std::optional<UnixSeconds> get_block_time(Slot slot);

    // Full block, or nullopt for a skipped slot. Results are cached.
    std::optional<Block> get_block(Slot slot);

    std::optional<TransactionLocation> lookup_transaction(const std::string& signature);

    UsageReport record_usage() const;

    bool is_local() const { return backend_->is_local(); }

    // Cheap liveness probe; false instead of throwing.
    bool probe_healthy();

private:
    struct CacheEntry {
        std::optional<Block> block; // nullopt = skipped slot
        std::list<Slot>::iterator lru_it;
    };

    void count_request(const std::string& method, double units);
    void cache_put(Slot slot, std::optional<Block> block);
    double block_units(const std::optional<Block>& block) const;

    std::unique_ptr<Backend> backend_;
    SourceConfig config_;

    mutable std::mutex mutex_;
    std::unordered_map<Slot, CacheEntry> cache_;
    std::list<Slot> lru_; // front = most recent
    std::map<std::string, std::uint64_t> request_count_;
    double request_units_ = 0.0;
};

} // namespace lx::source
