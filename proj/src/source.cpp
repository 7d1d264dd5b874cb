#include "linkxplore/source.hpp"

#include <ctime>
#include <fstream>

#include <json.hpp>

#include "linkxplore/errors.hpp"
#include "linkxplore/fixture_json.hpp"

namespace lx::source {

namespace {

class FixtureBackend final : public Backend {
public:
    explicit FixtureBackend(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw SourceUnavailable("fixture file not readable: " + path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
            if (record.is_discarded())
                throw SourceUnavailable("fixture: bad JSON at line " + std::to_string(line_no));
            Block block = ledger::block_from_json(record);
            const Slot slot = block.slot;
            if (block.block_time) {
                if (!max_slot_ || slot > *max_slot_) max_slot_ = slot;
            }
            for (const auto& entry : block.transactions) {
                if (!entry.tx.signatures.empty())
                    by_signature_.emplace(entry.tx.signatures.front(), slot);
            }
            blocks_[slot] = std::move(block);
        }
    }

    Slot fetch_slot() override {
        if (!max_slot_) throw SourceUnavailable("fixture holds no finalized blocks");
        return *max_slot_;
    }

    std::optional<UnixSeconds> fetch_block_time(Slot slot) override {
        const Block& block = find(slot);
        return block.block_time;
    }

    std::optional<Block> fetch_block(Slot slot) override {
        const Block& block = find(slot);
        if (!block.block_time) return std::nullopt; // skipped slot marker
        return block;
    }

    std::optional<TransactionLocation> fetch_transaction(const std::string& signature) override {
        auto it = by_signature_.find(signature);
        if (it == by_signature_.end()) return std::nullopt;
        const Block& block = blocks_.at(it->second);
        for (const auto& entry : block.transactions) {
            if (!entry.tx.signatures.empty() && entry.tx.signatures.front() == signature)
                return TransactionLocation{entry, block.slot, block.block_time};
        }
        return std::nullopt;
    }

    bool is_local() const override { return true; }

private:
    const Block& find(Slot slot) const {
        auto it = blocks_.find(slot);
        if (it == blocks_.end())
            throw SlotOutOfRange("slot " + std::to_string(slot) + " not in fixture");
        return it->second;
    }

    std::map<Slot, Block> blocks_;
    std::unordered_map<std::string, Slot> by_signature_;
    std::optional<Slot> max_slot_;
};

// Fixture first, live endpoint for anything the fixture lacks.
class LayeredBackend final : public Backend {
public:
    LayeredBackend(std::unique_ptr<Backend> fixture, std::unique_ptr<Backend> live)
        : fixture_(std::move(fixture)), live_(std::move(live)) {}

    Slot fetch_slot() override {
        try {
            return fixture_->fetch_slot();
        } catch (const Error&) {
            return live_->fetch_slot();
        }
    }

    std::optional<UnixSeconds> fetch_block_time(Slot slot) override {
        try {
            return fixture_->fetch_block_time(slot);
        } catch (const SlotOutOfRange&) {
            return live_->fetch_block_time(slot);
        }
    }

    std::optional<Block> fetch_block(Slot slot) override {
        try {
            return fixture_->fetch_block(slot);
        } catch (const SlotOutOfRange&) {
            return live_->fetch_block(slot);
        }
    }

    std::optional<TransactionLocation> fetch_transaction(const std::string& signature) override {
        if (auto hit = fixture_->fetch_transaction(signature)) return hit;
        return live_->fetch_transaction(signature);
    }

    bool is_local() const override { return false; }

private:
    std::unique_ptr<Backend> fixture_;
    std::unique_ptr<Backend> live_;
};

} // namespace

std::unique_ptr<Backend> make_fixture_backend(const std::string& path) {
    return std::make_unique<FixtureBackend>(path);
}

ChainSource::ChainSource(std::unique_ptr<Backend> backend, const SourceConfig& config)
    : backend_(std::move(backend)), config_(config) {
    if (config_.cache_capacity_blocks == 0)
        throw BadRequest("cacheCapacityBlocks must be positive");
}

std::shared_ptr<ChainSource> ChainSource::open(const SourceConfig& config) {
    std::unique_ptr<Backend> backend;
    if (config.fixture_path && config.endpoint_url) {
        backend = std::make_unique<LayeredBackend>(
            make_fixture_backend(*config.fixture_path),
            make_rpc_backend(*config.endpoint_url, config.max_requests_per_second));
    } else if (config.fixture_path) {
        backend = make_fixture_backend(*config.fixture_path);
    } else if (config.endpoint_url) {
        backend = make_rpc_backend(*config.endpoint_url, config.max_requests_per_second);
    } else {
        throw BadRequest("source config names neither an endpoint nor a fixture");
    }
    return std::make_shared<ChainSource>(std::move(backend), config);
}

Slot ChainSource::get_slot() {
    Slot slot = backend_->fetch_slot();
    count_request("getSlot", 1.0);
    return slot;
}

std::optional<UnixSeconds> ChainSource::get_block_time(Slot slot) {
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(slot);
        if (it != cache_.end())
            return it->second.block ? it->second.block->block_time : std::nullopt;
    }
    auto time = backend_->fetch_block_time(slot);
    count_request("getBlockTime", 1.0);
    return time;
}

std::optional<Block> ChainSource::get_block(Slot slot) {
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(slot);
        if (it != cache_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second.lru_it);
            return it->second.block;
        }
    }
    auto block = backend_->fetch_block(slot);
    count_request("getBlock", block_units(block));
    cache_put(slot, block);
    return block;
}

std::optional<TransactionLocation> ChainSource::lookup_transaction(const std::string& signature) {
    auto loc = backend_->fetch_transaction(signature);
    count_request("getTransaction", 1.0);
    return loc;
}

UsageReport ChainSource::record_usage() const {
    std::lock_guard lock(mutex_);
    return UsageReport{request_count_, request_units_};
}

bool ChainSource::probe_healthy() {
    try {
        get_slot();
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

void ChainSource::count_request(const std::string& method, double units) {
    std::lock_guard lock(mutex_);
    ++request_count_[method];
    request_units_ += units;
}

void ChainSource::cache_put(Slot slot, std::optional<Block> block) {
    std::lock_guard lock(mutex_);
    if (cache_.count(slot)) return; // concurrent fill, keep the first
    lru_.push_front(slot);
    cache_.emplace(slot, CacheEntry{std::move(block), lru_.begin()});
    while (cache_.size() > config_.cache_capacity_blocks) {
        cache_.erase(lru_.back());
        lru_.pop_back();
    }
}

double ChainSource::block_units(const std::optional<Block>& block) const {
    // Provider retention rule: a getBlock beyond the boundary bills double.
    if (!block || !block->block_time) return 1.0;
    const double age_s =
        static_cast<double>(std::time(nullptr)) - static_cast<double>(*block->block_time);
    return age_s > config_.retention_boundary_hours * 3600.0 ? 2.0 : 1.0;
}

} // namespace lx::source
