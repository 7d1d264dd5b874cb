#include <chrono>
#include <deque>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "linkxplore/errors.hpp"
#include "linkxplore/fixture_json.hpp"
#include "linkxplore/source.hpp"

namespace lx::source {

namespace {

using nlohmann::json;

constexpr int kMaxAttempts = 3;
constexpr auto kBackoffBase = std::chrono::milliseconds(200);

// Solana JSON-RPC error codes for slots that produced no block.
constexpr int kSlotSkipped = -32007;
constexpr int kSlotSkippedLongTerm = -32009;
constexpr int kBlockNotAvailable = -32004;

// Keeps issued request times in a 1-second sliding window.
class RequestPacer {
public:
    explicit RequestPacer(double max_per_second) : max_per_second_(max_per_second) {}

    void acquire() {
        using clock = std::chrono::steady_clock;
        std::unique_lock lock(mutex_);
        for (;;) {
            const auto now = clock::now();
            while (!issued_.empty() && now - issued_.front() >= std::chrono::seconds(1))
                issued_.pop_front();
            if (issued_.size() < static_cast<std::size_t>(max_per_second_)) {
                issued_.push_back(now);
                return;
            }
            const auto wake = issued_.front() + std::chrono::seconds(1);
            lock.unlock();
            std::this_thread::sleep_until(wake);
            lock.lock();
        }
    }

private:
    double max_per_second_;
    std::mutex mutex_;
    std::deque<std::chrono::steady_clock::time_point> issued_;
};

class RpcBackend final : public Backend {
public:
    RpcBackend(const std::string& endpoint_url, double max_requests_per_second)
        : endpoint_(endpoint_url), pacer_(max_requests_per_second) {}

    Slot fetch_slot() override {
        json result = call("getSlot", json::array({json{{"commitment", "finalized"}}}));
        return result.get<Slot>();
    }

    std::optional<UnixSeconds> fetch_block_time(Slot slot) override {
        json result = call("getBlockTime", json::array({slot}), slot);
        if (result.is_null()) return std::nullopt;
        return result.get<UnixSeconds>();
    }

    std::optional<Block> fetch_block(Slot slot) override {
        json options = {
            {"encoding", "json"},
            {"transactionDetails", "full"},
            {"maxSupportedTransactionVersion", 0},
            {"rewards", false},
            {"commitment", "finalized"},
        };
        json result = call("getBlock", json::array({slot, options}), slot);
        if (result.is_null()) return std::nullopt;
        result["slot"] = slot;
        if (!result.contains("blockTime")) result["blockTime"] = nullptr;
        return ledger::block_from_json(result);
    }

    std::optional<TransactionLocation> fetch_transaction(const std::string& signature) override {
        json options = {
            {"encoding", "json"},
            {"maxSupportedTransactionVersion", 0},
            {"commitment", "finalized"},
        };
        json result = call("getTransaction", json::array({signature, options}));
        if (result.is_null()) return std::nullopt;
        TransactionLocation loc;
        loc.entry = ledger::transaction_from_json(result);
        loc.slot = result.value("slot", Slot{0});
        if (result.contains("blockTime") && !result.at("blockTime").is_null())
            loc.block_time = result.at("blockTime").get<UnixSeconds>();
        return loc;
    }

    bool is_local() const override { return false; }

private:
    // One JSON-RPC call with pacing and bounded retries on transport faults.
    json call(const std::string& method, json params,
              std::optional<Slot> slot_context = std::nullopt) {
        json request = {
            {"jsonrpc", "2.0"},
            {"id", 1},
            {"method", method},
            {"params", std::move(params)},
        };
        const std::string body = request.dump();

        std::string last_fault;
        for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
            if (attempt > 0)
                std::this_thread::sleep_for(kBackoffBase * (1 << (attempt - 1)));

            pacer_.acquire();
            httplib::Client client(endpoint_);
            client.set_connection_timeout(5, 0);
            client.set_read_timeout(15, 0);
            auto res = client.Post("/", body, "application/json");
            if (!res) {
                last_fault = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 429 || res->status >= 500) {
                last_fault = "http status " + std::to_string(res->status);
                continue;
            }
            if (res->status != 200)
                throw SourceUnavailable(method + ": http status " + std::to_string(res->status));

            json doc = json::parse(res->body, nullptr, false);
            if (doc.is_discarded()) {
                last_fault = "unparseable response body";
                continue;
            }
            if (doc.contains("error")) {
                const int code = doc["error"].value("code", 0);
                const std::string message = doc["error"].value("message", "");
                if (code == kSlotSkipped || code == kSlotSkippedLongTerm)
                    return json(nullptr); // skipped slot
                if (code == kBlockNotAvailable)
                    throw SlotOutOfRange(
                        method + ": block not available" +
                        (slot_context ? " for slot " + std::to_string(*slot_context) : "") +
                        " (" + message + ")");
                throw SourceUnavailable(method + ": rpc error " + std::to_string(code) + " " + message);
            }
            if (!doc.contains("result"))
                throw SourceUnavailable(method + ": response carries no result");
            return doc["result"];
        }
        throw SourceUnavailable(method + " failed after " + std::to_string(kMaxAttempts) +
                                " attempts: " + last_fault);
    }

    std::string endpoint_;
    RequestPacer pacer_;
};

} // namespace

std::unique_ptr<Backend> make_rpc_backend(const std::string& endpoint_url,
                                          double max_requests_per_second) {
    return std::make_unique<RpcBackend>(endpoint_url, max_requests_per_second);
}

} // namespace lx::source
