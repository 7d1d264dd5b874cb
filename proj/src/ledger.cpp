#include "linkxplore/ledger.hpp"

#include "linkxplore/errors.hpp"

namespace lx::ledger {

std::vector<std::string> account_key_table(const TransactionRecord& tx) {
    std::vector<std::string> table;
    table.reserve(tx.message_account_keys.size() + tx.loaded_addresses.size());
    table.insert(table.end(), tx.message_account_keys.begin(), tx.message_account_keys.end());
    table.insert(table.end(), tx.loaded_addresses.begin(), tx.loaded_addresses.end());
    return table;
}

const std::string& resolve_account(const std::vector<std::string>& table,
                                   std::uint32_t index) {
    if (index >= table.size())
        throw MalformedMeta("account index " + std::to_string(index) +
                            " out of range (table size " + std::to_string(table.size()) + ")");
    return table[index];
}

} // namespace lx::ledger
