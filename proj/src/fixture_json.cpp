#include "linkxplore/fixture_json.hpp"

#include <charconv>

#include "linkxplore/errors.hpp"

namespace lx::ledger {

namespace {

using nlohmann::json;

codec::Bytes decode_instruction_data(const json& data) {
    if (data.is_string()) {
        auto bytes = codec::base58_decode(data.get<std::string>());
        if (!bytes) throw BadRequest("fixture: instruction data is not base58");
        return *bytes;
    }
    // ["<payload>", "base64"|"base58"] account-data style encoding.
    if (data.is_array() && data.size() == 2 && data[0].is_string() && data[1].is_string()) {
        const auto payload = data[0].get<std::string>();
        const auto enc = data[1].get<std::string>();
        std::optional<codec::Bytes> bytes;
        if (enc == "base64") bytes = codec::base64_decode(payload);
        else if (enc == "base58") bytes = codec::base58_decode(payload);
        if (!bytes) throw BadRequest("fixture: bad instruction data encoding '" + enc + "'");
        return *bytes;
    }
    throw BadRequest("fixture: unsupported instruction data shape");
}

Instruction instruction_from_json(const json& obj) {
    Instruction inst;
    inst.program_id_index = obj.at("programIdIndex").get<std::uint32_t>();
    for (const auto& idx : obj.value("accounts", json::array()))
        inst.account_indexes.push_back(idx.get<std::uint32_t>());
    if (obj.contains("data")) inst.data = decode_instruction_data(obj.at("data"));
    return inst;
}

json instruction_to_json(const Instruction& inst) {
    json obj;
    obj["programIdIndex"] = inst.program_id_index;
    obj["accounts"] = inst.account_indexes;
    obj["data"] = encode_instruction_data(inst.data);
    return obj;
}

RawAmount raw_amount_from_string(const std::string& text) {
    RawAmount value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw BadRequest("fixture: bad raw token amount '" + text + "'");
    return value;
}

TokenBalanceEntry token_balance_from_json(const json& obj) {
    TokenBalanceEntry entry;
    entry.account_index = obj.at("accountIndex").get<std::uint32_t>();
    entry.mint = Mint{obj.at("mint").get<std::string>()};
    const auto& ui = obj.at("uiTokenAmount");
    entry.decimals = ui.at("decimals").get<Decimals>();
    entry.post_amount = raw_amount_from_string(ui.at("amount").get<std::string>());
    return entry;
}

json token_balance_to_json(const TokenBalanceEntry& entry) {
    json obj;
    obj["accountIndex"] = entry.account_index;
    obj["mint"] = entry.mint.address;
    obj["uiTokenAmount"] = {
        {"amount", std::to_string(entry.post_amount)},
        {"decimals", entry.decimals},
    };
    return obj;
}

} // namespace

std::string encode_instruction_data(const codec::Bytes& data) {
    return codec::base58_encode(data);
}

TransactionWithMeta transaction_from_json(const json& entry) {
    TransactionWithMeta out;

    const auto& tx = entry.at("transaction");
    for (const auto& sig : tx.at("signatures"))
        out.tx.signatures.push_back(sig.get<std::string>());
    const auto& message = tx.at("message");
    for (const auto& key : message.at("accountKeys"))
        out.tx.message_account_keys.push_back(key.get<std::string>());
    for (const auto& inst : message.value("instructions", json::array()))
        out.tx.outer_instructions.push_back(instruction_from_json(inst));

    const auto& meta = entry.at("meta");
    if (meta.contains("err") && !meta.at("err").is_null())
        out.meta.err = meta.at("err").dump();
    for (const auto& v : meta.value("preBalances", json::array()))
        out.meta.pre_balances.push_back(v.get<Lamports>());
    for (const auto& v : meta.value("postBalances", json::array()))
        out.meta.post_balances.push_back(v.get<Lamports>());
    for (const auto& v : meta.value("preTokenBalances", json::array()))
        out.meta.pre_token_balances.push_back(token_balance_from_json(v));
    for (const auto& v : meta.value("postTokenBalances", json::array()))
        out.meta.post_token_balances.push_back(token_balance_from_json(v));
    for (const auto& group : meta.value("innerInstructions", json::array())) {
        auto index = group.at("index").get<std::uint32_t>();
        auto& list = out.meta.inner_instructions[index];
        for (const auto& inst : group.value("instructions", json::array()))
            list.push_back(instruction_from_json(inst));
    }
    for (const auto& line : meta.value("logMessages", json::array()))
        out.meta.log_messages.push_back(line.get<std::string>());
    if (meta.contains("loadedAddresses")) {
        const auto& loaded = meta.at("loadedAddresses");
        for (const auto& key : loaded.value("writable", json::array()))
            out.tx.loaded_addresses.push_back(key.get<std::string>());
        for (const auto& key : loaded.value("readonly", json::array()))
            out.tx.loaded_addresses.push_back(key.get<std::string>());
    }

    return out;
}

json transaction_to_json(const TransactionWithMeta& entry) {
    json tx;
    tx["signatures"] = entry.tx.signatures;
    json message;
    message["accountKeys"] = entry.tx.message_account_keys;
    json insts = json::array();
    for (const auto& inst : entry.tx.outer_instructions)
        insts.push_back(instruction_to_json(inst));
    message["instructions"] = std::move(insts);
    tx["message"] = std::move(message);

    json meta;
    meta["err"] = entry.meta.err ? json::parse(*entry.meta.err, nullptr, false) : json(nullptr);
    if (meta["err"].is_discarded()) meta["err"] = *entry.meta.err;
    meta["preBalances"] = entry.meta.pre_balances;
    meta["postBalances"] = entry.meta.post_balances;
    json pre_tb = json::array();
    for (const auto& tb : entry.meta.pre_token_balances) pre_tb.push_back(token_balance_to_json(tb));
    meta["preTokenBalances"] = std::move(pre_tb);
    json post_tb = json::array();
    for (const auto& tb : entry.meta.post_token_balances) post_tb.push_back(token_balance_to_json(tb));
    meta["postTokenBalances"] = std::move(post_tb);
    json inner = json::array();
    for (const auto& [index, list] : entry.meta.inner_instructions) {
        json group;
        group["index"] = index;
        json group_insts = json::array();
        for (const auto& inst : list) group_insts.push_back(instruction_to_json(inst));
        group["instructions"] = std::move(group_insts);
        inner.push_back(std::move(group));
    }
    meta["innerInstructions"] = std::move(inner);
    meta["logMessages"] = entry.meta.log_messages;
    meta["loadedAddresses"] = {
        {"writable", entry.tx.loaded_addresses},
        {"readonly", json::array()},
    };

    json out;
    out["transaction"] = std::move(tx);
    out["meta"] = std::move(meta);
    return out;
}

Block block_from_json(const json& record) {
    Block block;
    block.slot = record.at("slot").get<Slot>();
    if (record.contains("blockTime") && !record.at("blockTime").is_null())
        block.block_time = record.at("blockTime").get<UnixSeconds>();
    for (const auto& entry : record.value("transactions", json::array()))
        block.transactions.push_back(transaction_from_json(entry));
    if (!block.block_time && !block.transactions.empty())
        throw BadRequest("fixture: transactions present on a slot without blockTime");
    return block;
}

json block_to_json(const Block& block) {
    json record;
    record["slot"] = block.slot;
    record["blockTime"] = block.block_time ? json(*block.block_time) : json(nullptr);
    json txs = json::array();
    for (const auto& entry : block.transactions)
        txs.push_back(transaction_to_json(entry));
    record["transactions"] = std::move(txs);
    return record;
}

} // namespace lx::ledger
