#include "linkxplore/registry.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "linkxplore/errors.hpp"

namespace lx::ledger {

namespace {

using nlohmann::json;

codec::Bytes parse_hex_field(const json& obj, const char* key) {
    if (!obj.contains(key)) return {};
    auto bytes = codec::hex_decode(obj.at(key).get<std::string>());
    if (!bytes)
        throw BadRequest(std::string("registry: bad hex in discriminator field '") + key + "'");
    return *bytes;
}

} // namespace

ProgramRegistry ProgramRegistry::from_json_text(const std::string& text) {
    json doc = json::parse(text);
    ProgramRegistry reg;

    for (auto& [pid, tag] : doc.at("programs").items())
        reg.add_program(pid, tag.get<std::string>());

    if (doc.contains("discriminators")) {
        for (auto& [tag, obj] : doc.at("discriminators").items()) {
            VenueDiscriminators d;
            d.event = parse_hex_field(obj, "event");
            d.event_cpi_prefix = parse_hex_field(obj, "event_cpi_prefix");
            d.buy = parse_hex_field(obj, "buy");
            d.sell = parse_hex_field(obj, "sell");
            reg.set_discriminators(tag, std::move(d));
        }
    }

    if (doc.contains("okx_log_patterns")) {
        OkxLogPatterns p;
        p.source = doc["okx_log_patterns"].value("source", "");
        p.destination = doc["okx_log_patterns"].value("destination", "");
        reg.set_okx_log_patterns(std::move(p));
    }

    for (auto& pid : doc.value("dca_programs", std::vector<std::string>{}))
        reg.add_dca_program(pid);
    for (auto& pid : doc.value("bot_routers", std::vector<std::string>{}))
        reg.add_bot_router(pid);

    const auto& base = doc.at("base_mints");
    reg.set_base_mints(base.at("wsol").get<std::string>(),
                       base.at("usdc").get<std::string>(),
                       base.at("usdt").get<std::string>());
    return reg;
}

ProgramRegistry ProgramRegistry::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadRequest("registry file not readable: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

void ProgramRegistry::add_program(const std::string& program_id, const std::string& tag) {
    auto [it, inserted] = program_tags_.emplace(program_id, tag);
    if (!inserted && it->second != tag)
        throw BadRequest("registry: duplicate program id " + program_id);
}

void ProgramRegistry::set_discriminators(const std::string& tag, VenueDiscriminators d) {
    discriminators_[tag] = std::move(d);
}

void ProgramRegistry::set_okx_log_patterns(OkxLogPatterns p) {
    okx_patterns_ = std::move(p);
}

void ProgramRegistry::add_dca_program(const std::string& program_id) {
    dca_programs_.insert(program_id);
}

void ProgramRegistry::add_bot_router(const std::string& program_id) {
    bot_routers_.insert(program_id);
    program_tags_.emplace(program_id, venue::kBotRouter);
}

void ProgramRegistry::set_base_mints(std::string wsol, std::string usdc, std::string usdt) {
    wsol_mint_ = std::move(wsol);
    usdc_mint_ = std::move(usdc);
    usdt_mint_ = std::move(usdt);
}

std::optional<std::string> ProgramRegistry::venue_of(const std::string& program_id) const {
    auto it = program_tags_.find(program_id);
    if (it == program_tags_.end()) return std::nullopt;
    return it->second;
}

bool ProgramRegistry::is_token_program(const std::string& program_id) const {
    auto tag = venue_of(program_id);
    return tag && (*tag == venue::kToken || *tag == venue::kToken2022);
}

bool ProgramRegistry::is_dca_program(const std::string& program_id) const {
    return dca_programs_.count(program_id) > 0;
}

bool ProgramRegistry::is_bot_router(const std::string& program_id) const {
    return bot_routers_.count(program_id) > 0;
}

bool ProgramRegistry::is_swap_venue(const std::string& tag) const {
    return tag != venue::kToken && tag != venue::kToken2022;
}

bool ProgramRegistry::is_fallback_venue(const std::string& tag) const {
    return tag == venue::kRaydium || tag == venue::kOrca || tag == venue::kMeteora ||
           tag == venue::kPumpFun || tag == venue::kPumpFunAmm;
}

const VenueDiscriminators* ProgramRegistry::discriminators(const std::string& tag) const {
    auto it = discriminators_.find(tag);
    return it == discriminators_.end() ? nullptr : &it->second;
}

Mint ProgramRegistry::coalesce_sol(const Mint& m) const {
    if (m.address == wsol_mint_) return Mint{wsol_mint_, true};
    return m;
}

} // namespace lx::ledger
