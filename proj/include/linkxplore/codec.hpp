#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lx::codec {

using Bytes = std::vector<std::uint8_t>;

std::string base58_encode(const Bytes& data);
std::optional<Bytes> base58_decode(const std::string& text);

std::string base64_encode(const Bytes& data);
std::optional<Bytes> base64_decode(const std::string& text);

// "deadbeef" <-> bytes; used for discriminators in the registry file.
std::string hex_encode(const Bytes& data);
std::optional<Bytes> hex_decode(const std::string& text);

} // namespace lx::codec
