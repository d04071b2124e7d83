#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace simjudge {

// FIPS 180-4 SHA-256 over a byte string. Kept dependency-free so certificate
// seals do not vary with the system crypto library.
std::array<std::uint8_t, 32> sha256(std::string_view data);

// Lowercase 64-character hex digest.
std::string sha256_hex(std::string_view data);

std::string to_hex(const std::array<std::uint8_t, 32>& digest);

}  // namespace simjudge
