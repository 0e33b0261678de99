#ifndef LIFTNET_HASH_HPP
#define LIFTNET_HASH_HPP

/// CRC-32 (zlib polynomial) helpers for run manifests and file fingerprints.

#include <cstdint>
#include <string>

namespace liftnet {

std::uint32_t crc32_bytes(const void* data, std::size_t size);

/// @throws format_error if the file cannot be read
std::uint32_t crc32_file(const std::string& path);

/// Lowercase zero-padded 8-digit hex.
std::string crc32_hex(std::uint32_t crc);

} // namespace liftnet

#endif // LIFTNET_HASH_HPP
