#pragma once

#include <cstdint>
#include <string>

namespace bsc {

// hex digest of the input bytes
std::string sha256_hex(const std::string& data);

}  // namespace bsc
