#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace echodetect {

inline constexpr const char* kVersion = "1.0.0";

enum class Errc {
  InvalidArgument,
  Io,
  Parse,
  Empty,
  Internal,
};

// Every failure in the library surfaces as one of these; the code maps
// onto the C API status values.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

// FNV-1a, 64-bit. Used for the content checksums in run manifests and
// for pinning bundled data files.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view bytes);

}  // namespace echodetect
