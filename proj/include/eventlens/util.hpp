#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eventlens {

std::string to_lower(std::string s);

// Case-insensitive substring test.
bool contains_ci(const std::string& haystack, const std::string& needle);

// Shortest round-trippable decimal form, stable across runs.
std::string format_double(double v);

// FNV-1a, used for corpus digests.
struct Fnv1a {
  std::uint64_t state = 1469598103934665603ull;
  void feed(const void* data, size_t len);
  void feed(const std::string& s) { feed(s.data(), s.size()); }
  void feed(std::int64_t v);
  void feed(double v);
  std::string hex() const;
};

// Deterministic seed mixing for per-task RNG streams (splitmix64 step).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

std::vector<std::string> split(const std::string& line, char sep);

}  // namespace eventlens
