#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

namespace ortglab {

// splitmix64-seeded xoshiro256** generator. Used instead of <random>
// distributions so seeded output is identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal via Box-Muller (no cached second variate).
  double normal();

 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t x);

// Seed for sub-task `index` of a run seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) { return seed ^ index; }

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// Strict parse of the whole string; returns false on any trailing junk.
bool parse_double(std::string_view text, double& out);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 14695981039346656037ull);
std::string hex64(std::uint64_t v);

// Writes via a temporary sibling file and rename, so readers never see a
// partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

// 0 means "machine parallelism".
std::size_t resolve_threads(std::size_t requested);

// Runs fn(i) for i in [0, n). Work is claimed dynamically; callers write
// results into per-index slots so output never depends on scheduling.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

std::string iso8601_now();

}  // namespace ortglab
