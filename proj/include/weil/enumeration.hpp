#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weil/weil.hpp"

namespace weil {

enum class EnumerationMode { OrdinaryOnly, WithCandidates };

std::string_view to_string(EnumerationMode mode);
/// Accepts "ordinary-only" and "with-candidates".
EnumerationMode parse_mode(std::string_view text);

class UnsupportedDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CacheCorrupt : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxDimension = 3;
inline constexpr std::int64_t kMaxPrefixes = 100'000'000;
inline constexpr std::int64_t kMaxRecords = 1'000'000'000;

struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = -1;

  bool empty() const { return hi < lo; }
  std::int64_t size() const { return empty() ? 0 : hi - lo + 1; }
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

/// |a_i| <= floor(binom(2g, i) q^(i/2)) for i = 1..g.
std::vector<IntRange> coefficient_box(std::int64_t q, int g);

struct IsogenyClassRecord {
  WeilCoefficients coeffs;
  std::int64_t f1 = 0;
  std::int64_t fp1 = 0;
  bool ordinary = false;
  bool candidate_only = false;

  friend bool operator==(const IsogenyClassRecord&, const IsogenyClassRecord&) = default;
};

/// Throws UnsupportedDimension unless 1 <= g <= kMaxDimension.
void require_supported_dimension(int g);

/// Rough work estimate; throws CapExceeded when the prefix count or the
/// expected record count passes its cap.
void require_within_cap(std::int64_t q, int g);

/// Exact set of a_g completing the prefix (a_1..a_(g-1)) to a point of V_g.
/// That set is always an interval.
std::optional<IntRange> last_coefficient_range(const FieldParams& field, int g,
                                               std::span<const std::int64_t> prefix);

using RecordSink = std::function<void(const IsogenyClassRecord&)>;

/// Streams records with a_1 inside `a1_range`, lexicographic in (a_1..a_g).
/// The record passed to the sink is reused between calls.
void enumerate_range(std::int64_t q, int g, EnumerationMode mode, IntRange a1_range,
                     const RecordSink& sink);

/// Serial stream over the full coefficient box.
void for_each_record(std::int64_t q, int g, EnumerationMode mode, const RecordSink& sink);

/// Splits the a_1 box into `parts` contiguous, ordered sub-ranges.
std::vector<IntRange> a1_partitions(std::int64_t q, int g, int parts);

/// Runs `work(partition_index, range)` for each partition on up to `workers`
/// threads. Partitions are independent; callers merge in index order.
void run_partitioned(const std::vector<IntRange>& parts, int workers,
                     const std::function<void(std::size_t, IntRange)>& work);

std::vector<IsogenyClassRecord> enumerate_records(std::int64_t q, int g, EnumerationMode mode,
                                                  int workers = 1);

inline std::vector<IsogenyClassRecord> enumerate_ordinary(std::int64_t q, int g, int workers = 1) {
  return enumerate_records(q, g, EnumerationMode::OrdinaryOnly, workers);
}
inline std::vector<IsogenyClassRecord> enumerate_with_nonordinary(std::int64_t q, int g,
                                                                  int workers = 1) {
  return enumerate_records(q, g, EnumerationMode::WithCandidates, workers);
}

struct PartitionEntry {
  std::int64_t a1 = 0;
  std::int64_t count = 0;
  friend bool operator==(const PartitionEntry&, const PartitionEntry&) = default;
};

struct EnumerationManifest {
  std::int64_t q = 0;
  int g = 0;
  EnumerationMode mode = EnumerationMode::OrdinaryOnly;
  std::int64_t total = 0;
  std::vector<PartitionEntry> partitions;  // one per a_1 value present
  std::uint32_t checksum = 0;              // crc32 of header line and rows

  friend bool operator==(const EnumerationManifest&, const EnumerationManifest&) = default;
};

std::string cache_header(std::int64_t q, int g, EnumerationMode mode);
std::string cache_row(const IsogenyClassRecord& rec);

EnumerationManifest build_manifest(std::int64_t q, int g, EnumerationMode mode,
                                   const std::vector<IsogenyClassRecord>& records);

struct Census {
  EnumerationManifest manifest;
  std::vector<IsogenyClassRecord> records;
};

/// Writes the `weil-census v1` cache file; returns its manifest.
EnumerationManifest persist(const std::filesystem::path& path, std::int64_t q, int g,
                            EnumerationMode mode, const std::vector<IsogenyClassRecord>& records);

/// Reads and verifies a cache file. Any damage surfaces as CacheCorrupt.
Census load(const std::filesystem::path& path);

std::string hex32(std::uint32_t value);

}  // namespace weil
