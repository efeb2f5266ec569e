#pragma once

#include <cstdint>
#include <vector>

namespace tailmix {

struct FrequencyEntry {
  std::int64_t value = 0;
  std::int64_t count = 0;
};

/// Compressed sample: strictly increasing positive values with
/// multiplicities. Zeros are counted separately and excluded from n.
class FrequencyTable {
 public:
  FrequencyTable() = default;

  /// Builds from arbitrary (value, count) pairs: merges duplicates, sorts,
  /// routes value 0 into the zero bucket, drops zero counts.
  static FrequencyTable from_pairs(std::vector<FrequencyEntry> pairs);

  /// Tabulates raw observations (nonnegative integers).
  static FrequencyTable from_values(const std::vector<std::int64_t>& values);

  const std::vector<FrequencyEntry>& entries() const { return entries_; }
  std::int64_t zero_count() const { return zero_count_; }
  std::int64_t n() const { return n_; }  // total count excluding zeros
  bool empty() const { return entries_.empty(); }
  std::int64_t max_value() const;
  std::int64_t min_value() const;
  std::size_t unique_values() const { return entries_.size(); }

  /// Number of observations strictly exceeding u (n_u).
  std::int64_t count_exceeding(std::int64_t u) const;
  std::int64_t count_at_most(std::int64_t u) const { return n_ - count_exceeding(u); }

  bool operator==(const FrequencyTable& other) const {
    return zero_count_ == other.zero_count_ && n_ == other.n_ &&
           entries_.size() == other.entries_.size() &&
           std::equal(entries_.begin(), entries_.end(), other.entries_.begin(),
                      [](const FrequencyEntry& a, const FrequencyEntry& b) {
                        return a.value == b.value && a.count == b.count;
                      });
  }

 private:
  void rebuild_suffix_counts();

  std::vector<FrequencyEntry> entries_;
  std::vector<std::int64_t> suffix_counts_;
  std::int64_t zero_count_ = 0;
  std::int64_t n_ = 0;
};

}  // namespace tailmix
