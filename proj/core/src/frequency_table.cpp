#include "tailmix/frequency_table.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace tailmix {

FrequencyTable FrequencyTable::from_pairs(std::vector<FrequencyEntry> pairs) {
  std::map<std::int64_t, std::int64_t> merged;
  std::int64_t zeros = 0;
  for (const auto& [value, count] : pairs) {
    if (value < 0) throw std::invalid_argument("frequency table: negative value");
    if (count < 0) throw std::invalid_argument("frequency table: negative count");
    if (count == 0) continue;
    if (value == 0) {
      zeros += count;
    } else {
      merged[value] += count;
    }
  }
  FrequencyTable table;
  table.zero_count_ = zeros;
  table.entries_.reserve(merged.size());
  for (const auto& [value, count] : merged) {
    table.entries_.push_back({value, count});
    table.n_ += count;
  }
  table.rebuild_suffix_counts();
  return table;
}

FrequencyTable FrequencyTable::from_values(const std::vector<std::int64_t>& values) {
  std::vector<FrequencyEntry> pairs;
  pairs.reserve(values.size());
  for (const auto v : values) pairs.push_back({v, 1});
  return from_pairs(std::move(pairs));
}

std::int64_t FrequencyTable::max_value() const {
  if (entries_.empty()) throw std::logic_error("frequency table: empty");
  return entries_.back().value;
}

std::int64_t FrequencyTable::min_value() const {
  if (entries_.empty()) throw std::logic_error("frequency table: empty");
  return entries_.front().value;
}

std::int64_t FrequencyTable::count_exceeding(std::int64_t u) const {
  const auto it = std::upper_bound(
      entries_.begin(), entries_.end(), u,
      [](std::int64_t lhs, const FrequencyEntry& e) { return lhs < e.value; });
  const auto idx = static_cast<std::size_t>(it - entries_.begin());
  return idx < suffix_counts_.size() ? suffix_counts_[idx] : 0;
}

void FrequencyTable::rebuild_suffix_counts() {
  suffix_counts_.assign(entries_.size(), 0);
  std::int64_t acc = 0;
  for (std::size_t i = entries_.size(); i-- > 0;) {
    acc += entries_[i].count;
    suffix_counts_[i] = acc;
  }
}

}  // namespace tailmix
