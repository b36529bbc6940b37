#ifndef LLA_LABELED_ARRAY_H_
#define LLA_LABELED_ARRAY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lla/key.h"

namespace lla {

inline constexpr std::size_t kNoSlot = static_cast<std::size_t>(-1);

// Fixed-size slot array. A slot's index is the label of the key it holds.
class LabeledArray {
 public:
  LabeledArray() = default;
  explicit LabeledArray(std::size_t slot_count);

  std::size_t size() const { return keys_.size(); }
  std::size_t count() const { return count_; }

  bool occupied(std::size_t slot) const {
    return (bits_[slot >> 6] >> (slot & 63)) & 1U;
  }
  const Key& at(std::size_t slot) const { return keys_[slot]; }
  std::optional<Key> get(std::size_t slot) const {
    return occupied(slot) ? std::optional<Key>(keys_[slot]) : std::nullopt;
  }

  void place(std::size_t slot, Key key);
  void clear(std::size_t slot);
  void clear_range(std::size_t begin, std::size_t end);

  // First occupied slot in [from, size()), or kNoSlot.
  std::size_t next_occupied(std::size_t from) const;
  // Last occupied slot in [0, upto], or kNoSlot. `upto` may be kNoSlot.
  std::size_t prev_occupied(std::size_t upto) const;

  std::size_t count_range(std::size_t begin, std::size_t end) const;

  template <typename Visitor>
  void for_each(Visitor&& visit) const {
    for (std::size_t s = next_occupied(0); s != kNoSlot; s = next_occupied(s + 1)) {
      visit(s, keys_[s]);
    }
  }

 private:
  std::vector<Key> keys_;
  std::vector<std::uint64_t> bits_;
  std::size_t count_ = 0;
};

// True iff the occupied slots, read left to right, are non-decreasing.
bool verify_sorted(const LabeledArray& array);

}  // namespace lla

#endif  // LLA_LABELED_ARRAY_H_
