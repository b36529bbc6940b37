#include "lla/labeled_array.h"

#include <bit>

namespace lla {

LabeledArray::LabeledArray(std::size_t slot_count)
    : keys_(slot_count), bits_((slot_count + 63) / 64, 0) {}

void LabeledArray::place(std::size_t slot, Key key) {
  if (!occupied(slot)) ++count_;
  keys_[slot] = key;
  bits_[slot >> 6] |= std::uint64_t{1} << (slot & 63);
}

void LabeledArray::clear(std::size_t slot) {
  if (occupied(slot)) --count_;
  bits_[slot >> 6] &= ~(std::uint64_t{1} << (slot & 63));
}

void LabeledArray::clear_range(std::size_t begin, std::size_t end) {
  for (std::size_t s = next_occupied(begin); s != kNoSlot && s < end; s = next_occupied(s + 1)) {
    clear(s);
  }
}

std::size_t LabeledArray::next_occupied(std::size_t from) const {
  if (from >= keys_.size()) return kNoSlot;
  std::size_t word = from >> 6;
  std::uint64_t bits = bits_[word] & (~std::uint64_t{0} << (from & 63));
  while (bits == 0) {
    if (++word == bits_.size()) return kNoSlot;
    bits = bits_[word];
  }
  return (word << 6) + static_cast<std::size_t>(std::countr_zero(bits));
}

std::size_t LabeledArray::prev_occupied(std::size_t upto) const {
  if (upto == kNoSlot || keys_.empty()) return kNoSlot;
  if (upto >= keys_.size()) upto = keys_.size() - 1;
  std::size_t word = upto >> 6;
  const unsigned shift = 63 - static_cast<unsigned>(upto & 63);
  std::uint64_t bits = (bits_[word] << shift) >> shift;
  while (bits == 0) {
    if (word == 0) return kNoSlot;
    bits = bits_[--word];
  }
  return (word << 6) + 63 - static_cast<std::size_t>(std::countl_zero(bits));
}

std::size_t LabeledArray::count_range(std::size_t begin, std::size_t end) const {
  std::size_t n = 0;
  for (std::size_t s = next_occupied(begin); s != kNoSlot && s < end; s = next_occupied(s + 1)) {
    ++n;
  }
  return n;
}

bool verify_sorted(const LabeledArray& array) {
  bool sorted = true;
  const Key* previous = nullptr;
  array.for_each([&](std::size_t, const Key& key) {
    if (previous != nullptr && key < *previous) sorted = false;
    previous = &key;
  });
  return sorted;
}

}  // namespace lla
