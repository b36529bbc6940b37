#include "lla/pma.h"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "lla/errors.h"

namespace lla {
namespace {

std::size_t ceil_log2(std::size_t x) {
  return x <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(x - 1));
}

// Target leaf size for an array of `slots` slots.
std::size_t target_leaf_size(std::size_t slots) {
  return std::bit_ceil(std::max<std::size_t>(1, ceil_log2(slots)));
}

// Largest power of two L with slots / L >= target (at least 1).
std::size_t exact_leaf_count(std::size_t slots) {
  const std::size_t target = target_leaf_size(slots);
  std::size_t leaves = 1;
  while (slots / (leaves * 2) >= target) leaves *= 2;
  return leaves;
}

}  // namespace

void PmaThresholds::validate() const {
  if (!(0.0 < leaf_lower && leaf_lower < root_lower && root_lower < root_upper &&
        root_upper < leaf_upper && leaf_upper < 1.0)) {
    throw std::invalid_argument("PMA thresholds must satisfy 0 < rho_d < rho0 < tau0 < tau_d < 1");
  }
}

double tau_at_depth(const PmaThresholds& t, std::size_t depth, std::size_t max_depth) {
  if (depth > max_depth) throw std::invalid_argument("depth exceeds tree depth");
  if (max_depth == 0) return t.leaf_upper;
  return t.root_upper + (t.leaf_upper - t.root_upper) * static_cast<double>(depth) /
                            static_cast<double>(max_depth);
}

double rho_at_depth(const PmaThresholds& t, std::size_t depth, std::size_t max_depth) {
  if (depth > max_depth) throw std::invalid_argument("depth exceeds tree depth");
  if (max_depth == 0) return t.leaf_lower;
  return t.root_lower - (t.root_lower - t.leaf_lower) * static_cast<double>(depth) /
                            static_cast<double>(max_depth);
}

void even_offsets(std::size_t count, std::size_t slots, std::vector<std::size_t>& offsets) {
  offsets.resize(count);
  if (count == 0) return;
  const std::size_t stride = slots / count;
  const std::size_t wide_from = count - slots % count;
  for (std::size_t i = 0; i < count; ++i) {
    offsets[i] = i * stride + (i > wide_from ? i - wide_from : 0);
  }
}

PackedMemoryArray::PackedMemoryArray(std::size_t slot_count, PmaThresholds thresholds)
    : PackedMemoryArray(slot_count, exact_leaf_count(std::max<std::size_t>(1, slot_count)),
                        thresholds) {}

PackedMemoryArray::PackedMemoryArray(std::size_t slot_count, std::size_t leaf_count,
                                     PmaThresholds thresholds)
    : array_(slot_count),
      thresholds_(thresholds),
      depth_(static_cast<std::size_t>(std::countr_zero(leaf_count))),
      leaf_counts_(leaf_count, 0) {
  if (slot_count == 0) throw std::invalid_argument("PMA needs at least one slot");
  thresholds_.validate();
}

PackedMemoryArray PackedMemoryArray::rounded(std::size_t slot_count, PmaThresholds thresholds) {
  if (slot_count < 2) throw std::invalid_argument("PMA needs at least two slots");
  const std::size_t leaf = std::max<std::size_t>(2, target_leaf_size(slot_count));
  const std::size_t leaves = std::bit_ceil((slot_count + leaf - 1) / leaf);
  return PackedMemoryArray(leaf * leaves, leaves, thresholds);
}

std::size_t PackedMemoryArray::leaf_begin(std::size_t leaf) const {
  return leaf * array_.size() / leaf_count();
}

std::size_t PackedMemoryArray::leaf_of(std::size_t slot) const {
  return ((slot + 1) * leaf_count() - 1) / array_.size();
}

std::size_t PackedMemoryArray::node_begin(PmaNode node) const {
  return leaf_begin(node.index << (depth_ - node.depth));
}

std::size_t PackedMemoryArray::node_end(PmaNode node) const {
  return leaf_begin((node.index + 1) << (depth_ - node.depth));
}

std::size_t PackedMemoryArray::node_count(PmaNode node) const {
  const std::size_t first = node.index << (depth_ - node.depth);
  const std::size_t last = (node.index + 1) << (depth_ - node.depth);
  std::size_t n = 0;
  for (std::size_t leaf = first; leaf < last; ++leaf) n += leaf_counts_[leaf];
  return n;
}

double PackedMemoryArray::density_of(PmaNode node) const {
  const std::size_t size = node_size(node);
  return size == 0 ? 0.0 : static_cast<double>(node_count(node)) / static_cast<double>(size);
}

double PackedMemoryArray::upper_threshold(PmaNode node) const {
  return tau_at_depth(thresholds_, node.depth, depth_);
}

double PackedMemoryArray::lower_threshold(PmaNode node) const {
  return rho_at_depth(thresholds_, node.depth, depth_);
}

std::size_t PackedMemoryArray::predecessor_slot(Key key) const {
  std::size_t lo = 0;
  std::size_t hi = array_.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const std::size_t j = array_.next_occupied(mid);
    if (j == kNoSlot || j >= hi) {
      hi = mid;
    } else if (array_.at(j) <= key) {
      lo = j + 1;
    } else {
      hi = mid;
    }
  }
  return lo == 0 ? kNoSlot : array_.prev_occupied(lo - 1);
}

std::size_t PackedMemoryArray::insert(Key key) {
  if (array_.count() == array_.size()) {
    throw CapacityError("packed-memory array is full (" + std::to_string(array_.size()) +
                        " slots)");
  }
  const std::size_t pred = predecessor_slot(key);
  const std::size_t leaf = pred == kNoSlot ? 0 : leaf_of(pred);

  PmaNode node = leaf_node(leaf);
  std::size_t count = leaf_counts_[leaf];
  while (node.depth > 0) {
    const double limit = upper_threshold(node) * static_cast<double>(node_size(node));
    if (static_cast<double>(count + 1) <= limit + 1e-9) break;
    count += node_count({node.depth, node.index ^ 1});
    node = {node.depth - 1, node.index >> 1};
  }
  on_insert(leaf);
  return redistribute(node, &key);
}

std::size_t PackedMemoryArray::rebalance(PmaNode node) { return redistribute(node, nullptr); }

std::size_t PackedMemoryArray::redistribute(PmaNode node, const Key* incoming) {
  const std::size_t begin = node_begin(node);
  const std::size_t end = node_end(node);

  keys_.clear();
  old_slots_.clear();
  bool pending = incoming != nullptr;
  for (std::size_t s = array_.next_occupied(begin); s != kNoSlot && s < end;
       s = array_.next_occupied(s + 1)) {
    if (pending && *incoming < array_.at(s)) {
      keys_.push_back(*incoming);
      old_slots_.push_back(kNoSlot);
      pending = false;
    }
    keys_.push_back(array_.at(s));
    old_slots_.push_back(s);
  }
  if (pending) {
    keys_.push_back(*incoming);
    old_slots_.push_back(kNoSlot);
  }

  layout(node, keys_.size(), offsets_);

  array_.clear_range(begin, end);
  const std::size_t first_leaf = node.index << (depth_ - node.depth);
  const std::size_t last_leaf = (node.index + 1) << (depth_ - node.depth);
  std::fill(leaf_counts_.begin() + static_cast<std::ptrdiff_t>(first_leaf),
            leaf_counts_.begin() + static_cast<std::ptrdiff_t>(last_leaf), 0);

  std::size_t moved = 0;
  std::size_t leaf = first_leaf;
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    const std::size_t slot = begin + offsets_[i];
    array_.place(slot, keys_[i]);
    while (leaf + 1 < last_leaf && leaf_begin(leaf + 1) <= slot) ++leaf;
    ++leaf_counts_[leaf];
    if (old_slots_[i] != kNoSlot && old_slots_[i] != slot) ++moved;
  }
  return moved;
}

std::size_t PackedMemoryArray::init(std::span<const Key> sorted_keys) {
  if (sorted_keys.size() > array_.size()) {
    throw CapacityError("init of " + std::to_string(sorted_keys.size()) + " keys into " +
                        std::to_string(array_.size()) + " slots");
  }
  if (!std::is_sorted(sorted_keys.begin(), sorted_keys.end())) {
    throw std::invalid_argument("init requires sorted keys");
  }
  on_init();
  array_.clear_range(0, array_.size());
  std::fill(leaf_counts_.begin(), leaf_counts_.end(), 0);
  layout(root(), sorted_keys.size(), offsets_);
  std::size_t leaf = 0;
  for (std::size_t i = 0; i < sorted_keys.size(); ++i) {
    array_.place(offsets_[i], sorted_keys[i]);
    while (leaf + 1 < leaf_count() && leaf_begin(leaf + 1) <= offsets_[i]) ++leaf;
    ++leaf_counts_[leaf];
  }
  return sorted_keys.size();
}

void PackedMemoryArray::layout(PmaNode node, std::size_t count,
                               std::vector<std::size_t>& offsets) const {
  even_offsets(count, node_size(node), offsets);
}

LlaFactory pma_factory(PmaThresholds thresholds) {
  thresholds.validate();
  return [thresholds](std::size_t slot_count) -> std::unique_ptr<ListLabeling> {
    return std::make_unique<PackedMemoryArray>(slot_count, thresholds);
  };
}

}  // namespace lla
