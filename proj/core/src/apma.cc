#include "lla/apma.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lla {

InsertHistogram::InsertHistogram(std::size_t leaves, std::size_t period)
    : counts(leaves, 0), decay_period(std::max<std::size_t>(1, period)) {}

void InsertHistogram::record(std::size_t leaf) {
  ++counts[leaf];
  if (++since_decay >= decay_period) {
    for (auto& c : counts) c /= 2;
    since_decay = 0;
  }
}

void InsertHistogram::reset() {
  std::fill(counts.begin(), counts.end(), 0);
  since_decay = 0;
}

std::uint64_t InsertHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

InsertHistogram histogram_decay(InsertHistogram histogram) {
  for (auto& c : histogram.counts) c /= 2;
  return histogram;
}

std::vector<std::size_t> weighted_free_slots(std::span<const std::size_t> leaf_sizes,
                                             std::span<const std::uint64_t> weights,
                                             std::size_t elements,
                                             std::span<const std::size_t> caps) {
  const std::size_t n = leaf_sizes.size();
  if (weights.size() != n || caps.size() != n) {
    throw std::invalid_argument("weighted_free_slots: size mismatch");
  }
  const std::size_t total_slots = std::accumulate(leaf_sizes.begin(), leaf_sizes.end(),
                                                  std::size_t{0});
  if (elements > total_slots) throw std::invalid_argument("more elements than slots");
  const unsigned __int128 weight_sum =
      std::accumulate(weights.begin(), weights.end(), static_cast<unsigned __int128>(0));
  if (weight_sum == 0) throw std::invalid_argument("weights must not all be zero");

  const std::size_t free_total = total_slots - elements;
  std::vector<std::size_t> free(n);
  std::size_t handed = 0;
  for (std::size_t j = 0; j < n; ++j) {
    free[j] = static_cast<std::size_t>(free_total * static_cast<unsigned __int128>(weights[j]) /
                                       weight_sum);
    handed += free[j];
  }
  for (std::size_t j = 0; handed < free_total; j = (j + 1) % n, ++handed) ++free[j];

  // Element counts implied by the free shares, clamped to the caps.
  std::vector<std::size_t> cap(caps.begin(), caps.end());
  if (std::accumulate(cap.begin(), cap.end(), std::size_t{0}) < elements) {
    cap.assign(leaf_sizes.begin(), leaf_sizes.end());
  }
  std::vector<std::size_t> held(n);
  std::size_t placed = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t want = free[j] >= leaf_sizes[j] ? 0 : leaf_sizes[j] - free[j];
    held[j] = std::min(want, cap[j]);
    placed += held[j];
  }

  if (placed != elements) {
    // Lightest leaves absorb surplus elements first; heaviest shed first.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return weights[a] < weights[b]; });
    if (placed < elements) {
      for (std::size_t j : order) {
        const std::size_t add = std::min(elements - placed, cap[j] - held[j]);
        held[j] += add;
        placed += add;
      }
    } else {
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t drop = std::min(placed - elements, held[*it]);
        held[*it] -= drop;
        placed -= drop;
      }
    }
  }

  for (std::size_t j = 0; j < n; ++j) free[j] = leaf_sizes[j] - held[j];
  return free;
}

AdaptivePackedMemoryArray::AdaptivePackedMemoryArray(std::size_t slot_count,
                                                     PmaThresholds thresholds,
                                                     std::size_t decay_period)
    : PackedMemoryArray(slot_count, thresholds) {
  histogram_ = InsertHistogram(leaf_count(), decay_period == 0 ? 4 * leaf_size() : decay_period);
}

void AdaptivePackedMemoryArray::on_insert(std::size_t leaf) { histogram_.record(leaf); }

void AdaptivePackedMemoryArray::on_init() { histogram_.reset(); }

void AdaptivePackedMemoryArray::layout(PmaNode node, std::size_t count,
                                       std::vector<std::size_t>& offsets) const {
  const std::size_t first = node.index << (depth() - node.depth);
  const std::size_t last = (node.index + 1) << (depth() - node.depth);
  const auto begin = histogram_.counts.begin();
  const bool uniform =
      last - first == 1 ||
      std::all_of(begin + static_cast<std::ptrdiff_t>(first),
                  begin + static_cast<std::ptrdiff_t>(last),
                  [&](std::uint64_t c) { return c == histogram_.counts[first]; });
  if (uniform) {
    PackedMemoryArray::layout(node, count, offsets);
    return;
  }

  const std::size_t leaves = last - first;
  sizes_.resize(leaves);
  weights_.resize(leaves);
  caps_.resize(leaves);
  const double leaf_upper = thresholds().leaf_upper;
  for (std::size_t j = 0; j < leaves; ++j) {
    const std::size_t leaf = first + j;
    sizes_[j] = leaf_begin(leaf + 1) - leaf_begin(leaf);
    weights_[j] = 1 + histogram_.counts[leaf];
    // Leave room for at least one insert before the leaf goes over threshold.
    const auto limit = static_cast<std::size_t>(std::floor(leaf_upper * sizes_[j]));
    caps_[j] = limit > 0 ? limit - 1 : 0;
  }
  const std::vector<std::size_t> free = weighted_free_slots(sizes_, weights_, count, caps_);

  offsets.resize(count);
  const std::size_t base = node_begin(node);
  std::size_t i = 0;
  for (std::size_t j = 0; j < leaves; ++j) {
    const std::size_t held = sizes_[j] - free[j];
    even_offsets(held, sizes_[j], leaf_offsets_);
    const std::size_t leaf_base = leaf_begin(first + j) - base;
    for (std::size_t k = 0; k < held; ++k) offsets[i++] = leaf_base + leaf_offsets_[k];
  }
}

LlaFactory apma_factory(PmaThresholds thresholds) {
  thresholds.validate();
  return [thresholds](std::size_t slot_count) -> std::unique_ptr<ListLabeling> {
    return std::make_unique<AdaptivePackedMemoryArray>(slot_count, thresholds);
  };
}

}  // namespace lla
