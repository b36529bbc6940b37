#ifndef LLA_APMA_H_
#define LLA_APMA_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lla/pma.h"

namespace lla {

// Per-leaf counts of recent inserts. Every `decay_period` recorded inserts
// all counters are halved, so their sum never exceeds 2 * decay_period.
struct InsertHistogram {
  std::vector<std::uint64_t> counts;
  std::size_t decay_period = 1;
  std::size_t since_decay = 0;

  InsertHistogram() = default;
  InsertHistogram(std::size_t leaves, std::size_t decay_period);

  void record(std::size_t leaf);
  void reset();
  std::uint64_t total() const;
};

// Halves (floor) every counter.
InsertHistogram histogram_decay(InsertHistogram histogram);

// Splits the free slots of a run of leaves in proportion to `weights`
// (floor shares, remainder slots handed out from the left). Per-leaf element
// counts are then clamped to `caps` (falling back to the leaf size when the
// caps cannot hold `elements`); elements shed by clamping go to the lightest
// leaves first. Returns free slots per leaf.
std::vector<std::size_t> weighted_free_slots(std::span<const std::size_t> leaf_sizes,
                                             std::span<const std::uint64_t> weights,
                                             std::size_t elements,
                                             std::span<const std::size_t> caps);

// Adaptive PMA: the histogram predicts where future inserts land, and
// rebalances of internal nodes give each leaf free slots proportional to
// 1 + its histogram count. Leaf rebalances and uniform histograms fall back
// to the plain even layout, so placement changes but correctness does not.
class AdaptivePackedMemoryArray : public PackedMemoryArray {
 public:
  // decay_period == 0 selects the default of 4 * leaf_size().
  explicit AdaptivePackedMemoryArray(std::size_t slot_count, PmaThresholds thresholds = {},
                                     std::size_t decay_period = 0);

  std::string_view name() const override { return "apma"; }

  const InsertHistogram& histogram() const { return histogram_; }

  // Rebalance of `node` using the histogram weights.
  std::size_t weighted_rebalance(PmaNode node) { return rebalance(node); }

 protected:
  void layout(PmaNode node, std::size_t count, std::vector<std::size_t>& offsets) const override;
  void on_insert(std::size_t leaf) override;
  void on_init() override;

 private:
  InsertHistogram histogram_;
  mutable std::vector<std::size_t> sizes_;
  mutable std::vector<std::uint64_t> weights_;
  mutable std::vector<std::size_t> caps_;
  mutable std::vector<std::size_t> leaf_offsets_;
};

LlaFactory apma_factory(PmaThresholds thresholds = {});

}  // namespace lla

#endif  // LLA_APMA_H_
