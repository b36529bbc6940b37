#ifndef LLA_PMA_H_
#define LLA_PMA_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lla/key.h"
#include "lla/labeled_array.h"
#include "lla/list_labeling.h"

namespace lla {

// Density thresholds of the implicit tree. Upper thresholds grow linearly
// from the root (tau0) to the leaves (tau_d); lower thresholds shrink from
// rho0 to rho_d. Requires 0 < rho_d < rho0 < tau0 < tau_d < 1.
struct PmaThresholds {
  double root_upper = 0.5;
  double leaf_upper = 0.9;
  double root_lower = 0.2;
  double leaf_lower = 0.1;

  // Throws std::invalid_argument when the ordering above is violated.
  void validate() const;
};

// tau0 + (tau_d - tau0) * depth / max_depth. A tree of depth 0 is a single
// leaf and gets the leaf threshold. Throws std::invalid_argument when
// depth > max_depth.
double tau_at_depth(const PmaThresholds& t, std::size_t depth, std::size_t max_depth);
// rho0 - (rho0 - rho_d) * depth / max_depth, same conventions.
double rho_at_depth(const PmaThresholds& t, std::size_t depth, std::size_t max_depth);

// Offsets for `count` elements spread evenly over `slots` slots. Every
// element starts a block of floor(slots/count) slots; the slots/count
// remainder widens the rightmost blocks by one, so the first element is at
// offset 0 and gaps differ by at most one. Repeated rebalances of a region
// keep most elements where they were, which is what makes them cheap.
void even_offsets(std::size_t count, std::size_t slots, std::vector<std::size_t>& offsets);

// A node of the implicit tree: depth 0 is the root, depth() the leaves.
struct PmaNode {
  std::size_t depth = 0;
  std::size_t index = 0;

  friend bool operator==(const PmaNode&, const PmaNode&) = default;
};

// Classic packed-memory array (insert-only).
//
// The slot array is tiled by 2^depth leaf ranges. Leaf i covers slots
// [floor(i*m/L), floor((i+1)*m/L)), so every slot count is supported; sizes
// produced by rounded() make all leaves equal.
//
// Insert finds the leaf of the predecessor, walks up to the first node that
// stays within its upper threshold with the new element counted, and spreads
// that node's elements (new one included) evenly. The root is the exception:
// it is rebalanced whenever a free slot exists, so callers that manage their
// own density (the learned structure merges at 1/2) can overshoot tau0
// transiently. A full array raises CapacityError.
class PackedMemoryArray : public ListLabeling {
 public:
  // Exactly `slot_count` slots (>= 1), leaves of roughly the next power of
  // two >= ceil(log2 slot_count).
  explicit PackedMemoryArray(std::size_t slot_count, PmaThresholds thresholds = {});

  // Leaf size = next power of two >= ceil(log2 slot_count) (at least 2);
  // slot count rounded up to leaf_size * 2^depth.
  static PackedMemoryArray rounded(std::size_t slot_count, PmaThresholds thresholds = {});

  std::string_view name() const override { return "pma"; }
  std::size_t insert(Key key) override;
  std::size_t init(std::span<const Key> sorted_keys) override;
  const LabeledArray& array() const override { return array_; }

  const PmaThresholds& thresholds() const { return thresholds_; }
  std::size_t depth() const { return depth_; }
  std::size_t leaf_count() const { return leaf_counts_.size(); }
  std::size_t leaf_begin(std::size_t leaf) const;
  std::size_t leaf_of(std::size_t slot) const;
  // Nominal leaf size (exact when the slot count is a multiple of it).
  std::size_t leaf_size() const { return array_.size() / leaf_count(); }

  PmaNode root() const { return {0, 0}; }
  PmaNode leaf_node(std::size_t leaf) const { return {depth_, leaf}; }
  std::size_t node_begin(PmaNode node) const;
  std::size_t node_end(PmaNode node) const;
  std::size_t node_size(PmaNode node) const { return node_end(node) - node_begin(node); }
  std::size_t node_count(PmaNode node) const;
  double density_of(PmaNode node) const;
  double upper_threshold(PmaNode node) const;
  double lower_threshold(PmaNode node) const;

  // Spreads the node's elements evenly (or by the subclass layout); returns
  // the number of elements whose slot changed.
  std::size_t rebalance(PmaNode node);

  // Slot of the last element <= key, or kNoSlot.
  std::size_t predecessor_slot(Key key) const;

 protected:
  // Writes offsets (relative to node_begin) for `count` elements of `node`.
  virtual void layout(PmaNode node, std::size_t count, std::vector<std::size_t>& offsets) const;
  virtual void on_insert(std::size_t /*leaf*/) {}
  virtual void on_init() {}

  std::size_t leaf_element_count(std::size_t leaf) const { return leaf_counts_[leaf]; }

 private:
  PackedMemoryArray(std::size_t slot_count, std::size_t leaf_count, PmaThresholds thresholds);

  std::size_t redistribute(PmaNode node, const Key* incoming);

  LabeledArray array_;
  PmaThresholds thresholds_;
  std::size_t depth_ = 0;
  std::vector<std::uint32_t> leaf_counts_;

  // Scratch reused across rebalances.
  std::vector<Key> keys_;
  std::vector<std::size_t> old_slots_;
  std::vector<std::size_t> offsets_;
};

LlaFactory pma_factory(PmaThresholds thresholds = {});

}  // namespace lla

#endif  // LLA_PMA_H_
