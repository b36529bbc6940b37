#ifndef LLA_MOVEMENT_LEDGER_H_
#define LLA_MOVEMENT_LEDGER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "lla/key.h"

namespace lla {

// One label change. `old_label` is empty for an element's first placement.
struct Relabel {
  Key key;
  std::optional<std::size_t> old_label;
  std::size_t new_label = 0;
};

// Counts element movements. With `first_placement_excluded`, giving a newly
// inserted element its first label is free; otherwise it costs one movement.
struct MovementLedger {
  std::uint64_t total_movements = 0;
  std::uint64_t total_inserts = 0;
  bool first_placement_excluded = true;

  // Adds the relabels in `moved`; entries whose label did not change are
  // ignored.
  void record(std::span<const Relabel> moved);

  void add_relabels(std::uint64_t count) { total_movements += count; }
  void add_first_placements(std::uint64_t count) {
    if (!first_placement_excluded) total_movements += count;
  }
  void count_insert() { ++total_inserts; }

  // total_movements / total_inserts; throws UndefinedCostError when no
  // insert has been recorded.
  double amortized_cost() const;
};

}  // namespace lla

#endif  // LLA_MOVEMENT_LEDGER_H_
