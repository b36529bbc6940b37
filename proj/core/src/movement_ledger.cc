#include "lla/movement_ledger.h"

#include "lla/errors.h"

namespace lla {

void MovementLedger::record(std::span<const Relabel> moved) {
  for (const Relabel& r : moved) {
    if (!r.old_label) {
      add_first_placements(1);
    } else if (*r.old_label != r.new_label) {
      ++total_movements;
    }
  }
}

double MovementLedger::amortized_cost() const {
  if (total_inserts == 0) {
    throw UndefinedCostError("amortized cost is undefined before the first insert");
  }
  return static_cast<double>(total_movements) / static_cast<double>(total_inserts);
}

}  // namespace lla
