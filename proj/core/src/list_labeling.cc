#include "lla/list_labeling.h"

namespace lla {

double ListLabeling::density() const {
  const std::size_t slots = slot_count();
  return slots == 0 ? 0.0 : static_cast<double>(count()) / static_cast<double>(slots);
}

std::vector<LabeledKey> ListLabeling::labels() const {
  std::vector<LabeledKey> out;
  out.reserve(count());
  array().for_each([&](std::size_t slot, const Key& key) { out.push_back({key, slot + 1}); });
  return out;
}

}  // namespace lla
