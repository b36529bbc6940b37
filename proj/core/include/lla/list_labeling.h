#ifndef LLA_LIST_LABELING_H_
#define LLA_LIST_LABELING_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "lla/key.h"
#include "lla/labeled_array.h"

namespace lla {

struct LabeledKey {
  Key key;
  std::size_t label = 0;  // 1-based
};

// A list-labeling array used as a black box.
//
// insert() places a key after every stored key that compares <= it (so
// duplicates go after their equals) and before every greater key. It returns
// the number of already-present elements whose label changed; the new
// element's own placement is not included.
//
// init() discards the current contents and lays out a sorted run of keys in
// O(k) work. It returns the number of keys placed.
class ListLabeling {
 public:
  virtual ~ListLabeling() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t insert(Key key) = 0;
  virtual std::size_t init(std::span<const Key> sorted_keys) = 0;
  virtual const LabeledArray& array() const = 0;

  std::size_t slot_count() const { return array().size(); }
  std::size_t count() const { return array().count(); }
  // Elements the structure is meant to hold at density 1/2.
  std::size_t capacity() const { return slot_count() / 2; }
  double density() const;

  std::vector<LabeledKey> labels() const;
};

// Builds a black box with exactly `slot_count` slots.
using LlaFactory = std::function<std::unique_ptr<ListLabeling>(std::size_t slot_count)>;

}  // namespace lla

#endif  // LLA_LIST_LABELING_H_
