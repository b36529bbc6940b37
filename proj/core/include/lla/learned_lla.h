#ifndef LLA_LEARNED_LLA_H_
#define LLA_LEARNED_LLA_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lla/key.h"
#include "lla/list_labeling.h"
#include "lla/movement_ledger.h"

namespace lla {

// Slots per assigned rank.
inline constexpr std::size_t kSlotsPerRank = 6;

// Node of the implicit complete binary tree over ranks. Heights count up from
// the leaves; `index` is 0-based within a height. Node (h, i) owns ranks
// [i*2^h + 1, (i+1)*2^h] and slots [6*i*2^h + 1, 6*(i+1)*2^h] (1-based).
struct RankNode {
  std::size_t height = 0;
  std::size_t index = 0;

  std::size_t rank_count() const { return std::size_t{1} << height; }
  std::size_t first_rank() const { return index * rank_count() + 1; }
  std::size_t last_rank() const { return (index + 1) * rank_count(); }
  std::size_t slot_count() const { return kSlotsPerRank * rank_count(); }
  std::size_t first_slot() const { return kSlotsPerRank * index * rank_count() + 1; }
  std::size_t first_leaf() const { return index * rank_count(); }  // 0-based
  RankNode parent() const { return {height + 1, index / 2}; }

  friend bool operator==(const RankNode&, const RankNode&) = default;
};

// Choice between the predecessor's actual (i_p), the
// successor's actual (i_s), and the actual owning the predicted rank (i_x).
// Any totally ordered actual identifiers work.
constexpr std::size_t choose_actual(std::size_t pred, std::size_t succ, std::size_t predicted) {
  if (pred > predicted) return pred;
  if (succ < predicted) return succ;
  return predicted;
}

// Reported after every merge, once the merged actual is in place.
struct MergeEvent {
  RankNode node;
  std::span<const Key> keys;  // contents of the merged actual, sorted
  // Elements whose global label differs from the one they had before the
  // triggering insert (the new element itself excluded).
  std::size_t movements = 0;
};

// Learning-augmented list labeling over black-box LLAs.
//
// Actuals are identified by the 0-based index of their first leaf, which
// orders them the same way as their position in the partition.
class LearnedLla {
 public:
  enum class Routing {
    kPredicted,    // route by predicted rank
    kFirstActual,  // every insert goes to the first actual (baseline mode)
  };

  struct Options {
    bool first_placement_excluded = true;
    // Extra inserts allowed beyond the capacity (e.g. a sentinel).
    std::size_t reserve = 0;
    Routing routing = Routing::kPredicted;
  };

  struct Neighbors {
    std::size_t pred = 0;
    std::size_t succ = 0;
  };

  // `capacity` >= 1 is rounded up to a power of two for the tree; predicted
  // ranks are clamped to [1, capacity].
  LearnedLla(std::size_t capacity, LlaFactory factory, Options options);
  LearnedLla(std::size_t capacity, LlaFactory factory)
      : LearnedLla(capacity, std::move(factory), Options{}) {}

  // Inserts `key` routed by `predicted_rank`; returns the movements charged.
  // Throws CapacityError once capacity + reserve elements are stored.
  std::size_t insert(Key key, std::int64_t predicted_rank);

  Neighbors find_neighbors(Key key) const;
  // Actual chosen for `key` with the (unclamped) prediction.
  std::size_t route(Key key, std::int64_t predicted_rank) const;
  std::size_t actual_for_rank(std::size_t rank) const { return owner_[rank - 1]; }
  std::int64_t clamp_rank(std::int64_t predicted_rank) const;

  std::vector<LabeledKey> global_labels() const;
  // Visits (key, 1-based global label) in label order.
  void for_each_label(const std::function<void(const Key&, std::size_t)>& visit) const;

  void set_merge_observer(std::function<void(const MergeEvent&)> observer) {
    observer_ = std::move(observer);
  }

  const MovementLedger& ledger() const { return ledger_; }
  // Restarts cost accounting (used after a sentinel insert).
  void reset_ledger();

  std::size_t capacity() const { return capacity_; }
  std::size_t rank_count() const { return leaves_; }
  std::size_t slot_count() const { return kSlotsPerRank * leaves_; }
  std::size_t size() const { return size_; }
  std::size_t merge_count() const { return merges_; }
  std::size_t actual_count() const { return actual_count_; }

  // Actual nodes in partition order.
  std::vector<RankNode> actuals() const;
  RankNode node_of(std::size_t actual) const { return actuals_[actual].node; }
  // Elements stored in an actual (0 when its black box was never created).
  std::size_t actual_size(std::size_t actual) const;
  const ListLabeling* black_box(std::size_t actual) const { return actuals_[actual].box.get(); }

  // Checks the partition, ordering, sizing and density invariants; returns
  // an empty string when they hold, otherwise a description of the first
  // violation. O(n).
  std::string check_invariants() const;

 private:
  struct Actual {
    RankNode node;
    std::unique_ptr<ListLabeling> box;
    Key min{};
    Key max{};
    bool live = false;
  };

  std::size_t first_actual() const { return owner_.front(); }
  std::size_t last_actual() const { return owner_.back(); }
  static constexpr std::size_t kNoActual = static_cast<std::size_t>(-1);
  static constexpr std::size_t kFreshLabel = 0;

  // Both return the movements of the merged actual relative to the labels
  // held before the current insert.
  std::size_t merge_above(std::size_t actual);
  std::size_t merge(RankNode parent);

  std::size_t capacity_;
  std::size_t leaves_;
  LlaFactory factory_;
  Options options_;
  MovementLedger ledger_;

  std::vector<Actual> actuals_;
  std::vector<std::size_t> owner_;
  // (min raw, actual) for every nonempty actual.
  std::set<std::pair<std::int64_t, std::size_t>> boundary_index_;

  std::size_t size_ = 0;
  std::size_t merges_ = 0;
  std::size_t actual_count_ = 0;
  std::function<void(const MergeEvent&)> observer_;

  std::vector<Key> merge_keys_;
  std::vector<std::size_t> merge_labels_;
  // Pre-insert labels of the actual being overflowed (kFreshLabel marks the
  // new key), in key order, while its merges run.
  std::size_t carry_actual_ = kNoActual;
  std::vector<std::size_t> carry_labels_;
};

struct ReplayStats {
  std::uint64_t movements = 0;
  std::uint64_t inserts = 0;
  std::size_t merges = 0;

  double amortized_cost() const {
    return inserts == 0 ? 0.0 : static_cast<double>(movements) / static_cast<double>(inserts);
  }
};

// Inserts `keys` in order into a fresh learned LLA of capacity keys.size()
// with the given predictions (ignored under Routing::kFirstActual). With
// `sentinel`, kMinKey is inserted first at predicted rank 1 and excluded from
// the statistics.
ReplayStats replay(std::span<const Key> keys, std::span<const std::int64_t> predicted,
                   const LlaFactory& factory, LearnedLla::Options options, bool sentinel,
                   std::function<void(const MergeEvent&)> observer = {});

}  // namespace lla

#endif  // LLA_LEARNED_LLA_H_
