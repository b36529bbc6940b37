#include "lla/learned_lla.h"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

#include "lla/errors.h"
#include "lla/labeled_array.h"

namespace lla {

LearnedLla::LearnedLla(std::size_t capacity, LlaFactory factory, Options options)
    : capacity_(capacity),
      leaves_(std::bit_ceil(std::max<std::size_t>(1, capacity))),
      factory_(std::move(factory)),
      options_(options) {
  if (capacity == 0) throw std::invalid_argument("learned LLA capacity must be >= 1");
  if (!factory_) throw std::invalid_argument("learned LLA needs a black-box factory");
  ledger_.first_placement_excluded = options_.first_placement_excluded;
  actuals_.resize(leaves_);
  owner_.resize(leaves_);
  for (std::size_t i = 0; i < leaves_; ++i) {
    actuals_[i].node = {0, i};
    actuals_[i].live = true;
    owner_[i] = i;
  }
  actual_count_ = leaves_;
}

std::int64_t LearnedLla::clamp_rank(std::int64_t predicted_rank) const {
  return std::clamp<std::int64_t>(predicted_rank, 1, static_cast<std::int64_t>(capacity_));
}

LearnedLla::Neighbors LearnedLla::find_neighbors(Key key) const {
  auto it = boundary_index_.upper_bound({key.raw, static_cast<std::size_t>(-1)});
  if (it == boundary_index_.begin()) {
    // No predecessor; the successor (if any) is the smallest stored key.
    return {first_actual(), it == boundary_index_.end() ? last_actual() : it->second};
  }
  const std::size_t pred = std::prev(it)->second;
  if (key < actuals_[pred].max) return {pred, pred};
  return {pred, it == boundary_index_.end() ? last_actual() : it->second};
}

std::size_t LearnedLla::route(Key key, std::int64_t predicted_rank) const {
  const std::size_t predicted = actual_for_rank(static_cast<std::size_t>(clamp_rank(predicted_rank)));
  const Neighbors n = find_neighbors(key);
  return choose_actual(n.pred, n.succ, predicted);
}

std::size_t LearnedLla::insert(Key key, std::int64_t predicted_rank) {
  if (size_ >= capacity_ + options_.reserve) {
    throw CapacityError("learned LLA already holds " + std::to_string(size_) + " elements");
  }
  const std::size_t target = options_.routing == Routing::kFirstActual
                                 ? first_actual()
                                 : route(key, predicted_rank);
  Actual& a = actuals_[target];
  if (!a.box) {
    a.box = factory_(a.node.slot_count());
    if (a.box->slot_count() != a.node.slot_count()) {
      throw std::invalid_argument("black-box factory ignored the requested slot count");
    }
  }

  const std::uint64_t before = ledger_.total_movements;
  const bool was_empty = a.box->count() == 0;
  // An insert that overflows the box is charged once, after the merges, for
  // every element whose label differs from its label before the insert.
  const bool will_merge = 2 * (a.box->count() + 1) > a.box->slot_count();
  carry_actual_ = kNoActual;
  if (will_merge) {
    carry_labels_.clear();
    const std::size_t offset = a.node.first_slot();
    a.box->array().for_each(
        [&](std::size_t slot, const Key&) { carry_labels_.push_back(offset + slot); });
    // The new key lands after every stored key <= it.
    const auto at = std::upper_bound(
        carry_labels_.begin(), carry_labels_.end(), key,
        [&](const Key& k, std::size_t label) { return k < a.box->array().at(label - offset); });
    carry_labels_.insert(at, kFreshLabel);
    carry_actual_ = target;
  }
  const std::size_t moved = a.box->insert(key);
  if (was_empty) {
    a.min = a.max = key;
    boundary_index_.insert({key.raw, target});
  } else {
    if (key < a.min) {
      boundary_index_.erase({a.min.raw, target});
      a.min = key;
      boundary_index_.insert({key.raw, target});
    }
    if (!(key < a.max)) a.max = key;
  }
  ++size_;
  ledger_.count_insert();
  ledger_.add_first_placements(1);

  if (will_merge) {
    ledger_.add_relabels(merge_above(target));
    carry_actual_ = kNoActual;
  } else {
    ledger_.add_relabels(moved);
  }
  return static_cast<std::size_t>(ledger_.total_movements - before);
}

std::size_t LearnedLla::merge_above(std::size_t actual) {
  RankNode node = actuals_[actual].node;
  const auto root_height = static_cast<std::size_t>(std::countr_zero(leaves_));
  std::size_t moved = 0;
  do {
    if (node.height == root_height) {
      throw CapacityError("root LLA above density 1/2; more elements than the capacity allows");
    }
    node = node.parent();
    moved = merge(node);
  } while (2 * actuals_[node.first_leaf()].box->count() > node.slot_count());
  return moved;
}

std::size_t LearnedLla::merge(RankNode parent) {
  merge_keys_.clear();
  merge_labels_.clear();
  const std::size_t first = parent.first_leaf();
  const std::size_t end = first + parent.rank_count();

  for (std::size_t s = first; s < end;) {
    Actual& a = actuals_[s];
    const std::size_t step = a.node.rank_count();
    if (a.box && a.box->count() > 0) {
      const std::size_t offset = a.node.first_slot();
      std::size_t i = 0;
      a.box->array().for_each([&](std::size_t slot, const Key& key) {
        merge_keys_.push_back(key);
        merge_labels_.push_back(s == carry_actual_ ? carry_labels_[i++] : offset + slot);
      });
      boundary_index_.erase({a.min.raw, s});
    }
    a.box.reset();
    a.live = false;
    --actual_count_;
    s += step;
  }

  Actual& merged = actuals_[first];
  merged.node = parent;
  merged.live = true;
  ++actual_count_;
  merged.box = factory_(parent.slot_count());
  if (merged.box->slot_count() != parent.slot_count()) {
    throw std::invalid_argument("black-box factory ignored the requested slot count");
  }
  merged.box->init(merge_keys_);
  std::fill(owner_.begin() + static_cast<std::ptrdiff_t>(first),
            owner_.begin() + static_cast<std::ptrdiff_t>(end), first);

  std::size_t moved = 0;
  std::size_t i = 0;
  const std::size_t offset = parent.first_slot();
  merged.box->array().for_each([&](std::size_t slot, const Key&) {
    const std::size_t was = merge_labels_[i++];
    if (was != kFreshLabel && was != offset + slot) ++moved;
  });
  if (carry_actual_ != kNoActual) {
    carry_labels_ = merge_labels_;
    carry_actual_ = first;
  }
  if (!merge_keys_.empty()) {
    merged.min = merge_keys_.front();
    merged.max = merge_keys_.back();
    boundary_index_.insert({merged.min.raw, first});
  }

  ++merges_;
  if (observer_) observer_(MergeEvent{parent, merge_keys_, moved});
  return moved;
}

void LearnedLla::reset_ledger() {
  const bool excluded = ledger_.first_placement_excluded;
  ledger_ = MovementLedger{};
  ledger_.first_placement_excluded = excluded;
}

std::size_t LearnedLla::actual_size(std::size_t actual) const {
  const auto& box = actuals_[actual].box;
  return box ? box->count() : 0;
}

void LearnedLla::for_each_label(
    const std::function<void(const Key&, std::size_t)>& visit) const {
  for (std::size_t s = 0; s < leaves_; s += actuals_[s].node.rank_count()) {
    const Actual& a = actuals_[s];
    if (!a.box) continue;
    const std::size_t offset = a.node.first_slot();
    a.box->array().for_each(
        [&](std::size_t slot, const Key& key) { visit(key, offset + slot); });
  }
}

std::vector<LabeledKey> LearnedLla::global_labels() const {
  std::vector<LabeledKey> out;
  out.reserve(size_);
  for_each_label([&](const Key& key, std::size_t label) { out.push_back({key, label}); });
  return out;
}

std::vector<RankNode> LearnedLla::actuals() const {
  std::vector<RankNode> out;
  out.reserve(actual_count_);
  for (std::size_t s = 0; s < leaves_; s += actuals_[s].node.rank_count()) {
    out.push_back(actuals_[s].node);
  }
  return out;
}

std::string LearnedLla::check_invariants() const {
  std::ostringstream err;
  const auto root_height = static_cast<std::size_t>(std::countr_zero(leaves_));

  // Ranks and slots: actuals tile [1, n] and [1, 6n] contiguously.
  std::size_t next_rank = 1;
  std::size_t next_slot = 1;
  std::size_t live = 0;
  std::size_t stored = 0;
  std::size_t nonempty = 0;
  const Key* last_key = nullptr;
  for (std::size_t s = 0; s < leaves_;) {
    const Actual& a = actuals_[s];
    if (!a.live || owner_[s] != s) {
      err << "leaf " << s << " starts no live actual";
      return err.str();
    }
    if (a.node.first_leaf() != s || a.node.height > root_height) {
      err << "actual at leaf " << s << " has inconsistent node";
      return err.str();
    }
    if (a.node.first_rank() != next_rank || a.node.first_slot() != next_slot) {
      err << "rank/slot partition broken at leaf " << s;
      return err.str();
    }
    for (std::size_t leaf = s; leaf < s + a.node.rank_count(); ++leaf) {
      if (owner_[leaf] != s) {
        err << "leaf " << leaf << " owner mismatch";
        return err.str();
      }
    }
    if (a.box) {
      if (a.box->slot_count() != a.node.slot_count()) {
        err << "actual at leaf " << s << " has wrong black-box size";
        return err.str();
      }
      if (2 * a.box->count() > a.box->slot_count()) {
        err << "actual at leaf " << s << " above density 1/2";
        return err.str();
      }
      if (!verify_sorted(a.box->array())) {
        err << "actual at leaf " << s << " not sorted";
        return err.str();
      }
      if (a.box->count() > 0) {
        const LabeledArray& arr = a.box->array();
        const Key& lo = arr.at(arr.next_occupied(0));
        const Key& hi = arr.at(arr.prev_occupied(arr.size() - 1));
        if (last_key != nullptr && lo < *last_key) {
          err << "actual at leaf " << s << " overlaps its predecessor actual";
          return err.str();
        }
        if (!same_element(lo, a.min) || !same_element(hi, a.max) ||
            !boundary_index_.contains({lo.raw, s})) {
          err << "boundary index stale for actual at leaf " << s;
          return err.str();
        }
        last_key = &hi;
        ++nonempty;
      }
      stored += a.box->count();
    }
    next_rank += a.node.rank_count();
    next_slot += a.node.slot_count();
    ++live;
    s += a.node.rank_count();
  }
  if (next_rank != leaves_ + 1 || next_slot != slot_count() + 1) {
    return "actuals do not cover all ranks";
  }
  if (live != actual_count_) return "actual count mismatch";
  if (stored != size_) return "stored element count mismatch";
  if (nonempty != boundary_index_.size()) return "boundary index has stray entries";

  // Every root-to-leaf path crosses exactly one actual.
  for (std::size_t leaf = 0; leaf < leaves_; ++leaf) {
    std::size_t hits = 0;
    for (std::size_t h = 0; h <= root_height; ++h) {
      const std::size_t start = (leaf >> h) << h;
      const Actual& a = actuals_[start];
      if (a.live && owner_[start] == start && a.node.height == h) ++hits;
    }
    if (hits != 1) {
      err << "root-to-leaf path of leaf " << leaf << " crosses " << hits << " actuals";
      return err.str();
    }
  }
  return {};
}

}  // namespace lla

namespace lla {

ReplayStats replay(std::span<const Key> keys, std::span<const std::int64_t> predicted,
                   const LlaFactory& factory, LearnedLla::Options options, bool sentinel,
                   std::function<void(const MergeEvent&)> observer) {
  if (options.routing == LearnedLla::Routing::kPredicted && predicted.size() != keys.size()) {
    throw std::invalid_argument("replay: one prediction per key required");
  }
  if (sentinel) options.reserve += 1;
  LearnedLla lla(std::max<std::size_t>(1, keys.size()), factory, options);
  if (sentinel) {
    lla.insert(kMinKey, 1);
    lla.reset_ledger();
  }
  const std::size_t merges_before = lla.merge_count();
  lla.set_merge_observer(std::move(observer));
  for (std::size_t i = 0; i < keys.size(); ++i) {
    lla.insert(keys[i], predicted.empty() ? 1 : predicted[i]);
  }
  ReplayStats stats;
  stats.movements = lla.ledger().total_movements;
  stats.inserts = lla.ledger().total_inserts;
  stats.merges = lla.merge_count() - merges_before;
  return stats;
}

}  // namespace lla
