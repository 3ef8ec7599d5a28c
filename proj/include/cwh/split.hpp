#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cwh/data.hpp"

namespace cwh {

struct EvalPair {
    UserId user;
    ItemId item;

    bool operator==(const EvalPair&) const = default;
    bool operator<(const EvalPair& o) const {
        return user != o.user ? user < o.user : item < o.item;
    }
};

/// Train/validation/test partition. Cold items have zero train interactions;
/// their former train pairs live in the cold pair sets. Warm holdout pairs
/// whose item became cold are re-labeled into the matching cold pair set
/// (dropped if the item belongs to the other section's cold set).
struct SplitBundle {
    InteractionLog train;
    std::vector<EvalPair> val_warm;
    std::vector<EvalPair> test_warm;
    std::vector<EvalPair> val_cold;
    std::vector<EvalPair> test_cold;
    std::vector<ItemId> val_cold_items;   // sorted ascending
    std::vector<ItemId> test_cold_items;  // sorted ascending
    std::vector<UserId> dropped_users;    // lost all train items, removed from eval
    std::size_t relabeled_pairs = 0;      // warm holdout pairs moved to a cold set
    int offset = 0;
    int min_items = 8;
    std::uint64_t seed = 0;

    bool operator==(const SplitBundle& o) const {
        return train == o.train && val_warm == o.val_warm && test_warm == o.test_warm &&
               val_cold == o.val_cold && test_cold == o.test_cold &&
               val_cold_items == o.val_cold_items && test_cold_items == o.test_cold_items &&
               dropped_users == o.dropped_users && offset == o.offset &&
               min_items == o.min_items && seed == o.seed;
    }
};

/// Per-user holdout: users with at least `min_items` interactions contribute
/// two test and two validation pairs, drawn at random; everyone else trains
/// on all their pairs. min_items must be >= 5.
SplitBundle user_holdout(const InteractionLog& log, int min_items, std::uint64_t seed);

/// Every-tenth-rank cold selection: items sorted by raw count descending
/// (ties by ascending id); ranks congruent to `offset` (mod period) become
/// test-cold, the next `span` residues validation-cold. span >= 1 adjacent
/// residue classes per set adjust the cold ratio.
void stratified_cold_selection(const PopularityTable& popularity, int offset,
                               std::vector<ItemId>& test_cold_items,
                               std::vector<ItemId>& val_cold_items, int period = 10,
                               int span = 1);

/// Removes every train interaction touching a cold item (they become cold
/// eval pairs), re-labels warm holdout pairs on cold items, and drops users
/// left with no train data.
SplitBundle apply_cold_simulation(SplitBundle split, const std::vector<ItemId>& test_cold_items,
                                  const std::vector<ItemId>& val_cold_items);

/// Convenience: holdout + stratified cold selection + simulation in one call.
SplitBundle make_split(const InteractionLog& log, int min_items, std::uint64_t seed, int offset,
                       int period = 10, int span = 1);

/// Line-oriented `section,...` manifest with raw ids; reloads bit-exactly.
void save_manifest(const std::string& path, const SplitBundle& split, const Dataset& dataset);
SplitBundle load_manifest(const std::string& path, const Dataset& dataset);

}  // namespace cwh
