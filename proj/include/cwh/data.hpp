#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "cwh/types.hpp"

namespace cwh {

/// Maps raw file ids to dense 0-based indices. Dense ids are assigned in
/// ascending raw-id order, so they are stable for a given input file.
class IdMap {
public:
    ItemId add(std::int64_t raw);                  // idempotent
    bool contains(std::int64_t raw) const;
    std::uint32_t dense(std::int64_t raw) const;   // throws data error if absent
    std::int64_t raw(std::uint32_t dense) const { return raw_.at(dense); }
    std::uint32_t size() const { return static_cast<std::uint32_t>(raw_.size()); }

    /// Reassigns dense ids in ascending raw-id order. Call once after ingestion.
    void finalize();

    bool operator==(const IdMap& other) const { return raw_ == other.raw_; }

private:
    std::vector<std::int64_t> raw_;
    std::unordered_map<std::int64_t, std::uint32_t> to_dense_;
};

struct Interaction {
    UserId user;
    ItemId item;
    std::uint32_t count;  // duplicate rows collapsed, counts summed

    bool operator==(const Interaction&) const = default;
};

/// The observed consumption set. Pairs are unique and sorted by (user, item);
/// immutable after construction.
class InteractionLog {
public:
    InteractionLog() = default;
    InteractionLog(std::vector<Interaction> pairs, std::uint32_t n_users, std::uint32_t n_items);

    const std::vector<Interaction>& pairs() const { return pairs_; }
    std::uint32_t n_users() const { return n_users_; }
    std::uint32_t n_items() const { return n_items_; }

    /// Items consumed by a user, ascending.
    const std::vector<ItemId>& items_of(UserId u) const { return by_user_.at(u); }

    /// Total raw consumption count per item (sum over pair counts).
    const std::vector<std::uint64_t>& item_counts() const { return item_counts_; }

    bool contains(UserId u, ItemId i) const;
    std::size_t size() const { return pairs_.size(); }

    bool operator==(const InteractionLog& other) const {
        return pairs_ == other.pairs_ && n_users_ == other.n_users_ && n_items_ == other.n_items_;
    }

private:
    std::vector<Interaction> pairs_;
    std::vector<std::vector<ItemId>> by_user_;
    std::vector<std::uint64_t> item_counts_;
    std::uint32_t n_users_ = 0;
    std::uint32_t n_items_ = 0;
};

/// Raw per-item content fields. At least one field must be non-empty.
struct ContentBundle {
    std::vector<std::string> tags;
    std::string text;
    std::vector<double> numeric;

    bool empty() const { return tags.empty() && text.empty() && numeric.empty(); }
    bool operator==(const ContentBundle&) const = default;
};

class ContentCatalog {
public:
    void add(std::int64_t raw_id, ContentBundle bundle);
    void finalize();  // sorts by raw id and assigns dense ids

    const ContentBundle& content(ItemId j) const { return bundles_.at(j); }
    const IdMap& ids() const { return ids_; }
    std::uint32_t size() const { return static_cast<std::uint32_t>(bundles_.size()); }

    bool operator==(const ContentCatalog& other) const {
        return bundles_ == other.bundles_ && ids_ == other.ids_;
    }

private:
    IdMap ids_;
    std::vector<ContentBundle> bundles_;
    std::vector<std::int64_t> pending_raw_;
    bool finalized_ = false;
};

enum class PopularityMode {
    minmax_count,
    minmax_logcount,
    constant_half,
};

PopularityMode popularity_mode_from_string(const std::string& s);
std::string to_string(PopularityMode m);

/// Normalized popularity scores c_j in [0, 1]; the most consumed item gets 1,
/// the least consumed 0 (degenerate uniform counts collapse to 0.5 everywhere).
class PopularityTable {
public:
    PopularityTable() = default;
    PopularityTable(std::vector<double> scores, std::vector<std::uint64_t> counts)
        : scores_(std::move(scores)), counts_(std::move(counts)) {}

    double score(ItemId j) const { return scores_.at(j); }
    std::uint64_t count(ItemId j) const { return counts_.at(j); }
    std::uint32_t size() const { return static_cast<std::uint32_t>(scores_.size()); }
    const std::vector<std::uint64_t>& counts() const { return counts_; }

private:
    std::vector<double> scores_;
    std::vector<std::uint64_t> counts_;
};

PopularityTable build_popularity(const InteractionLog& log, PopularityMode mode);

struct Dataset {
    IdMap users;
    ContentCatalog catalog;
    InteractionLog log;
};

/// Parses the content CSV (`item_id,tags,text,numeric`; tags and numeric are
/// `|`-separated). Rejects rows where every field is empty.
ContentCatalog ingest_content(const std::string& path);

/// Parses the interactions CSV (`user_id,item_id[,rating][,timestamp]`).
/// Rows with a rating below `rating_threshold` are dropped; duplicates are
/// collapsed with counts summed. Every item must exist in the catalog.
InteractionLog ingest_interactions(const std::string& path, const ContentCatalog& catalog,
                                   IdMap& users, double rating_threshold = 3.5);

Dataset load_dataset(const std::string& interactions_path, const std::string& content_path,
                     double rating_threshold = 3.5);

}  // namespace cwh
