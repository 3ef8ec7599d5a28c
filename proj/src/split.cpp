#include "cwh/split.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <unordered_set>

#include "cwh/rng.hpp"

namespace cwh {

namespace {

bool in_sorted(const std::vector<ItemId>& v, ItemId j) {
    return std::binary_search(v.begin(), v.end(), j);
}

std::uint32_t pair_count(const InteractionLog& log, UserId u, ItemId j) {
    const auto& pairs = log.pairs();
    Interaction probe{u, j, 0};
    auto it = std::lower_bound(pairs.begin(), pairs.end(), probe,
                               [](const Interaction& a, const Interaction& b) {
                                   return a.user != b.user ? a.user < b.user : a.item < b.item;
                               });
    return it->count;
}

}  // namespace

SplitBundle user_holdout(const InteractionLog& log, int min_items, std::uint64_t seed) {
    if (min_items < 5) {
        throw Error(ErrorCategory::split, "min_items must be >= 5 (2 test + 2 validation + 1 train)");
    }
    SplitBundle out;
    out.min_items = min_items;
    out.seed = seed;

    Rng rng(seed);
    std::vector<Interaction> train_pairs;
    train_pairs.reserve(log.size());
    std::size_t eligible = 0;

    for (UserId u = 0; u < log.n_users(); ++u) {
        const auto& items = log.items_of(u);
        if (static_cast<int>(items.size()) < min_items) {
            for (ItemId j : items) {
                train_pairs.push_back({u, j, pair_count(log, u, j)});
            }
            continue;
        }
        ++eligible;
        std::vector<ItemId> shuffled(items);
        rng.shuffle(shuffled);
        out.test_warm.push_back({u, shuffled[0]});
        out.test_warm.push_back({u, shuffled[1]});
        out.val_warm.push_back({u, shuffled[2]});
        out.val_warm.push_back({u, shuffled[3]});
        std::vector<ItemId> rest(shuffled.begin() + 4, shuffled.end());
        std::sort(rest.begin(), rest.end());
        for (ItemId j : rest) {
            train_pairs.push_back({u, j, pair_count(log, u, j)});
        }
    }
    if (eligible == 0) {
        throw Error(ErrorCategory::split,
                    "no user has at least " + std::to_string(min_items) + " items");
    }
    out.train = InteractionLog(std::move(train_pairs), log.n_users(), log.n_items());
    std::sort(out.val_warm.begin(), out.val_warm.end());
    std::sort(out.test_warm.begin(), out.test_warm.end());
    return out;
}

void stratified_cold_selection(const PopularityTable& popularity, int offset,
                               std::vector<ItemId>& test_cold_items,
                               std::vector<ItemId>& val_cold_items, int period, int span) {
    if (period < 2 || span < 1 || 2 * span > period) {
        throw Error(ErrorCategory::split, "need period >= 2 and 1 <= span <= period/2");
    }
    if (offset < 0 || offset >= period) {
        throw Error(ErrorCategory::split, "offset must lie in [0, period)");
    }
    std::vector<ItemId> order(popularity.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](ItemId a, ItemId b) {
        const auto ca = popularity.count(a), cb = popularity.count(b);
        return ca != cb ? ca > cb : a < b;  // most popular first, ties by ascending id
    });
    test_cold_items.clear();
    val_cold_items.clear();
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const int rel = static_cast<int>((rank + period - offset % period) % period);
        if (rel < span) {
            test_cold_items.push_back(order[rank]);
        } else if (rel < 2 * span) {
            val_cold_items.push_back(order[rank]);
        }
    }
    std::sort(test_cold_items.begin(), test_cold_items.end());
    std::sort(val_cold_items.begin(), val_cold_items.end());
}

SplitBundle apply_cold_simulation(SplitBundle split, const std::vector<ItemId>& test_cold_items,
                                  const std::vector<ItemId>& val_cold_items) {
    for (ItemId j : test_cold_items) {
        if (in_sorted(val_cold_items, j)) {
            throw Error(ErrorCategory::split, "cold sets must be disjoint");
        }
    }
    split.test_cold_items = test_cold_items;
    split.val_cold_items = val_cold_items;
    std::sort(split.test_cold_items.begin(), split.test_cold_items.end());
    std::sort(split.val_cold_items.begin(), split.val_cold_items.end());

    // train pairs touching a cold item become cold eval pairs
    std::vector<Interaction> kept;
    kept.reserve(split.train.size());
    for (const auto& p : split.train.pairs()) {
        if (in_sorted(split.test_cold_items, p.item)) {
            split.test_cold.push_back({p.user, p.item});
        } else if (in_sorted(split.val_cold_items, p.item)) {
            split.val_cold.push_back({p.user, p.item});
        } else {
            kept.push_back(p);
        }
    }

    // warm holdout pairs on cold items: re-label into the matching cold set,
    // drop if the item belongs to the other section's cold set
    auto relabel = [&](std::vector<EvalPair>& warm, std::vector<EvalPair>& same_section_cold,
                       const std::vector<ItemId>& same_section_items,
                       const std::vector<ItemId>& other_section_items) {
        std::vector<EvalPair> remaining;
        remaining.reserve(warm.size());
        for (const auto& p : warm) {
            if (in_sorted(same_section_items, p.item)) {
                same_section_cold.push_back(p);
                ++split.relabeled_pairs;
            } else if (in_sorted(other_section_items, p.item)) {
                // dropped: cold items selected for one section leave the other
            } else {
                remaining.push_back(p);
            }
        }
        warm = std::move(remaining);
    };
    relabel(split.test_warm, split.test_cold, split.test_cold_items, split.val_cold_items);
    relabel(split.val_warm, split.val_cold, split.val_cold_items, split.test_cold_items);

    split.train = InteractionLog(std::move(kept), split.train.n_users(), split.train.n_items());

    // users left without any train pair cannot be evaluated
    std::unordered_set<UserId> eval_users;
    for (const auto* v : {&split.val_warm, &split.test_warm, &split.val_cold, &split.test_cold}) {
        for (const auto& p : *v) eval_users.insert(p.user);
    }
    std::unordered_set<UserId> dropped;
    for (UserId u : eval_users) {
        if (split.train.items_of(u).empty()) dropped.insert(u);
    }
    if (!dropped.empty()) {
        auto strip = [&](std::vector<EvalPair>& v) {
            v.erase(std::remove_if(v.begin(), v.end(),
                                   [&](const EvalPair& p) { return dropped.count(p.user) != 0; }),
                    v.end());
        };
        strip(split.val_warm);
        strip(split.test_warm);
        strip(split.val_cold);
        strip(split.test_cold);
        split.dropped_users.assign(dropped.begin(), dropped.end());
        std::sort(split.dropped_users.begin(), split.dropped_users.end());
    }

    std::sort(split.val_cold.begin(), split.val_cold.end());
    std::sort(split.test_cold.begin(), split.test_cold.end());
    return split;
}

SplitBundle make_split(const InteractionLog& log, int min_items, std::uint64_t seed, int offset,
                       int period, int span) {
    PopularityTable pop = build_popularity(log, PopularityMode::minmax_count);
    std::vector<ItemId> test_cold, val_cold;
    stratified_cold_selection(pop, offset, test_cold, val_cold, period, span);
    SplitBundle bundle = user_holdout(log, min_items, seed);
    bundle.offset = offset;
    return apply_cold_simulation(std::move(bundle), test_cold, val_cold);
}

namespace {

void write_pairs(std::ofstream& out, const char* section, const std::vector<EvalPair>& pairs,
                 const Dataset& ds) {
    for (const auto& p : pairs) {
        out << section << ',' << ds.users.raw(p.user) << ',' << ds.catalog.ids().raw(p.item)
            << '\n';
    }
}

}  // namespace

void save_manifest(const std::string& path, const SplitBundle& split, const Dataset& dataset) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCategory::io, "cannot write manifest '" + path + "'");
    out << "meta,offset," << split.offset << '\n';
    out << "meta,min_items," << split.min_items << '\n';
    out << "meta,seed," << split.seed << '\n';
    for (const auto& p : split.train.pairs()) {
        out << "train," << dataset.users.raw(p.user) << ',' << dataset.catalog.ids().raw(p.item)
            << ',' << p.count << '\n';
    }
    write_pairs(out, "val_warm", split.val_warm, dataset);
    write_pairs(out, "test_warm", split.test_warm, dataset);
    write_pairs(out, "val_cold", split.val_cold, dataset);
    write_pairs(out, "test_cold", split.test_cold, dataset);
    for (ItemId j : split.val_cold_items) {
        out << "val_cold_item," << dataset.catalog.ids().raw(j) << '\n';
    }
    for (ItemId j : split.test_cold_items) {
        out << "test_cold_item," << dataset.catalog.ids().raw(j) << '\n';
    }
    for (UserId u : split.dropped_users) {
        out << "dropped_user," << dataset.users.raw(u) << '\n';
    }
    out << "meta,relabeled," << split.relabeled_pairs << '\n';
    if (!out) throw Error(ErrorCategory::io, "write failed for manifest '" + path + "'");
}

SplitBundle load_manifest(const std::string& path, const Dataset& dataset) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::io, "cannot open manifest '" + path + "'");
    SplitBundle split;
    std::vector<Interaction> train_pairs;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) {
        throw Error(ErrorCategory::split,
                    "manifest line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        while (true) {
            auto pos = line.find(',', start);
            if (pos == std::string::npos) {
                f.push_back(line.substr(start));
                break;
            }
            f.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        const std::string& section = f[0];
        try {
            if (section == "meta") {
                if (f.size() != 3) fail("meta needs 3 fields");
                if (f[1] == "offset") split.offset = std::stoi(f[2]);
                else if (f[1] == "min_items") split.min_items = std::stoi(f[2]);
                else if (f[1] == "seed") split.seed = std::stoull(f[2]);
                else if (f[1] == "relabeled") split.relabeled_pairs = std::stoull(f[2]);
                else fail("unknown meta key '" + f[1] + "'");
            } else if (section == "train") {
                if (f.size() != 4) fail("train needs 4 fields");
                train_pairs.push_back({dataset.users.dense(std::stoll(f[1])),
                                       dataset.catalog.ids().dense(std::stoll(f[2])),
                                       static_cast<std::uint32_t>(std::stoul(f[3]))});
            } else if (section == "val_warm" || section == "test_warm" ||
                       section == "val_cold" || section == "test_cold") {
                if (f.size() != 3) fail("pair section needs 3 fields");
                EvalPair p{dataset.users.dense(std::stoll(f[1])),
                           dataset.catalog.ids().dense(std::stoll(f[2]))};
                if (section == "val_warm") split.val_warm.push_back(p);
                else if (section == "test_warm") split.test_warm.push_back(p);
                else if (section == "val_cold") split.val_cold.push_back(p);
                else split.test_cold.push_back(p);
            } else if (section == "val_cold_item") {
                split.val_cold_items.push_back(dataset.catalog.ids().dense(std::stoll(f[1])));
            } else if (section == "test_cold_item") {
                split.test_cold_items.push_back(dataset.catalog.ids().dense(std::stoll(f[1])));
            } else if (section == "dropped_user") {
                split.dropped_users.push_back(dataset.users.dense(std::stoll(f[1])));
            } else {
                fail("unknown section '" + section + "'");
            }
        } catch (const std::invalid_argument&) {
            fail("malformed number");
        } catch (const std::out_of_range&) {
            fail("number out of range");
        }
    }
    split.train = InteractionLog(std::move(train_pairs), dataset.users.size(),
                                 dataset.catalog.size());
    return split;
}

}  // namespace cwh
