#include "cwh/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "cwh/csv.hpp"

namespace cwh {

namespace {

std::int64_t parse_int(const std::string& s, std::size_t line_no, const char* what) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCategory::data,
                    "line " + std::to_string(line_no) + ": malformed " + what + " '" + s + "'");
    }
    return value;
}

double parse_double(const std::string& s, std::size_t line_no, const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCategory::data,
                    "line " + std::to_string(line_no) + ": malformed " + what + " '" + s + "'");
    }
}

std::vector<std::string> split_pipe(const std::string& s) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find('|', start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const std::string& t) { return t.empty(); }),
              out.end());
    return out;
}

}  // namespace

ItemId IdMap::add(std::int64_t raw) {
    auto it = to_dense_.find(raw);
    if (it != to_dense_.end()) return it->second;
    std::uint32_t dense = static_cast<std::uint32_t>(raw_.size());
    raw_.push_back(raw);
    to_dense_.emplace(raw, dense);
    return dense;
}

bool IdMap::contains(std::int64_t raw) const { return to_dense_.count(raw) != 0; }

std::uint32_t IdMap::dense(std::int64_t raw) const {
    auto it = to_dense_.find(raw);
    if (it == to_dense_.end()) {
        throw Error(ErrorCategory::data, "unknown id " + std::to_string(raw));
    }
    return it->second;
}

void IdMap::finalize() {
    std::sort(raw_.begin(), raw_.end());
    to_dense_.clear();
    for (std::uint32_t i = 0; i < raw_.size(); ++i) {
        to_dense_.emplace(raw_[i], i);
    }
}

InteractionLog::InteractionLog(std::vector<Interaction> pairs, std::uint32_t n_users,
                               std::uint32_t n_items)
    : pairs_(std::move(pairs)), n_users_(n_users), n_items_(n_items) {
    std::sort(pairs_.begin(), pairs_.end(), [](const Interaction& a, const Interaction& b) {
        return a.user != b.user ? a.user < b.user : a.item < b.item;
    });
    for (std::size_t i = 1; i < pairs_.size(); ++i) {
        if (pairs_[i].user == pairs_[i - 1].user && pairs_[i].item == pairs_[i - 1].item) {
            throw Error(ErrorCategory::data, "duplicate (user,item) pair in interaction log");
        }
    }
    by_user_.assign(n_users_, {});
    item_counts_.assign(n_items_, 0);
    for (const auto& p : pairs_) {
        if (p.user >= n_users_ || p.item >= n_items_) {
            throw Error(ErrorCategory::data, "interaction references id outside dense range");
        }
        by_user_[p.user].push_back(p.item);
        item_counts_[p.item] += p.count;
    }
}

bool InteractionLog::contains(UserId u, ItemId i) const {
    if (u >= n_users_) return false;
    const auto& v = by_user_[u];
    return std::binary_search(v.begin(), v.end(), i);
}

void ContentCatalog::add(std::int64_t raw_id, ContentBundle bundle) {
    if (finalized_) throw Error(ErrorCategory::data, "catalog already finalized");
    pending_raw_.push_back(raw_id);
    bundles_.push_back(std::move(bundle));
}

void ContentCatalog::finalize() {
    std::vector<std::size_t> order(pending_raw_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pending_raw_[a] < pending_raw_[b];
    });
    std::vector<ContentBundle> sorted;
    sorted.reserve(bundles_.size());
    for (std::size_t idx : order) {
        ids_.add(pending_raw_[idx]);
        sorted.push_back(std::move(bundles_[idx]));
    }
    bundles_ = std::move(sorted);
    pending_raw_.clear();
    finalized_ = true;
}

PopularityMode popularity_mode_from_string(const std::string& s) {
    if (s == "minmax-count") return PopularityMode::minmax_count;
    if (s == "minmax-logcount") return PopularityMode::minmax_logcount;
    if (s == "constant-half") return PopularityMode::constant_half;
    throw Error(ErrorCategory::config, "unknown popularity mode '" + s + "'");
}

std::string to_string(PopularityMode m) {
    switch (m) {
        case PopularityMode::minmax_count: return "minmax-count";
        case PopularityMode::minmax_logcount: return "minmax-logcount";
        case PopularityMode::constant_half: return "constant-half";
    }
    return "?";
}

PopularityTable build_popularity(const InteractionLog& log, PopularityMode mode) {
    if (log.size() == 0) {
        throw Error(ErrorCategory::data, "cannot build popularity from an empty log");
    }
    const auto& counts = log.item_counts();
    std::vector<double> scores(counts.size(), 0.5);
    if (mode != PopularityMode::constant_half) {
        std::vector<double> x(counts.size());
        for (std::size_t j = 0; j < counts.size(); ++j) {
            const double c = static_cast<double>(counts[j]);
            x[j] = mode == PopularityMode::minmax_logcount ? std::log1p(c) : c;
        }
        const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
        if (*mx > *mn) {
            for (std::size_t j = 0; j < counts.size(); ++j) {
                scores[j] = (x[j] - *mn) / (*mx - *mn);
            }
        }
        // degenerate uniform counts keep the constant 0.5 so that p_b(gamma, c) = gamma
    }
    return PopularityTable(std::move(scores), std::vector<std::uint64_t>(counts));
}

ContentCatalog ingest_content(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::io, "cannot open content file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCategory::data, "content file '" + path + "' is empty");
    }
    auto header = csv::parse_row(line);
    if (header.size() < 4 || header[0] != "item_id" || header[1] != "tags" ||
        header[2] != "text" || header[3] != "numeric") {
        throw Error(ErrorCategory::data,
                    "content file must start with header 'item_id,tags,text,numeric'");
    }
    ContentCatalog catalog;
    std::size_t line_no = 1;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = csv::parse_row(line);
        if (fields.size() != 4) {
            throw Error(ErrorCategory::data,
                        "line " + std::to_string(line_no) + ": expected 4 fields, got " +
                            std::to_string(fields.size()));
        }
        ContentBundle bundle;
        bundle.tags = split_pipe(fields[1]);
        bundle.text = fields[2];
        for (const auto& tok : split_pipe(fields[3])) {
            bundle.numeric.push_back(parse_double(tok, line_no, "numeric value"));
        }
        if (bundle.empty()) {
            throw Error(ErrorCategory::data,
                        "line " + std::to_string(line_no) + ": item has no content fields");
        }
        std::int64_t raw = parse_int(fields[0], line_no, "item_id");
        catalog.add(raw, std::move(bundle));
        ++rows;
    }
    if (rows == 0) throw Error(ErrorCategory::data, "content file has no rows");
    catalog.finalize();
    if (catalog.ids().size() != rows) {
        throw Error(ErrorCategory::data, "duplicate item_id in content file");
    }
    return catalog;
}

InteractionLog ingest_interactions(const std::string& path, const ContentCatalog& catalog,
                                   IdMap& users, double rating_threshold) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::io, "cannot open interactions file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCategory::data, "interactions file '" + path + "' is empty");
    }
    auto header = csv::parse_row(line);
    if (header.size() < 2 || header[0] != "user_id" || header[1] != "item_id") {
        throw Error(ErrorCategory::data,
                    "interactions file must start with header 'user_id,item_id[,rating][,timestamp]'");
    }
    const bool has_rating = header.size() >= 3 && header[2] == "rating";

    // raw pairs with counts; items validated against the catalog immediately
    std::map<std::pair<std::int64_t, std::int64_t>, std::uint32_t> counts;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = csv::parse_row(line);
        if (fields.size() < 2 || fields.size() < header.size() - 1) {
            throw Error(ErrorCategory::data,
                        "line " + std::to_string(line_no) + ": expected at least 2 fields");
        }
        std::int64_t raw_user = parse_int(fields[0], line_no, "user_id");
        std::int64_t raw_item = parse_int(fields[1], line_no, "item_id");
        if (has_rating && fields.size() >= 3) {
            double rating = parse_double(fields[2], line_no, "rating");
            if (rating < rating_threshold) continue;  // only positives are stored
        }
        if (!catalog.ids().contains(raw_item)) {
            throw Error(ErrorCategory::data, "line " + std::to_string(line_no) + ": item " +
                                                 std::to_string(raw_item) +
                                                 " has no content row");
        }
        counts[{raw_user, raw_item}] += 1;
    }
    if (counts.empty()) {
        throw Error(ErrorCategory::data, "interactions file has no positive rows");
    }
    for (const auto& [key, n] : counts) users.add(key.first);
    users.finalize();

    std::vector<Interaction> pairs;
    pairs.reserve(counts.size());
    for (const auto& [key, n] : counts) {
        pairs.push_back({users.dense(key.first), catalog.ids().dense(key.second), n});
    }
    return InteractionLog(std::move(pairs), users.size(), catalog.size());
}

Dataset load_dataset(const std::string& interactions_path, const std::string& content_path,
                     double rating_threshold) {
    Dataset ds;
    ds.catalog = ingest_content(content_path);
    ds.log = ingest_interactions(interactions_path, ds.catalog, ds.users, rating_threshold);
    return ds;
}

}  // namespace cwh
