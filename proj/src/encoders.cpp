#include "cwh/encoders.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace cwh {

void ContentAnalyzerParams::init(const std::vector<std::string>& vocab,
                                 const AnalyzerConfig& config, Rng& rng) {
    cfg = config;
    if (cfg.total_dim() <= 0) {
        throw Error(ErrorCategory::config, "at least one content analyzer must be active");
    }
    tag_vocab = vocab;
    tag_index.clear();
    for (int i = 0; i < static_cast<int>(tag_vocab.size()); ++i) {
        tag_index.emplace(tag_vocab[i], i);
    }
    auto fill_uniform = [&rng](MatrixXd& m, double bound) {
        for (Eigen::Index i = 0; i < m.size(); ++i) {
            m.data()[i] = rng.uniform(-bound, bound);
        }
    };
    if (cfg.use_tags) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(cfg.tag_dim));
        tag_table.resize(static_cast<Eigen::Index>(tag_vocab.size()), cfg.tag_dim);
        fill_uniform(tag_table, bound);
    } else {
        tag_table.resize(0, 0);
    }
    if (cfg.use_text) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(cfg.text_dim));
        text_proj.resize(cfg.text_dim, cfg.hash_dim);
        fill_uniform(text_proj, bound);
    } else {
        text_proj.resize(0, 0);
    }
    if (cfg.use_numeric) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(cfg.numeric_dim));
        num_weight.resize(cfg.numeric_dim, std::max(cfg.numeric_input_dim, 1));
        fill_uniform(num_weight, bound);
        num_bias = VectorXd::Zero(cfg.numeric_dim);
    } else {
        num_weight.resize(0, 0);
        num_bias.resize(0);
    }
}

double ContentAnalyzerParams::squared_norm() const {
    double s = tag_table.squaredNorm() + text_proj.squaredNorm() + num_weight.squaredNorm();
    if (num_bias.size() > 0) s += num_bias.squaredNorm();
    return s;
}

void AnalyzerGrads::reset(const AnalyzerConfig& cfg) {
    tag_rows.clear();
    text_cols.clear();
    numeric_touched = false;
    if (cfg.use_numeric) {
        num_weight = MatrixXd::Zero(cfg.numeric_dim, std::max(cfg.numeric_input_dim, 1));
        num_bias = VectorXd::Zero(cfg.numeric_dim);
    }
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<std::string> tokenize(const std::string& text, int max_tokens) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        const unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
            if (static_cast<int>(tokens.size()) >= max_tokens) return tokens;
        }
    }
    if (!cur.empty() && static_cast<int>(tokens.size()) < max_tokens) {
        tokens.push_back(std::move(cur));
    }
    return tokens;
}

VectorXd encode_tags(const std::vector<std::string>& tags, const ContentAnalyzerParams& params) {
    VectorXd out = VectorXd::Zero(params.cfg.tag_dim);
    if (!params.cfg.use_tags) {
        throw Error(ErrorCategory::model, "tag analyzer is not active");
    }
    int known = 0;
    for (const auto& t : tags) {
        auto it = params.tag_index.find(t);
        if (it == params.tag_index.end()) continue;
        out += params.tag_table.row(it->second).transpose();
        ++known;
    }
    if (known > 0 && params.cfg.tag_agg == TagAggregation::mean) {
        out /= static_cast<double>(known);
    }
    return out;
}

namespace {

std::vector<std::pair<int, double>> hash_text(const std::string& text,
                                              const AnalyzerConfig& cfg) {
    std::vector<std::pair<int, double>> buckets;
    auto tokens = tokenize(text, cfg.max_tokens);
    if (tokens.empty()) return buckets;
    std::unordered_map<int, double> counts;
    for (const auto& tok : tokens) {
        counts[static_cast<int>(fnv1a64(tok) % static_cast<std::uint64_t>(cfg.hash_dim))] += 1.0;
    }
    double sq = 0.0;
    for (const auto& [b, c] : counts) sq += c * c;
    const double inv_norm = 1.0 / std::sqrt(sq);
    buckets.reserve(counts.size());
    for (const auto& [b, c] : counts) buckets.emplace_back(b, c * inv_norm);
    std::sort(buckets.begin(), buckets.end());
    return buckets;
}

}  // namespace

VectorXd encode_text(const std::string& text, const ContentAnalyzerParams& params) {
    if (!params.cfg.use_text) {
        throw Error(ErrorCategory::model, "text analyzer is not active");
    }
    VectorXd out = VectorXd::Zero(params.cfg.text_dim);
    for (const auto& [bucket, weight] : hash_text(text, params.cfg)) {
        out += weight * params.text_proj.col(bucket);
    }
    return out;
}

VectorXd encode_numeric(const std::vector<double>& values, const ContentAnalyzerParams& params) {
    if (!params.cfg.use_numeric) {
        throw Error(ErrorCategory::model, "numeric analyzer is not active");
    }
    if (values.empty()) return VectorXd::Zero(params.cfg.numeric_dim);
    VectorXd x = VectorXd::Zero(params.num_weight.cols());
    const std::size_t n = std::min<std::size_t>(values.size(), params.num_weight.cols());
    for (std::size_t i = 0; i < n; ++i) x[static_cast<Eigen::Index>(i)] = values[i];
    return params.num_weight * x + params.num_bias;
}

VectorXd concat_multiview(const std::vector<VectorXd>& parts, int expected_dim) {
    Eigen::Index total = 0;
    for (const auto& p : parts) total += p.size();
    if (total != expected_dim) {
        throw Error(ErrorCategory::model,
                    "multiview dimension mismatch: got " + std::to_string(total) + ", expected " +
                        std::to_string(expected_dim));
    }
    VectorXd out(total);
    Eigen::Index off = 0;
    for (const auto& p : parts) {
        out.segment(off, p.size()) = p;
        off += p.size();
    }
    return out;
}

EncodedItem encode_item(const ContentBundle& content, const ContentAnalyzerParams& params) {
    const auto& cfg = params.cfg;
    EncodedItem enc;
    enc.f = VectorXd::Zero(cfg.total_dim());
    if (cfg.use_tags) {
        VectorXd part = VectorXd::Zero(cfg.tag_dim);
        for (const auto& t : content.tags) {
            auto it = params.tag_index.find(t);
            if (it == params.tag_index.end()) continue;
            enc.tag_rows.push_back(it->second);
        }
        std::sort(enc.tag_rows.begin(), enc.tag_rows.end());
        for (int row : enc.tag_rows) part += params.tag_table.row(row).transpose();
        if (!enc.tag_rows.empty() && cfg.tag_agg == TagAggregation::mean) {
            part /= static_cast<double>(enc.tag_rows.size());
        }
        enc.f.segment(cfg.tag_offset(), cfg.tag_dim) = part;
    }
    if (cfg.use_text) {
        enc.text_hash = hash_text(content.text, cfg);
        VectorXd part = VectorXd::Zero(cfg.text_dim);
        for (const auto& [bucket, weight] : enc.text_hash) {
            part += weight * params.text_proj.col(bucket);
        }
        enc.f.segment(cfg.text_offset(), cfg.text_dim) = part;
    }
    if (cfg.use_numeric) {
        if (!content.numeric.empty()) {
            enc.numeric_in = VectorXd::Zero(params.num_weight.cols());
            const std::size_t n =
                std::min<std::size_t>(content.numeric.size(), params.num_weight.cols());
            for (std::size_t i = 0; i < n; ++i) {
                enc.numeric_in[static_cast<Eigen::Index>(i)] = content.numeric[i];
            }
            enc.f.segment(cfg.numeric_offset(), cfg.numeric_dim) =
                params.num_weight * enc.numeric_in + params.num_bias;
        }
    }
    return enc;
}

void encoder_backward(const EncodedItem& enc, const VectorXd& df,
                      const ContentAnalyzerParams& params, AnalyzerGrads& grads) {
    const auto& cfg = params.cfg;
    if (cfg.use_tags && !enc.tag_rows.empty()) {
        VectorXd g = df.segment(cfg.tag_offset(), cfg.tag_dim);
        if (cfg.tag_agg == TagAggregation::mean) {
            g /= static_cast<double>(enc.tag_rows.size());
        }
        for (int row : enc.tag_rows) {
            auto [it, inserted] = grads.tag_rows.try_emplace(row, g);
            if (!inserted) it->second += g;
        }
    }
    if (cfg.use_text && !enc.text_hash.empty()) {
        const VectorXd g = df.segment(cfg.text_offset(), cfg.text_dim);
        for (const auto& [bucket, weight] : enc.text_hash) {
            auto [it, inserted] = grads.text_cols.try_emplace(bucket, weight * g);
            if (!inserted) it->second += weight * g;
        }
    }
    if (cfg.use_numeric && enc.numeric_in.size() > 0) {
        grads.numeric_touched = true;
        const auto g = df.segment(cfg.numeric_offset(), cfg.numeric_dim);
        grads.num_weight.noalias() += g * enc.numeric_in.transpose();
        grads.num_bias += g;
    }
}

std::vector<std::string> collect_tag_vocab(const ContentCatalog& catalog) {
    std::set<std::string> vocab;
    for (ItemId j = 0; j < catalog.size(); ++j) {
        for (const auto& t : catalog.content(j).tags) vocab.insert(t);
    }
    return {vocab.begin(), vocab.end()};
}

int max_numeric_len(const ContentCatalog& catalog) {
    std::size_t n = 0;
    for (ItemId j = 0; j < catalog.size(); ++j) {
        n = std::max(n, catalog.content(j).numeric.size());
    }
    return static_cast<int>(n);
}

}  // namespace cwh
