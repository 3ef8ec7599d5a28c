#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "cwh/data.hpp"
#include "cwh/rng.hpp"

namespace cwh {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class TagAggregation { mean, sum };

struct AnalyzerConfig {
    bool use_tags = true;
    bool use_text = true;
    bool use_numeric = false;
    int tag_dim = 100;
    int text_dim = 100;
    int numeric_dim = 100;
    int hash_dim = 4096;
    int max_tokens = 512;
    int numeric_input_dim = 0;  // fixed at model build time from the catalog
    TagAggregation tag_agg = TagAggregation::mean;

    int total_dim() const {
        return (use_tags ? tag_dim : 0) + (use_text ? text_dim : 0) +
               (use_numeric ? numeric_dim : 0);
    }
    int tag_offset() const { return 0; }
    int text_offset() const { return use_tags ? tag_dim : 0; }
    int numeric_offset() const { return text_offset() + (use_text ? text_dim : 0); }
};

/// Learned content analyzer parameters (theta_CB): tag embedding table, text
/// hash projection, numeric affine map. The tag vocabulary is fixed when the
/// model is built; unknown tags at inference are ignored.
struct ContentAnalyzerParams {
    AnalyzerConfig cfg;
    std::vector<std::string> tag_vocab;
    std::unordered_map<std::string, int> tag_index;
    MatrixXd tag_table;   // vocab x tag_dim
    MatrixXd text_proj;   // text_dim x hash_dim
    MatrixXd num_weight;  // numeric_dim x numeric_input_dim
    VectorXd num_bias;    // numeric_dim

    void init(const std::vector<std::string>& vocab, const AnalyzerConfig& config, Rng& rng);
    double squared_norm() const;
};

/// Forward workspace kept so the backward pass can reuse the sparse inputs.
struct EncodedItem {
    VectorXd f;                                      // concatenated multiview vector
    std::vector<int> tag_rows;                       // known-tag table rows
    std::vector<std::pair<int, double>> text_hash;   // L2-normalized hashed counts
    VectorXd numeric_in;                             // padded input, empty if unused
};

struct AnalyzerGrads {
    std::unordered_map<int, VectorXd> tag_rows;   // table row -> d(tag_dim)
    std::unordered_map<int, VectorXd> text_cols;  // projection column -> d(text_dim)
    MatrixXd num_weight;
    VectorXd num_bias;
    bool numeric_touched = false;

    void reset(const AnalyzerConfig& cfg);
};

/// Mean (or sum) of the known tags' embedding rows; zero vector if none known.
VectorXd encode_tags(const std::vector<std::string>& tags, const ContentAnalyzerParams& params);

/// Lowercased bag-of-tokens, truncated to max_tokens, feature-hashed into
/// hash_dim buckets, L2-normalized, then linearly projected to text_dim.
VectorXd encode_text(const std::string& text, const ContentAnalyzerParams& params);

/// Affine map over the zero-padded numeric vector; empty input gives zero.
VectorXd encode_numeric(const std::vector<double>& values, const ContentAnalyzerParams& params);

/// Concatenation in declared analyzer order (tags, text, numeric).
VectorXd concat_multiview(const std::vector<VectorXd>& parts, int expected_dim);

/// Full item encoding with the workspace needed for gradients.
EncodedItem encode_item(const ContentBundle& content, const ContentAnalyzerParams& params);

/// Accumulates d(loss)/d(theta_CB) given d(loss)/d(f).
void encoder_backward(const EncodedItem& enc, const VectorXd& df,
                      const ContentAnalyzerParams& params, AnalyzerGrads& grads);

/// Deterministic token split: lowercase, split on non-alphanumerics.
std::vector<std::string> tokenize(const std::string& text, int max_tokens);

/// Stable FNV-1a 64-bit hash used for text feature hashing.
std::uint64_t fnv1a64(const std::string& s);

/// Collects the sorted tag vocabulary of a catalog.
std::vector<std::string> collect_tag_vocab(const ContentCatalog& catalog);

/// Longest numeric field in the catalog (the numeric analyzer's input width).
int max_numeric_len(const ContentCatalog& catalog);

}  // namespace cwh
