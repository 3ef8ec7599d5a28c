#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cwh {

// Dense, contiguous, 0-based indices assigned at ingestion. Raw file ids are
// kept in the id maps; everything past the loaders speaks dense ids only.
using UserId = std::uint32_t;
using ItemId = std::uint32_t;

enum class ErrorCategory {
    usage,
    config,
    data,
    split,
    model,
    train,
    eval,
    io,
};

inline const char* error_category_name(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::usage: return "usage";
        case ErrorCategory::config: return "config";
        case ErrorCategory::data: return "data";
        case ErrorCategory::split: return "split";
        case ErrorCategory::model: return "model";
        case ErrorCategory::train: return "train";
        case ErrorCategory::eval: return "eval";
        case ErrorCategory::io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(std::string(error_category_name(category)) + ": " + message),
          category_(category) {}

    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

}  // namespace cwh
