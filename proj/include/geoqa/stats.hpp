#pragma once

/// @file stats.hpp
/// Dataset distribution reporting: per-type answer histograms, raw count
/// frequencies, split sizes and vocabulary size.

#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoqa/dataset.hpp"

namespace geoqa {

struct DistributionReport {
    std::uint64_t total = 0;
    std::map<QuestionType, std::map<std::string, std::uint64_t>> per_type;
    /// Frequencies of exact (unquantized) counting answers; populated only
    /// when count answers are raw integers (HR datasets).
    std::map<std::uint64_t, std::uint64_t> raw_counts;
    std::map<Split, std::uint64_t> split_sizes;
    std::uint64_t vocabulary_size = 0;  ///< distinct answer strings observed
    /// Share of count answers that are zero ('0' or "0").
    double zero_numeric_fraction = 0.0;
};

namespace detail {

inline bool is_integer_literal(const std::string& s) {
    if (s.empty()) return false;
    for (const char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace detail

inline DistributionReport stats(const std::vector<QATriplet>& triplets) {
    DistributionReport r;
    std::set<std::string> answers;
    std::uint64_t numeric = 0, zeros = 0;
    // A single quantized count answer marks the whole dataset as binned;
    // '0' alone is ambiguous (it is both a bin label and a raw zero).
    bool quantized = false;
    for (const QATriplet& t : triplets)
        if (t.qtype == QuestionType::count && !detail::is_integer_literal(t.answer))
            quantized = true;
    for (const QATriplet& t : triplets) {
        ++r.total;
        ++r.per_type[t.qtype][t.answer];
        ++r.split_sizes[t.split];
        answers.insert(t.answer);
        if (t.qtype == QuestionType::count) {
            ++numeric;
            if (t.answer == "0") ++zeros;
            if (!quantized && detail::is_integer_literal(t.answer))
                ++r.raw_counts[std::stoull(t.answer)];
        }
    }
    r.vocabulary_size = answers.size();
    r.zero_numeric_fraction = numeric == 0 ? 0.0 : double(zeros) / double(numeric);
    return r;
}

inline nlohmann::json report_to_json(const DistributionReport& r) {
    nlohmann::json j;
    j["total"] = r.total;
    j["vocabulary_size"] = r.vocabulary_size;
    j["zero_numeric_fraction"] = r.zero_numeric_fraction;
    nlohmann::json per_type;
    for (const auto& [qtype, hist] : r.per_type) {
        nlohmann::json h;
        for (const auto& [answer, n] : hist) h[answer] = n;
        per_type[to_string(qtype)] = std::move(h);
    }
    j["per_type"] = std::move(per_type);
    nlohmann::json raw;
    for (const auto& [value, n] : r.raw_counts) raw[std::to_string(value)] = n;
    j["raw_counts"] = std::move(raw);
    nlohmann::json splits;
    for (const auto& [split, n] : r.split_sizes) splits[to_string(split)] = n;
    j["split_sizes"] = std::move(splits);
    return j;
}

}  // namespace geoqa
