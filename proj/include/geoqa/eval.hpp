#pragma once

/// @file eval.hpp
/// Scoring predictions against generated ground truth: per-type accuracy,
/// AA (unweighted mean over types present), OA (overall correct ratio),
/// a confusion matrix over the closed vocabulary, and answer-category
/// consistency. Also the language-bias shuffle manifest and the
/// question-prior baseline.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "geoqa/answers.hpp"
#include "geoqa/dataset.hpp"
#include "geoqa/errors.hpp"
#include "geoqa/rng.hpp"

namespace geoqa {

struct Prediction {
    std::string question_id;
    std::string answer;
};

inline std::vector<Prediction> read_predictions(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open predictions: " + path);
    std::vector<Prediction> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("question_id") ||
            !j.contains("answer") || !j["question_id"].is_string() || !j["answer"].is_string())
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected {\"question_id\", \"answer\"}");
        out.push_back({j["question_id"].get<std::string>(), j["answer"].get<std::string>()});
    }
    return out;
}

inline void write_predictions(const std::vector<Prediction>& predictions,
                              const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write predictions: " + path);
    for (const Prediction& p : predictions)
        out << nlohmann::json{{"question_id", p.question_id}, {"answer", p.answer}}.dump() << "\n";
}

/// Answer-category groups used for the consistency check and for ordering
/// the confusion matrix: yes/no, rural/urban, numeric (count bins or raw
/// integers), area bins. Unknown strings belong to no group.
enum class AnswerGroup : std::uint8_t { yes_no, rural_urban, numeric, area, none };

inline AnswerGroup answer_group(const std::string& answer) {
    if (answer == "yes" || answer == "no") return AnswerGroup::yes_no;
    if (answer == "rural" || answer == "urban") return AnswerGroup::rural_urban;
    if (answer.size() > 2 && answer.compare(answer.size() - 2, 2, "m2") == 0) {
        const std::string base = answer.substr(0, answer.size() - 2);
        for (const std::string& label : QuantizationScheme::counts().labels)
            if (base == label) return AnswerGroup::area;
    }
    for (const std::string& label : QuantizationScheme::counts().labels)
        if (answer == label) return AnswerGroup::numeric;
    if (!answer.empty() &&
        std::all_of(answer.begin(), answer.end(),
                    [](unsigned char c) { return std::isdigit(c); }))
        return AnswerGroup::numeric;
    return AnswerGroup::none;
}

struct MetricsReport {
    std::map<QuestionType, double> per_type_accuracy;
    std::map<QuestionType, std::pair<std::uint64_t, std::uint64_t>> per_type_counts;  ///< correct/total
    double aa = 0.0;
    double oa = 0.0;
    std::vector<std::string> vocabulary;                ///< confusion row/col order
    std::vector<std::vector<std::uint64_t>> confusion;  ///< [ground truth][prediction]
    std::uint64_t illogical_count = 0;  ///< answered in a different category group
    std::uint64_t n_scored = 0;         ///< all ground-truth questions
    std::uint64_t missing_count = 0;    ///< unanswered questions (scored wrong)
    std::uint64_t invalid_count = 0;    ///< out-of-vocabulary predictions (scored wrong)
    std::vector<std::string> invalid_answers;  ///< distinct OOV strings, sorted
};

/// Guess the vocabulary scale from the ground truth: explicit LR/HR types
/// win; otherwise a raw-integer count answer outside the bin labels means
/// HR. Pure count/presence datasets with tiny counts stay ambiguous, hence
/// the optional explicit override at the call sites.
inline std::vector<std::string> infer_vocabulary(const std::vector<QATriplet>& triplets,
                                                 std::uint32_t hr_max_count = 89) {
    bool hr = false, lr = false;
    for (const QATriplet& t : triplets) {
        if (t.qtype == QuestionType::area) hr = true;
        if (t.qtype == QuestionType::rural_urban) lr = true;
        if (t.qtype == QuestionType::count && answer_group(t.answer) == AnswerGroup::numeric &&
            !t.answer.empty() && std::isdigit(static_cast<unsigned char>(t.answer[0])) &&
            t.answer != "0")
            hr = true;
    }
    if (hr && lr)
        throw ValidationError("dataset mixes LR and HR answer conventions");
    return hr ? hr_vocabulary(hr_max_count) : lr_vocabulary();
}

inline MetricsReport score(const std::vector<Prediction>& predictions,
                           const std::vector<QATriplet>& triplets,
                           std::vector<std::string> vocabulary) {
    std::unordered_map<std::string, std::string> predicted;
    predicted.reserve(predictions.size());
    for (const Prediction& p : predictions)
        if (!predicted.emplace(p.question_id, p.answer).second)
            throw ValidationError("duplicate prediction for question '" + p.question_id + "'");

    std::set<std::string> gt_ids;
    for (const QATriplet& t : triplets)
        if (!gt_ids.insert(t.question_id).second)
            throw ValidationError("duplicate ground-truth question '" + t.question_id + "'");
    for (const Prediction& p : predictions)
        if (!gt_ids.count(p.question_id))
            throw ValidationError("prediction for unknown question '" + p.question_id + "'");

    MetricsReport r;
    r.vocabulary = std::move(vocabulary);
    std::unordered_map<std::string, std::size_t> vocab_index;
    for (std::size_t i = 0; i < r.vocabulary.size(); ++i) vocab_index[r.vocabulary[i]] = i;
    r.confusion.assign(r.vocabulary.size(),
                       std::vector<std::uint64_t>(r.vocabulary.size(), 0));

    std::set<std::string> invalid;
    std::uint64_t correct_total = 0;
    for (const QATriplet& t : triplets) {
        ++r.n_scored;
        auto& [correct, total] = r.per_type_counts[t.qtype];
        ++total;
        const auto gt_at = vocab_index.find(t.answer);
        if (gt_at == vocab_index.end())
            throw ValidationError("ground-truth answer '" + t.answer +
                                  "' is outside the vocabulary");
        const auto p = predicted.find(t.question_id);
        if (p == predicted.end()) {
            ++r.missing_count;
            continue;
        }
        const std::string& answer = p->second;
        if (answer == t.answer) {
            ++correct;
            ++correct_total;
        }
        if (answer_group(answer) != answer_group(t.answer)) ++r.illogical_count;
        const auto pred_at = vocab_index.find(answer);
        if (pred_at == vocab_index.end()) {
            ++r.invalid_count;
            invalid.insert(answer);
            continue;
        }
        ++r.confusion[gt_at->second][pred_at->second];
    }

    r.invalid_answers.assign(invalid.begin(), invalid.end());
    double acc_sum = 0.0;
    for (const auto& [qtype, counts] : r.per_type_counts) {
        const double acc = counts.second == 0 ? 0.0 : double(counts.first) / double(counts.second);
        r.per_type_accuracy[qtype] = acc;
        acc_sum += acc;
    }
    r.aa = r.per_type_counts.empty() ? 0.0 : acc_sum / double(r.per_type_counts.size());
    r.oa = r.n_scored == 0 ? 0.0 : double(correct_total) / double(r.n_scored);
    return r;
}

inline MetricsReport score(const std::vector<Prediction>& predictions,
                           const std::vector<QATriplet>& triplets) {
    return score(predictions, triplets, infer_vocabulary(triplets));
}

inline nlohmann::json metrics_to_json(const MetricsReport& r) {
    nlohmann::json j;
    j["n_scored"] = r.n_scored;
    j["oa"] = r.oa;
    j["aa"] = r.aa;
    nlohmann::json per_type;
    for (const auto& [qtype, acc] : r.per_type_accuracy) {
        const auto& counts = r.per_type_counts.at(qtype);
        per_type[to_string(qtype)] = {
            {"accuracy", acc}, {"correct", counts.first}, {"total", counts.second}};
    }
    j["per_type"] = std::move(per_type);
    j["illogical_count"] = r.illogical_count;
    j["missing_count"] = r.missing_count;
    j["invalid_count"] = r.invalid_count;
    j["invalid_answers"] = r.invalid_answers;
    j["vocabulary"] = r.vocabulary;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.confusion) rows.push_back(row);
    j["confusion"] = std::move(rows);
    return j;
}

/// Confusion matrix as CSV, rows ground truth, columns predictions, in the
/// grouped vocabulary order.
inline std::string confusion_csv(const MetricsReport& r) {
    std::ostringstream out;
    out << "gt\\pred";
    for (const std::string& label : r.vocabulary) out << "," << label;
    out << "\n";
    for (std::size_t i = 0; i < r.vocabulary.size(); ++i) {
        out << r.vocabulary[i];
        for (std::size_t k = 0; k < r.vocabulary.size(); ++k) out << "," << r.confusion[i][k];
        out << "\n";
    }
    return out.str();
}

struct ShuffleManifest {
    std::map<std::string, std::string> reassignment;  ///< question_id -> tile_id
    bool identity = false;  ///< true when fewer than 2 tiles were available
};

/// Reassign every question to a uniformly drawn tile from the test pool
/// (all tiles when no test split exists). Keyed per question id, so the
/// map is independent of triplet order.
inline ShuffleManifest shuffle_manifest(const std::vector<QATriplet>& triplets,
                                        std::uint64_t seed) {
    std::set<std::string> test_pool, all_pool;
    for (const QATriplet& t : triplets) {
        all_pool.insert(t.tile_id);
        if (t.split == Split::test || t.split == Split::test2) test_pool.insert(t.tile_id);
    }
    const std::set<std::string>& chosen = test_pool.empty() ? all_pool : test_pool;
    const std::vector<std::string> pool(chosen.begin(), chosen.end());

    ShuffleManifest m;
    if (pool.size() < 2) {
        m.identity = true;
        for (const QATriplet& t : triplets) m.reassignment[t.question_id] = t.tile_id;
        return m;
    }
    for (const QATriplet& t : triplets) {
        Rng rng(slot_key(seed, t.question_id, 0));
        m.reassignment[t.question_id] = pool[rng.uniform(std::uint32_t(pool.size()))];
    }
    return m;
}

/// Modal answer per question type from training data; ties break toward
/// the lexicographically smaller answer. Unseen types at predict time fall
/// back to the global modal answer.
struct PriorBaseline {
    std::map<QuestionType, std::string> modal;
    std::string global_modal;
};

inline PriorBaseline prior_baseline(const std::vector<QATriplet>& train) {
    if (train.empty()) throw ValidationError("prior_baseline: empty training set");
    std::map<QuestionType, std::map<std::string, std::uint64_t>> hist;
    std::map<std::string, std::uint64_t> global;
    for (const QATriplet& t : train) {
        ++hist[t.qtype][t.answer];
        ++global[t.answer];
    }
    const auto modal_of = [](const std::map<std::string, std::uint64_t>& h) {
        std::string best;
        std::uint64_t best_n = 0;
        for (const auto& [answer, n] : h)
            if (n > best_n) {  // first key wins ties: map iterates lexicographically
                best = answer;
                best_n = n;
            }
        return best;
    };
    PriorBaseline b;
    for (const auto& [qtype, h] : hist) b.modal[qtype] = modal_of(h);
    b.global_modal = modal_of(global);
    return b;
}

inline std::vector<Prediction> predict(const PriorBaseline& baseline,
                                       const std::vector<QATriplet>& questions) {
    std::vector<Prediction> out;
    out.reserve(questions.size());
    for (const QATriplet& q : questions) {
        const auto it = baseline.modal.find(q.qtype);
        out.push_back({q.question_id, it != baseline.modal.end() ? it->second : baseline.global_modal});
    }
    return out;
}

}  // namespace geoqa
