#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fairscore {

enum class GroupId : std::uint8_t { Minority, Majority };

inline GroupId other(GroupId g) noexcept {
    return g == GroupId::Minority ? GroupId::Majority : GroupId::Minority;
}

std::string_view to_string(GroupId g) noexcept;

struct ScoredPair {
    std::string id;
    double score = 0.0;
    GroupId group = GroupId::Majority;
    std::optional<int> label;  // 0 or 1

    friend bool operator==(const ScoredPair&, const ScoredPair&) = default;
};

/// A pair before group derivation: one sensitive-attribute value per record.
struct RecordPairRaw {
    std::string id;
    double score = 0.0;
    GroupId group_left = GroupId::Majority;
    GroupId group_right = GroupId::Majority;
    std::optional<int> label;
};

/// A pair is minority when either of its records is.
GroupId derive_pair_group(const RecordPairRaw& raw) noexcept;

enum class Schema { PairLevel, RecordLevel };

/// Maps CSV group tokens onto the two groups. When `majority_tokens` is empty
/// every non-empty token other than the minority token is Majority.
struct GroupVocabulary {
    std::string minority_token = "a";
    std::vector<std::string> majority_tokens;

    GroupId classify(std::string_view token) const;
    const std::string& token_for(GroupId g) const;

private:
    static const std::string default_majority_;
};

/// Immutable, validated collection of scored pairs.
class ScoreDataset {
public:
    ScoreDataset() = default;
    explicit ScoreDataset(std::vector<ScoredPair> pairs);

    std::span<const ScoredPair> pairs() const noexcept { return pairs_; }
    const ScoredPair& operator[](std::size_t i) const { return pairs_[i]; }
    std::size_t size() const noexcept { return pairs_.size(); }
    bool empty() const noexcept { return pairs_.empty(); }

    /// True iff no pair is missing its label (vacuously true when empty).
    bool labeled() const noexcept { return labeled_; }
    std::size_t count(GroupId g) const noexcept;

    std::vector<double> scores() const;
    std::vector<double> scores(GroupId g) const;

    /// Same ids, groups, labels and source tokens; scores replaced. Scores are
    /// validated like any other construction.
    ScoreDataset with_scores(std::span<const double> scores) const;

    Schema schema() const noexcept { return schema_; }

    /// Original group tokens per pair (left/right; right is empty for
    /// pair-level input). Empty when the dataset was built in memory.
    const std::vector<std::array<std::string, 2>>& source_tokens() const noexcept {
        return tokens_;
    }

    friend bool operator==(const ScoreDataset& a, const ScoreDataset& b) {
        return a.pairs_ == b.pairs_ && a.schema_ == b.schema_ && a.tokens_ == b.tokens_;
    }

private:
    friend ScoreDataset load_dataset(std::istream&, Schema, const GroupVocabulary&);

    std::vector<ScoredPair> pairs_;
    bool labeled_ = true;
    Schema schema_ = Schema::PairLevel;
    std::vector<std::array<std::string, 2>> tokens_;
};

/// Parses a CSV with a header row. Pair-level columns are
/// `id,score,group,label`; record-level columns are
/// `id,score,group_left,group_right,label`. The label cell may be empty.
ScoreDataset load_dataset(std::istream& in, Schema schema, const GroupVocabulary& vocab);
ScoreDataset load_dataset_file(const std::filesystem::path& path, Schema schema,
                               const GroupVocabulary& vocab);

/// Writes the dataset back in its own schema, reusing source tokens when present.
void write_dataset(std::ostream& out, const ScoreDataset& d, const GroupVocabulary& vocab);
void write_dataset_file(const std::filesystem::path& path, const ScoreDataset& d,
                        const GroupVocabulary& vocab);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

}  // namespace fairscore
