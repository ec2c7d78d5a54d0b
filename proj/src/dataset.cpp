#include "fairscore/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fairscore/error.hpp"

namespace fairscore {

namespace {

void check_score(double score, std::string_view id) {
    if (!(score >= 0.0 && score <= 1.0)) {
        throw Error(ErrorCode::ScoreOutOfRange,
                    "score of pair '" + std::string(id) + "' is outside [0,1]: " +
                        format_double(score));
    }
}

void check_label(const std::optional<int>& label, std::string_view id) {
    if (label && *label != 0 && *label != 1) {
        throw Error(ErrorCode::MalformedRow,
                    "label of pair '" + std::string(id) + "' must be 0 or 1");
    }
}

// Splits one CSV line. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && cur.empty() && !was_quoted) {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
            was_quoted = false;
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) {
        throw Error(ErrorCode::MalformedRow,
                    "unterminated quote on line " + std::to_string(line_no));
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string quote_if_needed(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

double parse_score(const std::string& field, std::size_t line_no) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec == std::errc::result_out_of_range) {
        throw Error(ErrorCode::ScoreOutOfRange,
                    "score on line " + std::to_string(line_no) + " is outside [0,1]");
    }
    if (ec != std::errc{} || ptr != last || field.empty()) {
        throw Error(ErrorCode::MalformedRow, "cannot parse score '" + field + "' on line " +
                                                 std::to_string(line_no));
    }
    if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::ScoreOutOfRange, "score " + field + " on line " +
                                                    std::to_string(line_no) +
                                                    " is outside [0,1]");
    }
    return v;
}

std::optional<int> parse_label(const std::string& field, std::size_t line_no) {
    if (field.empty()) return std::nullopt;
    if (field == "0") return 0;
    if (field == "1") return 1;
    throw Error(ErrorCode::MalformedRow, "label '" + field + "' on line " +
                                             std::to_string(line_no) + " is not 0, 1 or empty");
}

std::string trim(std::string s) {
    auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

const std::vector<std::string>& header_for(Schema schema) {
    static const std::vector<std::string> pair{"id", "score", "group", "label"};
    static const std::vector<std::string> record{"id", "score", "group_left", "group_right",
                                                 "label"};
    return schema == Schema::PairLevel ? pair : record;
}

}  // namespace

std::string_view to_string(GroupId g) noexcept {
    return g == GroupId::Minority ? "minority" : "majority";
}

GroupId derive_pair_group(const RecordPairRaw& raw) noexcept {
    return (raw.group_left == GroupId::Minority || raw.group_right == GroupId::Minority)
               ? GroupId::Minority
               : GroupId::Majority;
}

const std::string GroupVocabulary::default_majority_ = "b";

GroupId GroupVocabulary::classify(std::string_view token) const {
    if (token == minority_token) return GroupId::Minority;
    if (majority_tokens.empty()) {
        if (!token.empty()) return GroupId::Majority;
    } else if (std::find(majority_tokens.begin(), majority_tokens.end(), token) !=
               majority_tokens.end()) {
        return GroupId::Majority;
    }
    throw Error(ErrorCode::UnknownGroup,
                "group token '" + std::string(token) + "' is not in the declared vocabulary");
}

const std::string& GroupVocabulary::token_for(GroupId g) const {
    if (g == GroupId::Minority) return minority_token;
    return majority_tokens.empty() ? default_majority_ : majority_tokens.front();
}

ScoreDataset::ScoreDataset(std::vector<ScoredPair> pairs) : pairs_(std::move(pairs)) {
    for (const auto& p : pairs_) {
        check_score(p.score, p.id);
        check_label(p.label, p.id);
        if (!p.label) labeled_ = false;
    }
}

std::size_t ScoreDataset::count(GroupId g) const noexcept {
    return static_cast<std::size_t>(std::count_if(
        pairs_.begin(), pairs_.end(), [g](const ScoredPair& p) { return p.group == g; }));
}

std::vector<double> ScoreDataset::scores() const {
    std::vector<double> out;
    out.reserve(pairs_.size());
    for (const auto& p : pairs_) out.push_back(p.score);
    return out;
}

std::vector<double> ScoreDataset::scores(GroupId g) const {
    std::vector<double> out;
    for (const auto& p : pairs_) {
        if (p.group == g) out.push_back(p.score);
    }
    return out;
}

ScoreDataset ScoreDataset::with_scores(std::span<const double> scores) const {
    if (scores.size() != pairs_.size()) {
        throw Error(ErrorCode::LengthMismatch, "replacement score count " +
                                                   std::to_string(scores.size()) +
                                                   " does not match dataset size " +
                                                   std::to_string(pairs_.size()));
    }
    std::vector<ScoredPair> pairs = pairs_;
    for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i].score = scores[i];
    ScoreDataset out(std::move(pairs));
    out.schema_ = schema_;
    out.tokens_ = tokens_;
    return out;
}

ScoreDataset load_dataset(std::istream& in, Schema schema, const GroupVocabulary& vocab) {
    const auto& header = header_for(schema);
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<ScoredPair> pairs;
    std::vector<std::array<std::string, 2>> tokens;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (trim(line).empty()) continue;

        auto fields = split_csv(line, line_no);
        if (fields.size() != header.size()) {
            throw Error(ErrorCode::MalformedRow,
                        "line " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " columns, expected " +
                            std::to_string(header.size()));
        }
        if (!have_header) {
            for (std::size_t i = 0; i < header.size(); ++i) {
                if (trim(fields[i]) != header[i]) {
                    throw Error(ErrorCode::MalformedRow,
                                "header column " + std::to_string(i + 1) + " is '" +
                                    fields[i] + "', expected '" + header[i] + "'");
                }
            }
            have_header = true;
            continue;
        }

        const double score = parse_score(trim(fields[1]), line_no);
        const auto label = parse_label(trim(fields.back()), line_no);
        if (schema == Schema::PairLevel) {
            const auto group = vocab.classify(trim(fields[2]));
            pairs.push_back({std::move(fields[0]), score, group, label});
            tokens.push_back({trim(fields[2]), std::string{}});
        } else {
            RecordPairRaw raw{fields[0], score, vocab.classify(trim(fields[2])),
                              vocab.classify(trim(fields[3])), label};
            pairs.push_back({std::move(raw.id), score, derive_pair_group(raw), label});
            tokens.push_back({trim(fields[2]), trim(fields[3])});
        }
    }
    if (!have_header) {
        throw Error(ErrorCode::MalformedRow, "missing CSV header row");
    }

    ScoreDataset d(std::move(pairs));
    d.schema_ = schema;
    d.tokens_ = std::move(tokens);
    return d;
}

ScoreDataset load_dataset_file(const std::filesystem::path& path, Schema schema,
                               const GroupVocabulary& vocab) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    return load_dataset(in, schema, vocab);
}

void write_dataset(std::ostream& out, const ScoreDataset& d, const GroupVocabulary& vocab) {
    const auto& header = header_for(d.schema());
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << '\n';
    const auto& tokens = d.source_tokens();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto& p = d[i];
        out << quote_if_needed(p.id) << ',' << format_double(p.score) << ',';
        if (d.schema() == Schema::PairLevel) {
            out << quote_if_needed(tokens.empty() ? vocab.token_for(p.group) : tokens[i][0]);
        } else if (tokens.empty()) {
            out << quote_if_needed(vocab.token_for(p.group)) << ','
                << quote_if_needed(vocab.token_for(GroupId::Majority));
        } else {
            out << quote_if_needed(tokens[i][0]) << ',' << quote_if_needed(tokens[i][1]);
        }
        out << ',';
        if (p.label) out << *p.label;
        out << '\n';
    }
}

void write_dataset_file(const std::filesystem::path& path, const ScoreDataset& d,
                        const GroupVocabulary& vocab) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    write_dataset(out, d, vocab);
    if (!out) throw Error(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) return std::to_string(v);
    return std::string(buf.data(), ptr);
}

}  // namespace fairscore
