#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace codebridge {

// Source sub-corpus a comment was collected from.
enum class Subset { En, HE, Unknown };

std::string_view toString(Subset subset);
// Accepts "en", "h_e" (or "he") and "unknown".
Subset parseSubset(std::string_view text);

struct Comment {
  std::string id;
  std::string text;                 // raw, as ingested
  std::vector<std::string> tokens;  // tokenize(normalize(text))
  Subset subset = Subset::Unknown;
};

// Builds a comment with its token list derived from the raw text.
Comment makeComment(std::string id, std::string text,
                    Subset subset = Subset::Unknown);

class DuplicateIdError : public std::runtime_error {
 public:
  explicit DuplicateIdError(const std::string& id);
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

// An ordered collection of comments with unique ids.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void setName(std::string name) { name_ = std::move(name); }

  // Throws DuplicateIdError if the id is already present.
  void add(Comment comment);

  const Comment* find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }

  std::size_t size() const { return comments_.size(); }
  bool empty() const { return comments_.empty(); }
  const Comment& operator[](std::size_t i) const { return comments_[i]; }
  const std::vector<Comment>& comments() const { return comments_; }
  auto begin() const { return comments_.begin(); }
  auto end() const { return comments_.end(); }

 private:
  std::string name_;
  std::vector<Comment> comments_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Lowercases, drops URLs, emoji and punctuation, collapses whitespace.
std::string normalize(std::string_view text);

// Splits normalized text on spaces; never yields empty tokens.
std::vector<std::string> tokenize(std::string_view normalized);

enum class RecordFormat {
  Jsonl,  // {"id": ..., "text": ..., "subset": ...} per line
  Tsv,    // id<TAB>text[<TAB>subset] per line
};

RecordFormat parseRecordFormat(std::string_view text);

struct RecordError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct IngestResult {
  Corpus corpus;
  std::vector<RecordError> errors;
  std::vector<std::string> emptyIds;  // comments whose text had no tokens
};

// Malformed records are reported and skipped; a duplicate id throws.
// `defaultSubset` applies to records that carry no subset field.
IngestResult ingest(std::istream& in, RecordFormat format,
                    std::optional<Subset> defaultSubset = std::nullopt);
IngestResult ingest(const std::filesystem::path& path, RecordFormat format,
                    std::optional<Subset> defaultSubset = std::nullopt);

// Writes raw records so that ingest(writeCorpus(c)) reproduces c.
void writeCorpus(std::ostream& out, const Corpus& corpus,
                 RecordFormat format = RecordFormat::Jsonl);
void writeCorpus(const std::filesystem::path& path, const Corpus& corpus,
                 RecordFormat format = RecordFormat::Jsonl);

// Derived-field file: {"id", "tokens", "empty"} per comment.
void writeTokens(std::ostream& out, const Corpus& corpus);

// Comments of `corpus` whose subset matches.
Corpus filterSubset(const Corpus& corpus, Subset subset);

}  // namespace codebridge
