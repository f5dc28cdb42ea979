#include "codebridge/corpus.hpp"

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace codebridge {

namespace {

bool startsWithNoCase(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

bool isUrl(std::string_view chunk) {
  return startsWithNoCase(chunk, "http://") ||
         startsWithNoCase(chunk, "https://") ||
         startsWithNoCase(chunk, "www.");
}

bool isAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Decodes one UTF-8 sequence at s[i]; returns the code point and advances i.
// Invalid sequences yield U+FFFD and consume a single byte.
char32_t decodeUtf8(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + len > s.size()) {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += len;
  return cp;
}

void appendUtf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool isEmoji(char32_t cp) {
  return (cp >= 0x1F000 && cp <= 0x1FAFF) || (cp >= 0x2600 && cp <= 0x27BF) ||
         (cp >= 0x2300 && cp <= 0x23FF) || (cp >= 0x2B00 && cp <= 0x2BFF) ||
         (cp >= 0xE0000 && cp <= 0xE007F) || cp == 0x3030 || cp == 0x303D;
}

// Code points removed without leaving a separator.
bool isJoiner(char32_t cp) {
  return cp == '\'' || cp == 0x2019 || cp == 0x200D ||
         (cp >= 0xFE00 && cp <= 0xFE0F) || cp == 0x200B;
}

bool isSeparator(char32_t cp) {
  if (cp < 0x80) {
    const auto c = static_cast<char>(cp);
    return !((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
             (c >= '0' && c <= '9'));
  }
  return cp == 0xFFFD || (cp >= 0x80 && cp <= 0xBF) || cp == 0xD7 ||
         cp == 0xF7 || (cp >= 0x2000 && cp <= 0x206F) ||
         (cp >= 0x3000 && cp <= 0x303F) || isEmoji(cp);
}

char32_t toLower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp - 'A' + 'a';
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  return cp;
}

std::vector<std::string_view> splitTab(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

struct ParsedRecord {
  std::string id;
  std::string text;
  std::optional<Subset> subset;
};

ParsedRecord parseJsonRecord(std::string_view line) {
  const auto j = nlohmann::json::parse(line);
  if (!j.is_object()) throw std::runtime_error("record is not an object");
  const auto id = j.find("id");
  if (id == j.end() || !id->is_string())
    throw std::runtime_error("missing string field 'id'");
  const auto text = j.find("text");
  if (text == j.end() || !text->is_string())
    throw std::runtime_error("missing string field 'text'");
  ParsedRecord r{id->get<std::string>(), text->get<std::string>(), {}};
  if (const auto subset = j.find("subset");
      subset != j.end() && !subset->is_null()) {
    if (!subset->is_string())
      throw std::runtime_error("field 'subset' is not a string");
    r.subset = parseSubset(subset->get<std::string>());
  }
  return r;
}

ParsedRecord parseTsvRecord(std::string_view line) {
  const auto fields = splitTab(line);
  if (fields.size() < 2 || fields.size() > 3)
    throw std::runtime_error("expected 2 or 3 tab-separated fields, got " +
                             std::to_string(fields.size()));
  ParsedRecord r{std::string(fields[0]), std::string(fields[1]), {}};
  if (fields.size() == 3 && !fields[2].empty())
    r.subset = parseSubset(fields[2]);
  return r;
}

}  // namespace

std::string_view toString(Subset subset) {
  switch (subset) {
    case Subset::En:
      return "en";
    case Subset::HE:
      return "h_e";
    case Subset::Unknown:
      return "unknown";
  }
  return "unknown";
}

Subset parseSubset(std::string_view text) {
  if (text == "en") return Subset::En;
  if (text == "h_e" || text == "he") return Subset::HE;
  if (text == "unknown") return Subset::Unknown;
  throw std::invalid_argument("unknown subset '" + std::string(text) + "'");
}

RecordFormat parseRecordFormat(std::string_view text) {
  if (text == "jsonl") return RecordFormat::Jsonl;
  if (text == "tsv") return RecordFormat::Tsv;
  throw std::invalid_argument("unknown record format '" + std::string(text) +
                              "'");
}

DuplicateIdError::DuplicateIdError(const std::string& id)
    : std::runtime_error("duplicate comment id '" + id + "'"), id_(id) {}

void Corpus::add(Comment comment) {
  if (index_.count(comment.id) != 0) throw DuplicateIdError(comment.id);
  index_.emplace(comment.id, comments_.size());
  comments_.push_back(std::move(comment));
}

const Comment* Corpus::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &comments_[it->second];
}

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pendingSpace = false;
  auto emitSeparator = [&] { pendingSpace = !out.empty(); };

  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && isAsciiSpace(text[pos])) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !isAsciiSpace(text[end])) ++end;
    const auto chunk = text.substr(pos, end - pos);
    pos = end;
    if (chunk.empty()) break;
    emitSeparator();
    if (isUrl(chunk)) continue;

    std::size_t i = 0;
    while (i < chunk.size()) {
      const char32_t cp = decodeUtf8(chunk, i);
      if (isJoiner(cp)) continue;
      if (isSeparator(cp)) {
        emitSeparator();
        continue;
      }
      if (pendingSpace) {
        out.push_back(' ');
        pendingSpace = false;
      }
      appendUtf8(out, toLower(cp));
    }
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view normalized) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    while (pos < normalized.size() && isAsciiSpace(normalized[pos])) ++pos;
    std::size_t end = pos;
    while (end < normalized.size() && !isAsciiSpace(normalized[end])) ++end;
    if (end > pos) tokens.emplace_back(normalized.substr(pos, end - pos));
    pos = end;
  }
  return tokens;
}

Comment makeComment(std::string id, std::string text, Subset subset) {
  Comment c;
  c.tokens = tokenize(normalize(text));
  c.id = std::move(id);
  c.text = std::move(text);
  c.subset = subset;
  return c;
}

IngestResult ingest(std::istream& in, RecordFormat format,
                    std::optional<Subset> defaultSubset) {
  IngestResult result;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ParsedRecord record;
    try {
      record = format == RecordFormat::Jsonl ? parseJsonRecord(line)
                                             : parseTsvRecord(line);
      if (record.id.empty()) throw std::runtime_error("empty id");
    } catch (const std::exception& e) {
      result.errors.push_back({lineNo, e.what()});
      continue;
    }
    const Subset subset =
        record.subset.value_or(defaultSubset.value_or(Subset::Unknown));
    Comment comment =
        makeComment(std::move(record.id), std::move(record.text), subset);
    if (comment.tokens.empty()) result.emptyIds.push_back(comment.id);
    result.corpus.add(std::move(comment));
  }
  return result;
}

IngestResult ingest(const std::filesystem::path& path, RecordFormat format,
                    std::optional<Subset> defaultSubset) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  auto result = ingest(in, format, defaultSubset);
  result.corpus.setName(path.stem().string());
  return result;
}

void writeCorpus(std::ostream& out, const Corpus& corpus,
                 RecordFormat format) {
  for (const auto& c : corpus) {
    if (format == RecordFormat::Jsonl) {
      nlohmann::json j{{"id", c.id},
                       {"text", c.text},
                       {"subset", std::string(toString(c.subset))}};
      out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace)
          << '\n';
    } else {
      if (c.text.find_first_of("\t\n") != std::string::npos ||
          c.id.find_first_of("\t\n") != std::string::npos)
        throw std::invalid_argument("comment '" + c.id +
                                    "' cannot be written as TSV");
      out << c.id << '\t' << c.text << '\t' << toString(c.subset) << '\n';
    }
  }
}

void writeCorpus(const std::filesystem::path& path, const Corpus& corpus,
                 RecordFormat format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  writeCorpus(out, corpus, format);
}

void writeTokens(std::ostream& out, const Corpus& corpus) {
  for (const auto& c : corpus) {
    nlohmann::json j{
        {"id", c.id}, {"tokens", c.tokens}, {"empty", c.tokens.empty()}};
    out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace)
        << '\n';
  }
}

Corpus filterSubset(const Corpus& corpus, Subset subset) {
  Corpus out(corpus.name() + "/" + std::string(toString(subset)));
  for (const auto& c : corpus)
    if (c.subset == subset) out.add(c);
  return out;
}

}  // namespace codebridge
