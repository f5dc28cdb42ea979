#include "codebridge/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <system_error>

namespace codebridge {

namespace {

void checkRow(std::span<const double> v, int dim, std::string_view key) {
  if (static_cast<int>(v.size()) != dim)
    throw std::invalid_argument("vector for '" + std::string(key) + "' has " +
                                std::to_string(v.size()) +
                                " components, expected " +
                                std::to_string(dim));
  for (double x : v)
    if (!std::isfinite(x))
      throw std::invalid_argument("vector for '" + std::string(key) +
                                  "' has a non-finite component");
}

std::size_t utf8Length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  if ((lead & 0xF8) == 0xF0) return 4;
  return 1;
}

std::size_t codePoints(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size();
       i += utf8Length(static_cast<unsigned char>(s[i])))
    ++n;
  return n;
}

std::vector<std::string_view> splitSpaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ') ++end;
    if (end > pos) out.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

template <typename T>
T parseNumber(std::string_view s, std::size_t lineNo, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(lineNo, std::string("non-numeric ") + what + " '" +
                                 std::string(s) + "'");
  return value;
}

// Reads "count dim" followed by `count` rows; calls sink(key, vector).
template <typename Sink>
int readRows(std::istream& in, Sink&& sink) {
  std::string line;
  std::size_t lineNo = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  ++lineNo;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = splitSpaces(line);
  if (header.size() != 2)
    throw ParseError(lineNo, "header must be 'count dim'");
  const auto count = parseNumber<std::size_t>(header[0], lineNo, "count");
  const auto dim = parseNumber<int>(header[1], lineNo, "dimension");
  if (dim <= 0) throw ParseError(lineNo, "dimension must be positive");

  Vector row(static_cast<std::size_t>(dim));
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (rows == count)
      throw ParseError(lineNo, "more rows than the header's count " +
                                   std::to_string(count));
    const auto fields = splitSpaces(line);
    if (fields.size() != static_cast<std::size_t>(dim) + 1)
      throw ParseError(lineNo, "expected " + std::to_string(dim) +
                                   " components, got " +
                                   std::to_string(fields.size() - 1));
    for (int d = 0; d < dim; ++d)
      row[d] = parseNumber<double>(fields[d + 1], lineNo, "component");
    try {
      sink(std::string(fields[0]), row);
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineNo, e.what());
    }
    ++rows;
  }
  if (rows != count)
    throw ParseError(lineNo, "header declares " + std::to_string(count) +
                                 " rows, found " + std::to_string(rows));
  return dim;
}

void writeRow(std::ostream& out, const std::string& key,
              std::span<const double> v) {
  out << key;
  for (double x : v) out << ' ' << formatDouble(x);
  out << '\n';
}

}  // namespace

EmbeddingTable::EmbeddingTable(int dim) : dim_(dim) {
  if (dim <= 0) throw std::invalid_argument("dimension must be positive");
}

void EmbeddingTable::addEntry(std::string token, std::span<const double> v) {
  checkRow(v, dim_, token);
  if (index_.count(token) != 0)
    throw std::invalid_argument("duplicate token '" + token + "'");
  index_.emplace(token, tokens_.size());
  tokens_.push_back(std::move(token));
  data_.insert(data_.end(), v.begin(), v.end());
}

void EmbeddingTable::addSubword(std::string ngram, std::span<const double> v) {
  checkRow(v, dim_, ngram);
  if (subwordIndex_.count(ngram) != 0)
    throw std::invalid_argument("duplicate n-gram '" + ngram + "'");
  subwordIndex_.emplace(ngram, subwords_.size());
  subwords_.push_back(std::move(ngram));
  subwordData_.insert(subwordData_.end(), v.begin(), v.end());
}

const double* EmbeddingTable::find(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? nullptr : data_.data() + it->second * dim_;
}

const double* EmbeddingTable::findSubword(std::string_view ngram) const {
  const auto it = subwordIndex_.find(std::string(ngram));
  return it == subwordIndex_.end() ? nullptr
                                   : subwordData_.data() + it->second * dim_;
}

std::span<const double> EmbeddingTable::row(std::size_t i) const {
  return {data_.data() + i * dim_, static_cast<std::size_t>(dim_)};
}

std::span<const double> EmbeddingTable::subwordRow(std::size_t i) const {
  return {subwordData_.data() + i * dim_, static_cast<std::size_t>(dim_)};
}

void EmbeddingTable::setNgramRange(int minn, int maxn) {
  if (minn < 1 || maxn < minn)
    throw std::invalid_argument("invalid n-gram range");
  minn_ = minn;
  maxn_ = maxn;
}

bool EmbeddingTable::operator==(const EmbeddingTable& other) const {
  return dim_ == other.dim_ && minn_ == other.minn_ && maxn_ == other.maxn_ &&
         tokens_ == other.tokens_ && data_ == other.data_ &&
         subwords_ == other.subwords_ && subwordData_ == other.subwordData_;
}

std::vector<std::string> charNgrams(std::string_view word, int minn,
                                    int maxn) {
  const std::string bracketed = "<" + std::string(word) + ">";
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < bracketed.size();
       i += utf8Length(static_cast<unsigned char>(bracketed[i])))
    starts.push_back(i);
  const std::size_t n = starts.size();
  starts.push_back(bracketed.size());

  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (int len = minn; len <= maxn; ++len) {
      const std::size_t j = i + static_cast<std::size_t>(len);
      if (j > n) break;
      if (i == 0 && j == n) continue;
      out.emplace_back(bracketed.substr(starts[i], starts[j] - starts[i]));
    }
  }
  return out;
}

ResolvedVector tokenVector(const EmbeddingTable& table,
                           std::string_view token) {
  const auto dim = static_cast<std::size_t>(table.dim());
  ResolvedVector r{Vector(dim, 0.0), false};
  if (const double* v = table.find(token)) {
    std::copy(v, v + dim, r.vector.begin());
    return r;
  }
  std::size_t found = 0;
  if (table.subwordCount() > 0) {
    for (const auto& ngram : charNgrams(token, table.minn(), table.maxn())) {
      if (const double* v = table.findSubword(ngram)) {
        for (std::size_t d = 0; d < dim; ++d) r.vector[d] += v[d];
        ++found;
      }
    }
  }
  if (found == 0) {
    r.oov = true;
    return r;
  }
  for (double& x : r.vector) x /= static_cast<double>(found);
  return r;
}

ResolvedVector docEmbedding(const EmbeddingTable& table,
                            std::span<const std::string> tokens) {
  const auto dim = static_cast<std::size_t>(table.dim());
  ResolvedVector r{Vector(dim, 0.0), false};
  std::size_t found = 0;
  for (const auto& token : tokens) {
    const auto tv = tokenVector(table, token);
    if (tv.oov) continue;
    for (std::size_t d = 0; d < dim; ++d) r.vector[d] += tv.vector[d];
    ++found;
  }
  if (found == 0) {
    r.oov = true;
    return r;
  }
  for (double& x : r.vector) x /= static_cast<double>(found);
  return r;
}

double dot(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double norm(std::span<const double> u) { return std::sqrt(dot(u, u)); }

double cosineDistance(std::span<const double> u, std::span<const double> v,
                      double normU, double normV) {
  if (u.size() != v.size())
    throw std::invalid_argument("cosineDistance: dimension mismatch");
  if (normU == 0.0 || normV == 0.0) return 1.0;
  const double cos = dot(u, v) / (normU * normV);
  return 1.0 - std::clamp(cos, -1.0, 1.0);
}

double cosineDistance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw std::invalid_argument("cosineDistance: dimension mismatch");
  return cosineDistance(u, v, norm(u), norm(v));
}

double euclideanDistance(std::span<const double> u,
                         std::span<const double> v) {
  if (u.size() != v.size())
    throw std::invalid_argument("euclideanDistance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    s += d * d;
  }
  return std::sqrt(s);
}

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line) {}

std::string formatDouble(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("cannot format double");
  return std::string(buf, ptr);
}

EmbeddingTable readEmbeddings(std::istream& in) {
  std::optional<EmbeddingTable> table;
  const int dim = readRows(in, [&](std::string key, const Vector& v) {
    if (!table) table.emplace(static_cast<int>(v.size()));
    table->addEntry(std::move(key), v);
  });
  if (!table) table.emplace(dim);
  return std::move(*table);
}

void readSubwords(std::istream& in, EmbeddingTable& table) {
  int minn = std::numeric_limits<int>::max();
  int maxn = 0;
  const int dim = readRows(in, [&](std::string key, const Vector& v) {
    const int len = static_cast<int>(codePoints(key));
    minn = std::min(minn, len);
    maxn = std::max(maxn, len);
    table.addSubword(std::move(key), v);
  });
  if (dim != table.dim())
    throw ParseError(1, "subword dimension " + std::to_string(dim) +
                            " does not match table dimension " +
                            std::to_string(table.dim()));
  if (maxn > 0) table.setNgramRange(minn, maxn);
}

std::filesystem::path subwordPath(const std::filesystem::path& vectorsPath) {
  auto p = vectorsPath;
  p += ".subwords";
  return p;
}

EmbeddingTable loadEmbeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  auto table = readEmbeddings(in);
  const auto sub = subwordPath(path);
  if (std::filesystem::exists(sub)) {
    std::ifstream sin(sub);
    readSubwords(sin, table);
  }
  return table;
}

void writeEmbeddings(std::ostream& out, const EmbeddingTable& table) {
  out << table.size() << ' ' << table.dim() << '\n';
  for (std::size_t i = 0; i < table.size(); ++i)
    writeRow(out, table.tokens()[i], table.row(i));
}

void writeSubwords(std::ostream& out, const EmbeddingTable& table) {
  out << table.subwordCount() << ' ' << table.dim() << '\n';
  for (std::size_t i = 0; i < table.subwordCount(); ++i)
    writeRow(out, table.subwords()[i], table.subwordRow(i));
}

void saveEmbeddings(const std::filesystem::path& path,
                    const EmbeddingTable& table) {
  {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    writeEmbeddings(out, table);
  }
  if (table.subwordCount() > 0) {
    std::ofstream out(subwordPath(path));
    if (!out) throw std::runtime_error("cannot write subword file");
    writeSubwords(out, table);
  }
}

}  // namespace codebridge
