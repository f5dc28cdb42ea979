#include "codebridge/service.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <mutex>
#include <sstream>

#include "codebridge/eval.hpp"
#include "httplib.h"

namespace codebridge {

using nlohmann::json;

std::string_view toString(AnnotationLabel label) {
  switch (label) {
    case AnnotationLabel::Hope:
      return "hope";
    case AnnotationLabel::NotHope:
      return "not_hope";
    case AnnotationLabel::Skip:
      return "skip";
  }
  return "skip";
}

AnnotationLabel parseAnnotationLabel(std::string_view text) {
  if (text == "hope") return AnnotationLabel::Hope;
  if (text == "not_hope") return AnnotationLabel::NotHope;
  if (text == "skip") return AnnotationLabel::Skip;
  throw std::invalid_argument("unknown label '" + std::string(text) + "'");
}

std::string_view toString(Consensus consensus) {
  switch (consensus) {
    case Consensus::Hope:
      return "hope";
    case Consensus::NotHope:
      return "not_hope";
    case Consensus::Unresolved:
      return "unresolved";
  }
  return "unresolved";
}

json toJson(const AnnotationRecord& r) {
  return json{{"poolId", r.poolId},
              {"label", std::string(toString(r.label))},
              {"annotator", r.annotator},
              {"timestamp", r.timestamp}};
}

namespace {

std::string utcNow() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const std::string& requireString(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw std::invalid_argument(std::string("field '") + key +
                                "' must be a string");
  return j[key].get_ref<const std::string&>();
}

std::optional<int> parsePositiveInt(const std::string& text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || value < 1) return std::nullopt;
  return value;
}

ServiceResponse error(int status, std::string message) {
  return {status, json{{"error", std::move(message)}}};
}

json stagesJson(const std::vector<StageCount>& stages) {
  json out = json::array();
  for (const auto& s : stages)
    out.push_back({{"name", s.name}, {"in", s.in}, {"out", s.out}});
  return out;
}

}  // namespace

AnnotationRecord annotationFromJson(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("record must be an object");
  AnnotationRecord r;
  r.poolId = requireString(j, "poolId");
  r.label = parseAnnotationLabel(requireString(j, "label"));
  r.annotator = requireString(j, "annotator");
  if (r.poolId.empty()) throw std::invalid_argument("poolId is empty");
  if (r.annotator.empty()) throw std::invalid_argument("annotator is empty");
  if (j.contains("timestamp") && !j["timestamp"].is_null())
    r.timestamp = requireString(j, "timestamp");
  return r;
}

Consensus consensusOf(
    const std::map<std::string, AnnotationLabel>& byAnnotator) {
  int hope = 0;
  int notHope = 0;
  for (const auto& [annotator, label] : byAnnotator) {
    if (label == AnnotationLabel::Hope) ++hope;
    if (label == AnnotationLabel::NotHope) ++notHope;
  }
  if (hope > notHope) return Consensus::Hope;
  if (notHope > hope) return Consensus::NotHope;
  return Consensus::Unresolved;
}

std::filesystem::path AnnotationService::roundsPath(
    const std::filesystem::path& labels) {
  auto p = labels;
  p += ".rounds";
  return p;
}

AnnotationService::AnnotationService(ServiceContext context,
                                     std::filesystem::path labelLog)
    : context_(context), labelLog_(std::move(labelLog)) {
  if (!context_.corpus)
    throw std::invalid_argument("service needs a corpus");
  if (context_.table) {
    const Corpus pool = filterSubset(*context_.corpus, context_.pool);
    if (!pool.empty()) index_.emplace(NNIndex::build(pool, *context_.table));
  }
  if (labelLog_.empty()) return;
  replay();
  labelOut_.open(labelLog_, std::ios::app);
  roundsOut_.open(roundsPath(labelLog_), std::ios::app);
  if (!labelOut_ || !roundsOut_)
    throw std::runtime_error("cannot open label log " + labelLog_.string());
}

void AnnotationService::replay() {
  // A final line without a newline is a torn write: it is ignored and cut
  // off so later appends start on a fresh line.
  auto forEachLine = [](const std::filesystem::path& path, auto&& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return;
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string all = buffer.str();
    std::size_t start = 0;
    std::size_t lineNo = 0;
    while (start < all.size()) {
      const auto nl = all.find('\n', start);
      if (nl == std::string::npos) break;
      ++lineNo;
      const std::string line = all.substr(start, nl - start);
      start = nl + 1;
      if (line.empty()) continue;
      try {
        fn(json::parse(line));
      } catch (const std::exception& e) {
        throw ParseError(lineNo, path.string() + ": " + e.what());
      }
    }
    in.close();
    if (start < all.size()) std::filesystem::resize_file(path, start);
  };

  forEachLine(roundsPath(labelLog_), [&](const json& j) {
    SampleBatch batch;
    batch.seedSetName = j.at("seedSetName").get<std::string>();
    for (const auto& m : j.at("members"))
      batch.members.push_back({m.at("poolId").get<std::string>(),
                               m.at("seedId").get<std::string>(),
                               m.at("distance").get<double>(),
                               m.at("rank").get<int>()});
    std::vector<StageCount> stages;
    for (const auto& s : j.at("stages"))
      stages.push_back({s.at("name").get<std::string>(),
                        s.at("in").get<std::size_t>(),
                        s.at("out").get<std::size_t>()});
    if (j.at("round").get<int>() != round_ + 1)
      throw std::runtime_error("rounds are not consecutive");
    acceptBatch(batch, stages);
  });
  forEachLine(labelLog_, [&](const json& j) {
    applyRecord(annotationFromJson(j));
  });
}

void AnnotationService::acceptBatch(const SampleBatch& batch,
                                    const std::vector<StageCount>& stages) {
  ++round_;
  current_ = batch;
  if (round_ == 0)
    stages_ = stages;
  else
    stages_.insert(stages_.end(), stages.begin(), stages.end());
  for (const auto& m : batch.members)
    if (served_.insert(m.poolId).second) servedOrder_.push_back(m.poolId);
}

void AnnotationService::applyRecord(const AnnotationRecord& record) {
  latest_[record.poolId][record.annotator] = record.label;
  ++labelCount_;
}

void AnnotationService::appendRound(const SampleBatch& batch,
                                    const std::vector<StageCount>& stages) {
  if (!roundsOut_.is_open()) return;
  json members = json::array();
  for (const auto& m : batch.members)
    members.push_back({{"poolId", m.poolId},
                       {"seedId", m.seedId},
                       {"distance", m.distance},
                       {"rank", m.rank}});
  json line{{"round", round_ + 1},
            {"seedSetName", batch.seedSetName},
            {"members", members},
            {"stages", stagesJson(stages)}};
  roundsOut_ << line.dump() << '\n';
  roundsOut_.flush();
  if (!roundsOut_) throw std::runtime_error("failed to append round");
}

bool AnnotationService::hasBatch() const {
  std::shared_lock lock(mutex_);
  return round_ >= 0;
}

int AnnotationService::round() const {
  std::shared_lock lock(mutex_);
  return round_ < 0 ? 0 : round_;
}

void AnnotationService::installBatch(const SampleBatch& batch,
                                     const std::vector<StageCount>& stages) {
  std::unique_lock lock(mutex_);
  if (round_ >= 0) throw std::logic_error("a batch is already installed");
  appendRound(batch, stages);
  acceptBatch(batch, stages);
}

ServiceResponse AnnotationService::nextBatch(
    const std::optional<std::string>& annotator,
    const std::optional<std::string>& n) const {
  if (!annotator || annotator->empty())
    return error(400, "query parameter 'annotator' is required");
  std::optional<int> limit;
  if (n) {
    limit = parsePositiveInt(*n);
    if (!limit) return error(400, "'n' must be a positive integer");
  }
  std::shared_lock lock(mutex_);
  if (round_ < 0) return error(404, "no batch has been sampled yet");
  json items = json::array();
  for (const auto& m : current_.members) {
    if (limit && static_cast<int>(items.size()) >= *limit) break;
    const auto it = latest_.find(m.poolId);
    if (it != latest_.end() && it->second.count(*annotator)) continue;
    const Comment* c = context_.corpus->find(m.poolId);
    items.push_back({{"poolId", m.poolId},
                     {"text", c ? json(c->text) : json(nullptr)},
                     {"distance", m.distance},
                     {"seedId", m.seedId},
                     {"rank", m.rank}});
  }
  return {200, items};
}

ServiceResponse AnnotationService::postLabels(const std::string& body) {
  std::vector<AnnotationRecord> records;
  try {
    const json j = json::parse(body);
    if (!j.is_array()) return error(400, "body must be a JSON array");
    for (const auto& item : j) records.push_back(annotationFromJson(item));
  } catch (const std::exception& e) {
    return error(400, e.what());
  }

  std::unique_lock lock(mutex_);
  json unknown = json::array();
  for (const auto& r : records)
    if (!served_.count(r.poolId)) unknown.push_back(r.poolId);
  if (!unknown.empty())
    return {422, json{{"error", "unknown poolId"}, {"unknownIds", unknown}}};

  const std::string now = utcNow();
  for (auto& r : records) {
    if (r.timestamp.empty()) r.timestamp = now;
    if (labelOut_.is_open()) labelOut_ << toJson(r).dump() << '\n';
  }
  if (labelOut_.is_open()) {
    labelOut_.flush();
    if (!labelOut_) return error(500, "failed to append labels");
  }
  for (const auto& r : records) applyRecord(r);
  return {200, json{{"accepted", records.size()}}};
}

ServiceResponse AnnotationService::resample(const std::string& body) {
  bool extract = true;
  int size = 5;
  try {
    const json j = json::parse(body);
    if (!j.is_object()) return error(400, "body must be a JSON object");
    const auto& variant = requireString(j, "variant");
    if (variant == "raw")
      extract = false;
    else if (variant != "extracted")
      return error(400, "variant must be 'raw' or 'extracted'");
    if (j.contains("size")) {
      if (!j["size"].is_number_integer() || j["size"].get<long>() < 1)
        return error(400, "size must be a positive integer");
      size = j["size"].get<int>();
    }
  } catch (const std::exception& e) {
    return error(400, e.what());
  }

  std::unique_lock lock(mutex_);
  if (round_ < 0) return error(404, "no batch has been sampled yet");
  if (!index_ || !context_.model || !context_.table)
    return error(503, "service has no embedding index");

  const auto agreed = consensusLocked();
  Corpus positives("confirmed");
  for (const auto& id : servedOrder_) {
    const auto it = agreed.find(id);
    if (it == agreed.end() || it->second != Consensus::Hope) continue;
    if (const Comment* c = context_.corpus->find(id)) positives.add(*c);
  }
  if (positives.empty()) return error(409, "no confirmed positives yet");

  const auto seeds = buildSeeds(positives, *context_.model, *context_.table,
                                extract, context_.target);
  if (seeds.queries.empty())
    return error(409, "no confirmed positive has a usable seed embedding");
  auto sampled = nnSample(seeds.queries, *index_, size, served_,
                          extract ? "resample(extracted)" : "resample(raw)");
  const std::vector<StageCount> stages{
      {"resample_" + std::to_string(round_ + 1), seeds.queries.size(),
       sampled.batch.size()}};
  appendRound(sampled.batch, stages);
  acceptBatch(sampled.batch, stages);
  return {200, json{{"round", round_}, {"batchSize", current_.size()}}};
}

std::map<std::string, Consensus> AnnotationService::consensusLocked() const {
  std::map<std::string, Consensus> out;
  for (const auto& [id, byAnnotator] : latest_)
    out[id] = consensusOf(byAnnotator);
  return out;
}

std::map<std::string, Consensus> AnnotationService::consensus() const {
  std::shared_lock lock(mutex_);
  return consensusLocked();
}

std::size_t AnnotationService::labelCount() const {
  std::shared_lock lock(mutex_);
  return labelCount_;
}

std::vector<std::string> AnnotationService::servedIds() const {
  std::shared_lock lock(mutex_);
  return servedOrder_;
}

SampleBatch AnnotationService::currentBatch() const {
  std::shared_lock lock(mutex_);
  return current_;
}

ServiceResponse AnnotationService::stats() const {
  std::shared_lock lock(mutex_);
  std::size_t positives = 0;
  std::size_t resolved = 0;
  for (const auto& [id, c] : consensusLocked()) {
    if (c == Consensus::Unresolved) continue;
    ++resolved;
    if (c == Consensus::Hope) ++positives;
  }
  json yield = nullptr;
  if (resolved > 0)
    yield = static_cast<double>(positives) / static_cast<double>(resolved);

  // Kappa over items rated hope/not_hope by the most common number of
  // raters, so every row has the same total.
  std::map<int, int> raterHistogram;
  std::vector<std::vector<int>> rows;
  for (const auto& [id, byAnnotator] : latest_) {
    std::vector<int> row{0, 0};
    for (const auto& [annotator, label] : byAnnotator) {
      if (label == AnnotationLabel::Hope) ++row[0];
      if (label == AnnotationLabel::NotHope) ++row[1];
    }
    rows.push_back(row);
    ++raterHistogram[row[0] + row[1]];
  }
  int modal = 0;
  int best = 0;
  for (const auto& [raters, count] : raterHistogram)
    if (raters >= 2 && count > best) {
      best = count;
      modal = raters;
    }
  json kappa = nullptr;
  if (modal >= 2) {
    std::vector<std::vector<int>> eligible;
    for (const auto& row : rows)
      if (row[0] + row[1] == modal) eligible.push_back(row);
    kappa = fleissKappa(eligible).kappa;
  }

  return {200, json{{"round", round_ < 0 ? 0 : round_},
                    {"stageCounts", stagesJson(stages_)},
                    {"yieldSoFar", yield},
                    {"kappa", kappa},
                    {"labels", labelCount_}}};
}

void mountRoutes(httplib::Server& server, AnnotationService& service) {
  auto send = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto param = [](const httplib::Request& req,
                  const char* key) -> std::optional<std::string> {
    if (!req.has_param(key)) return std::nullopt;
    return req.get_param_value(key);
  };
  server.Get("/batch/next", [&service, send, param](const httplib::Request& req,
                                                    httplib::Response& res) {
    send(res, service.nextBatch(param(req, "annotator"), param(req, "n")));
  });
  server.Post("/labels", [&service, send](const httplib::Request& req,
                                          httplib::Response& res) {
    send(res, service.postLabels(req.body));
  });
  server.Post("/resample", [&service, send](const httplib::Request& req,
                                            httplib::Response& res) {
    send(res, service.resample(req.body));
  });
  server.Get("/stats", [&service, send](const httplib::Request&,
                                        httplib::Response& res) {
    send(res, service.stats());
  });
}

int servicePortFromEnv() {
  const char* env = std::getenv("CODEBRIDGE_PORT");
  if (!env || !*env) return 8080;
  const auto port = parsePositiveInt(env);
  if (!port || *port > 65535)
    throw std::invalid_argument("CODEBRIDGE_PORT must be a port number");
  return *port;
}

}  // namespace codebridge
