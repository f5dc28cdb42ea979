#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "CLI11.hpp"
#include "codebridge/bridge.hpp"
#include "codebridge/classifier.hpp"
#include "codebridge/cmi.hpp"
#include "codebridge/corpus.hpp"
#include "codebridge/embedding.hpp"
#include "codebridge/eval.hpp"
#include "codebridge/langid.hpp"
#include "codebridge/sampler.hpp"
#include "codebridge/service.hpp"
#include "codebridge/synthetic.hpp"
#include "httplib.h"
#include "json.hpp"

namespace cb = codebridge;
using nlohmann::json;

namespace {

cb::RecordFormat formatFor(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".tsv") == 0
             ? cb::RecordFormat::Tsv
             : cb::RecordFormat::Jsonl;
}

cb::Corpus readCorpus(const std::string& path,
                      std::optional<cb::Subset> subset = std::nullopt) {
  auto result = cb::ingest(std::filesystem::path(path), formatFor(path), subset);
  for (const auto& e : result.errors)
    std::cerr << path << ":" << e.line << ": " << e.message << "\n";
  result.corpus.setName(std::filesystem::path(path).stem().string());
  return std::move(result.corpus);
}

std::ofstream openOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::vector<std::string> splitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// {"id", "labels": [...]} per line.
std::vector<cb::TokenLabeling> readLabelings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<cb::TokenLabeling> out;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    try {
      const auto j = json::parse(line);
      cb::TokenLabeling l{j.at("id").get<std::string>(), {}};
      for (const auto& s : j.at("labels"))
        l.labels.push_back(cb::parseLanguage(s.get<std::string>()));
      out.push_back(std::move(l));
    } catch (const std::exception& e) {
      throw cb::ParseError(lineNo, path + ": " + e.what());
    }
  }
  return out;
}

json labelingJson(const cb::Comment& c, const cb::TokenLabeling& l) {
  json labels = json::array();
  for (auto x : l.labels) labels.push_back(std::string(cb::toString(x)));
  return json{{"id", c.id}, {"tokens", c.tokens}, {"labels", labels}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Code-mixed comment mining: embeddings, language id, CMI, "
               "hope filtering and nearest-neighbour sampling"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Normalize and tokenize records");
  std::string inPath, outPath, formatText, subsetText;
  ingest->add_option("--in", inPath, "JSONL or TSV records")->required();
  ingest->add_option("--out", outPath, "Output directory")->required();
  ingest->add_option("--format", formatText, "jsonl|tsv (default: by extension)");
  ingest->add_option("--subset", subsetText, "Subset for records without one");
  ingest->callback([&] {
    const auto format =
        formatText.empty() ? formatFor(inPath) : cb::parseRecordFormat(formatText);
    std::optional<cb::Subset> subset;
    if (!subsetText.empty()) subset = cb::parseSubset(subsetText);
    auto result = cb::ingest(std::filesystem::path(inPath), format, subset);
    for (const auto& e : result.errors)
      std::cerr << inPath << ":" << e.line << ": " << e.message << "\n";
    const std::filesystem::path dir(outPath);
    std::filesystem::create_directories(dir);
    const auto name = std::filesystem::path(inPath).filename();
    cb::writeCorpus(dir / name, result.corpus, format);
    auto tokens = openOut((dir / name.stem()).string() + ".tokens.jsonl");
    cb::writeTokens(tokens, result.corpus);
    std::cout << "comments " << result.corpus.size() << " skipped "
              << result.errors.size() << " empty " << result.emptyIds.size()
              << "\n";
  });

  // embed
  auto* embed = app.add_subcommand("embed", "Train or inspect embeddings");
  embed->require_subcommand(1);
  auto* embedTrain = embed->add_subcommand("train", "Skip-gram training");
  std::vector<std::string> corpora;
  cb::TrainConfig tc;
  embedTrain->add_option("corpus", corpora, "Corpus files")->required();
  embedTrain->add_option("-o,--out", outPath, "Vector file")->required();
  embedTrain->add_option("--dim", tc.dim)->capture_default_str();
  embedTrain->add_option("--window", tc.window)->capture_default_str();
  embedTrain->add_option("--epochs", tc.epochs)->capture_default_str();
  embedTrain->add_option("--min-count", tc.minCount)->capture_default_str();
  embedTrain->add_option("--negatives", tc.negatives)->capture_default_str();
  embedTrain->add_option("--minn", tc.minn)->capture_default_str();
  embedTrain->add_option("--maxn", tc.maxn)->capture_default_str();
  embedTrain->add_option("--lr", tc.learningRate)->capture_default_str();
  embedTrain->add_option("--seed", tc.seed)->capture_default_str();
  embedTrain->add_option("--threads", tc.threads)->capture_default_str();
  embedTrain->callback([&] {
    cb::Corpus all("train");
    for (const auto& path : corpora)
      for (const auto& c : readCorpus(path)) all.add(c);
    const auto table = cb::trainEmbeddings(all, tc);
    cb::saveEmbeddings(outPath, table);
    std::cout << "tokens " << table.size() << " subwords "
              << table.subwordCount() << " dim " << table.dim() << "\n";
  });
  auto* embedLoad = embed->add_subcommand("load", "Load and summarize vectors");
  std::string vectorsPath;
  embedLoad->add_option("vectors", vectorsPath)->required();
  embedLoad->callback([&] {
    const auto table = cb::loadEmbeddings(vectorsPath);
    std::cout << "tokens " << table.size() << " subwords "
              << table.subwordCount() << " dim " << table.dim() << "\n";
  });

  // langid
  auto* langid = app.add_subcommand("langid", "Language clusters and labels");
  langid->require_subcommand(1);
  std::string corpusPath, modelPath;
  auto* fit = langid->add_subcommand("fit", "k-means over document vectors");
  std::size_t k = 2;
  std::uint64_t seed = 1;
  double epsilon = 0.1;
  std::string anchorsEn = "the,and", anchorsHe = "hai,nahi";
  fit->add_option("corpus", corpusPath)->required();
  fit->add_option("--vectors", vectorsPath)->required();
  fit->add_option("-o,--out", outPath)->required();
  fit->add_option("-k", k)->capture_default_str();
  fit->add_option("--seed", seed)->capture_default_str();
  fit->add_option("--epsilon", epsilon)->capture_default_str();
  fit->callback([&] {
    const auto table = cb::loadEmbeddings(vectorsPath);
    const auto corpus = readCorpus(corpusPath);
    std::vector<cb::Vector> docs;
    for (const auto& c : corpus) {
      auto v = cb::docEmbedding(table, c.tokens);
      if (!v.oov) docs.push_back(std::move(v.vector));
    }
    auto result = cb::fitClusters(docs, k, seed);
    result.model.epsilon = epsilon;
    cb::saveClusterModel(outPath, result.model);
    std::cout << "documents " << docs.size() << " iterations "
              << result.iterations << (result.converged ? " converged" : "")
              << "\n";
  });
  auto* anchor = langid->add_subcommand("anchor", "Name clusters by anchor tokens");
  anchor->add_option("--model", modelPath)->required();
  anchor->add_option("--vectors", vectorsPath)->required();
  anchor->add_option("-o,--out", outPath)->required();
  anchor->add_option("--anchors-en", anchorsEn)->capture_default_str();
  anchor->add_option("--anchors-he", anchorsHe)->capture_default_str();
  anchor->callback([&] {
    const auto table = cb::loadEmbeddings(vectorsPath);
    auto model = cb::loadClusterModel(modelPath);
    model.labels.clear();
    model = cb::anchorClusters(
        std::move(model), {splitList(anchorsEn), splitList(anchorsHe)}, table);
    cb::saveClusterModel(outPath, model);
    std::cout << "en cluster " << model.clusterOf(cb::Language::En)
              << " h_e cluster " << model.clusterOf(cb::Language::HE) << "\n";
  });
  std::optional<double> epsilonOverride;
  auto loadModel = [&] {
    auto model = cb::loadClusterModel(modelPath);
    if (epsilonOverride) model.epsilon = *epsilonOverride;
    return model;
  };
  auto* label = langid->add_subcommand("label", "Per-token language labels");
  label->add_option("corpus", corpusPath)->required();
  label->add_option("--vectors", vectorsPath)->required();
  label->add_option("--model", modelPath)->required();
  label->add_option("--epsilon", epsilonOverride, "Override the model's epsilon");
  label->callback([&] {
    const auto table = cb::loadEmbeddings(vectorsPath);
    const auto model = loadModel();
    for (const auto& c : readCorpus(corpusPath))
      std::cout << labelingJson(c, cb::labelComment(model, table, c)).dump()
                << "\n";
  });
  auto* neutral = langid->add_subcommand("neutral", "Most frequent neutral tokens");
  std::size_t topN = 20;
  neutral->add_option("corpus", corpusPath)->required();
  neutral->add_option("--vectors", vectorsPath)->required();
  neutral->add_option("--model", modelPath)->required();
  neutral->add_option("--top", topN)->capture_default_str();
  neutral->add_option("--epsilon", epsilonOverride, "Override the model's epsilon");
  neutral->callback([&] {
    const auto table = cb::loadEmbeddings(vectorsPath);
    const auto model = loadModel();
    for (const auto& [token, count] :
         cb::neutralLexicon(model, table, readCorpus(corpusPath), topN))
      std::cout << token << "\t" << count << "\n";
  });

  // cmi
  auto* cmi = app.add_subcommand("cmi", "Code Mixing Index");
  cmi->require_subcommand(1);
  auto* score = cmi->add_subcommand("score", "Estimated CMI per comment");
  score->add_option("corpus", corpusPath)->required();
  score->add_option("--vectors", vectorsPath)->required();
  score->add_option("--model", modelPath)->required();
  score->callback([&] {
    const auto table = cb::loadEmbeddings(vectorsPath);
    const auto model = cb::loadClusterModel(modelPath);
    for (const auto& c : readCorpus(corpusPath))
      cb::writeCmiReport(std::cout, cb::estimateCMI(model, table, c));
  });
  auto* select = cmi->add_subcommand("select", "Keep comments with CMI >= threshold");
  double threshold = 0.4;
  select->add_option("corpus", corpusPath)->required();
  select->add_option("--vectors", vectorsPath)->required();
  select->add_option("--model", modelPath)->required();
  select->add_option("-o,--out", outPath)->required();
  select->add_option("--threshold", threshold)->capture_default_str();
  select->callback([&] {
    const auto table = cb::loadEmbeddings(vectorsPath);
    const auto model = cb::loadClusterModel(modelPath);
    const auto corpus = readCorpus(corpusPath);
    const auto sel = cb::selectCodeMixed(corpus, model, table, threshold);
    cb::writeCorpus(std::filesystem::path(outPath), sel.selected);
    std::cout << "selected " << sel.selected.size() << " of " << corpus.size()
              << "\n";
  });
  auto* gold = cmi->add_subcommand("gold", "CMI of labelled token sequences");
  std::string labelsPath;
  gold->add_option("labels", labelsPath, "JSONL {id, labels}")->required();
  gold->callback([&] {
    for (const auto& l : readLabelings(labelsPath))
      cb::writeCmiReport(std::cout, cb::computeCMI(l));
  });

  // hope
  auto* hope = app.add_subcommand("hope", "Hope-speech classifier");
  hope->require_subcommand(1);
  auto* hopeTrain = hope->add_subcommand("train", "Logistic regression");
  cb::HopeTrainConfig hc;
  hopeTrain->add_option("corpus", corpusPath)->required();
  hopeTrain->add_option("--labels", labelsPath, "id 0|1 per line")->required();
  hopeTrain->add_option("--vectors", vectorsPath)->required();
  hopeTrain->add_option("-o,--out", outPath)->required();
  hopeTrain->add_option("--epochs", hc.epochs)->capture_default_str();
  hopeTrain->add_option("--l2", hc.l2)->capture_default_str();
  hopeTrain->add_option("--lr", hc.learningRate)->capture_default_str();
  hopeTrain->add_option("--threshold", hc.threshold)->capture_default_str();
  hopeTrain->add_option("--seed", hc.seed)->capture_default_str();
  hopeTrain->callback([&] {
    const auto table = cb::loadEmbeddings(vectorsPath);
    const auto labels = cb::loadLabels(labelsPath);
    const auto model =
        cb::trainHopeClassifier(table, readCorpus(corpusPath), labels, hc);
    cb::saveHopeModel(outPath, model);
  });
  auto* hopePredict = hope->add_subcommand("predict", "Score comments");
  hopePredict->add_option("corpus", corpusPath)->required();
  hopePredict->add_option("--vectors", vectorsPath)->required();
  hopePredict->add_option("--model", modelPath)->required();
  hopePredict->callback([&] {
    const auto table = cb::loadEmbeddings(vectorsPath);
    const auto model = cb::loadHopeModel(modelPath);
    for (const auto& c : readCorpus(corpusPath)) {
      const auto p = model.predict(table, c);
      std::cout << c.id << "\t" << cb::formatDouble(p.score) << "\t"
                << (p.positive ? 1 : 0) << "\n";
    }
  });

  auto* hopeFilter = hope->add_subcommand("filter", "Keep predicted positives");
  hopeFilter->add_option("corpus", corpusPath)->required();
  hopeFilter->add_option("--vectors", vectorsPath)->required();
  hopeFilter->add_option("--model", modelPath)->required();
  hopeFilter->add_option("-o,--out", outPath)->required();
  hopeFilter->callback([&] {
    const auto table = cb::loadEmbeddings(vectorsPath);
    const auto model = cb::loadHopeModel(modelPath);
    const auto corpus = readCorpus(corpusPath);
    const auto sel = cb::filterHope(model, table, corpus);
    cb::writeCorpus(std::filesystem::path(outPath), sel.positives);
    std::cout << "positives " << sel.positives.size() << " of " << corpus.size()
              << "\n";
  });

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "End-to-end sampling");
  pipeline->require_subcommand(1);
  auto* pipelineRun = pipeline->add_subcommand("run", "Run every stage");
  std::string hopePath, batchPath, stagesPath, confirmedPath, poolText = "h_e";
  cb::PipelineConfig pc;
  pipelineRun->add_option("corpus", corpusPath)->required();
  pipelineRun->add_option("--vectors", vectorsPath)->required();
  pipelineRun->add_option("--model", modelPath)->required();
  pipelineRun->add_option("--hope", hopePath)->required();
  pipelineRun->add_option("-o,--out", batchPath, "Batch TSV")->required();
  pipelineRun->add_option("--stages", stagesPath, "Stage report TSV");
  pipelineRun->add_option("--size", pc.size)->capture_default_str();
  pipelineRun->add_option("--cmi-threshold", pc.cmiThreshold)
      ->capture_default_str();
  pipelineRun->add_option("--pool", poolText)->capture_default_str();
  pipelineRun->add_option("--confirmed", confirmedPath,
                          "Labels file restricting seeds to confirmed positives");
  pipelineRun->add_flag("--extract,!--raw", pc.extract,
                        "Query with the h_e part of each seed (default) or the "
                        "whole comment");
  pipelineRun->callback([&] {
    const auto table = cb::loadEmbeddings(vectorsPath);
    const auto model = cb::loadClusterModel(modelPath);
    const auto scorer = cb::loadHopeModel(hopePath);
    pc.pool = cb::parseSubset(poolText);
    if (!confirmedPath.empty()) {
      pc.confirmedPositives.emplace();
      for (const auto& l : cb::loadLabels(confirmedPath))
        if (l.positive) pc.confirmedPositives->insert(l.commentId);
    }
    const auto result =
        cb::runPipeline(readCorpus(corpusPath), model, table, scorer, pc);
    cb::saveBatch(batchPath, result.batch);
    if (!stagesPath.empty()) {
      auto out = openOut(stagesPath);
      cb::writeStageReport(out, result.stages);
    }
    cb::writeStageReport(std::cout, result.stages);
  });

  // sample
  auto* sample = app.add_subcommand("sample", "Sampling primitives");
  sample->require_subcommand(1);
  auto* nn = sample->add_subcommand("nn", "Nearest-neighbour expansion");
  std::string seedsPath, poolPath;
  int size = 5;
  nn->add_option("--seeds", seedsPath)->required();
  nn->add_option("--pool", poolPath)->required();
  nn->add_option("--vectors", vectorsPath)->required();
  nn->add_option("--model", modelPath, "Cluster model; enables --extract");
  nn->add_option("--size", size)->capture_default_str();
  nn->add_option("-o,--out", batchPath)->required();
  bool extract = false;
  nn->add_flag("--extract", extract, "Query with the h_e part of each seed");
  nn->callback([&] {
    const auto table = cb::loadEmbeddings(vectorsPath);
    if (extract && modelPath.empty())
      throw CLI::ValidationError("--extract needs --model");
    const cb::ClusterModel model =
        modelPath.empty() ? cb::ClusterModel{} : cb::loadClusterModel(modelPath);
    const auto seeds = cb::buildSeeds(readCorpus(seedsPath), model, table, extract);
    for (const auto& id : seeds.skipped)
      std::cerr << "skipped seed " << id << "\n";
    const auto index = cb::NNIndex::build(readCorpus(poolPath), table);
    const auto result = cb::nnSample(seeds.queries, index, size);
    for (const auto& s : result.shortfalls)
      std::cerr << "seed " << s.seedId << " got " << s.added << " of "
                << s.requested << "\n";
    cb::saveBatch(batchPath, result.batch);
  });
  auto* randomCmd = sample->add_subcommand("random", "Uniform sample");
  std::size_t n = 100;
  randomCmd->add_option("pool", poolPath)->required();
  randomCmd->add_option("-n,--n", n)->capture_default_str();
  randomCmd->add_option("--seed", seed)->capture_default_str();
  randomCmd->add_option("-o,--out", outPath)->required();
  randomCmd->callback([&] {
    cb::writeCorpus(std::filesystem::path(outPath),
                    cb::randomSample(readCorpus(poolPath), n, seed));
  });

  // eval
  auto* eval = app.add_subcommand("eval", "Measurements");
  eval->require_subcommand(1);
  auto* confusion = eval->add_subcommand("confusion", "Token confusion matrix");
  std::string goldPath, predPath;
  confusion->add_option("gold", goldPath, "JSONL {id, labels}")->required();
  confusion->add_option("pred", predPath, "JSONL {id, labels}")->required();
  confusion->callback([&] {
    const auto g = readLabelings(goldPath);
    std::unordered_map<std::string, const cb::TokenLabeling*> byId;
    const auto p = readLabelings(predPath);
    for (const auto& l : p) byId[l.commentId] = &l;
    std::vector<cb::Language> gs, ps;
    for (const auto& l : g) {
      const auto it = byId.find(l.commentId);
      if (it == byId.end())
        throw std::runtime_error("no prediction for " + l.commentId);
      if (it->second->labels.size() != l.labels.size())
        throw std::runtime_error("length mismatch for " + l.commentId);
      gs.insert(gs.end(), l.labels.begin(), l.labels.end());
      ps.insert(ps.end(), it->second->labels.begin(), it->second->labels.end());
    }
    cb::writeConfusionMatrix(std::cout, cb::confusionMatrix(gs, ps));
  });
  auto* yieldCmd = eval->add_subcommand("yield", "Positive fraction of a batch");
  yieldCmd->add_option("batch", batchPath)->required();
  yieldCmd->add_option("--labels", labelsPath, "id 0|1 per line")->required();
  yieldCmd->callback([&] {
    std::unordered_map<std::string, bool> labels;
    for (const auto& l : cb::loadLabels(labelsPath)) labels[l.commentId] = l.positive;
    std::cout << cb::samplingYield(cb::loadBatch(batchPath), labels) << "\n";
  });
  auto* kappa = eval->add_subcommand("kappa", "Fleiss' kappa");
  std::string ratingsPath;
  kappa->add_option("ratings", ratingsPath,
                    "One item per line: per-category rater counts")
      ->required();
  kappa->callback([&] {
    std::ifstream in(ratingsPath);
    if (!in) throw std::runtime_error("cannot open " + ratingsPath);
    std::vector<std::vector<int>> rows;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ss(line);
      std::vector<int> row;
      for (int x; ss >> x;) row.push_back(x);
      if (!row.empty()) rows.push_back(std::move(row));
    }
    const auto r = cb::fleissKappa(rows);
    std::cout << r.kappa << (r.degenerate ? " (degenerate)" : "") << "\n";
  });
  auto* project = eval->add_subcommand("project", "2-D PCA of document vectors");
  project->add_option("corpus", corpusPath)->required();
  project->add_option("--vectors", vectorsPath)->required();
  project->callback([&] {
    const auto table = cb::loadEmbeddings(vectorsPath);
    std::vector<std::string> ids;
    std::vector<cb::Vector> docs;
    for (const auto& c : readCorpus(corpusPath)) {
      auto v = cb::docEmbedding(table, c.tokens);
      if (v.oov) continue;
      ids.push_back(c.id);
      docs.push_back(std::move(v.vector));
    }
    const auto points = cb::project2D(docs);
    for (std::size_t i = 0; i < ids.size(); ++i)
      std::cout << ids[i] << "\t" << cb::formatDouble(points[i][0]) << "\t"
                << cb::formatDouble(points[i][1]) << "\n";
  });

  // serve
  auto* serve = app.add_subcommand("serve", "Annotation HTTP service");
  std::string host = "0.0.0.0";
  int port = 0;
  serve->add_option("corpus", corpusPath)->required();
  serve->add_option("--vectors", vectorsPath)->required();
  serve->add_option("--model", modelPath)->required();
  serve->add_option("--hope", hopePath, "Classifier for the initial batch");
  serve->add_option("--labels", labelsPath, "Append-only label log");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port, "Default: $CODEBRIDGE_PORT or 8080");
  serve->add_option("--size", pc.size)->capture_default_str();
  serve->add_option("--pool", poolText)->capture_default_str();
  serve->add_flag("--extract,!--raw", pc.extract,
                  "Initial batch from h_e extracts (default) or whole seeds");
  serve->callback([&] {
    const auto table = cb::loadEmbeddings(vectorsPath);
    const auto model = cb::loadClusterModel(modelPath);
    const auto corpus = readCorpus(corpusPath);
    pc.pool = cb::parseSubset(poolText);
    cb::AnnotationService service({&corpus, &model, &table, pc.pool},
                                  labelsPath);
    if (!service.hasBatch()) {
      if (hopePath.empty())
        throw CLI::ValidationError("no saved batch; pass --hope to sample one");
      const auto result = cb::runPipeline(corpus, model, table,
                                          cb::loadHopeModel(hopePath), pc);
      service.installBatch(result.batch, result.stages);
    }
    httplib::Server server;
    cb::mountRoutes(server, service);
    if (port == 0) port = cb::servicePortFromEnv();
    std::cout << "listening on " << host << ":" << port << " (round "
              << service.round() << ")" << std::endl;
    if (!server.listen(host, port))
      throw std::runtime_error("cannot listen on port " + std::to_string(port));
  });

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  cb::SynthConfig sc;
  std::string truthPath, labeledPath;
  std::size_t labeled = 0;
  synth->add_option("-o,--out", outPath)->required();
  synth->add_option("--truth", truthPath, "Gold labels JSONL");
  synth->add_option("--seed", sc.seed)->capture_default_str();
  synth->add_option("--comments", sc.comments)->capture_default_str();
  synth->add_option("--mixed-rate", sc.mixedRate)->capture_default_str();
  synth->add_option("--positive-rate", sc.positiveRate)->capture_default_str();
  synth->add_option("--neutral-rate", sc.neutralRate)->capture_default_str();
  synth->add_option("--labeled", labeled, "Also emit n labelled English comments");
  synth->add_option("--labeled-out", labeledPath, "Prefix for labelled output");
  synth->callback([&] {
    cb::SyntheticGenerator gen(sc);
    auto writeTruth = [](const std::string& path, const cb::SynthCorpus& s) {
      auto out = openOut(path);
      for (const auto& t : s.truth) {
        json labels = json::array();
        for (auto l : t.gold) labels.push_back(std::string(cb::toString(l)));
        out << json{{"id", t.id},
                    {"labels", labels},
                    {"positive", t.positive},
                    {"mixed", t.mixed},
                    {"cmi", t.trueCmi}}
                   .dump()
            << "\n";
      }
    };
    const auto corpus = gen.generate();
    cb::writeCorpus(std::filesystem::path(outPath), corpus.corpus);
    if (!truthPath.empty()) writeTruth(truthPath, corpus);
    if (labeled > 0) {
      if (labeledPath.empty())
        throw CLI::ValidationError("--labeled needs --labeled-out");
      const auto train = gen.labeledEnglish(labeled, 0.23);
      cb::writeCorpus(std::filesystem::path(labeledPath + ".jsonl"),
                      train.corpus);
      std::vector<cb::LabeledDoc> docs;
      for (const auto& t : train.truth) docs.push_back({t.id, t.positive});
      auto out = openOut(labeledPath + ".labels");
      cb::writeLabels(out, docs);
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
