#include "codebridge/corpus.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

namespace codebridge {
namespace {

TEST(Normalize, LowercasesAndStripsPunctuation) {
  EXPECT_EQ(normalize("I am Indian!!  PEACE"), "i am indian peace");
}

TEST(Normalize, EmptyInput) { EXPECT_EQ(normalize(""), ""); }

TEST(Normalize, DropsEmojiAndUrls) {
  EXPECT_EQ(normalize("jai hind \xF0\x9F\x87\xAE\xF0\x9F\x87\xB3 http://x.co/a"),
            "jai hind");
  EXPECT_EQ(normalize("see www.example.com/x now"), "see now");
  EXPECT_EQ(normalize("https://a.b"), "");
}

TEST(Normalize, KeepsApostropheWordsTogether) {
  EXPECT_EQ(normalize("Don't stop"), "dont stop");
  EXPECT_EQ(normalize("can\xE2\x80\x99t"), "cant");
}

TEST(Normalize, LowercasesLatin1) {
  EXPECT_EQ(normalize("\xC3\x89T\xC3\x89"), "\xC3\xA9t\xC3\xA9");
}

TEST(Normalize, CollapsesWhitespace) {
  EXPECT_EQ(normalize("  a\t\tb \n c  "), "a b c");
}

TEST(Tokenize, SplitsOnSpaces) {
  EXPECT_EQ(tokenize("no more war"),
            (std::vector<std::string>{"no", "more", "war"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize(normalize("peace  peace")),
            (std::vector<std::string>{"peace", "peace"}));
}

TEST(Comment, TokensDeriveFromText) {
  const auto c = makeComment("c1", "Peace, LOVE!", Subset::En);
  EXPECT_EQ(c.tokens, (std::vector<std::string>{"peace", "love"}));
  EXPECT_EQ(c.text, "Peace, LOVE!");
  EXPECT_EQ(c.subset, Subset::En);
}

TEST(Corpus, RejectsDuplicateIds) {
  Corpus corpus("D");
  corpus.add(makeComment("c1", "a"));
  EXPECT_THROW(corpus.add(makeComment("c1", "b")), DuplicateIdError);
  ASSERT_NE(corpus.find("c1"), nullptr);
  EXPECT_EQ(corpus.find("c1")->text, "a");
  EXPECT_EQ(corpus.find("zz"), nullptr);
}

TEST(Subset, ParsesAliases) {
  EXPECT_EQ(parseSubset("en"), Subset::En);
  EXPECT_EQ(parseSubset("h_e"), Subset::HE);
  EXPECT_EQ(parseSubset("he"), Subset::HE);
  EXPECT_EQ(parseSubset("unknown"), Subset::Unknown);
  EXPECT_THROW(parseSubset("fr"), std::invalid_argument);
  EXPECT_EQ(toString(Subset::HE), "h_e");
}

TEST(Ingest, ThreeJsonlRecords) {
  std::istringstream in(
      R"({"id":"a","text":"no more war","subset":"en"})"
      "\n"
      R"({"id":"b","text":"aman chahiye","subset":"h_e"})"
      "\n"
      R"({"id":"c","text":"peace"})"
      "\n");
  const auto r = ingest(in, RecordFormat::Jsonl);
  ASSERT_EQ(r.corpus.size(), 3u);
  EXPECT_TRUE(r.errors.empty());
  EXPECT_EQ(r.corpus[1].subset, Subset::HE);
  EXPECT_EQ(r.corpus[2].subset, Subset::Unknown);
}

TEST(Ingest, DefaultSubsetAppliesToUntaggedRecords) {
  std::istringstream in("a\tno more war\nb\taman\th_e\n");
  const auto r = ingest(in, RecordFormat::Tsv, Subset::En);
  ASSERT_EQ(r.corpus.size(), 2u);
  EXPECT_EQ(r.corpus[0].subset, Subset::En);
  EXPECT_EQ(r.corpus[1].subset, Subset::HE);
}

TEST(Ingest, DuplicateIdIsHardError) {
  std::istringstream in("c1\tx\nc1\ty\n");
  try {
    ingest(in, RecordFormat::Tsv);
    FAIL() << "expected DuplicateIdError";
  } catch (const DuplicateIdError& e) {
    EXPECT_EQ(e.id(), "c1");
  }
}

TEST(Ingest, MalformedRecordsAreReportedAndSkipped) {
  std::istringstream in(
      R"({"id":"a","text":"x"})"
      "\n{not json\n"
      R"({"text":"no id"})"
      "\n"
      R"({"id":"d","text":"y"})"
      "\n");
  const auto r = ingest(in, RecordFormat::Jsonl);
  EXPECT_EQ(r.corpus.size(), 2u);
  ASSERT_EQ(r.errors.size(), 2u);
  EXPECT_EQ(r.errors[0].line, 2u);
  EXPECT_EQ(r.errors[1].line, 3u);
}

TEST(Ingest, EmptyTextIsRetainedAndFlagged) {
  std::istringstream in("a\t!!! \xF0\x9F\x98\x80\nb\tok\n");
  const auto r = ingest(in, RecordFormat::Tsv);
  ASSERT_EQ(r.corpus.size(), 2u);
  EXPECT_TRUE(r.corpus[0].tokens.empty());
  EXPECT_EQ(r.emptyIds, std::vector<std::string>{"a"});
}

std::string randomText(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces{
      "Peace", "war!!", "  ", "aman", "http://t.co/x", ",", "...",
      "\xF0\x9F\x98\x8A", "Don't", "\xC3\x89t\xC3\xA9", "1", "MODI", "?", "-",
      "hai", "\xE2\x80\x9C", "x_y", "caf\xC3\xA9"};
  std::string s;
  const int n = static_cast<int>(rng() % 12);
  for (int i = 0; i < n; ++i) {
    s += pieces[rng() % pieces.size()];
    if (rng() % 2) s += ' ';
  }
  return s;
}

TEST(CorpusProperty, TokenizeNormalizeIsIdempotent) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto text = randomText(rng);
    const auto tokens = tokenize(normalize(text));
    std::string joined;
    for (const auto& t : tokens) {
      EXPECT_FALSE(t.empty());
      EXPECT_EQ(t.find(' '), std::string::npos);
      if (!joined.empty()) joined += ' ';
      joined += t;
    }
    EXPECT_EQ(tokenize(normalize(joined)), tokens) << text;
  }
}

TEST(CorpusProperty, JsonlAndTsvRoundTrip) {
  std::mt19937_64 rng(4);
  Corpus corpus("rt");
  for (int i = 0; i < 300; ++i) {
    auto text = randomText(rng);
    corpus.add(makeComment("id" + std::to_string(i), text,
                           static_cast<Subset>(rng() % 3)));
  }
  for (auto format : {RecordFormat::Jsonl, RecordFormat::Tsv}) {
    std::stringstream buffer;
    writeCorpus(buffer, corpus, format);
    const auto back = ingest(buffer, format);
    EXPECT_TRUE(back.errors.empty());
    ASSERT_EQ(back.corpus.size(), corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      EXPECT_EQ(back.corpus[i].id, corpus[i].id);
      EXPECT_EQ(back.corpus[i].tokens, corpus[i].tokens);
      EXPECT_EQ(back.corpus[i].subset, corpus[i].subset);
      if (format == RecordFormat::Jsonl) {
        EXPECT_EQ(back.corpus[i].text, corpus[i].text);
      }
    }
  }
}

TEST(FilterSubset, KeepsMatchingComments) {
  Corpus corpus("all");
  corpus.add(makeComment("a", "x", Subset::En));
  corpus.add(makeComment("b", "y", Subset::HE));
  corpus.add(makeComment("c", "z", Subset::HE));
  const auto he = filterSubset(corpus, Subset::HE);
  ASSERT_EQ(he.size(), 2u);
  EXPECT_EQ(he[0].id, "b");
  EXPECT_EQ(he[1].id, "c");
}

TEST(WriteTokens, EmitsDerivedFields) {
  Corpus corpus("c");
  corpus.add(makeComment("a", "No more WAR"));
  corpus.add(makeComment("b", "!!"));
  std::stringstream out;
  writeTokens(out, corpus);
  EXPECT_EQ(out.str(),
            "{\"empty\":false,\"id\":\"a\",\"tokens\":[\"no\",\"more\",\"war\"]}\n"
            "{\"empty\":true,\"id\":\"b\",\"tokens\":[]}\n");
}

}  // namespace
}  // namespace codebridge
