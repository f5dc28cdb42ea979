#include "codebridge/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace codebridge {

namespace {

const std::vector<std::string> kEnglishCore{
    "the",   "and",   "is",    "to",    "of",    "a",     "in",    "that",
    "it",    "you",   "this",  "for",   "was",   "with",  "are",   "on",
    "not",   "be",    "have",  "they",  "we",    "what",  "so",    "but",
    "all",   "just",  "like",  "our",   "why",   "your",  "there", "people",
    "country", "war", "should", "their", "from", "will",  "can",   "them",
    "never", "always", "why",  "nation", "who",  "only",  "these", "about"};

const std::vector<std::string> kHindiCore{
    "hai",   "nahi",  "ke",    "ki",    "ka",    "ko",    "se",    "mein",
    "aur",   "bhi",   "ho",    "kya",   "tha",   "ye",    "wo",    "hum",
    "tum",   "ek",    "par",   "koi",   "kuch",  "sab",   "log",   "apne",
    "jo",    "toh",   "hain",  "raha",  "rahe",  "karo",  "kar",   "diya",
    "gaya",  "bahut", "abhi",  "yaar",  "bhai",  "desh",  "sena",  "unka",
    "humko", "sabko", "kaha",  "kyun",  "matlab", "wahi", "aaj",   "kal"};

const std::vector<std::string> kHopeEnglish{
    "peace",      "love",    "friendship", "harmony",  "brotherhood",
    "unity",      "humanity", "hope",      "kindness", "together",
    "ceasefire",  "dialogue", "forgive",   "heal",     "compassion",
    "neighbours", "goodwill", "understanding", "reconcile", "calm"};

const std::vector<std::string> kHopeHindi{
    "aman",    "amun",   "amaan",   "mohabbat", "pyaar",   "dosti",
    "bhaichara", "shanti", "insaniyat", "ekta",  "umeed",   "sukoon",
    "milkar",  "maafi",  "rishta",  "dua",      "sulah",   "apnapan",
    "hamdardi", "bhalai"};

// Frequent tokens carrying no language signal in the shared comment space.
const std::vector<std::string> kNeutral{
    "pakistan", "he",    "army",  "media", "modi",    "pak",   "pakistani",
    "kashmir",  "pilot", "attack", "video", "news",   "khan",  "jai",
    "2",        "hind",  "imran", "muslim", "sir",    "1"};

const std::vector<std::string> kEnOnsets{
    "b",  "c",  "d",  "f",  "g",  "l",  "m",  "n",  "p",  "r",  "s",  "t",
    "w",  "st", "br", "cl", "tr", "pl", "gr", "sp", "wr", "sl", "fl", "cr"};
const std::vector<std::string> kEnVowels{"a",  "e",  "i",  "o",  "u",
                                         "ea", "ee", "oo", "ou", "ay"};
const std::vector<std::string> kEnCodas{"",   "n",  "t",   "r",  "s",
                                        "ck", "ng", "ll",  "nd", "st",
                                        "ght", "rd", "x",  "ss", "mp"};

const std::vector<std::string> kHeOnsets{
    "kh", "bh", "gh", "jh", "ch", "dh", "ph", "k",  "g", "j", "d",
    "n",  "m",  "r",  "l",  "s",  "sh", "v",  "y",  "h", "p", "b"};
const std::vector<std::string> kHeVowels{"a",  "aa", "i",  "ee", "u",
                                         "oo", "e",  "ai", "o",  "au"};
const std::vector<std::string> kHeCodas{"", "", "n", "m", "r", "h", "t"};

template <typename T>
const T& pick(const std::vector<T>& items, std::mt19937_64& rng) {
  return items[rng() % items.size()];
}

std::string pseudoWord(const std::vector<std::string>& onsets,
                       const std::vector<std::string>& vowels,
                       const std::vector<std::string>& codas,
                       std::mt19937_64& rng) {
  const int syllables = 1 + static_cast<int>(rng() % 3);
  std::string w;
  for (int s = 0; s < syllables; ++s) {
    w += pick(onsets, rng);
    w += pick(vowels, rng);
    if (s + 1 == syllables || rng() % 3 == 0) w += pick(codas, rng);
  }
  return w;
}

std::vector<std::string> buildVocabulary(
    const std::vector<std::string>& core, std::size_t size,
    const std::vector<std::string>& onsets,
    const std::vector<std::string>& vowels,
    const std::vector<std::string>& codas,
    std::unordered_set<std::string>& taken, std::mt19937_64& rng) {
  std::vector<std::string> vocab;
  for (const auto& w : core) {
    if (vocab.size() == size) break;
    if (taken.insert(w).second) vocab.push_back(w);
  }
  std::size_t attempts = 0;
  while (vocab.size() < size) {
    if (++attempts > 1000 * size)
      throw std::invalid_argument("vocabulary size is too large");
    auto w = pseudoWord(onsets, vowels, codas, rng);
    if (w.size() < 2) continue;
    if (taken.insert(w).second) vocab.push_back(std::move(w));
  }
  return vocab;
}

// Splits `total` into `parts` positive integers (or fewer if total is small).
std::vector<std::size_t> split(std::size_t total, std::size_t parts,
                               std::mt19937_64& rng) {
  parts = std::max<std::size_t>(1, std::min(parts, total));
  std::vector<std::size_t> sizes(parts, 1);
  for (std::size_t r = parts; r < total; ++r) ++sizes[rng() % parts];
  return sizes;
}

double uniform01(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

Language other(Language language) {
  return language == Language::En ? Language::HE : Language::En;
}

}  // namespace

const SynthComment& SynthCorpus::truthOf(const std::string& id) const {
  const auto it = byId.find(id);
  if (it == byId.end())
    throw std::out_of_range("no synthetic comment '" + id + "'");
  return truth[it->second];
}

SyntheticGenerator::SyntheticGenerator(SynthConfig config)
    : config_(config), rng_(config.seed) {
  if (config_.minTokens < 1 || config_.minTokens > config_.maxTokens)
    throw std::invalid_argument("token length range is invalid");
  if (config_.minMinorityShare < 0 ||
      config_.minMinorityShare > config_.maxMinorityShare ||
      config_.maxMinorityShare > 0.5)
    throw std::invalid_argument("minority share range must lie in [0, 0.5]");
  if (config_.vocabPerLanguage < 2)
    throw std::invalid_argument("vocabulary must hold at least 2 words");

  std::unordered_set<std::string> taken(kNeutral.begin(), kNeutral.end());
  taken.insert(kHopeEnglish.begin(), kHopeEnglish.end());
  taken.insert(kHopeHindi.begin(), kHopeHindi.end());
  neutral_ = kNeutral;
  hopeEn_ = kHopeEnglish;
  hopeHe_ = kHopeHindi;
  en_ = buildVocabulary(kEnglishCore, config_.vocabPerLanguage, kEnOnsets,
                        kEnVowels, kEnCodas, taken, rng_);
  he_ = buildVocabulary(kHindiCore, config_.vocabPerLanguage, kHeOnsets,
                        kHeVowels, kHeCodas, taken, rng_);

  std::vector<double> weights(config_.vocabPerLanguage);
  for (std::size_t r = 0; r < weights.size(); ++r)
    weights[r] = 1.0 / std::pow(static_cast<double>(r + 1),
                                config_.zipfExponent);
  zipf_ = std::discrete_distribution<std::size_t>(weights.begin(),
                                                  weights.end());
}

const std::vector<std::string>& SyntheticGenerator::vocabulary(
    Language language) const {
  if (language == Language::En) return en_;
  if (language == Language::HE) return he_;
  throw std::invalid_argument("no vocabulary for this language");
}

const std::vector<std::string>& SyntheticGenerator::hopeWords(
    Language language) const {
  if (language == Language::En) return hopeEn_;
  if (language == Language::HE) return hopeHe_;
  throw std::invalid_argument("no hope vocabulary for this language");
}

AnchorTokens SyntheticGenerator::anchors() const {
  return {{"the", "and", "is", "to"}, {"hai", "nahi", "ke", "ki"}};
}

std::string SyntheticGenerator::drawWord(Language language, bool positive) {
  if (language == Language::Neutral) return pick(neutral_, rng_);
  const double u = uniform01(rng_);
  if (u < (positive ? config_.hopeTokenShare : config_.hopeLeak))
    return pick(hopeWords(language), rng_);
  return vocabulary(language)[zipf_(rng_)];
}

std::vector<Language> SyntheticGenerator::plan(std::size_t nonNeutral,
                                               Language majority,
                                               std::size_t minority,
                                               std::size_t spans) {
  std::vector<Language> languages;
  if (minority == 0) {
    languages.assign(nonNeutral, majority);
  } else {
    const std::size_t majorSpans = (spans + 1) / 2;
    const std::size_t minorSpans = spans / 2;
    auto major = split(nonNeutral - minority, majorSpans, rng_);
    auto minor = split(minority, minorSpans, rng_);
    for (std::size_t s = 0; s < std::max(major.size(), minor.size()); ++s) {
      if (s < major.size()) languages.insert(languages.end(), major[s], majority);
      if (s < minor.size())
        languages.insert(languages.end(), minor[s], other(majority));
    }
  }
  std::vector<Language> withNeutral;
  for (auto l : languages) {
    if (uniform01(rng_) < config_.neutralRate)
      withNeutral.push_back(Language::Neutral);
    withNeutral.push_back(l);
  }
  return withNeutral;
}

std::pair<Comment, SynthComment> SyntheticGenerator::build(
    const std::string& id, const std::vector<Language>& plan, bool positive,
    Subset subsetTag) {
  static const std::vector<std::string> kPunct{"!!", "?", ",", "...", "!"};
  std::string text;
  std::size_t en = 0;
  std::size_t he = 0;
  for (auto l : plan) {
    std::string w = drawWord(l, positive);
    if (uniform01(rng_) < config_.surfaceNoise && w[0] >= 'a' && w[0] <= 'z')
      w[0] = static_cast<char>(w[0] - 'a' + 'A');
    if (uniform01(rng_) < config_.surfaceNoise / 2) w += pick(kPunct, rng_);
    if (!text.empty()) text += ' ';
    text += w;
    en += l == Language::En;
    he += l == Language::HE;
  }
  SynthComment truth;
  truth.id = id;
  truth.gold = plan;
  truth.positive = positive;
  truth.majority = he > en ? Language::HE : Language::En;
  truth.mixed = en > 0 && he > 0;
  const std::size_t lang = en + he;
  truth.trueCmi = lang == 0 ? 0.0
                            : static_cast<double>(std::min(en, he)) /
                                  static_cast<double>(lang);
  Comment c = makeComment(id, std::move(text), subsetTag);
  if (c.tokens.size() != plan.size())
    throw std::logic_error("synthetic comment '" + id +
                           "' does not tokenize to its plan");
  return {std::move(c), std::move(truth)};
}

void SyntheticGenerator::add(SynthCorpus& out,
                             std::pair<Comment, SynthComment> item) {
  out.byId[item.first.id] = out.truth.size();
  out.corpus.add(std::move(item.first));
  out.truth.push_back(std::move(item.second));
}

SynthCorpus SyntheticGenerator::generate(const std::string& prefix) {
  SynthCorpus out;
  out.corpus.setName(prefix.empty() ? "synthetic" : prefix);
  std::uniform_int_distribution<std::size_t> length(config_.minTokens,
                                                    config_.maxTokens);
  std::uniform_real_distribution<double> share(config_.minMinorityShare,
                                               config_.maxMinorityShare);
  for (std::size_t i = 0; i < config_.comments; ++i) {
    const Language majority =
        uniform01(rng_) < config_.enShare ? Language::En : Language::HE;
    const bool mixed = uniform01(rng_) < config_.mixedRate;
    const bool positive = uniform01(rng_) < config_.positiveRate;
    const std::size_t n = length(rng_);
    std::size_t minority = 0;
    std::size_t spans = 1;
    if (mixed && n >= 2) {
      minority = static_cast<std::size_t>(std::lround(share(rng_) * n));
      minority = std::clamp<std::size_t>(minority, 1, n / 2);
      spans = 2 + rng_() % 3;
    }
    const auto p = plan(n, majority, minority, spans);
    add(out, build(prefix + std::to_string(i), p, positive,
                   majority == Language::En ? Subset::En : Subset::HE));
  }
  return out;
}

std::pair<Comment, SynthComment> SyntheticGenerator::withCmi(
    const std::string& id, double target, std::size_t nonNeutral,
    bool positive) {
  if (target < 0 || target > 0.5)
    throw std::invalid_argument("target CMI must lie in [0, 0.5]");
  if (nonNeutral == 0) throw std::invalid_argument("nonNeutral must be > 0");
  const Language majority = rng_() % 2 ? Language::En : Language::HE;
  const auto minority = static_cast<std::size_t>(
      std::lround(target * static_cast<double>(nonNeutral)));
  const auto p = plan(nonNeutral, majority, minority, 2 + rng_() % 3);
  return build(id, p, positive,
               majority == Language::En ? Subset::En : Subset::HE);
}

SynthCorpus SyntheticGenerator::labeledEnglish(std::size_t n,
                                               double positiveRate,
                                               const std::string& prefix) {
  const auto positives = static_cast<std::size_t>(
      std::lround(positiveRate * static_cast<double>(n)));
  std::vector<bool> flags(n, false);
  std::fill_n(flags.begin(), std::min(positives, n), true);
  std::shuffle(flags.begin(), flags.end(), rng_);
  SynthCorpus out;
  out.corpus.setName(prefix);
  std::uniform_int_distribution<std::size_t> length(config_.minTokens,
                                                    config_.maxTokens);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = plan(length(rng_), Language::En, 0, 1);
    add(out, build(prefix + std::to_string(i), p, flags[i], Subset::En));
  }
  return out;
}

}  // namespace codebridge
