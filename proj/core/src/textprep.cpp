#include "fpnn/textprep.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <unordered_set>

#include "fpnn/corpus.hpp"
#include "fpnn/errors.hpp"

namespace fpnn {

namespace {

// Classic 127-word English stopword list.
constexpr std::array<std::string_view, 127> kStopwords = {
    "i",          "me",       "my",      "myself",  "we",        "our",
    "ours",       "ourselves", "you",    "your",    "yours",     "yourself",
    "yourselves", "he",       "him",     "his",     "himself",   "she",
    "her",        "hers",     "herself", "it",      "its",       "itself",
    "they",       "them",     "their",   "theirs",  "themselves", "what",
    "which",      "who",      "whom",    "this",    "that",      "these",
    "those",      "am",       "is",      "are",     "was",       "were",
    "be",         "been",     "being",   "have",    "has",       "had",
    "having",     "do",       "does",    "did",     "doing",     "a",
    "an",         "the",      "and",     "but",     "if",        "or",
    "because",    "as",       "until",   "while",   "of",        "at",
    "by",         "for",      "with",    "about",   "against",   "between",
    "into",       "through",  "during",  "before",  "after",     "above",
    "below",      "to",       "from",    "up",      "down",      "in",
    "out",        "on",       "off",     "over",    "under",     "again",
    "further",    "then",     "once",    "here",    "there",     "when",
    "where",      "why",      "how",     "all",     "any",       "both",
    "each",       "few",      "more",    "most",    "other",     "some",
    "such",       "no",       "nor",     "not",     "only",      "own",
    "same",       "so",       "than",    "too",     "very",      "s",
    "t",          "can",      "will",    "just",    "don",       "should",
    "now",
};

const std::unordered_set<std::string_view>& stopword_set() {
  static const std::unordered_set<std::string_view> set(kStopwords.begin(),
                                                        kStopwords.end());
  return set;
}

bool pure_digits(std::string_view token) {
  return std::all_of(token.begin(), token.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

std::span<const std::string_view> stopword_list() { return kStopwords; }

std::string stem(std::string token) {
  static constexpr std::array<std::string_view, 4> kSuffixes = {"ing", "ed",
                                                                "es", "s"};
  for (std::string_view suffix : kSuffixes) {
    if (token.size() >= suffix.size() + 3 && token.ends_with(suffix)) {
      token.resize(token.size() - suffix.size());
      return token;
    }
  }
  return token;
}

std::vector<std::string> normalize(std::string_view text) {
  std::string canon(text);
  for (char& c : canon) {
    if (c >= 'A' && c <= 'Z') {
      c = static_cast<char>(c - 'A' + 'a');
    } else if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))) {
      c = ' ';
    }
  }
  std::vector<std::string> tokens;
  size_t pos = 0;
  while (pos < canon.size()) {
    const size_t start = canon.find_first_not_of(' ', pos);
    if (start == std::string::npos) break;
    size_t end = canon.find(' ', start);
    if (end == std::string::npos) end = canon.size();
    std::string_view token(canon.data() + start, end - start);
    pos = end;
    if (stopword_set().contains(token)) continue;
    if (pure_digits(token)) continue;
    tokens.push_back(stem(std::string(token)));
  }
  return tokens;
}

Vocabulary Vocabulary::build(
    const std::vector<std::vector<std::string>>& token_lists,
    size_t max_terms) {
  if (max_terms < 1) throw ArgumentError("build_vocab: max_terms must be >= 1");
  std::unordered_map<std::string, uint64_t> counts;
  for (const auto& tokens : token_lists) {
    for (const auto& token : tokens) ++counts[token];
  }
  std::vector<std::pair<std::string, uint64_t>> ranked(counts.begin(),
                                                       counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > max_terms) ranked.resize(max_terms);

  Vocabulary vocab;
  vocab.id_to_term_.reserve(ranked.size());
  for (auto& [term, count] : ranked) {
    const auto id = static_cast<uint32_t>(vocab.id_to_term_.size() + 2);
    vocab.term_to_id_.emplace(term, id);
    vocab.id_to_term_.push_back(std::move(term));
  }
  return vocab;
}

void Vocabulary::save_tsv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write vocabulary: " + path.string());
  out << "<PAD>\t0\n<OOV>\t1\n";
  for (size_t i = 0; i < id_to_term_.size(); ++i) {
    out << id_to_term_[i] << '\t' << (i + 2) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Vocabulary Vocabulary::load_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read vocabulary: " + path.string());
  Vocabulary vocab;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError("vocabulary line " + std::to_string(line_no) +
                        ": missing tab");
    }
    std::string term = line.substr(0, tab);
    const uint64_t id = std::stoull(line.substr(tab + 1));
    if (line_no == 1 || line_no == 2) {
      const std::string expect = line_no == 1 ? "<PAD>\t0" : "<OOV>\t1";
      if (line != expect) {
        throw FormatError("vocabulary line " + std::to_string(line_no) +
                          ": expected reserved entry " + expect);
      }
      continue;
    }
    if (id != vocab.id_to_term_.size() + 2) {
      throw FormatError("vocabulary line " + std::to_string(line_no) +
                        ": ids must be contiguous, got " + std::to_string(id));
    }
    vocab.term_to_id_.emplace(term, static_cast<uint32_t>(id));
    vocab.id_to_term_.push_back(std::move(term));
  }
  return vocab;
}

uint32_t Vocabulary::id_of(std::string_view term) const {
  const auto it = term_to_id_.find(std::string(term));
  return it == term_to_id_.end() ? kOovId : it->second;
}

const std::string& Vocabulary::term_of(uint32_t id) const {
  static const std::string kPad = "<PAD>";
  static const std::string kOov = "<OOV>";
  if (id == kPadId) return kPad;
  if (id == kOovId) return kOov;
  const size_t idx = id - 2;
  if (idx >= id_to_term_.size()) {
    throw ArgumentError("vocabulary id out of range: " + std::to_string(id));
  }
  return id_to_term_[idx];
}

std::vector<uint32_t> encode_sequence(const std::vector<std::string>& tokens,
                                      const Vocabulary& vocab, size_t max_len,
                                      TruncateSide side) {
  if (max_len < 1) throw ArgumentError("encode_sequence: max_len must be >= 1");
  std::vector<uint32_t> ids(max_len, kPadId);
  if (tokens.size() >= max_len) {
    const size_t begin = side == TruncateSide::kHead ? 0 : tokens.size() - max_len;
    for (size_t i = 0; i < max_len; ++i) ids[i] = vocab.id_of(tokens[begin + i]);
  } else {
    const size_t offset = max_len - tokens.size();  // pre-padding with zeros
    for (size_t i = 0; i < tokens.size(); ++i) {
      ids[offset + i] = vocab.id_of(tokens[i]);
    }
  }
  return ids;
}

std::vector<double> encode_label(const std::string& label,
                                 const LabelSet& labels) {
  const int idx = labels.index_of(label);
  if (idx < 0) throw ArgumentError("unknown label: \"" + label + "\"");
  std::vector<double> onehot(labels.size(), 0.0);
  onehot[static_cast<size_t>(idx)] = 1.0;
  return onehot;
}

size_t onehot_index(std::span<const double> onehot) {
  for (size_t i = 0; i < onehot.size(); ++i) {
    if (onehot[i] == 1.0) return i;
  }
  throw ArgumentError("one-hot vector has no entry equal to 1");
}

}  // namespace fpnn
