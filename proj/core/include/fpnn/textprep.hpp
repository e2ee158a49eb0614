#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fpnn {

class LabelSet;  // corpus.hpp

inline constexpr uint32_t kPadId = 0;
inline constexpr uint32_t kOovId = 1;
inline constexpr size_t kDefaultMaxLen = 2000;
inline constexpr size_t kDefaultVocabCap = 100000;

// The shipped stopword list (127 words), one canonical copy; the repo's
// data/stopwords.txt must stay in sync and a test enforces that.
std::span<const std::string_view> stopword_list();

// Lowercase → non-[a-z0-9] bytes to spaces → split → drop stopwords →
// drop pure-digit tokens → strip one of "ing","ed","es","s" when the stem
// keeps ≥ 3 characters, longest eligible suffix first.
std::vector<std::string> normalize(std::string_view text);

// Single-token suffix stripper, exposed for tests.
std::string stem(std::string token);

// Term ↔ id map with ids 0 and 1 reserved for PAD and OOV; retained terms
// occupy 2..V+1 ranked by (frequency desc, term asc).
class Vocabulary {
public:
  Vocabulary() = default;

  static Vocabulary build(const std::vector<std::vector<std::string>>& token_lists,
                          size_t max_terms = kDefaultVocabCap);

  // TSV: `term<TAB>id` per line sorted by id; first two lines are the
  // reserved <PAD> and <OOV> entries.
  void save_tsv(const std::filesystem::path& path) const;
  static Vocabulary load_tsv(const std::filesystem::path& path);

  // Retained-term count V (excludes PAD/OOV).
  size_t size() const { return id_to_term_.size(); }
  // Embedding row count, V+2.
  size_t id_count() const { return id_to_term_.size() + 2; }

  uint32_t id_of(std::string_view term) const;  // kOovId when absent
  const std::string& term_of(uint32_t id) const;

private:
  std::unordered_map<std::string, uint32_t> term_to_id_;
  std::vector<std::string> id_to_term_;  // index 0 ↔ id 2
};

enum class TruncateSide { kHead, kTail };

// Fixed-length encoding: PAD(0) is prepended when short; over-length input
// keeps the first max_len ids (head) or the last max_len (tail).
std::vector<uint32_t> encode_sequence(const std::vector<std::string>& tokens,
                                      const Vocabulary& vocab, size_t max_len,
                                      TruncateSide side = TruncateSide::kHead);

std::vector<double> encode_label(const std::string& label,
                                 const LabelSet& labels);

struct EncodedExample {
  std::vector<uint32_t> ids;          // length exactly max_len
  std::vector<double> label_onehot;   // length C, exactly one 1
};

size_t onehot_index(std::span<const double> onehot);

}  // namespace fpnn
