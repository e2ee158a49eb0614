#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fpnn {

// One occurrence record: free-text narrative plus its phase-of-flight label.
struct Document {
  std::string id;
  std::string narrative;
  std::string label;
};

// Distinct labels sorted lexicographically, indexed 0..C-1.
class LabelSet {
public:
  LabelSet() = default;
  explicit LabelSet(std::vector<std::string> sorted_labels);

  size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label_of(size_t index) const { return labels_.at(index); }
  // -1 when the label is not a member.
  int index_of(const std::string& label) const;

  // labels.txt: one label per line in index order.
  void save(const std::filesystem::path& path) const;
  static LabelSet load(const std::filesystem::path& path);

private:
  std::vector<std::string> labels_;
};

struct SplitSpec {
  double test_fraction = 0.20;
  double val_fraction_of_train = 0.10;
  uint64_t seed = 0;
};

struct SplitResult {
  std::vector<Document> train;
  std::vector<Document> val;
  std::vector<Document> test;
};

enum class RecordFormat { kCsv, kJsonl };

// CSV needs header columns `Narrative` and `POF` (case-insensitive),
// optional `Id`; JSONL objects carry `narrative`, `pof`, optional `id`.
// Missing ids are synthesized as zero-padded line numbers.
std::vector<Document> load_records(const std::filesystem::path& path,
                                   RecordFormat format);

// Drops whitespace-only narratives, empty labels, and exact
// (narrative, label) duplicates; keeps first occurrences in input order.
std::vector<Document> clean_records(const std::vector<Document>& docs);

LabelSet label_inventory(const std::vector<Document>& docs);

// Per class: floor(n_c · test_fraction) to test, floor of
// val_fraction_of_train of the remainder to val, rest to train; within-class
// order comes from a seeded shuffle. A singleton class lands in train.
SplitResult stratified_split(const std::vector<Document>& docs,
                             const SplitSpec& spec);

struct SyntheticSpec {
  size_t n = 0;
  size_t num_classes = 0;
  size_t vocab_size = 0;    // class pools (10 terms each) + background pool
  size_t len_min = 0;
  size_t len_max = 0;
  double signal = 1.0;      // P(token drawn from the class pool)
  uint64_t seed = 0;
};

// Labeled documents "class_0".."class_{k-1}", balanced within ±1. Each class
// owns 10 disjoint keyword terms; remaining terms form a shared background
// pool sampled with probability 1−signal.
std::vector<Document> gen_synthetic_corpus(const SyntheticSpec& spec);

// Majority-pool-count classifier for the synthetic corpus: counts tokens per
// class keyword pool and predicts the argmax (lowest index on ties). This is
// the Bayes-optimal reference the training thresholds are measured against.
size_t keyword_pool_prediction(const std::string& narrative,
                               size_t num_classes);

}  // namespace fpnn
