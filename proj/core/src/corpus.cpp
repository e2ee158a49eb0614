#include "fpnn/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "fpnn/errors.hpp"
#include "fpnn/rng.hpp"

namespace fpnn {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool whitespace_only(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

std::string padded_line_number(size_t line) {
  std::string digits = std::to_string(line);
  return digits.size() >= 6 ? digits : std::string(6 - digits.size(), '0') + digits;
}

struct CsvRecord {
  std::vector<std::string> fields;
  size_t line;  // 1-based line the record starts on
};

// RFC 4180: quoted fields may contain commas, newlines, and doubled quotes.
std::vector<CsvRecord> parse_csv(std::string_view text) {
  std::vector<CsvRecord> records;
  std::vector<std::string> fields;
  std::string field;
  size_t line = 1;
  size_t record_line = 1;
  bool in_quotes = false;
  bool field_was_quoted = false;

  auto end_field = [&] {
    fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = fields.size() == 1 && fields[0].empty();
    if (!blank) records.push_back({std::move(fields), record_line});
    fields.clear();
    record_line = line;
  };

  size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      ++i;
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw ParseError("CSV line " + std::to_string(line) +
                           ": quote inside unquoted field");
        }
        in_quotes = true;
        field_was_quoted = true;
        ++i;
        break;
      case ',':
        end_field();
        ++i;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        [[fallthrough]];
      case '\n':
        ++line;
        end_record();
        ++i;
        break;
      default:
        if (field_was_quoted) {
          throw ParseError("CSV line " + std::to_string(line) +
                           ": text after closing quote");
        }
        field.push_back(c);
        ++i;
    }
  }
  if (in_quotes) {
    throw ParseError("CSV line " + std::to_string(record_line) +
                     ": unterminated quoted field");
  }
  if (!field.empty() || field_was_quoted || !fields.empty()) end_record();
  return records;
}

std::vector<Document> load_csv(const std::filesystem::path& path) {
  const auto records = parse_csv(read_file(path));
  if (records.empty()) throw SchemaError("CSV is empty: " + path.string());

  const auto& header = records.front().fields;
  int col_narrative = -1, col_pof = -1, col_id = -1;
  for (size_t i = 0; i < header.size(); ++i) {
    const std::string name = lower(header[i]);
    if (name == "narrative") col_narrative = static_cast<int>(i);
    else if (name == "pof") col_pof = static_cast<int>(i);
    else if (name == "id") col_id = static_cast<int>(i);
  }
  if (col_narrative < 0) throw SchemaError("missing required CSV column: Narrative");
  if (col_pof < 0) throw SchemaError("missing required CSV column: POF");

  std::vector<Document> docs;
  docs.reserve(records.size() - 1);
  for (size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != header.size()) {
      throw ParseError("CSV line " + std::to_string(rec.line) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(rec.fields.size()));
    }
    Document doc;
    doc.narrative = rec.fields[static_cast<size_t>(col_narrative)];
    doc.label = rec.fields[static_cast<size_t>(col_pof)];
    doc.id = col_id >= 0 && !rec.fields[static_cast<size_t>(col_id)].empty()
                 ? rec.fields[static_cast<size_t>(col_id)]
                 : padded_line_number(rec.line);
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::vector<Document> docs;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (whitespace_only(line)) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("JSONL line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!obj.contains("narrative")) {
      throw SchemaError("JSONL line " + std::to_string(line_no) +
                        ": missing required key: narrative");
    }
    if (!obj.contains("pof")) {
      throw SchemaError("JSONL line " + std::to_string(line_no) +
                        ": missing required key: pof");
    }
    Document doc;
    doc.narrative = obj["narrative"].get<std::string>();
    doc.label = obj["pof"].get<std::string>();
    doc.id = obj.contains("id") ? obj["id"].get<std::string>()
                                : padded_line_number(line_no);
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace

LabelSet::LabelSet(std::vector<std::string> sorted_labels)
    : labels_(std::move(sorted_labels)) {
  for (size_t i = 1; i < labels_.size(); ++i) {
    if (labels_[i - 1] >= labels_[i]) {
      throw ArgumentError("labels must be sorted and distinct");
    }
  }
}

int LabelSet::index_of(const std::string& label) const {
  const auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return -1;
  return static_cast<int>(it - labels_.begin());
}

void LabelSet::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write labels: " + path.string());
  for (const auto& label : labels_) out << label << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

LabelSet LabelSet::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read labels: " + path.string());
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) labels.push_back(line);
  }
  return LabelSet(std::move(labels));
}

std::vector<Document> load_records(const std::filesystem::path& path,
                                   RecordFormat format) {
  switch (format) {
    case RecordFormat::kCsv: return load_csv(path);
    case RecordFormat::kJsonl: return load_jsonl(path);
  }
  throw ArgumentError("unknown record format");
}

std::vector<Document> clean_records(const std::vector<Document>& docs) {
  std::vector<Document> kept;
  kept.reserve(docs.size());
  std::unordered_map<std::string, bool> seen;  // narrative \x1f label
  for (const auto& doc : docs) {
    if (whitespace_only(doc.narrative) || doc.label.empty()) continue;
    std::string key = doc.narrative;
    key.push_back('\x1f');
    key += doc.label;
    if (!seen.emplace(std::move(key), true).second) continue;
    kept.push_back(doc);
  }
  return kept;
}

LabelSet label_inventory(const std::vector<Document>& docs) {
  if (docs.empty()) throw ArgumentError("label_inventory: no documents");
  std::vector<std::string> labels;
  for (const auto& doc : docs) labels.push_back(doc.label);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return LabelSet(std::move(labels));
}

SplitResult stratified_split(const std::vector<Document>& docs,
                             const SplitSpec& spec) {
  if (docs.empty()) throw ArgumentError("stratified_split: no documents");
  if (spec.test_fraction <= 0.0 || spec.test_fraction >= 1.0) {
    throw ArgumentError("test_fraction must be in (0,1)");
  }
  if (spec.val_fraction_of_train < 0.0 || spec.val_fraction_of_train >= 1.0) {
    throw ArgumentError("val_fraction_of_train must be in [0,1)");
  }

  // Class order is the lexicographic label order; a single rng stream is
  // consumed class by class, which keeps the whole partition a pure
  // function of (input, seed).
  std::map<std::string, std::vector<size_t>> by_label;
  for (size_t i = 0; i < docs.size(); ++i) by_label[docs[i].label].push_back(i);

  Rng rng(spec.seed);
  SplitResult out;
  for (auto& [label, indices] : by_label) {
    shuffle(indices, rng);
    const size_t n = indices.size();
    const size_t n_test =
        static_cast<size_t>(static_cast<double>(n) * spec.test_fraction);
    const size_t remaining = n - n_test;
    const size_t n_val = static_cast<size_t>(static_cast<double>(remaining) *
                                             spec.val_fraction_of_train);
    for (size_t k = 0; k < n; ++k) {
      const Document& doc = docs[indices[k]];
      if (k < n_test) out.test.push_back(doc);
      else if (k < n_test + n_val) out.val.push_back(doc);
      else out.train.push_back(doc);
    }
  }
  return out;
}

std::vector<Document> gen_synthetic_corpus(const SyntheticSpec& spec) {
  if (spec.num_classes < 2) {
    throw ArgumentError("gen_synthetic_corpus: num_classes must be >= 2");
  }
  if (spec.vocab_size < 10 * spec.num_classes) {
    throw ArgumentError("gen_synthetic_corpus: vocab_size must be >= 10*num_classes");
  }
  if (!(spec.signal > 0.0 && spec.signal <= 1.0)) {
    throw ArgumentError("gen_synthetic_corpus: signal must be in (0,1]");
  }
  if (spec.len_min < 1 || spec.len_min > spec.len_max) {
    throw ArgumentError("gen_synthetic_corpus: need 1 <= len_min <= len_max");
  }
  if (spec.n < 1) throw ArgumentError("gen_synthetic_corpus: n must be >= 1");

  const size_t background_terms = spec.vocab_size - 10 * spec.num_classes;
  Rng rng(spec.seed);
  std::vector<Document> docs;
  docs.reserve(spec.n);
  for (size_t i = 0; i < spec.n; ++i) {
    const size_t cls = i % spec.num_classes;
    const size_t len =
        spec.len_min + rng.below(spec.len_max - spec.len_min + 1);
    std::string narrative;
    for (size_t t = 0; t < len; ++t) {
      if (t > 0) narrative.push_back(' ');
      const bool from_pool =
          background_terms == 0 || rng.next_double() < spec.signal;
      if (from_pool) {
        narrative += "kw" + std::to_string(cls) + "x" +
                     std::to_string(rng.below(10));
      } else {
        narrative += "bg" + std::to_string(rng.below(background_terms));
      }
    }
    Document doc;
    doc.id = padded_line_number(i);
    doc.narrative = std::move(narrative);
    doc.label = "class_" + std::to_string(cls);
    docs.push_back(std::move(doc));
  }
  return docs;
}

size_t keyword_pool_prediction(const std::string& narrative,
                               size_t num_classes) {
  std::vector<size_t> counts(num_classes, 0);
  std::istringstream in(narrative);
  std::string token;
  while (in >> token) {
    if (token.size() < 4 || token[0] != 'k' || token[1] != 'w') continue;
    const size_t x = token.find('x', 2);
    if (x == std::string::npos || x == 2 || x + 1 >= token.size()) continue;
    const std::string cls_digits = token.substr(2, x - 2);
    const std::string kw_digits = token.substr(x + 1);
    auto all_digits = [](const std::string& s) {
      return std::all_of(s.begin(), s.end(),
                         [](unsigned char c) { return std::isdigit(c); });
    };
    if (!all_digits(cls_digits) || !all_digits(kw_digits)) continue;
    const size_t cls = std::stoull(cls_digits);
    const size_t kw = std::stoull(kw_digits);
    if (cls < num_classes && kw < 10) ++counts[cls];
  }
  return static_cast<size_t>(
      std::max_element(counts.begin(), counts.end()) - counts.begin());
}

}  // namespace fpnn
