#include "fpnn/dataset.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "fpnn/errors.hpp"

namespace fpnn {

namespace {

constexpr char kMagic[4] = {'F', 'P', 'D', 'S'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ostream& out, uint32_t v) {
  unsigned char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 4);
}

void write_u64(std::ostream& out, uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

uint32_t read_u32(std::istream& in, const char* field) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  if (in.gcount() != 4) {
    throw FormatError(std::string("dataset truncated reading ") + field);
  }
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(buf[i]) << (8 * i);
  return v;
}

uint64_t read_u64(std::istream& in, const char* field) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (in.gcount() != 8) {
    throw FormatError(std::string("dataset truncated reading ") + field);
  }
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
  return v;
}

void write_u32_block(std::ostream& out, const uint32_t* values, size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values),
              static_cast<std::streamsize>(n * sizeof(uint32_t)));
  } else {
    for (size_t i = 0; i < n; ++i) write_u32(out, values[i]);
  }
}

void read_u32_block(std::istream& in, uint32_t* values, size_t n,
                    const char* field) {
  if constexpr (std::endian::native == std::endian::little) {
    const auto bytes = static_cast<std::streamsize>(n * sizeof(uint32_t));
    in.read(reinterpret_cast<char*>(values), bytes);
    if (in.gcount() != bytes) {
      throw FormatError(std::string("dataset truncated reading ") + field);
    }
  } else {
    for (size_t i = 0; i < n; ++i) values[i] = read_u32(in, field);
  }
}

}  // namespace

Dataset::Dataset(uint32_t max_len, uint32_t num_classes)
    : max_len_(max_len), num_classes_(num_classes),
      identity_(num_classes, num_classes) {
  if (max_len_ < 1) throw ConfigError("dataset max_len must be >= 1");
  if (num_classes_ < 1) throw ConfigError("dataset num_classes must be >= 1");
  for (uint32_t c = 0; c < num_classes_; ++c) identity_(c, c) = 1.0;
}

void Dataset::add(std::span<const uint32_t> ids, uint32_t label) {
  if (ids.size() != max_len_) {
    throw ShapeError("dataset example length " + std::to_string(ids.size()) +
                     ", expected " + std::to_string(max_len_));
  }
  if (label >= num_classes_) {
    throw ArgumentError("dataset class index " + std::to_string(label) +
                        " out of range for " + std::to_string(num_classes_) +
                        " classes");
  }
  ids_.insert(ids_.end(), ids.begin(), ids.end());
  labels_.push_back(label);
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open dataset for writing: " + path.string());
  out.write(kMagic, 4);
  write_u32(out, kVersion);
  write_u32(out, data.max_len());
  write_u32(out, data.num_classes());
  write_u64(out, data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    const auto ids = data.ids(i);
    write_u32_block(out, ids.data(), ids.size());
    write_u32(out, data.label(i));
  }
  if (!out) throw IoError("dataset write failed: " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset: " + path.string());

  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError("dataset magic mismatch, expected FPDS");
  }
  const uint32_t version = read_u32(in, "version");
  if (version != kVersion) {
    throw FormatError("dataset version " + std::to_string(version) +
                      " unsupported, expected " + std::to_string(kVersion));
  }
  const uint32_t max_len = read_u32(in, "max_len");
  const uint32_t num_classes = read_u32(in, "num_classes");
  const uint64_t count = read_u64(in, "count");
  if (max_len < 1) throw FormatError("dataset max_len field is 0");
  if (num_classes < 1) throw FormatError("dataset num_classes field is 0");

  Dataset data(max_len, num_classes);
  std::vector<uint32_t> ids(max_len);
  for (uint64_t i = 0; i < count; ++i) {
    read_u32_block(in, ids.data(), ids.size(), "example ids");
    const uint32_t label = read_u32(in, "example class index");
    if (label >= num_classes) {
      throw FormatError("dataset example " + std::to_string(i) +
                        " class index " + std::to_string(label) +
                        " out of range for " + std::to_string(num_classes) +
                        " classes");
    }
    data.add(ids, label);
  }
  char extra;
  if (in.read(&extra, 1)) {
    throw FormatError("dataset has trailing bytes after last example");
  }
  return data;
}

}  // namespace fpnn
