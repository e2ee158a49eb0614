#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fpnn/tensor.hpp"

namespace fpnn {

// Encoded split file: fixed-length id sequences plus a class index per
// example. One-hot rows are materialized once at construction; `onehot(i)`
// returns a view into a shared C×C identity.
class Dataset {
public:
  Dataset(uint32_t max_len, uint32_t num_classes);

  uint32_t max_len() const { return max_len_; }
  uint32_t num_classes() const { return num_classes_; }
  size_t size() const { return labels_.size(); }

  void add(std::span<const uint32_t> ids, uint32_t label);

  std::span<const uint32_t> ids(size_t i) const {
    return {ids_.data() + i * max_len_, max_len_};
  }
  uint32_t label(size_t i) const { return labels_[i]; }
  std::span<const double> onehot(size_t i) const {
    return {identity_.row(labels_[i]), num_classes_};
  }

private:
  uint32_t max_len_;
  uint32_t num_classes_;
  std::vector<uint32_t> ids_;     // size() * max_len_, row-major
  std::vector<uint32_t> labels_;
  Matrix identity_;               // C×C one-hot rows
};

// Binary layout: magic `FPDS`, u32 version=1, u32 max_len, u32 C, u64 count,
// then per example max_len little-endian u32 ids followed by a u32 class
// index.
void save_dataset(const Dataset& data, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace fpnn
