#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "fpnn/errors.hpp"
#include "fpnn/net.hpp"

namespace fpnn {

namespace {

constexpr char kMagic[4] = {'F', 'P', 'N', 'N'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ostream& out, uint32_t v) {
  unsigned char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 4);
}

uint32_t read_u32(std::istream& in, const char* field) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  if (in.gcount() != 4) {
    throw FormatError(std::string("checkpoint truncated reading ") + field);
  }
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(buf[i]) << (8 * i);
  return v;
}

void write_doubles(std::ostream& out, const std::vector<double>& values) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
  } else {
    for (double d : values) {
      uint64_t bits;
      std::memcpy(&bits, &d, sizeof(bits));
      unsigned char buf[8];
      for (int i = 0; i < 8; ++i) {
        buf[i] = static_cast<unsigned char>(bits >> (8 * i));
      }
      out.write(reinterpret_cast<const char*>(buf), 8);
    }
  }
}

void read_doubles(std::istream& in, std::vector<double>& values,
                  const char* field) {
  const auto bytes = static_cast<std::streamsize>(values.size() * sizeof(double));
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(values.data()), bytes);
    if (in.gcount() != bytes) {
      throw FormatError(std::string("checkpoint truncated reading ") + field);
    }
  } else {
    for (double& d : values) {
      unsigned char buf[8];
      in.read(reinterpret_cast<char*>(buf), 8);
      if (in.gcount() != 8) {
        throw FormatError(std::string("checkpoint truncated reading ") + field);
      }
      uint64_t bits = 0;
      for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(buf[i]) << (8 * i);
      std::memcpy(&d, &bits, sizeof(d));
    }
  }
}

nlohmann::json arch_to_json(const ArchSpec& spec) {
  nlohmann::json cells = nlohmann::json::array();
  for (CellKind kind : spec.cells) cells.push_back(cell_name(kind));
  return {
      {"cells", std::move(cells)},
      {"embed_dim", spec.embed_dim},
      {"hidden", spec.hidden},
      {"dense_hidden", spec.dense_hidden},
      {"num_classes", spec.num_classes},
      {"max_len", spec.max_len},
      {"vocab_size", spec.vocab_size},
  };
}

ArchSpec arch_from_json(const nlohmann::json& j) {
  ArchSpec spec;
  try {
    for (const auto& name : j.at("cells")) {
      const std::string s = name.get<std::string>();
      if (s == "lstm") spec.cells.push_back(CellKind::kLstm);
      else if (s == "gru") spec.cells.push_back(CellKind::kGru);
      else if (s == "bilstm") spec.cells.push_back(CellKind::kBiLstm);
      else throw FormatError("checkpoint header: unknown cell \"" + s + "\"");
    }
    spec.embed_dim = j.at("embed_dim").get<size_t>();
    spec.hidden = j.at("hidden").get<size_t>();
    spec.dense_hidden = j.at("dense_hidden").get<size_t>();
    spec.num_classes = j.at("num_classes").get<size_t>();
    spec.max_len = j.at("max_len").get<size_t>();
    spec.vocab_size = j.at("vocab_size").get<size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint header: bad arch field: ") +
                      e.what());
  }
  return spec;
}

}  // namespace

void save_checkpoint(const ModelParams& params, const ArchSpec& spec,
                     const std::string& vocab_path_ref,
                     const std::filesystem::path& path) {
  nlohmann::json manifest = nlohmann::json::array();
  size_t offset = 0;
  params.for_each_tensor([&](const std::string& name, const Matrix& m) {
    manifest.push_back({{"name", name},
                        {"rows", m.rows()},
                        {"cols", m.cols()},
                        {"offset", offset}});
    offset += m.size() * sizeof(double);
  });
  const nlohmann::json header = {
      {"arch", arch_to_json(spec)},
      {"gate_order", {{"lstm", "ifgo"}, {"gru", "zrh"}}},
      {"manifest", std::move(manifest)},
      {"vocab_path_ref", vocab_path_ref},
  };
  const std::string header_text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path.string());
  out.write(kMagic, 4);
  write_u32(out, kVersion);
  write_u32(out, static_cast<uint32_t>(header_text.size()));
  out.write(header_text.data(),
            static_cast<std::streamsize>(header_text.size()));
  params.for_each_tensor([&](const std::string&, const Matrix& m) {
    write_doubles(out, m.data());
  });
  if (!out) throw IoError("checkpoint write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());

  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError("checkpoint magic mismatch, expected FPNN");
  }
  const uint32_t version = read_u32(in, "version");
  if (version != kVersion) {
    throw FormatError("checkpoint version " + std::to_string(version) +
                      " unsupported, expected " + std::to_string(kVersion));
  }
  const uint32_t header_len = read_u32(in, "header length");
  std::string header_text(header_len, '\0');
  in.read(header_text.data(), header_len);
  if (in.gcount() != static_cast<std::streamsize>(header_len)) {
    throw FormatError("checkpoint truncated reading header");
  }

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint header is not valid JSON: ") +
                      e.what());
  }

  Checkpoint ckpt;
  if (!header.contains("arch")) {
    throw FormatError("checkpoint header missing field arch");
  }
  ckpt.spec = arch_from_json(header.at("arch"));
  ckpt.spec.validate();
  ckpt.vocab_path_ref = header.value("vocab_path_ref", std::string());

  const auto gate = header.value("gate_order", nlohmann::json::object());
  if (gate.value("lstm", "ifgo") != "ifgo" || gate.value("gru", "zrh") != "zrh") {
    throw FormatError("checkpoint gate_order differs from ifgo/zrh layout");
  }

  if (!header.contains("manifest") || !header.at("manifest").is_array()) {
    throw FormatError("checkpoint header missing field manifest");
  }
  const auto& manifest = header.at("manifest");

  ckpt.params = zeros_like(ckpt.spec);
  size_t index = 0;
  size_t offset = 0;
  ckpt.params.for_each_tensor([&](const std::string& name, Matrix& m) {
    if (index >= manifest.size()) {
      throw FormatError("checkpoint manifest missing tensor " + name);
    }
    const auto& entry = manifest.at(index);
    const std::string entry_name = entry.value("name", std::string());
    const size_t rows = entry.value("rows", size_t{0});
    const size_t cols = entry.value("cols", size_t{0});
    const size_t entry_offset = entry.value("offset", size_t{0});
    if (entry_name != name) {
      throw FormatError("checkpoint manifest entry " + std::to_string(index) +
                        " is " + entry_name + ", expected " + name);
    }
    if (rows != m.rows() || cols != m.cols()) {
      throw FormatError("checkpoint tensor " + name + " declares [" +
                        std::to_string(rows) + "x" + std::to_string(cols) +
                        "], architecture implies [" + std::to_string(m.rows()) +
                        "x" + std::to_string(m.cols()) + "]");
    }
    if (entry_offset != offset) {
      throw FormatError("checkpoint tensor " + name + " offset " +
                        std::to_string(entry_offset) + ", expected " +
                        std::to_string(offset));
    }
    read_doubles(in, m.data(), name.c_str());
    offset += m.size() * sizeof(double);
    ++index;
  });
  if (index != manifest.size()) {
    throw FormatError("checkpoint manifest has " +
                      std::to_string(manifest.size()) +
                      " entries, architecture implies " + std::to_string(index));
  }
  char extra;
  if (in.read(&extra, 1)) {
    throw FormatError("checkpoint has trailing bytes after payload");
  }
  return ckpt;
}

}  // namespace fpnn
