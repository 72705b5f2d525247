#include "arcparse/model_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <zlib.h>

namespace arcparse {
namespace {

constexpr char kMagic[8] = {'A', 'R', 'C', 'P', 'A', 'R', 'S', 'E'};

class Writer {
 public:
  void U8(std::uint8_t v) { bytes_.push_back(static_cast<char>(v)); }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void F32(float v) { U32(std::bit_cast<std::uint32_t>(v)); }
  void Str(std::string_view s) {
    U32(static_cast<std::uint32_t>(s.size()));
    bytes_.append(s);
  }
  void Raw(const char* data, std::size_t size) { bytes_.append(data, size); }
  void Blob(const MatrixX<float>& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) F32(m.data()[i]);
  }
  std::string& bytes() { return bytes_; }

 private:
  std::string bytes_;
};

class Reader {
 public:
  Reader(const std::string& bytes, std::size_t end) : bytes_(bytes), end_(end) {}

  std::uint8_t U8() {
    Need(1);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }
  std::uint32_t U32() {
    Need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes_[pos_++])) << (8 * i);
    }
    return v;
  }
  std::uint64_t U64() {
    Need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(bytes_[pos_++])) << (8 * i);
    }
    return v;
  }
  float F32() { return std::bit_cast<float>(U32()); }
  std::string Str() {
    const std::uint32_t size = U32();
    Need(size);
    std::string s = bytes_.substr(pos_, size);
    pos_ += size;
    return s;
  }
  void Blob(MatrixX<float>& m) {
    Need(static_cast<std::size_t>(m.size()) * 4);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = F32();
  }
  std::size_t pos() const { return pos_; }

 private:
  void Need(std::size_t n) const {
    if (pos_ + n > end_) throw ModelFormatError("model file is truncated");
  }
  const std::string& bytes_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

std::uint32_t Crc32(const char* data, std::size_t size) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(data), static_cast<uInt>(size));
  return static_cast<std::uint32_t>(crc);
}

void WriteTable(Writer& w, const std::vector<std::string>& symbols, std::size_t skip) {
  w.U32(static_cast<std::uint32_t>(symbols.size() - skip));
  for (std::size_t i = skip; i < symbols.size(); ++i) w.Str(symbols[i]);
}

std::vector<std::string> ReadTable(Reader& r) {
  const std::uint32_t count = r.U32();
  std::vector<std::string> symbols;
  for (std::uint32_t i = 0; i < count; ++i) symbols.push_back(r.Str());
  return symbols;
}

}  // namespace

std::string SerializeModel(const ModelParams& params, const Vocab& vocab,
                           const ModelMeta& meta, const AdamState* adam) {
  Writer w;
  w.Raw(kMagic, sizeof(kMagic));
  w.U32(kModelFormatVersion);
  w.U32(static_cast<std::uint32_t>(params.dims.word_dim));
  w.U32(static_cast<std::uint32_t>(params.dims.pos_dim));
  w.U32(static_cast<std::uint32_t>(params.dims.lstm_dim));
  w.U32(static_cast<std::uint32_t>(params.dims.hidden_dim));
  w.U32(static_cast<std::uint32_t>(meta.epochs_completed));
  w.U8(static_cast<std::uint8_t>(meta.pos_column));

  const auto& words = vocab.words().symbols();
  w.U32(static_cast<std::uint32_t>(words.size() - 1));
  for (std::size_t i = 1; i < words.size(); ++i) {
    w.Str(words[i]);
    w.U32(static_cast<std::uint32_t>(vocab.WordCount(static_cast<int>(i))));
  }
  WriteTable(w, vocab.pos().symbols(), 1);
  WriteTable(w, vocab.labels().symbols(), 0);

  std::uint32_t blocks = 0;
  params.ForEachBlock([&](std::string_view, const MatrixX<float>&) { ++blocks; });
  w.U32(blocks);
  params.ForEachBlock([&](std::string_view name, const MatrixX<float>& m) {
    w.Str(name);
    w.U32(static_cast<std::uint32_t>(m.rows()));
    w.U32(static_cast<std::uint32_t>(m.cols()));
  });
  params.ForEachBlock([&](std::string_view, const MatrixX<float>& m) { w.Blob(m); });

  w.U8(adam != nullptr ? 1 : 0);
  if (adam != nullptr) {
    w.U64(static_cast<std::uint64_t>(adam->step));
    adam->m.ForEachBlock([&](std::string_view, const MatrixX<float>& m) { w.Blob(m); });
    adam->v.ForEachBlock([&](std::string_view, const MatrixX<float>& m) { w.Blob(m); });
  }
  w.U32(Crc32(w.bytes().data(), w.bytes().size()));
  return std::move(w.bytes());
}

ModelFile DeserializeModel(const std::string& bytes) {
  if (bytes.size() < sizeof(kMagic) + 8) throw ModelFormatError("model file is truncated");
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw ModelFormatError("not a model file (bad magic bytes)");
  }
  const std::size_t body = bytes.size() - 4;
  Reader r(bytes, bytes.size());
  for (std::size_t i = 0; i < sizeof(kMagic); ++i) r.U8();
  const std::uint32_t version = r.U32();
  if (version != kModelFormatVersion) {
    throw ModelFormatError("unsupported model format version " + std::to_string(version) +
                           " (expected " + std::to_string(kModelFormatVersion) + ")");
  }
  {
    std::uint32_t stored = 0;
    for (int i = 0; i < 4; ++i) {
      stored |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes[body + i])) << (8 * i);
    }
    if (stored != Crc32(bytes.data(), body)) {
      throw ModelFormatError("model file checksum mismatch (corrupted or truncated)");
    }
  }
  Reader in(bytes, body);
  for (std::size_t i = 0; i < sizeof(kMagic) + 4; ++i) in.U8();

  ModelDims dims;
  dims.word_dim = static_cast<int>(in.U32());
  dims.pos_dim = static_cast<int>(in.U32());
  dims.lstm_dim = static_cast<int>(in.U32());
  dims.hidden_dim = static_cast<int>(in.U32());
  ModelMeta meta;
  meta.epochs_completed = static_cast<int>(in.U32());
  const std::uint8_t pos_column = in.U8();
  if (pos_column > static_cast<std::uint8_t>(PosColumn::kXpos)) {
    throw ModelFormatError("invalid POS column tag");
  }
  meta.pos_column = static_cast<PosColumn>(pos_column);

  const std::uint32_t num_words = in.U32();
  std::vector<std::string> words;
  std::vector<int> counts;
  for (std::uint32_t i = 0; i < num_words; ++i) {
    words.push_back(in.Str());
    counts.push_back(static_cast<int>(in.U32()));
  }
  std::vector<std::string> pos = ReadTable(in);
  std::vector<std::string> labels = ReadTable(in);
  Vocab vocab;
  try {
    vocab = Vocab::FromTables(words, counts, pos, labels);
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(std::string("bad vocabulary: ") + e.what());
  }

  VocabSizes sizes{vocab.num_words(), vocab.num_pos(), vocab.num_labels()};
  ModelParams params = ModelParams::Zeros(dims, sizes);
  const std::uint32_t blocks = in.U32();
  std::uint32_t expected = 0;
  params.ForEachBlock([&](std::string_view, const MatrixX<float>&) { ++expected; });
  if (blocks != expected) {
    throw ModelFormatError("shape manifest lists " + std::to_string(blocks) +
                           " blocks, expected " + std::to_string(expected));
  }
  params.ForEachBlock([&](std::string_view name, MatrixX<float>& m) {
    const std::string stored = in.Str();
    const std::uint32_t rows = in.U32();
    const std::uint32_t cols = in.U32();
    if (stored != name || rows != m.rows() || cols != m.cols()) {
      throw ModelFormatError("block '" + stored + "' (" + std::to_string(rows) + "x" +
                             std::to_string(cols) + ") does not match vocabulary and dims for '" +
                             std::string(name) + "'");
    }
  });
  params.ForEachBlock([&](std::string_view, MatrixX<float>& m) { in.Blob(m); });

  ModelFile file{std::move(params), std::move(vocab), meta, std::nullopt};
  if (in.U8() != 0) {
    AdamState adam = AdamState::For(file.params);
    adam.step = static_cast<std::int64_t>(in.U64());
    adam.m.ForEachBlock([&](std::string_view, MatrixX<float>& m) { in.Blob(m); });
    adam.v.ForEachBlock([&](std::string_view, MatrixX<float>& m) { in.Blob(m); });
    file.adam = std::move(adam);
  }
  if (in.pos() != body) throw ModelFormatError("trailing bytes in model file");
  return file;
}

void SaveModel(const std::filesystem::path& path, const ModelParams& params,
               const Vocab& vocab, const ModelMeta& meta, const AdamState* adam) {
  const std::string bytes = SerializeModel(params, vocab, meta, adam);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

ModelFile LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return DeserializeModel(bytes);
}

}  // namespace arcparse
