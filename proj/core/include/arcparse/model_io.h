#ifndef ARCPARSE_MODEL_IO_H_
#define ARCPARSE_MODEL_IO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "arcparse/adam.h"
#include "arcparse/model.h"
#include "arcparse/treebank.h"
#include "arcparse/vocab.h"

namespace arcparse {

// Model container layout (all integers little-endian):
//
//   "ARCPARSE"                      8-byte magic
//   u32 version                     kModelFormatVersion
//   u32 x4 dims                     word, pos, lstm, hidden
//   u32 epochs_completed, u8 pos_column
//   vocab: words (u32 count, {u32 len, bytes, u32 freq}...),
//          pos and labels (u32 count, {u32 len, bytes}...)
//   u32 blocks, {u32 len, name, u32 rows, u32 cols}...   shape manifest
//   f32 blobs, one per block, column-major
//   u8 has_adam [, u64 step, f32 first moments, f32 second moments]
//   u32 CRC-32 of every preceding byte
inline constexpr std::uint32_t kModelFormatVersion = 1;

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelMeta {
  int epochs_completed = 0;
  PosColumn pos_column = PosColumn::kAuto;

  bool operator==(const ModelMeta&) const = default;
};

struct ModelFile {
  ModelParams params;
  Vocab vocab;
  ModelMeta meta;
  std::optional<AdamState> adam;
};

std::string SerializeModel(const ModelParams& params, const Vocab& vocab,
                           const ModelMeta& meta, const AdamState* adam = nullptr);
ModelFile DeserializeModel(const std::string& bytes);

void SaveModel(const std::filesystem::path& path, const ModelParams& params,
               const Vocab& vocab, const ModelMeta& meta, const AdamState* adam = nullptr);
ModelFile LoadModel(const std::filesystem::path& path);

}  // namespace arcparse

#endif  // ARCPARSE_MODEL_IO_H_
