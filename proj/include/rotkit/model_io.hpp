#pragma once

#include <string>

#include "rotkit/codecs.hpp"
#include "rotkit/features.hpp"
#include "rotkit/mlp.hpp"

namespace rotkit {

struct ModelFile {
  CodecSpec codec;
  FeatureExtractor fx;
  HeadParams params;
};

// Versioned binary: magic string, codec/extractor configuration, shape table,
// then tensors as little-endian 32-bit floats.
void save_model(const std::string& path, const ModelFile& m);
ModelFile load_model(const std::string& path);

}  // namespace rotkit
