#include "rotkit/model_io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace rotkit {

namespace {

constexpr char kMagic[8] = {'R', 'O', 'T', 'K', 'I', 'T', 'M', '1'};
constexpr uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& f, const T& v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& f) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!f) throw std::runtime_error("model file: truncated");
  return v;
}

void put_tensor(std::ofstream& f, const std::vector<double>& t, uint32_t rows, uint32_t cols) {
  put(f, rows);
  put(f, cols);
  for (double v : t) {
    float x = static_cast<float>(v);
    put(f, x);
  }
}

std::vector<double> get_tensor(std::ifstream& f, uint32_t expect_rows, uint32_t expect_cols) {
  uint32_t rows = get<uint32_t>(f);
  uint32_t cols = get<uint32_t>(f);
  if (rows != expect_rows || cols != expect_cols) {
    throw std::runtime_error("model file: tensor shape does not match header dimensions");
  }
  std::vector<double> t(static_cast<size_t>(rows) * cols);
  for (double& v : t) v = get<float>(f);
  return t;
}

}  // namespace

void save_model(const std::string& path, const ModelFile& m) {
  m.codec.validate();
  if (m.params.out_dim != m.codec.output_dim() || m.params.in_dim != m.fx.out_dim()) {
    throw std::invalid_argument("save_model: parameter shapes disagree with codec/extractor");
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("save_model: cannot open " + path);

  f.write(kMagic, sizeof(kMagic));
  put(f, kVersion);
  put(f, static_cast<uint32_t>(m.codec.method));
  put(f, static_cast<uint8_t>(m.codec.naive_l1 ? 1 : 0));
  put(f, m.codec.uv_lambda);
  put(f, static_cast<int32_t>(m.codec.psc_phases));
  put(f, m.codec.psc_frequency);
  put(f, static_cast<int32_t>(m.codec.bins));
  put(f, m.codec.cgd_sigma_deg);

  put(f, static_cast<uint32_t>(m.fx.kind));
  put(f, static_cast<int32_t>(m.fx.image_size));
  put(f, static_cast<int32_t>(m.fx.cell_grid));
  put(f, static_cast<int32_t>(m.fx.orientation_bins));

  put(f, m.params.seed);
  put(f, static_cast<int32_t>(m.params.in_dim));
  put(f, static_cast<int32_t>(m.params.hidden_dim));
  put(f, static_cast<int32_t>(m.params.out_dim));

  put(f, static_cast<uint32_t>(4));  // tensor count
  put_tensor(f, m.params.w1, static_cast<uint32_t>(m.params.hidden_dim),
             static_cast<uint32_t>(m.params.in_dim));
  put_tensor(f, m.params.b1, 1, static_cast<uint32_t>(m.params.hidden_dim));
  put_tensor(f, m.params.w2, static_cast<uint32_t>(m.params.out_dim),
             static_cast<uint32_t>(m.params.hidden_dim));
  put_tensor(f, m.params.b2, 1, static_cast<uint32_t>(m.params.out_dim));
  if (!f) throw std::runtime_error("save_model: short write to " + path);
}

ModelFile load_model(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_model: cannot open " + path);

  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("load_model: not a model file: " + path);
  }
  uint32_t version = get<uint32_t>(f);
  if (version != kVersion) throw std::runtime_error("load_model: unsupported version");

  ModelFile m;
  uint32_t method = get<uint32_t>(f);
  if (method > 4) throw std::runtime_error("load_model: bad method id");
  m.codec.method = static_cast<Method>(method);
  m.codec.naive_l1 = get<uint8_t>(f) != 0;
  m.codec.uv_lambda = get<double>(f);
  m.codec.psc_phases = get<int32_t>(f);
  m.codec.psc_frequency = get<double>(f);
  m.codec.bins = get<int32_t>(f);
  m.codec.cgd_sigma_deg = get<double>(f);
  m.codec.validate();

  uint32_t kind = get<uint32_t>(f);
  if (kind > 1) throw std::runtime_error("load_model: bad extractor kind");
  m.fx.kind = static_cast<FeatureExtractor::Kind>(kind);
  m.fx.image_size = get<int32_t>(f);
  m.fx.cell_grid = get<int32_t>(f);
  m.fx.orientation_bins = get<int32_t>(f);

  m.params.seed = get<uint64_t>(f);
  m.params.in_dim = get<int32_t>(f);
  m.params.hidden_dim = get<int32_t>(f);
  m.params.out_dim = get<int32_t>(f);
  if (m.params.in_dim != m.fx.out_dim() || m.params.out_dim != m.codec.output_dim()) {
    throw std::runtime_error("load_model: shape mismatch between head, codec and extractor");
  }

  uint32_t tensors = get<uint32_t>(f);
  if (tensors != 4) throw std::runtime_error("load_model: unexpected tensor count");
  m.params.w1 = get_tensor(f, static_cast<uint32_t>(m.params.hidden_dim),
                           static_cast<uint32_t>(m.params.in_dim));
  m.params.b1 = get_tensor(f, 1, static_cast<uint32_t>(m.params.hidden_dim));
  m.params.w2 = get_tensor(f, static_cast<uint32_t>(m.params.out_dim),
                           static_cast<uint32_t>(m.params.hidden_dim));
  m.params.b2 = get_tensor(f, 1, static_cast<uint32_t>(m.params.out_dim));
  return m;
}

}  // namespace rotkit
