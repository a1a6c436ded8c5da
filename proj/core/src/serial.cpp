#include "covanet/serial.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace covanet {
namespace bytes {

void putU8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

void putU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

void putF32(std::vector<std::uint8_t>& out, float v) {
  putU32(out, std::bit_cast<std::uint32_t>(v));
}

void putF64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  putU32(out, static_cast<std::uint32_t>(bits));
  putU32(out, static_cast<std::uint32_t>(bits >> 32));
}

void Reader::need(std::size_t n) const {
  if (offset_ + n > size_) throw IoError("truncated input");
}

std::uint8_t Reader::u8() {
  need(1);
  return data_[offset_++];
}

std::uint32_t Reader::u32() {
  need(4);
  std::uint32_t v = static_cast<std::uint32_t>(data_[offset_]) |
                    static_cast<std::uint32_t>(data_[offset_ + 1]) << 8 |
                    static_cast<std::uint32_t>(data_[offset_ + 2]) << 16 |
                    static_cast<std::uint32_t>(data_[offset_ + 3]) << 24;
  offset_ += 4;
  return v;
}

float Reader::f32() { return std::bit_cast<float>(u32()); }

double Reader::f64() {
  const std::uint64_t lo = u32();
  const std::uint64_t hi = u32();
  return std::bit_cast<double>(lo | (hi << 32));
}

}  // namespace bytes

namespace {
constexpr char kMagic[4] = {'C', 'K', 'P', 'T'};
constexpr std::uint32_t kMaxLayerDim = 1u << 20;
}  // namespace

void serializeNetwork(const Mlp<float>& net, std::vector<std::uint8_t>& out) {
  out.insert(out.end(), kMagic, kMagic + 4);
  bytes::putU32(out, kCheckpointVersion);
  bytes::putU8(out, static_cast<std::uint8_t>(net.kind()));
  bytes::putU32(out, static_cast<std::uint32_t>(net.numLayers()));
  for (const auto& layer : net.layers()) {
    bytes::putU32(out, static_cast<std::uint32_t>(layer.inDim));
    bytes::putU32(out, static_cast<std::uint32_t>(layer.outDim));
    bytes::putU8(out, static_cast<std::uint8_t>(layer.activation));
  }
  for (const auto& layer : net.layers()) {
    for (float w : layer.weights) bytes::putF32(out, w);
    for (float b : layer.bias) bytes::putF32(out, b);
  }
}

std::vector<std::uint8_t> serializeNetwork(const Mlp<float>& net) {
  std::vector<std::uint8_t> out;
  serializeNetwork(net, out);
  return out;
}

Mlp<float> parseNetwork(bytes::Reader& r) {
  char magic[4];
  for (char& c : magic) c = static_cast<char>(r.u8());
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw IoError("checkpoint: bad magic");
  }
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw IoError("checkpoint: unsupported version " + std::to_string(version));
  }
  const std::uint8_t kindByte = r.u8();
  if (kindByte > 1) throw IoError("checkpoint: bad network kind");
  const std::uint32_t layerCount = r.u32();
  if (layerCount == 0 || layerCount > 64) {
    throw IoError("checkpoint: implausible layer count");
  }

  std::vector<int> dims;
  std::vector<Activation> acts;
  for (std::uint32_t i = 0; i < layerCount; ++i) {
    const std::uint32_t inDim = r.u32();
    const std::uint32_t outDim = r.u32();
    const std::uint8_t act = r.u8();
    if (inDim == 0 || outDim == 0 || inDim > kMaxLayerDim || outDim > kMaxLayerDim) {
      throw IoError("checkpoint: implausible layer dims");
    }
    if (act > static_cast<std::uint8_t>(Activation::ActionSquash)) {
      throw IoError("checkpoint: unknown activation tag");
    }
    if (i == 0) {
      dims.push_back(static_cast<int>(inDim));
    } else if (dims.back() != static_cast<int>(inDim)) {
      throw IoError("checkpoint: layer dims do not chain");
    }
    dims.push_back(static_cast<int>(outDim));
    acts.push_back(static_cast<Activation>(act));
  }

  Mlp<float> net(static_cast<NetworkKind>(kindByte), dims, acts);
  for (auto& layer : net.layers()) {
    for (float& w : layer.weights) w = r.f32();
    for (float& b : layer.bias) b = r.f32();
  }
  return net;
}

void saveNetworkFile(const std::string& path, const Mlp<float>& net) {
  writeFileBytes(path, serializeNetwork(net));
}

Mlp<float> loadNetworkFile(const std::string& path) {
  const auto data = readFileBytes(path);
  bytes::Reader r(data);
  Mlp<float> net = parseNetwork(r);
  if (!r.done()) throw IoError(path + ": trailing bytes after checkpoint");
  return net;
}

std::vector<std::uint8_t> readFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

void writeFileBytes(const std::string& path,
                    const std::vector<std::uint8_t>& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace covanet
