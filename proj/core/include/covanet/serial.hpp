#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covanet/common.hpp"
#include "covanet/net.hpp"

namespace covanet {

/// Little-endian byte IO helpers.
namespace bytes {

void putU8(std::vector<std::uint8_t>& out, std::uint8_t v);
void putU32(std::vector<std::uint8_t>& out, std::uint32_t v);
void putF32(std::vector<std::uint8_t>& out, float v);
void putF64(std::vector<std::uint8_t>& out, double v);

class Reader {
 public:
  Reader(const std::uint8_t* data, std::size_t size)
      : data_(data), size_(size) {}
  explicit Reader(const std::vector<std::uint8_t>& buf)
      : Reader(buf.data(), buf.size()) {}

  std::uint8_t u8();
  std::uint32_t u32();
  float f32();
  double f64();
  std::size_t offset() const { return offset_; }
  std::size_t remaining() const { return size_ - offset_; }
  bool done() const { return offset_ == size_; }

 private:
  void need(std::size_t n) const;
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t offset_{0};
};

}  // namespace bytes

/// Checkpoint layout, all little-endian:
///   "CKPT" | u32 version | u8 kind | u32 layerCount
///   per layer: u32 inDim | u32 outDim | u8 activation
///   per layer: weights f32 row-major (out x in), then bias f32 (out)
/// Round-trips are bit-exact.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void serializeNetwork(const Mlp<float>& net, std::vector<std::uint8_t>& out);
std::vector<std::uint8_t> serializeNetwork(const Mlp<float>& net);

/// Throws IoError on bad magic, version, or truncation.
Mlp<float> parseNetwork(bytes::Reader& reader);

void saveNetworkFile(const std::string& path, const Mlp<float>& net);
Mlp<float> loadNetworkFile(const std::string& path);

std::vector<std::uint8_t> readFileBytes(const std::string& path);
void writeFileBytes(const std::string& path,
                    const std::vector<std::uint8_t>& data);

}  // namespace covanet
