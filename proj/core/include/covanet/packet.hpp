#pragma once

#include <cstdint>
#include <vector>

#include "covanet/net.hpp"
#include "covanet/serial.hpp"

namespace covanet {

/// One cooperative parameter exchange: the sender's actor and critic plus the
/// average reward its parameters earned. Immutable after construction.
///
/// Wire format, little-endian:
///   u32 sender id | f64 averageReward | u32 episode | u32 step |
///   actor checkpoint | critic checkpoint
struct ParameterPacket {
  std::uint32_t senderId{0};
  double averageReward{0.0};
  std::uint32_t episode{0};
  std::uint32_t step{0};
  Mlp<float> actor;
  Mlp<float> critic;

  std::vector<std::uint8_t> serialize() const;

  /// Throws IoError on malformed input.
  static ParameterPacket parse(const std::vector<std::uint8_t>& data);
};

}  // namespace covanet
