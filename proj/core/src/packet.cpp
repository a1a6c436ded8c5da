#include "covanet/packet.hpp"

namespace covanet {

std::vector<std::uint8_t> ParameterPacket::serialize() const {
  std::vector<std::uint8_t> out;
  bytes::putU32(out, senderId);
  bytes::putF64(out, averageReward);
  bytes::putU32(out, episode);
  bytes::putU32(out, step);
  serializeNetwork(actor, out);
  serializeNetwork(critic, out);
  return out;
}

ParameterPacket ParameterPacket::parse(const std::vector<std::uint8_t>& data) {
  bytes::Reader r(data);
  ParameterPacket p;
  p.senderId = r.u32();
  p.averageReward = r.f64();
  p.episode = r.u32();
  p.step = r.u32();
  p.actor = parseNetwork(r);
  p.critic = parseNetwork(r);
  if (!r.done()) throw IoError("parameter packet: trailing bytes");
  if (p.actor.kind() != NetworkKind::Actor ||
      p.critic.kind() != NetworkKind::Critic) {
    throw IoError("parameter packet: network kinds are swapped");
  }
  return p;
}

}  // namespace covanet
