#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "covanet/packet.hpp"
#include "covanet/rng.hpp"
#include "covanet/serial.hpp"

using namespace covanet;

namespace {

Mlp<float> randomActor(std::uint64_t seed) {
  Mlp<float> net = makeActor<float>(65, 12, 9);
  Rng rng(seed);
  initUniform(net, rng);
  return net;
}

Mlp<float> randomCritic(std::uint64_t seed) {
  Mlp<float> net = makeCritic<float>(65, 3, 12, 9);
  Rng rng(seed);
  initUniform(net, rng);
  return net;
}

}  // namespace

TEST_CASE("checkpoint bytes round-trip bit-exactly") {
  const Mlp<float> net = randomActor(5);
  const auto bytes1 = serializeNetwork(net);
  bytes::Reader r(bytes1);
  const Mlp<float> parsed = parseNetwork(r);
  CHECK(r.done());
  const auto bytes2 = serializeNetwork(parsed);
  CHECK(bytes1 == bytes2);
  CHECK(parsed.kind() == NetworkKind::Actor);
  for (std::size_t li = 0; li < net.numLayers(); ++li) {
    CHECK(parsed.layers()[li].weights == net.layers()[li].weights);
    CHECK(parsed.layers()[li].bias == net.layers()[li].bias);
    CHECK(parsed.layers()[li].activation == net.layers()[li].activation);
  }
}

TEST_CASE("checkpoint file round-trip") {
  const auto path = std::filesystem::temp_directory_path() / "covanet_ckpt_test.bin";
  const Mlp<float> net = randomCritic(7);
  saveNetworkFile(path.string(), net);
  const Mlp<float> loaded = loadNetworkFile(path.string());
  CHECK(serializeNetwork(loaded) == serializeNetwork(net));
  std::filesystem::remove(path);
}

TEST_CASE("malformed checkpoints are rejected") {
  const Mlp<float> net = randomActor(9);
  auto bytes1 = serializeNetwork(net);

  SUBCASE("bad magic") {
    bytes1[0] = 'X';
    bytes::Reader r(bytes1);
    CHECK_THROWS_AS(parseNetwork(r), IoError);
  }

  SUBCASE("unsupported version") {
    bytes1[4] = 99;
    bytes::Reader r(bytes1);
    CHECK_THROWS_AS(parseNetwork(r), IoError);
  }

  SUBCASE("truncation") {
    bytes1.resize(bytes1.size() / 2);
    bytes::Reader r(bytes1);
    CHECK_THROWS_AS(parseNetwork(r), IoError);
  }

  SUBCASE("empty input") {
    bytes::Reader r(nullptr, 0);
    CHECK_THROWS_AS(parseNetwork(r), IoError);
  }
}

TEST_CASE("parameter packet wire prefix layout") {
  ParameterPacket p;
  p.senderId = 0x01020304;
  p.averageReward = 2.5;
  p.episode = 7;
  p.step = 100;
  p.actor = randomActor(11);
  p.critic = randomCritic(13);
  const auto bytes1 = p.serialize();

  // little-endian u32 sender id
  CHECK(bytes1[0] == 0x04);
  CHECK(bytes1[1] == 0x03);
  CHECK(bytes1[2] == 0x02);
  CHECK(bytes1[3] == 0x01);
  // f64 2.5 = 0x4004000000000000
  CHECK(bytes1[11] == 0x40);
  CHECK(bytes1[10] == 0x04);
  for (int i = 4; i < 10; ++i) CHECK(bytes1[i] == 0x00);
  // episode then step
  CHECK(bytes1[12] == 7);
  CHECK(bytes1[16] == 100);
}

TEST_CASE("parameter packet round-trip is bit-exact") {
  ParameterPacket p;
  p.senderId = 3;
  p.averageReward = -1234.5678;
  p.episode = 42;
  p.step = 300;
  p.actor = randomActor(17);
  p.critic = randomCritic(19);

  const auto wire = p.serialize();
  const ParameterPacket q = ParameterPacket::parse(wire);
  CHECK(q.senderId == p.senderId);
  CHECK(q.averageReward == p.averageReward);
  CHECK(q.episode == p.episode);
  CHECK(q.step == p.step);
  CHECK(q.serialize() == wire);
}

TEST_CASE("packet with swapped networks is rejected") {
  ParameterPacket p;
  p.actor = randomActor(21);
  p.critic = randomCritic(23);
  auto wire = p.serialize();

  ParameterPacket swapped;
  swapped.actor = p.actor;
  swapped.critic = p.critic;
  std::vector<std::uint8_t> manual;
  bytes::putU32(manual, swapped.senderId);
  bytes::putF64(manual, swapped.averageReward);
  bytes::putU32(manual, swapped.episode);
  bytes::putU32(manual, swapped.step);
  serializeNetwork(swapped.critic, manual);  // critic first: wrong order
  serializeNetwork(swapped.actor, manual);
  CHECK_THROWS_AS(ParameterPacket::parse(manual), IoError);

  SUBCASE("trailing bytes are rejected") {
    wire.push_back(0);
    CHECK_THROWS_AS(ParameterPacket::parse(wire), IoError);
  }
}
