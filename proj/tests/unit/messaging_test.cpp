#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nyopsim/error.hpp"
#include "nyopsim/messaging.hpp"

namespace nyopsim {
namespace {

Message order(AgentId from, AgentId to, int t, double qty) {
  return {Performative::Request, from, to, t, 0, 0, payload::Order{qty}};
}

Message shipment(AgentId from, AgentId to, int t, double qty) {
  return {Performative::Inform, from, to, t, 0, 0, payload::Shipment{qty, 0}};
}

TEST(Transport, ZeroDelayOrder) {
  Transport tr;
  tr.set_link(4, 3, Channel::Control, 0);
  const Message m = tr.send(order(4, 3, 10, 5.0));
  EXPECT_EQ(m.deliver_period, 10);
  const auto out = tr.deliver(10);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].payload, Payload(payload::Order{5.0}));
}

TEST(Transport, ShipmentDelay) {
  Transport tr;
  tr.set_link(3, 4, Channel::Material, 1);
  tr.set_link(2, 3, Channel::Material, 0);
  EXPECT_EQ(tr.send(shipment(3, 4, 10, 7.0)).deliver_period, 11);
  EXPECT_EQ(tr.send(shipment(2, 3, 10, 7.0)).deliver_period, 10);
}

TEST(Transport, ChannelsHaveIndependentDelays) {
  Transport tr;
  tr.set_link(1, 2, Channel::Control, 0);
  tr.set_link(1, 2, Channel::Material, 3);
  EXPECT_EQ(tr.send(shipment(1, 2, 0, 1.0)).deliver_period, 3);
  EXPECT_EQ(tr.send({Performative::RejectProposal, 1, 2, 0, 0, 0, payload::BidReply{false, 1.0, std::nullopt}})
                .deliver_period,
            0);
}

TEST(Transport, DeliverEmpty) {
  Transport tr;
  EXPECT_TRUE(tr.deliver(0).empty());
}

TEST(Transport, DeliveryOrderBySenderThenSequence) {
  Transport tr;
  tr.set_link(2, 9, Channel::Control, 0);
  tr.set_link(1, 9, Channel::Control, 0);
  tr.send(order(2, 9, 5, 1.0));
  tr.send(order(1, 9, 5, 2.0));
  tr.send(order(2, 9, 5, 3.0));
  const auto out = tr.deliver(5);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].sender, 1);
  EXPECT_EQ(out[1].sender, 2);
  EXPECT_EQ(std::get<payload::Order>(out[1].payload).qty, 1.0);
  EXPECT_EQ(std::get<payload::Order>(out[2].payload).qty, 3.0);
}

TEST(Transport, FutureMessagesStayQueued) {
  Transport tr;
  tr.set_link(1, 2, Channel::Material, 1);
  tr.send(shipment(1, 2, 4, 1.0));
  EXPECT_TRUE(tr.deliver(4).empty());
  EXPECT_EQ(tr.in_flight(), 1u);
  EXPECT_EQ(tr.deliver(5).size(), 1u);
  EXPECT_EQ(tr.in_flight(), 0u);
}

TEST(Transport, Errors) {
  Transport tr;
  try {
    tr.send(order(1, 2, 0, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownLink);
  }
  tr.set_link(1, 2, Channel::Control, 0);
  tr.set_link(1, 2, Channel::Material, 0);
  EXPECT_THROW(tr.send(order(1, 2, 0, -1.0)), Error);
  EXPECT_THROW(tr.send(shipment(1, 2, 0, -0.5)), Error);
  tr.deliver(3);
  try {
    tr.send(order(1, 2, 3, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LateMessage);
  }
  EXPECT_THROW(tr.deliver(3), Error);
  EXPECT_THROW(tr.set_link(1, 3, Channel::Control, -1), Error);
}

TEST(TransportProperties, ConservationDeterminismAndPairOrder) {
  auto simulate = [](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Transport tr;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) tr.set_link(a, b, Channel::Material, static_cast<int>(rng() % 4));
    double sent = 0.0;
    double received = 0.0;
    std::vector<Message> delivered;
    for (int t = 0; t < 200; ++t) {
      for (int i = 0; i < 5; ++i) {
        const double qty = static_cast<double>(rng() % 100);
        tr.send(shipment(static_cast<int>(rng() % 4), static_cast<int>(rng() % 4), t, qty));
        sent += qty;
      }
      for (const Message& m : tr.deliver(t)) {
        received += std::get<payload::Shipment>(m.payload).qty;
        delivered.push_back(m);
      }
    }
    for (const Message& m : tr.pending()) received += std::get<payload::Shipment>(m.payload).qty;
    EXPECT_DOUBLE_EQ(sent, received);
    return delivered;
  };
  const auto a = simulate(42);
  EXPECT_EQ(a, simulate(42));

  // Within one (sender, receiver) pair with a fixed delay, send order is kept.
  std::map<std::pair<int, int>, std::uint64_t> last;
  for (const Message& m : a) {
    const auto key = std::make_pair(m.sender, m.receiver);
    if (last.count(key)) EXPECT_GT(m.seq, last[key]);
    last[key] = m.seq;
  }
}

TEST(Trace, JsonLinesFields) {
  Transport tr;
  tr.set_link(4, 3, Channel::Control, 0);
  std::ostringstream out;
  JsonlTraceWriter writer(out);
  writer(tr.send({Performative::Propose, 4, 3, 12, 0, 0, payload::Bid{80.0, 114.0, 1}}));
  writer(tr.send(order(4, 3, 12, 80.0)));

  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j.size(), 7u);
  EXPECT_EQ(j["period"], 12);
  EXPECT_EQ(j["performative"], "PROPOSE");
  EXPECT_EQ(j["sender"], 4);
  EXPECT_EQ(j["receiver"], 3);
  EXPECT_EQ(j["payload_type"], "Bid");
  EXPECT_EQ(j["qty"], 80.0);
  EXPECT_EQ(j["price"], 114.0);

  std::getline(lines, line);
  j = nlohmann::json::parse(line);
  EXPECT_EQ(j["performative"], "REQUEST");
  EXPECT_EQ(j["payload_type"], "Order");
  EXPECT_TRUE(j["price"].is_null());
  EXPECT_EQ(line.find("\"period\""), 1u);  // field order is stable
}

}  // namespace
}  // namespace nyopsim
