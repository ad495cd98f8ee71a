#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

namespace nyopsim {

using AgentId = int;

enum class Performative {
  Request,         // purchase order
  Propose,         // NYOP bid
  AcceptProposal,
  RejectProposal,
  Inform,          // shipment notice or market-demand broadcast
  Confirm,         // negotiated purchase order
};

std::string_view to_string(Performative p) noexcept;

namespace payload {
struct Order {
  double qty;
  bool operator==(const Order&) const = default;
};
struct Bid {
  double qty;
  double price;
  int round;
  bool operator==(const Bid&) const = default;
};
struct BidReply {
  bool accepted;
  double qty;
  std::optional<double> threshold_met_price;  // the bid price when accepted
  bool operator==(const BidReply&) const = default;
};
struct Shipment {
  double qty;
  std::uint64_t order_ref;
  bool operator==(const Shipment&) const = default;
};
struct DemandBroadcast {
  double qty;
  bool operator==(const DemandBroadcast&) const = default;
};
}  // namespace payload

using Payload = std::variant<payload::Order, payload::Bid, payload::BidReply, payload::Shipment,
                             payload::DemandBroadcast>;

std::string_view payload_type(const Payload& p) noexcept;

struct Message {
  Performative performative = Performative::Inform;
  AgentId sender = 0;
  AgentId receiver = 0;
  int sent_period = 0;
  int deliver_period = 0;  // assigned by Transport::send
  std::uint64_t seq = 0;   // assigned by Transport::send
  Payload payload = payload::Order{0.0};

  bool operator==(const Message&) const = default;
};

/// Physical goods travel on the material channel; everything else is control.
enum class Channel { Control, Material };

Channel channel_of(const Payload& p) noexcept;

/// In-process message transport. Messages are queued by delivery period and
/// handed out once, ordered by sender id and then send sequence.
class Transport {
 public:
  void set_link(AgentId from, AgentId to, Channel channel, int delay);
  std::optional<int> link_delay(AgentId from, AgentId to, Channel channel) const;

  /// Enqueue `m` for delivery at m.sent_period + link delay. Returns the
  /// stamped copy. Throws UnknownLink, InvalidMessage or LateMessage (the
  /// target period has already been delivered).
  Message send(Message m);

  /// Remove and return every message due at `period`. Periods must be
  /// delivered in strictly increasing order.
  std::vector<Message> deliver(int period);

  std::size_t in_flight() const noexcept;
  /// Snapshot of queued messages in delivery order.
  std::vector<Message> pending() const;

 private:
  std::map<std::tuple<AgentId, AgentId, Channel>, int> delays_;
  std::map<int, std::vector<Message>> queue_;
  std::uint64_t next_seq_ = 0;
  std::optional<int> last_delivered_;
};

/// Writes one JSON object per message with the fields period, performative,
/// sender, receiver, payload_type, qty, price.
class JsonlTraceWriter {
 public:
  explicit JsonlTraceWriter(std::ostream& out) : out_(&out) {}
  void operator()(const Message& m) const;

 private:
  std::ostream* out_;
};

std::string trace_line(const Message& m);

using MessageSink = std::function<void(const Message&)>;

}  // namespace nyopsim
