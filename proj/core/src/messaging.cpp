#include "nyopsim/messaging.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "nyopsim/error.hpp"

namespace nyopsim {

std::string_view to_string(Performative p) noexcept {
  switch (p) {
    case Performative::Request: return "REQUEST";
    case Performative::Propose: return "PROPOSE";
    case Performative::AcceptProposal: return "ACCEPT_PROPOSAL";
    case Performative::RejectProposal: return "REJECT_PROPOSAL";
    case Performative::Inform: return "INFORM";
    case Performative::Confirm: return "CONFIRM";
  }
  return "UNKNOWN";
}

namespace {

struct PayloadInfo {
  std::string_view type;
  double qty;
  std::optional<double> price;
};

PayloadInfo describe(const Payload& p) {
  struct Visitor {
    PayloadInfo operator()(const payload::Order& o) const { return {"Order", o.qty, std::nullopt}; }
    PayloadInfo operator()(const payload::Bid& b) const { return {"Bid", b.qty, b.price}; }
    PayloadInfo operator()(const payload::BidReply& r) const {
      return {"BidReply", r.qty, r.threshold_met_price};
    }
    PayloadInfo operator()(const payload::Shipment& s) const { return {"Shipment", s.qty, std::nullopt}; }
    PayloadInfo operator()(const payload::DemandBroadcast& d) const {
      return {"DemandBroadcast", d.qty, std::nullopt};
    }
  };
  return std::visit(Visitor{}, p);
}

void check(const Message& m) {
  const PayloadInfo info = describe(m.payload);
  if (!std::isfinite(info.qty)) throw Error(ErrorKind::InvalidMessage, "non-finite quantity");
  const bool needs_nonnegative = std::holds_alternative<payload::Order>(m.payload) ||
                                 std::holds_alternative<payload::Shipment>(m.payload);
  if (needs_nonnegative && info.qty < 0.0) {
    throw Error(ErrorKind::InvalidMessage, std::string(info.type) + " quantity must be >= 0");
  }
}

}  // namespace

std::string_view payload_type(const Payload& p) noexcept { return describe(p).type; }

Channel channel_of(const Payload& p) noexcept {
  return std::holds_alternative<payload::Shipment>(p) ? Channel::Material : Channel::Control;
}

void Transport::set_link(AgentId from, AgentId to, Channel channel, int delay) {
  if (delay < 0) throw Error(ErrorKind::InvalidArgument, "link delay must be >= 0");
  delays_[{from, to, channel}] = delay;
}

std::optional<int> Transport::link_delay(AgentId from, AgentId to, Channel channel) const {
  const auto it = delays_.find({from, to, channel});
  if (it == delays_.end()) return std::nullopt;
  return it->second;
}

Message Transport::send(Message m) {
  const auto delay = link_delay(m.sender, m.receiver, channel_of(m.payload));
  if (!delay) {
    throw Error(ErrorKind::UnknownLink,
                "no link " + std::to_string(m.sender) + " -> " + std::to_string(m.receiver));
  }
  check(m);
  m.deliver_period = m.sent_period + *delay;
  if (last_delivered_ && m.deliver_period <= *last_delivered_) {
    throw Error(ErrorKind::LateMessage,
                "period " + std::to_string(m.deliver_period) + " was already delivered");
  }
  m.seq = next_seq_++;
  queue_[m.deliver_period].push_back(m);
  return m;
}

std::vector<Message> Transport::deliver(int period) {
  if (last_delivered_ && period <= *last_delivered_) {
    throw Error(ErrorKind::LateMessage, "period " + std::to_string(period) + " was already delivered");
  }
  last_delivered_ = period;
  std::vector<Message> out;
  // Periods the caller skipped are flushed here rather than lost.
  while (!queue_.empty() && queue_.begin()->first <= period) {
    auto node = queue_.extract(queue_.begin());
    auto& batch = node.mapped();
    out.insert(out.end(), batch.begin(), batch.end());
  }
  std::stable_sort(out.begin(), out.end(), [](const Message& a, const Message& b) {
    if (a.deliver_period != b.deliver_period) return a.deliver_period < b.deliver_period;
    if (a.sender != b.sender) return a.sender < b.sender;
    return a.seq < b.seq;
  });
  return out;
}

std::size_t Transport::in_flight() const noexcept {
  std::size_t n = 0;
  for (const auto& [period, batch] : queue_) n += batch.size();
  return n;
}

std::vector<Message> Transport::pending() const {
  std::vector<Message> out;
  for (const auto& [period, batch] : queue_) {
    std::vector<Message> sorted = batch;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Message& a, const Message& b) {
      return a.sender != b.sender ? a.sender < b.sender : a.seq < b.seq;
    });
    out.insert(out.end(), sorted.begin(), sorted.end());
  }
  return out;
}

std::string trace_line(const Message& m) {
  const PayloadInfo info = describe(m.payload);
  nlohmann::ordered_json j;
  j["period"] = m.sent_period;
  j["performative"] = to_string(m.performative);
  j["sender"] = m.sender;
  j["receiver"] = m.receiver;
  j["payload_type"] = info.type;
  j["qty"] = info.qty;
  j["price"] = info.price ? nlohmann::ordered_json(*info.price) : nlohmann::ordered_json(nullptr);
  return j.dump();
}

void JsonlTraceWriter::operator()(const Message& m) const { *out_ << trace_line(m) << '\n'; }

}  // namespace nyopsim
