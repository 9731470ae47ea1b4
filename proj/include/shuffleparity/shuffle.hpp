#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shuffleparity/rng.hpp"

namespace shuffleparity {

// One protocol message: a value modulo the protocol alphabet q, tagged with
// the logical counter it belongs to.
struct Message {
  uint32_t tag = 0;
  uint32_t value = 0;

  bool operator==(const Message&) const = default;
};

// The shuffler's view: a multiset of messages with no sender identity and no
// order. Stored keyed by (tag, value) with multiplicities; canonical() gives
// the sorted form. Analyzers must be functions of this multiset alone.
class MessageBag {
 public:
  void add(const Message& m, uint64_t count = 1) {
    counts_[pack(m)] += count;
    total_ += count;
  }
  void add_all(const std::vector<Message>& ms) {
    for (const Message& m : ms) add(m);
  }
  void merge(const MessageBag& other);

  uint64_t size() const { return total_; }
  bool empty() const { return total_ == 0; }
  uint64_t multiplicity(const Message& m) const;

  // Sorted (tag, value, multiplicity) triples.
  std::vector<std::tuple<uint32_t, uint32_t, uint64_t>> canonical() const;

  template <class Fn>  // fn(tag, value, multiplicity); unspecified order
  void for_each(Fn fn) const {
    for (const auto& [key, count] : counts_) {
      fn(static_cast<uint32_t>(key >> 32), static_cast<uint32_t>(key), count);
    }
  }

  bool operator==(const MessageBag& other) const { return counts_ == other.counts_; }

 private:
  static uint64_t pack(const Message& m) {
    return (static_cast<uint64_t>(m.tag) << 32) | m.value;
  }
  std::unordered_map<uint64_t, uint64_t> counts_;
  uint64_t total_ = 0;
};

// Which parties participate honestly. Malicious parties contribute nothing.
struct PartyStatus {
  std::vector<uint8_t> honest;

  static PartyStatus all_honest(size_t n) { return PartyStatus{std::vector<uint8_t>(n, 1)}; }
  // Marks the given count of parties malicious, chosen uniformly.
  static PartyStatus with_dropouts(size_t n, size_t dropouts, RngStream& rng);

  size_t size() const { return honest.size(); }
  size_t honest_count() const;
  double honest_fraction() const {
    return honest.empty() ? 0.0 : static_cast<double>(honest_count()) / honest.size();
  }
};

enum class RecordMode {
  kFinalState,  // keep only the final bag
  kAllStates,   // keep every intermediate state, for pan-privacy probing
};

struct StateSnapshot {
  int64_t step = 0;
  MessageBag bag;
};

// The adversary-visible record of one execution: the sequence of internal
// state snapshots (each a literal message multiset) plus framework notes.
struct ExecutionTranscript {
  std::vector<StateSnapshot> states;
  std::vector<std::string> notes;

  const MessageBag& final_bag() const {
    if (states.empty()) throw std::logic_error("transcript has no states");
    return states.back().bag;
  }
};

// Line-delimited text form: one "s <step> <tag>:<value>:<mult>..." line per
// snapshot (canonical order) and one "note <text>" line per note.
void write_transcript(std::ostream& os, const ExecutionTranscript& transcript);
ExecutionTranscript read_transcript(std::istream& is);

template <class In>
using LocalRandomizer = std::function<std::vector<Message>(const In&, RngStream&)>;

template <class Out>
using Analyzer = std::function<Out(const MessageBag&)>;

// One batch round: applies each honest party's randomizer, discards malicious
// parties entirely, shuffles the messages into the canonical multiset and
// applies the analyzer. Party i's randomizer receives the stream derived from
// (rng, i), so batch and incremental executions of the same input order see
// identical randomness.
template <class In, class Out>
std::pair<Out, ExecutionTranscript> run_round(
    const std::vector<LocalRandomizer<In>>& randomizers,
    const std::vector<In>& inputs, const PartyStatus& status,
    const Analyzer<Out>& analyzer, RngStream& rng) {
  if (randomizers.size() != inputs.size() || inputs.size() != status.honest.size()) {
    throw std::invalid_argument("run_round: length mismatch");
  }
  MessageBag bag;
  for (size_t i = 0; i < inputs.size(); ++i) {
    if (!status.honest[i]) continue;
    RngStream party_stream = rng.derive(static_cast<uint64_t>(i));
    bag.add_all(randomizers[i](inputs[i], party_stream));
  }
  ExecutionTranscript transcript;
  if (bag.empty()) transcript.notes.push_back("empty-bag");
  transcript.states.push_back({0, bag});
  Out out = analyzer(bag);
  return {std::move(out), std::move(transcript)};
}

// Partition of the parties into prefix padding, online phase and suffix
// padding, in application order.
struct InjectionSchedule {
  int64_t prefix = 0;
  int64_t online = 0;
  int64_t suffix = 0;

  int64_t total() const { return prefix + online + suffix; }
};

// Incremental execution: state s_0 is the shuffled multiset after the prefix
// block, s_i after the i-th online party, s_final after the suffix block.
// Every state is a superset of its predecessor; with RecordMode::kAllStates
// all of them are kept for probing. All parties are honest here.
template <class In, class Out>
std::pair<Out, ExecutionTranscript> run_incremental(
    const std::vector<LocalRandomizer<In>>& randomizers,
    const std::vector<In>& inputs, const InjectionSchedule& schedule,
    const Analyzer<Out>& analyzer, RngStream& rng,
    RecordMode record = RecordMode::kFinalState) {
  if (randomizers.size() != inputs.size()) {
    throw std::invalid_argument("run_incremental: length mismatch");
  }
  if (schedule.prefix < 0 || schedule.online < 0 || schedule.suffix < 0 ||
      schedule.total() != static_cast<int64_t>(inputs.size())) {
    throw std::invalid_argument("run_incremental: schedule inconsistent with party count");
  }
  ExecutionTranscript transcript;
  MessageBag bag;
  size_t party = 0;
  const auto apply_party = [&]() {
    RngStream party_stream = rng.derive(static_cast<uint64_t>(party));
    bag.add_all(randomizers[party](inputs[party], party_stream));
    ++party;
  };
  for (int64_t i = 0; i < schedule.prefix; ++i) apply_party();
  if (record == RecordMode::kAllStates) transcript.states.push_back({0, bag});
  for (int64_t i = 1; i <= schedule.online; ++i) {
    apply_party();
    if (record == RecordMode::kAllStates) transcript.states.push_back({i, bag});
  }
  for (int64_t i = 0; i < schedule.suffix; ++i) apply_party();
  if (bag.empty()) transcript.notes.push_back("empty-bag");
  transcript.states.push_back({schedule.online + 1, bag});
  Out out = analyzer(bag);
  return {std::move(out), std::move(transcript)};
}

}  // namespace shuffleparity
