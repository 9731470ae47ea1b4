#include "shuffleparity/shuffle.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace shuffleparity {

void MessageBag::merge(const MessageBag& other) {
  for (const auto& [key, count] : other.counts_) counts_[key] += count;
  total_ += other.total_;
}

uint64_t MessageBag::multiplicity(const Message& m) const {
  const auto it = counts_.find(pack(m));
  return it == counts_.end() ? 0 : it->second;
}

std::vector<std::tuple<uint32_t, uint32_t, uint64_t>> MessageBag::canonical() const {
  std::vector<std::tuple<uint32_t, uint32_t, uint64_t>> out;
  out.reserve(counts_.size());
  for (const auto& [key, count] : counts_) {
    out.emplace_back(static_cast<uint32_t>(key >> 32), static_cast<uint32_t>(key), count);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PartyStatus PartyStatus::with_dropouts(size_t n, size_t dropouts, RngStream& rng) {
  if (dropouts > n) throw std::invalid_argument("with_dropouts: more dropouts than parties");
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::shuffle(order.begin(), order.end(), rng.engine());
  PartyStatus status = all_honest(n);
  for (size_t i = 0; i < dropouts; ++i) status.honest[order[i]] = 0;
  return status;
}

size_t PartyStatus::honest_count() const {
  size_t count = 0;
  for (const uint8_t h : honest) count += h;
  return count;
}

void write_transcript(std::ostream& os, const ExecutionTranscript& transcript) {
  for (const StateSnapshot& snap : transcript.states) {
    os << "s " << snap.step;
    for (const auto& [tag, value, mult] : snap.bag.canonical()) {
      os << ' ' << tag << ':' << value << ':' << mult;
    }
    os << '\n';
  }
  for (const std::string& note : transcript.notes) os << "note " << note << '\n';
}

ExecutionTranscript read_transcript(std::istream& is) {
  ExecutionTranscript transcript;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "s") {
      StateSnapshot snap;
      if (!(ls >> snap.step)) throw std::runtime_error("transcript: bad state line");
      std::string triple;
      while (ls >> triple) {
        uint32_t tag = 0, value = 0;
        uint64_t mult = 0;
        char c1 = 0, c2 = 0;
        std::istringstream ts(triple);
        if (!(ts >> tag >> c1 >> value >> c2 >> mult) || c1 != ':' || c2 != ':') {
          throw std::runtime_error("transcript: bad triple '" + triple + "'");
        }
        snap.bag.add(Message{tag, value}, mult);
      }
      transcript.states.push_back(std::move(snap));
    } else if (kind == "note") {
      std::string rest;
      std::getline(ls, rest);
      if (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
      transcript.notes.push_back(rest);
    } else {
      throw std::runtime_error("transcript: unknown line kind '" + kind + "'");
    }
  }
  return transcript;
}

}  // namespace shuffleparity
