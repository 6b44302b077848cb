#include "munj/trust.hpp"

#include <algorithm>

namespace munj {

const char* to_string(TrustLog::Kind kind) {
  switch (kind) {
    case TrustLog::Kind::AssumedConfluent: return "assumed-confluent";
    case TrustLog::Kind::AssumedTerminating: return "assumed-terminating";
    case TrustLog::Kind::AssumedComplete: return "assumed-complete";
    case TrustLog::Kind::AdmittedRecursive: return "admitted-recursive";
    case TrustLog::Kind::NonConstructorCoherence: return "assumed-coherent";
  }
  return "?";
}

void TrustLog::record(Kind kind, const std::string& detail) {
  bool seen = std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) {
    return e.kind == kind && e.detail == detail;
  });
  if (!seen) entries_.push_back({kind, detail});
}

void TrustLog::merge(const TrustLog& other) {
  for (const Entry& e : other.entries_) record(e.kind, e.detail);
}

bool TrustLog::has(Kind kind) const { return count(kind) != 0; }

std::size_t TrustLog::count(Kind kind) const {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(), [&](const Entry& e) { return e.kind == kind; }));
}

std::string TrustLog::report() const {
  std::string out;
  for (const Entry& e : entries_) {
    out += "trust ";
    out += to_string(e.kind);
    if (!e.detail.empty()) out += " " + e.detail;
    out += '\n';
  }
  return out;
}

}  // namespace munj
