#pragma once

#include <string>
#include <vector>

namespace munj {

// Record of every assumption the kernel relies on without proof.
class TrustLog {
 public:
  enum class Kind {
    AssumedConfluent,
    AssumedTerminating,
    AssumedComplete,
    AdmittedRecursive,
    NonConstructorCoherence,
  };

  struct Entry {
    Kind kind;
    std::string detail;
  };

  // Identical entries are recorded once.
  void record(Kind kind, const std::string& detail);
  void merge(const TrustLog& other);

  const std::vector<Entry>& entries() const { return entries_; }
  bool has(Kind kind) const;
  std::size_t count(Kind kind) const;
  bool empty() const { return entries_.empty(); }

  // One `trust <tag> <detail>` line per entry.
  std::string report() const;

 private:
  std::vector<Entry> entries_;
};

const char* to_string(TrustLog::Kind kind);

}  // namespace munj
