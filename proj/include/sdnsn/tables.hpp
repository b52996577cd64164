#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sdnsn/core.hpp"
#include "sdnsn/name.hpp"
#include "sdnsn/service.hpp"

namespace sdnsn {

// Pending Interest Table.  Entries are keyed by the exact Interest name and
// additionally indexed by its answer name, because the Data that discharges
// an entry carries the face- and label-stripped form.
struct PitEntry {
  ServiceName name;
  std::string answer;
  std::set<FaceId> in_faces;
  std::set<std::uint64_t> nonces;
  TimeMs created = 0;
  TimeMs expires = 0;
};

class Pit {
 public:
  PitEntry* find(const std::string& key) {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  PitEntry& create(const std::string& key, const ServiceName& name, const std::string& answer,
                   TimeMs now, TimeMs expires) {
    PitEntry& e = entries_[key];
    e.name = name;
    e.answer = answer;
    e.created = now;
    e.expires = expires;
    by_answer_[answer].insert(key);
    return e;
  }

  // Keys of entries a Data with this answer name discharges, in name order.
  std::vector<std::string> keys_for_answer(const std::string& answer) const {
    auto it = by_answer_.find(answer);
    if (it == by_answer_.end()) return {};
    return std::vector<std::string>(it->second.begin(), it->second.end());
  }

  void erase(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return;
    auto ai = by_answer_.find(it->second.answer);
    if (ai != by_answer_.end()) {
      ai->second.erase(key);
      if (ai->second.empty()) by_answer_.erase(ai);
    }
    entries_.erase(it);
  }

  bool expire(const std::string& key, TimeMs now) {
    PitEntry* e = find(key);
    if (!e || e->expires > now) return false;
    erase(key);
    return true;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::map<std::string, PitEntry> entries_;
  std::map<std::string, std::set<std::string>> by_answer_;
};

// Pending Service Table: which local executions wait for which input Data.
// One entry per awaited name; waiters are (microservice, origin Interest)
// pairs so a Data can be routed to every execution it unblocks.
struct PstWaiter {
  std::string microservice;
  std::string origin;  // exact name of the Interest whose execution waits
  auto operator<=>(const PstWaiter&) const = default;
};

struct PstEntry {
  ServiceName name;
  std::set<PstWaiter> waiters;
  TimeMs created = 0;
  TimeMs expires = 0;
};

class Pst {
 public:
  PstEntry* find(const std::string& key) {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  PstEntry& create(const std::string& key, const ServiceName& name, TimeMs now, TimeMs expires) {
    PstEntry& e = entries_[key];
    e.name = name;
    e.created = now;
    e.expires = expires;
    return e;
  }

  void erase(const std::string& key) { entries_.erase(key); }

  bool expire(const std::string& key, TimeMs now) {
    PstEntry* e = find(key);
    if (!e || e->expires > now) return false;
    entries_.erase(key);
    return true;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::map<std::string, PstEntry> entries_;
};

// In-network cache and local result store.  Freshness < 0 means no expiry;
// stale items are dropped on access.
struct StoredData {
  Bytes payload;
  TimeMs stored_at = 0;
  TimeMs freshness = -1;
};

class DataStore {
 public:
  void put(const std::string& name, Bytes payload, TimeMs now, TimeMs freshness = -1) {
    items_[name] = StoredData{std::move(payload), now, freshness};
  }

  const StoredData* get(const std::string& name, TimeMs now) {
    auto it = items_.find(name);
    if (it == items_.end()) return nullptr;
    const StoredData& d = it->second;
    if (d.freshness >= 0 && now > d.stored_at + d.freshness) {
      items_.erase(it);
      return nullptr;
    }
    return &it->second;
  }

  bool has(const std::string& name, TimeMs now) { return get(name, now) != nullptr; }

  std::size_t size() const { return items_.size(); }

 private:
  std::map<std::string, StoredData> items_;
};

// Installed microservices plus the service trees this agent has learned.
class Repository {
 public:
  bool install(MicroserviceDescriptor ms) {
    return installed_.emplace(ms.id, std::move(ms)).second;
  }

  const MicroserviceDescriptor* find(const std::string& id) const {
    auto it = installed_.find(id);
    return it == installed_.end() ? nullptr : &it->second;
  }

  void put_tree(const std::string& head, ServiceName tree) { trees_[head] = std::move(tree); }

  const ServiceName* tree(const std::string& head) const {
    auto it = trees_.find(head);
    return it == trees_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return installed_.size(); }

 private:
  std::map<std::string, MicroserviceDescriptor> installed_;
  std::map<std::string, ServiceName> trees_;
};

}  // namespace sdnsn
