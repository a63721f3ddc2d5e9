#include "locality/policies.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "locality/simulator.hpp"

namespace locality {

std::string policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Lru: return "lru";
    case PolicyKind::Fifo: return "fifo";
    case PolicyKind::Opt: return "opt";
  }
  return "unknown";
}

PolicyKind parse_policy(const std::string& name) {
  if (name == "lru") return PolicyKind::Lru;
  if (name == "fifo") return PolicyKind::Fifo;
  if (name == "opt" || name == "belady") return PolicyKind::Opt;
  throw std::invalid_argument("unknown policy '" + name + "' (expected lru, fifo or opt)");
}

CacheConfig CacheConfig::warm_range(std::size_t k, PageId first) {
  std::vector<PageId> pages(k);
  for (std::size_t i = 0; i < k; ++i) pages[i] = first + static_cast<PageId>(i);
  return warm_start(std::move(pages));
}

void CacheConfig::validate() const {
  if (k == 0) throw PolicyError(PolicyError::Kind::InvalidConfig, "cache size k must be >= 1");
  if (!warm) return;
  if (warm->size() != k) {
    throw PolicyError(PolicyError::Kind::InvalidConfig,
                      "warm start lists " + std::to_string(warm->size()) + " pages, expected k = " +
                          std::to_string(k));
  }
  std::vector<PageId> sorted = *warm;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw PolicyError(PolicyError::Kind::InvalidConfig, "warm start pages must be distinct");
  }
}

LruPolicy::LruPolicy(CacheConfig config) : Policy("lru", std::move(config)) {
  this->config().validate();
  reset();
}

void LruPolicy::reset() {
  order_.clear();
  where_.clear();
  if (config().warm) {
    for (PageId p : *config().warm) where_[p] = order_.insert(order_.end(), p);
  }
}

RequestOutcome LruPolicy::on_request(PageId page) {
  if (auto it = where_.find(page); it != where_.end()) {
    order_.splice(order_.end(), order_, it->second);
    return {true, std::nullopt};
  }
  RequestOutcome out{false, std::nullopt};
  if (order_.size() == config().k) {
    const PageId victim = order_.front();
    order_.pop_front();
    where_.erase(victim);
    out.evicted = victim;
  }
  where_[page] = order_.insert(order_.end(), page);
  return out;
}

FifoPolicy::FifoPolicy(CacheConfig config) : Policy("fifo", std::move(config)) {
  this->config().validate();
  reset();
}

void FifoPolicy::reset() {
  queue_.clear();
  resident_.clear();
  if (config().warm) {
    for (PageId p : *config().warm) {
      queue_.push_back(p);
      resident_.insert(p);
    }
  }
}

RequestOutcome FifoPolicy::on_request(PageId page) {
  // A hit leaves the queue untouched.
  if (resident_.contains(page)) return {true, std::nullopt};
  RequestOutcome out{false, std::nullopt};
  if (queue_.size() == config().k) {
    const PageId victim = queue_.front();
    queue_.pop_front();
    resident_.erase(victim);
    out.evicted = victim;
  }
  queue_.push_back(page);
  resident_.insert(page);
  return out;
}

std::unique_ptr<Policy> new_policy(PolicyKind kind, CacheConfig config) {
  switch (kind) {
    case PolicyKind::Lru: return std::make_unique<LruPolicy>(std::move(config));
    case PolicyKind::Fifo: return std::make_unique<FifoPolicy>(std::move(config));
    case PolicyKind::Opt: break;
  }
  throw PolicyError(PolicyError::Kind::InvalidConfig,
                    "opt is offline; use belady_run instead of a policy handle");
}

PageId missing_page(const Policy& policy, std::span<const PageId> universe) {
  if (!policy.full()) {
    throw PolicyError(PolicyError::Kind::CacheNotFull,
                      "cache holds " + std::to_string(policy.size()) + " of " +
                          std::to_string(policy.config().k) + " pages");
  }
  std::optional<PageId> missing;
  std::size_t resident = 0;
  for (PageId p : universe) {
    if (policy.contains(p)) {
      ++resident;
    } else if (missing) {
      throw PolicyError(PolicyError::Kind::NotExactlyOneMissing,
                        "more than one universe page is absent from the cache");
    } else {
      missing = p;
    }
  }
  if (!missing || resident != policy.size()) {
    throw PolicyError(PolicyError::Kind::NotExactlyOneMissing,
                      "cache contents are not a universe subset with one page absent");
  }
  return *missing;
}

SimulationResult belady_run(std::span<const PageId> sequence, const CacheConfig& config,
                            bool detail) {
  config.validate();
  constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
  const std::size_t n = sequence.size();

  std::vector<std::size_t> next_use(n, kNever);
  std::unordered_map<PageId, std::size_t> upcoming;
  for (std::size_t i = n; i-- > 0;) {
    auto it = upcoming.find(sequence[i]);
    if (it != upcoming.end()) {
      next_use[i] = it->second;
      it->second = i;
    } else {
      upcoming.emplace(sequence[i], i);
    }
  }

  // Ordered by (next use, inverted id): the last element is the victim, and
  // among never-again pages that is the smallest id.
  using Key = std::pair<std::size_t, PageId>;
  auto key_of = [](std::size_t next, PageId p) {
    return Key{next, std::numeric_limits<PageId>::max() - p};
  };
  std::set<Key> by_next;
  std::unordered_map<PageId, std::size_t> resident;  // page -> its next use

  if (config.warm) {
    for (PageId p : *config.warm) {
      auto it = upcoming.find(p);
      const std::size_t next = it == upcoming.end() ? kNever : it->second;
      resident[p] = next;
      by_next.insert(key_of(next, p));
    }
  }

  SimulationResult result;
  result.policy_name = "opt";
  result.total_requests = n;
  if (detail) {
    result.fault_indices.emplace();
    result.eviction_log.emplace();
  }

  for (std::size_t i = 0; i < n; ++i) {
    const PageId page = sequence[i];
    if (auto it = resident.find(page); it != resident.end()) {
      by_next.erase(key_of(it->second, page));
      it->second = next_use[i];
      by_next.insert(key_of(next_use[i], page));
      continue;
    }
    ++result.faults;
    if (detail) result.fault_indices->push_back(i);
    if (resident.size() == config.k) {
      const Key victim = *by_next.rbegin();
      by_next.erase(std::prev(by_next.end()));
      const PageId evicted = std::numeric_limits<PageId>::max() - victim.second;
      resident.erase(evicted);
      if (detail) result.eviction_log->push_back({i, evicted});
    }
    resident[page] = next_use[i];
    by_next.insert(key_of(next_use[i], page));
  }
  return result;
}

}  // namespace locality
