#pragma once

#include <cstddef>
#include <list>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <deque>
#include <vector>

#include "locality/working_set.hpp"

namespace locality {

enum class PolicyKind { Lru, Fifo, Opt };

std::string policy_name(PolicyKind kind);
PolicyKind parse_policy(const std::string& name);

class PolicyError : public std::invalid_argument {
 public:
  enum class Kind { InvalidConfig, CacheNotFull, NotExactlyOneMissing };

  PolicyError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Cache capacity plus the initial contents. A warm start lists exactly k
// distinct pages, oldest (least recent / first in) first.
struct CacheConfig {
  std::size_t k = 1;
  std::optional<std::vector<PageId>> warm;

  static CacheConfig cold(std::size_t k) { return {k, std::nullopt}; }
  static CacheConfig warm_start(std::vector<PageId> pages) {
    const std::size_t k = pages.size();
    return {k, std::move(pages)};
  }
  // Pages first..first+k-1.
  static CacheConfig warm_range(std::size_t k, PageId first = 1);

  void validate() const;
};

struct RequestOutcome {
  bool hit = false;
  std::optional<PageId> evicted;

  friend bool operator==(const RequestOutcome&, const RequestOutcome&) = default;
};

// Online replacement policy. Deterministic: identical request histories
// produce identical states.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual RequestOutcome on_request(PageId page) = 0;
  virtual bool contains(PageId page) const = 0;
  virtual std::size_t size() const = 0;
  // Cache contents in eviction order, next victim first.
  virtual std::vector<PageId> contents() const = 0;
  virtual void reset() = 0;

  const std::string& name() const { return name_; }
  const CacheConfig& config() const { return config_; }
  bool full() const { return size() == config_.k; }

 protected:
  Policy(std::string name, CacheConfig config) : name_(std::move(name)), config_(std::move(config)) {}

 private:
  std::string name_;
  CacheConfig config_;
};

class LruPolicy final : public Policy {
 public:
  explicit LruPolicy(CacheConfig config);

  RequestOutcome on_request(PageId page) override;
  bool contains(PageId page) const override { return where_.contains(page); }
  std::size_t size() const override { return order_.size(); }
  std::vector<PageId> contents() const override { return {order_.begin(), order_.end()}; }
  void reset() override;

 private:
  std::list<PageId> order_;  // least recent at front
  std::unordered_map<PageId, std::list<PageId>::iterator> where_;
};

class FifoPolicy final : public Policy {
 public:
  explicit FifoPolicy(CacheConfig config);

  RequestOutcome on_request(PageId page) override;
  bool contains(PageId page) const override { return resident_.contains(page); }
  std::size_t size() const override { return queue_.size(); }
  std::vector<PageId> contents() const override { return {queue_.begin(), queue_.end()}; }
  void reset() override;

 private:
  std::deque<PageId> queue_;  // first in at front
  std::unordered_set<PageId> resident_;
};

// Throws InvalidConfig for bad configs and for Opt, which has no online form.
std::unique_ptr<Policy> new_policy(PolicyKind kind, CacheConfig config);

// The single universe page not resident in a full cache.
PageId missing_page(const Policy& policy, std::span<const PageId> universe);

struct SimulationResult;

// Offline furthest-in-the-future replacement. Among pages never requested
// again the smallest page ID is evicted.
SimulationResult belady_run(std::span<const PageId> sequence, const CacheConfig& config,
                            bool detail = false);

}  // namespace locality
