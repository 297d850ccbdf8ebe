#pragma once

// Upper bounds for Delta(h, m), the least dimension d in which any m masses
// admit h hyperplanes cutting each into 2^h equal orthants.
//
// Bounds are derived from a small base of published facts with two
// reduction rules:
//   L1:  Delta(h, m) <= Delta(h - 1, 2m)      (h >= 2)
//   L2:  Delta(h, m) <= Delta(h, m + 1) - 1
// Every bound comes with a certificate that replays the arithmetic.

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace masscut::bounds {

enum class Source { HamSandwich, Hadwiger, Ramos, MVZ };
enum class FactKind { Exact, Upper };

struct Fact {
  std::uint64_t h = 0;
  std::uint64_t m = 0;
  std::uint64_t d = 0;
  FactKind kind = FactKind::Upper;
  Source source = Source::HamSandwich;
  /// Only meaningful for Source::Ramos.
  std::uint64_t family_h = 0;

  bool operator==(const Fact&) const = default;
};

/// Per-h constant of the Ramos families Delta(h, 2^{x+1}) <= c_h * 2^x.
std::optional<std::uint64_t> ramos_factor(std::uint64_t h);

/// Every fact stored at exactly (h, m), in knowledge-base order.
std::vector<Fact> facts_at(std::uint64_t h, std::uint64_t m);

/// Smallest stated dimension at (h, m); on ties the earliest fact wins
/// (HamSandwich, Hadwiger, Ramos, MVZ).
std::optional<Fact> base_bound(std::uint64_t h, std::uint64_t m);

/// Delta(1, m) = m and Delta(2, 5) = 8; nothing else is known exactly.
std::optional<std::uint64_t> known_exact(std::uint64_t h, std::uint64_t m);

/// 2^{h-5} (14 * 2^q + r) with m = 2^q + r, 0 < r <= 2^q. Throws
/// DomainError for h < 5 or m < 2.
std::uint64_t corollary3(std::uint64_t h, std::uint64_t m);

enum class Rule { Base, Lemma1, Lemma2, ProjectionNote };

struct ReductionStep {
  Rule rule = Rule::Base;
  /// (h, m) the step consumes; for Base, the fact's own (h, m).
  std::pair<std::uint64_t, std::uint64_t> from_state;
  /// Set for Base steps.
  std::optional<Fact> fact;
};

struct BoundCertificate {
  std::uint64_t h = 0;
  std::uint64_t m = 0;
  std::uint64_t value = 0;
  /// From the base fact to (h, m).
  std::vector<ReductionStep> chain;
};

struct SearchConfig {
  /// m is explored up to m_cap_factor * next_power_of_two(m) at the query
  /// level, doubled for each Lemma 1 descent.
  std::uint64_t m_cap_factor = 2;
};

std::uint64_t next_power_of_two(std::uint64_t m);

/// Replays the chain; returns the value it proves, or nullopt if the chain
/// is malformed (wrong start, inconsistent states, or not ending at (h, m)).
std::optional<std::uint64_t> replay(const BoundCertificate& cert);

/// `Base[Ramos h=5, m=4, d=30] -> L2 -> L1`
std::string render_chain(const BoundCertificate& cert);

/// Memoized search over L1/L2 chains. Results are cached per cap and the
/// cache is safe for concurrent use.
class BoundSearch {
 public:
  explicit BoundSearch(SearchConfig config = {});

  /// Throws NoBoundAvailable when no chain exists within the caps.
  BoundCertificate best_upper_bound(std::uint64_t h, std::uint64_t m);

  const SearchConfig& config() const { return config_; }

 private:
  struct Cell {
    std::uint64_t value;
    Rule rule;
  };
  using Level = std::vector<std::optional<Cell>>;

  const Level& level(std::uint64_t h, std::uint64_t cap);
  std::optional<Cell> cell(std::uint64_t h, std::uint64_t m, std::uint64_t cap);

  SearchConfig config_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, Level> levels_;
  std::mutex mutex_;
};

/// One-shot convenience wrapper.
BoundCertificate best_upper_bound(std::uint64_t h, std::uint64_t m, SearchConfig config = {});

/// Rows h = 1..h_max, columns m = 1..m_max.
std::vector<std::vector<BoundCertificate>> table(std::uint64_t h_max, std::uint64_t m_max,
                                                 SearchConfig config = {});

/// Header `h,m,value,chain`, one row per cell.
std::string table_csv(const std::vector<std::vector<BoundCertificate>>& grid);
/// Aligned value grid followed by the chains.
std::string table_text(const std::vector<std::vector<BoundCertificate>>& grid);

std::string to_string(Source source);

}  // namespace masscut::bounds
