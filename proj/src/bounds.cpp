#include "masscut/bounds.hpp"

#include <algorithm>
#include <bit>
#include <iomanip>
#include <sstream>

#include "masscut/errors.hpp"

namespace masscut::bounds {
namespace {

// Largest level table the search will allocate.
constexpr std::uint64_t kMaxLevelSize = std::uint64_t{1} << 26;

constexpr std::uint64_t kRamosFactors[] = {2, 3, 5, 9, 15};

const char* rule_token(Rule rule) {
  switch (rule) {
    case Rule::Base: return "Base";
    case Rule::Lemma1: return "L1";
    case Rule::Lemma2: return "L2";
    case Rule::ProjectionNote: return "P";
  }
  return "?";
}

std::string render_fact(const Fact& f) {
  if (f.source == Source::MVZ) return "Base[MVZ]";
  std::ostringstream os;
  os << "Base[" << to_string(f.source) << " h=" << f.h << ", m=" << f.m << ", d=" << f.d << "]";
  return os.str();
}

}  // namespace

std::string to_string(Source source) {
  switch (source) {
    case Source::HamSandwich: return "HamSandwich";
    case Source::Hadwiger: return "Hadwiger";
    case Source::Ramos: return "Ramos";
    case Source::MVZ: return "MVZ";
  }
  return "?";
}

std::optional<std::uint64_t> ramos_factor(std::uint64_t h) {
  if (h < 1 || h > 5) return std::nullopt;
  return kRamosFactors[h - 1];
}

std::vector<Fact> facts_at(std::uint64_t h, std::uint64_t m) {
  std::vector<Fact> out;
  if (h == 0 || m == 0) return out;
  if (h == 1) out.push_back({1, m, m, FactKind::Exact, Source::HamSandwich, 0});
  if ((h == 1 && m == 3) || (h == 2 && m == 1)) {
    out.push_back({h, m, 3, FactKind::Upper, Source::Hadwiger, 0});
  }
  if (auto c = ramos_factor(h); c && m >= 2 && std::has_single_bit(m)) {
    // m = 2^{x+1}, bound c * 2^x
    out.push_back({h, m, *c * (m / 2), FactKind::Upper, Source::Ramos, h});
  }
  // The matching lower bound of this equality is not used by the search.
  if (h == 2 && m == 5) out.push_back({2, 5, 8, FactKind::Exact, Source::MVZ, 0});
  return out;
}

std::optional<Fact> base_bound(std::uint64_t h, std::uint64_t m) {
  if (h == 0 || m == 0) throw InvalidArgument("base_bound: h and m must be positive");
  std::optional<Fact> best;
  for (const auto& f : facts_at(h, m)) {
    if (!best || f.d < best->d) best = f;
  }
  return best;
}

std::optional<std::uint64_t> known_exact(std::uint64_t h, std::uint64_t m) {
  if (h == 0 || m == 0) throw InvalidArgument("known_exact: h and m must be positive");
  if (h == 1) return m;
  if (h == 2 && m == 5) return 8;
  return std::nullopt;
}

std::uint64_t corollary3(std::uint64_t h, std::uint64_t m) {
  if (h < 5 || m < 2) throw DomainError("corollary3: needs h >= 5 and m >= 2");
  if (h - 5 >= 40 || m > (std::uint64_t{1} << 40)) throw DomainError("corollary3: arguments too large");
  const std::uint64_t q = std::bit_width(m - 1) - 1;  // floor(log2(m - 1))
  const std::uint64_t pow_q = std::uint64_t{1} << q;
  const std::uint64_t r = m - pow_q;
  return (std::uint64_t{1} << (h - 5)) * (14 * pow_q + r);
}

std::uint64_t next_power_of_two(std::uint64_t m) { return m <= 1 ? 1 : std::bit_ceil(m); }

std::optional<std::uint64_t> replay(const BoundCertificate& cert) {
  if (cert.chain.empty() || cert.chain.front().rule != Rule::Base || !cert.chain.front().fact) {
    return std::nullopt;
  }
  const Fact& f = *cert.chain.front().fact;
  const auto facts = facts_at(f.h, f.m);
  if (std::find(facts.begin(), facts.end(), f) == facts.end()) return std::nullopt;
  if (cert.chain.front().from_state != std::pair{f.h, f.m}) return std::nullopt;

  std::uint64_t h = f.h, m = f.m, value = f.d;
  for (std::size_t i = 1; i < cert.chain.size(); ++i) {
    const auto& step = cert.chain[i];
    if (step.from_state != std::pair{h, m}) return std::nullopt;
    switch (step.rule) {
      case Rule::Lemma1:
        if (m % 2 != 0) return std::nullopt;
        h += 1;
        m /= 2;
        break;
      case Rule::Lemma2:
        if (m < 2 || value < 2) return std::nullopt;
        m -= 1;
        value -= 1;
        break;
      case Rule::ProjectionNote:
        break;
      case Rule::Base:
        return std::nullopt;
    }
  }
  if (h != cert.h || m != cert.m) return std::nullopt;
  return value;
}

std::string render_chain(const BoundCertificate& cert) {
  std::string out;
  for (const auto& step : cert.chain) {
    if (step.rule == Rule::Base) {
      out += step.fact ? render_fact(*step.fact) : "Base[?]";
    } else {
      out += " -> ";
      out += rule_token(step.rule);
    }
  }
  return out;
}

BoundSearch::BoundSearch(SearchConfig config) : config_(config) {
  if (config_.m_cap_factor < 1) throw InvalidArgument("search config: m_cap_factor must be >= 1");
}

// Values for m = 1..cap at level h, computed from the top of the cap down
// so that the Lemma 2 dependency (h, m + 1) is always ready.
const BoundSearch::Level& BoundSearch::level(std::uint64_t h, std::uint64_t cap) {
  const auto key = std::pair{h, cap};
  if (auto it = levels_.find(key); it != levels_.end()) return it->second;
  if (cap >= kMaxLevelSize) throw DomainError("bound search: state space too large");

  const Level* lower = h >= 2 ? &level(h - 1, 2 * cap) : nullptr;
  Level cur(cap + 2);
  for (std::uint64_t m = cap; m >= 1; --m) {
    std::optional<Cell> best;
    if (auto f = base_bound(h, m)) best = Cell{f->d, Rule::Base};
    if (lower) {
      if (const auto& c = (*lower)[2 * m]; c && (!best || c->value < best->value)) {
        best = Cell{c->value, Rule::Lemma1};
      }
    }
    if (m + 1 <= cap) {
      if (const auto& c = cur[m + 1]; c && c->value >= 2 && (!best || c->value - 1 < best->value)) {
        best = Cell{c->value - 1, Rule::Lemma2};
      }
    }
    cur[m] = best;
  }
  return levels_.emplace(key, std::move(cur)).first->second;
}

std::optional<BoundSearch::Cell> BoundSearch::cell(std::uint64_t h, std::uint64_t m,
                                                   std::uint64_t cap) {
  return level(h, cap)[m];
}

BoundCertificate BoundSearch::best_upper_bound(std::uint64_t h, std::uint64_t m) {
  if (h == 0 || m == 0) throw InvalidArgument("best_upper_bound: h and m must be positive");
  if (h > 40) throw DomainError("best_upper_bound: h too large");
  std::lock_guard lock(mutex_);

  std::uint64_t cap = config_.m_cap_factor * next_power_of_two(m);
  const auto top = cell(h, m, cap);
  if (!top) {
    throw NoBoundAvailable("no bound for (h=" + std::to_string(h) + ", m=" + std::to_string(m) +
                           ") within the search caps");
  }

  BoundCertificate cert{h, m, top->value, {}};
  std::vector<ReductionStep> reversed;
  std::uint64_t ch = h, cm = m;
  for (;;) {
    const auto c = cell(ch, cm, cap);
    if (c->rule == Rule::Base) {
      reversed.push_back({Rule::Base, {ch, cm}, base_bound(ch, cm)});
      break;
    }
    if (c->rule == Rule::Lemma1) {
      reversed.push_back({Rule::Lemma1, {ch - 1, 2 * cm}, std::nullopt});
      ch -= 1;
      cm *= 2;
      cap *= 2;
    } else {
      reversed.push_back({Rule::Lemma2, {ch, cm + 1}, std::nullopt});
      cm += 1;
    }
  }
  cert.chain.assign(reversed.rbegin(), reversed.rend());
  return cert;
}

BoundCertificate best_upper_bound(std::uint64_t h, std::uint64_t m, SearchConfig config) {
  BoundSearch search(config);
  return search.best_upper_bound(h, m);
}

std::vector<std::vector<BoundCertificate>> table(std::uint64_t h_max, std::uint64_t m_max,
                                                 SearchConfig config) {
  if (h_max == 0 || m_max == 0) throw InvalidArgument("table: h_max and m_max must be positive");
  BoundSearch search(config);
  std::vector<std::vector<BoundCertificate>> grid(h_max);
  for (std::uint64_t h = 1; h <= h_max; ++h) {
    for (std::uint64_t m = 1; m <= m_max; ++m) {
      grid[h - 1].push_back(search.best_upper_bound(h, m));
    }
  }
  return grid;
}

std::string table_csv(const std::vector<std::vector<BoundCertificate>>& grid) {
  std::ostringstream os;
  os << "h,m,value,chain\n";
  for (const auto& row : grid) {
    for (const auto& c : row) {
      os << c.h << ',' << c.m << ',' << c.value << ",\"" << render_chain(c) << "\"\n";
    }
  }
  return os.str();
}

std::string table_text(const std::vector<std::vector<BoundCertificate>>& grid) {
  std::size_t width = 3;
  for (const auto& row : grid) {
    for (const auto& c : row) width = std::max(width, std::to_string(c.value).size() + 1);
  }
  std::ostringstream os;
  os << std::setw(4) << std::left << "h\\m" << std::right;
  if (!grid.empty()) {
    for (const auto& c : grid.front()) os << std::setw(static_cast<int>(width)) << c.m;
  }
  os << '\n';
  for (const auto& row : grid) {
    if (row.empty()) continue;
    os << std::setw(4) << std::left << row.front().h << std::right;
    for (const auto& c : row) os << std::setw(static_cast<int>(width)) << c.value;
    os << '\n';
  }
  os << '\n';
  for (const auto& row : grid) {
    for (const auto& c : row) {
      os << "Delta(" << c.h << "," << c.m << ") <= " << c.value << "  " << render_chain(c)
         << '\n';
    }
  }
  return os.str();
}

}  // namespace masscut::bounds
