#include "mcm/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <fmt/format.h>

#include "mcm/data.hpp"
#include "mcm/error.hpp"
#include "mcm/mcm_report.hpp"
#include "mcm/parallel.hpp"
#include "mcm/random.hpp"

namespace mcm {

std::size_t core_pair_index(std::size_t i, std::size_t j, std::size_t k) noexcept {
  // pairs before row i: sum_{r < i} (k - 1 - r)
  return i * (2 * k - i - 1) / 2 + (j - i - 1);
}

std::string mask_hex(std::uint64_t mask) { return fmt::format("0x{:x}", mask); }

std::vector<std::pair<std::size_t, std::size_t>> SignificancePattern::non_significant_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t k = core.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if ((mask >> core_pair_index(i, j, k)) & 1U) out.emplace_back(i, j);
    }
  }
  return out;
}

std::size_t binomial(std::size_t n, std::size_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t factor = n - k + i;
    if (result > std::numeric_limits<std::size_t>::max() / factor) return std::numeric_limits<std::size_t>::max();
    result = result * factor / i;  // exact: result * factor is divisible by i
  }
  return result;
}

std::size_t PatternEnumeration::count_sum() const {
  std::size_t total = 0;
  for (const auto& p : patterns) total += p.count;
  return total;
}

namespace {

void require_disjoint(std::span<const std::string> a, std::span<const std::string> b, std::string_view what) {
  const std::set<std::string> left(a.begin(), a.end());
  if (left.size() != a.size()) throw Error(ErrorCode::InvalidConfig, fmt::format("duplicate name in {}", what));
  std::set<std::string> right;
  for (const auto& name : b) {
    if (left.contains(name)) {
      throw Error(ErrorCode::OverlappingSets, fmt::format("'{}' appears in both {}", name, what));
    }
    if (!right.insert(name).second) throw Error(ErrorCode::InvalidConfig, fmt::format("duplicate name in {}", what));
  }
}

void require_core(std::span<const std::string> core) {
  if (core.size() > kMaxCoreSize) {
    throw Error(ErrorCode::InvalidConfig, fmt::format("core holds at most {} comparates", kMaxCoreSize));
  }
}

// Raw Wilcoxon p for every pair of a fixed universe of comparates. Pairwise p
// values depend only on the two rows involved, so one table serves every
// family drawn from the universe.
class PairTable {
 public:
  PairTable(const ResultsMatrix& matrix, std::vector<std::size_t> universe, WilcoxonOptions options)
      : size_(universe.size()), p_(size_ * size_, 1.0) {
    for (std::size_t a = 0; a < size_; ++a) {
      for (std::size_t b = a + 1; b < size_; ++b) {
        const auto diffs = oriented_differences(matrix, universe[a], universe[b]);
        p_[a * size_ + b] = p_[b * size_ + a] = wilcoxon_signed_rank(diffs, options).p_value;
      }
    }
  }

  double p(std::size_t a, std::size_t b) const { return p_[a * size_ + b]; }

  // `members` index the universe; the first `core_size` of them are the core.
  std::uint64_t core_mask(std::span<const std::size_t> members, std::size_t core_size, double alpha,
                          std::vector<double>& scratch) const {
    const std::size_t f = members.size();
    scratch.clear();
    for (std::size_t i = 0; i < f; ++i) {
      for (std::size_t j = i + 1; j < f; ++j) scratch.push_back(p(members[i], members[j]));
    }
    const std::vector<bool> significant = holm_significance(scratch, alpha);
    std::uint64_t mask = 0;
    // Family pairs are listed row by row over members, and core members come
    // first, so core pair (i, j) sits at core_pair_index(i, j, f).
    for (std::size_t i = 0; i < core_size; ++i) {
      for (std::size_t j = i + 1; j < core_size; ++j) {
        if (!significant[core_pair_index(i, j, f)]) mask |= std::uint64_t{1} << core_pair_index(i, j, core_size);
      }
    }
    return mask;
  }

  std::vector<double> core_p(std::size_t core_size) const {
    std::vector<double> out;
    for (std::size_t i = 0; i < core_size; ++i) {
      for (std::size_t j = i + 1; j < core_size; ++j) out.push_back(p(i, j));
    }
    return out;
  }

 private:
  std::size_t size_;
  std::vector<double> p_;
};

std::vector<std::size_t> indices_of(const ResultsMatrix& matrix, std::span<const std::string> names) {
  std::vector<std::size_t> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(matrix.index_of(n));
  return out;
}

// Lexicographic k-combination of {0..n-1} with the given rank.
std::vector<std::size_t> unrank_combination(std::size_t rank, std::size_t n, std::size_t k) {
  std::vector<std::size_t> combo;
  combo.reserve(k);
  std::size_t next = 0;
  for (std::size_t slot = 0; slot < k; ++slot) {
    for (;; ++next) {
      const std::size_t with_next = binomial(n - next - 1, k - slot - 1);
      if (rank < with_next) break;
      rank -= with_next;
    }
    combo.push_back(next++);
  }
  return combo;
}

bool next_combination(std::vector<std::size_t>& combo, std::size_t n) {
  const std::size_t k = combo.size();
  for (std::size_t i = k; i-- > 0;) {
    if (combo[i] < n - k + i) {
      ++combo[i];
      for (std::size_t j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

struct Retained {
  std::uint64_t key = 0;
  std::size_t index = 0;
  std::vector<std::size_t> combo;
};

struct Tally {
  std::size_t count = 0;
  std::vector<Retained> kept;  // smallest keys, at most E
};

void retain(Tally& tally, Retained candidate, std::size_t limit) {
  ++tally.count;
  if (limit == 0) return;
  auto& kept = tally.kept;
  if (kept.size() < limit) {
    kept.push_back(std::move(candidate));
    return;
  }
  auto worst = std::max_element(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return std::tie(a.key, a.index) < std::tie(b.key, b.index);
  });
  if (std::tie(candidate.key, candidate.index) < std::tie(worst->key, worst->index)) *worst = std::move(candidate);
}

using TallyMap = std::map<std::uint64_t, Tally>;

void merge_into(TallyMap& into, TallyMap&& from, std::size_t limit) {
  for (auto& [mask, tally] : from) {
    auto& dest = into[mask];
    const std::size_t extra_count = tally.count - tally.kept.size();
    for (auto& r : tally.kept) retain(dest, std::move(r), limit);
    dest.count += extra_count;
  }
}

constexpr std::size_t kSubsetBlock = 2048;
constexpr std::uint64_t kExampleStream = 0x6578616D706C6573ULL;  // "examples"

}  // namespace

PatternDetail significance_pattern_detail(const ResultsMatrix& matrix, std::span<const std::string> core,
                                          std::span<const std::string> extra, double alpha,
                                          WilcoxonOptions options) {
  require_core(core);
  require_disjoint(core, extra, "core and extra");
  if (core.size() + extra.size() < 2) {
    throw Error(ErrorCode::TooFewComparates, "core and extra need at least 2 comparates together");
  }
  std::vector<std::string> members(core.begin(), core.end());
  members.insert(members.end(), extra.begin(), extra.end());
  const PairTable table(matrix, indices_of(matrix, members), options);

  std::vector<std::size_t> all(members.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<double> scratch;
  PatternDetail detail;
  detail.pattern.core.assign(core.begin(), core.end());
  detail.pattern.mask = table.core_mask(all, core.size(), alpha, scratch);
  detail.core_p_values = table.core_p(core.size());
  detail.family_size = members.size() * (members.size() - 1) / 2;
  return detail;
}

SignificancePattern significance_pattern(const ResultsMatrix& matrix, std::span<const std::string> core,
                                         std::span<const std::string> extra, double alpha,
                                         WilcoxonOptions options) {
  return significance_pattern_detail(matrix, core, extra, alpha, options).pattern;
}

PatternEnumeration enumerate_patterns(const ResultsMatrix& matrix, std::span<const std::string> core,
                                      std::span<const std::string> pool, std::size_t k_extra, double alpha,
                                      EnumerationMode mode, const EnumerationOptions& options) {
  require_core(core);
  require_disjoint(core, pool, "core and pool");
  if (k_extra > pool.size()) {
    throw Error(ErrorCode::PoolTooSmall,
                fmt::format("pool has {} comparates, {} extras requested", pool.size(), k_extra));
  }
  if (core.size() + k_extra < 2) throw Error(ErrorCode::TooFewComparates, "families need at least 2 comparates");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, fmt::format("alpha must lie in (0, 1), got {}", alpha));
  }
  if (mode.kind == EnumerationMode::Kind::Sampled && mode.samples == 0) {
    throw Error(ErrorCode::InvalidConfig, "sampled mode needs at least one sample");
  }

  std::vector<std::string> universe_names(core.begin(), core.end());
  universe_names.insert(universe_names.end(), pool.begin(), pool.end());
  const PairTable table(matrix, indices_of(matrix, universe_names), options.wilcoxon);

  const std::size_t k_core = core.size();
  const std::size_t pool_size = pool.size();
  const std::size_t total = mode.kind == EnumerationMode::Kind::Exhaustive ? binomial(pool_size, k_extra)
                                                                           : mode.samples;
  if (total == std::numeric_limits<std::size_t>::max()) {
    throw Error(ErrorCode::InvalidConfig, "too many subsets to enumerate");
  }
  const std::size_t blocks = (total + kSubsetBlock - 1) / kSubsetBlock;
  std::vector<TallyMap> partial(blocks);
  const std::size_t limit = options.examples_per_pattern;

  parallel_for(blocks, options.workers, [&](std::size_t b) {
    const std::size_t begin = b * kSubsetBlock;
    const std::size_t end = std::min(total, begin + kSubsetBlock);
    std::vector<std::size_t> members(k_core + k_extra);
    for (std::size_t i = 0; i < k_core; ++i) members[i] = i;
    std::vector<double> scratch;
    std::vector<std::size_t> combo;
    std::vector<std::size_t> shuffle(pool_size);
    if (mode.kind == EnumerationMode::Kind::Exhaustive) combo = unrank_combination(begin, pool_size, k_extra);
    TallyMap& local = partial[b];

    for (std::size_t index = begin; index < end; ++index) {
      if (mode.kind == EnumerationMode::Kind::Sampled) {
        Xoshiro256 rng(mode.seed, index);
        for (std::size_t i = 0; i < pool_size; ++i) shuffle[i] = i;
        for (std::size_t i = 0; i < k_extra; ++i) {
          const std::size_t j = i + static_cast<std::size_t>(rng.below(pool_size - i));
          std::swap(shuffle[i], shuffle[j]);
        }
        combo.assign(shuffle.begin(), shuffle.begin() + static_cast<std::ptrdiff_t>(k_extra));
        std::sort(combo.begin(), combo.end());
      } else if (index != begin) {
        next_combination(combo, pool_size);
      }
      for (std::size_t i = 0; i < k_extra; ++i) members[k_core + i] = k_core + combo[i];
      const std::uint64_t mask = table.core_mask(members, k_core, alpha, scratch);
      retain(local[mask], Retained{mix_seed(mode.seed ^ kExampleStream, index), index, combo}, limit);
    }
  });

  TallyMap merged;
  for (auto& blk : partial) merge_into(merged, std::move(blk), limit);

  PatternEnumeration out;
  out.core.assign(core.begin(), core.end());
  out.pool.assign(pool.begin(), pool.end());
  out.k_extra = k_extra;
  out.alpha = alpha;
  out.mode = mode;
  out.total_subsets = total;
  out.core_p_values = table.core_p(k_core);
  for (auto& [mask, tally] : merged) {
    PatternCount pc;
    pc.mask = mask;
    pc.count = tally.count;
    std::sort(tally.kept.begin(), tally.kept.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
    for (const auto& r : tally.kept) {
      std::vector<std::string> names;
      for (auto c : r.combo) names.push_back(out.pool[c]);
      pc.examples.push_back(std::move(names));
    }
    out.patterns.push_back(std::move(pc));
  }
  return out;
}

namespace {

bool contains(std::span<const std::string> set, const std::string& name) {
  return std::find(set.begin(), set.end(), name) != set.end();
}

std::vector<std::string> order_by_rank(const std::vector<std::string>& names, const RankTable& ranks) {
  std::vector<std::size_t> idx(names.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (ranks.average_ranks[a] != ranks.average_ranks[b]) return ranks.average_ranks[a] < ranks.average_ranks[b];
    return names[a] < names[b];
  });
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(names[i]);
  return out;
}

int compare(double a, double b) { return a < b ? -1 : (a > b ? 1 : 0); }

}  // namespace

RankSwapReport detect_rank_swap(const ResultsMatrix& matrix, const std::pair<std::string, std::string>& pair,
                                std::span<const std::string> set_a, std::span<const std::string> set_b,
                                double alpha, WilcoxonOptions options) {
  if (pair.first == pair.second) throw Error(ErrorCode::SameComparate, "rank swap needs two distinct comparates");
  for (const auto* set : {&set_a, &set_b}) {
    if (!contains(*set, pair.first) || !contains(*set, pair.second)) {
      throw Error(ErrorCode::PairNotInBothSets,
                  fmt::format("'{}' and '{}' must both be in each set", pair.first, pair.second));
    }
  }

  RankSwapReport report;
  report.pair = pair;
  auto analyse = [&](std::span<const std::string> set, std::vector<std::string>& order,
                     std::pair<double, double>& ars, bool& significant) {
    const ResultsMatrix sub = matrix.select(set);
    const RankTable ranks = compute_ranks(sub);
    order = order_by_rank(sub.comparates(), ranks);
    const std::size_t a = sub.index_of(pair.first);
    const std::size_t b = sub.index_of(pair.second);
    ars = {ranks.average_ranks[a], ranks.average_ranks[b]};
    const HolmFamily family = holm_all_pairs(sub, alpha, options);
    significant = family.is_significant(a, b);
    return family.p(a, b);
  };
  report.p_value = analyse(set_a, report.order_a, report.average_ranks_a, report.significant_a);
  analyse(set_b, report.order_b, report.average_ranks_b, report.significant_b);
  report.swapped = compare(report.average_ranks_a.first, report.average_ranks_a.second) !=
                   compare(report.average_ranks_b.first, report.average_ranks_b.second);

  // Mean performance of a comparate does not involve any other comparate.
  const auto ordered_a = order_by_mean(matrix, std::vector<std::string>{pair.first, pair.second});
  const auto ordered_b = order_by_mean(matrix.select(set_b), std::vector<std::string>{pair.first, pair.second});
  report.mean_order_swapped = ordered_a != ordered_b;
  return report;
}

bool pairwise_cells_identical(const ResultsMatrix& before, const ResultsMatrix& after,
                              std::span<const std::string> names, PairwiseOptions options) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (i == j) continue;
      if (!(pairwise_comparison(before, names[i], names[j], options) ==
            pairwise_comparison(after, names[i], names[j], options))) {
        return false;
      }
    }
  }
  return true;
}

WeakenedAttackReport weakened_variant_attack(const ResultsMatrix& matrix, std::string_view target,
                                             std::string_view reference, std::span<const double> weights,
                                             std::span<const std::string> context, double alpha,
                                             WilcoxonOptions options) {
  require_core(context);
  matrix.index_of(target);
  matrix.index_of(reference);
  if (!contains(context, std::string(target))) {
    throw Error(ErrorCode::InvalidConfig, fmt::format("context must contain the target '{}'", target));
  }
  for (const auto& c : context) matrix.index_of(c);

  WeakenedAttackReport report;
  report.target = std::string(target);
  report.reference = std::string(reference);
  report.context.assign(context.begin(), context.end());

  const ResultsMatrix base = matrix.select(context);
  const RankTable base_ranks = compute_ranks(base);
  for (std::size_t i = 0; i < base.comparate_count(); ++i) {
    report.baseline_average_ranks.emplace_back(base.comparates()[i], base_ranks.average_ranks[i]);
  }
  report.baseline_target_average_rank = base_ranks.average_ranks[base.index_of(target)];
  report.baseline_pattern = significance_pattern(matrix, context, {}, alpha, options);
  const std::size_t k = context.size();

  std::string variant = std::string(target) + "*";
  while (matrix.find(variant)) variant += "*";

  for (double w : weights) {
    const ResultsMatrix augmented = weaken_comparate(matrix, target, reference, w, variant);
    std::vector<std::string> names(context.begin(), context.end());
    names.push_back(variant);
    const ResultsMatrix sub = augmented.select(names);
    const RankTable ranks = compute_ranks(sub);

    WeakenedStep step;
    step.weight = w;
    step.variant = variant;
    for (std::size_t i = 0; i < sub.comparate_count(); ++i) {
      step.average_ranks.emplace_back(sub.comparates()[i], ranks.average_ranks[i]);
    }
    step.target_average_rank = ranks.average_ranks[sub.index_of(target)];
    const std::vector<std::string> extra{variant};
    step.pattern = significance_pattern(augmented, context, extra, alpha, options);
    const std::uint64_t changed = step.pattern.mask ^ report.baseline_pattern.mask;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        const std::size_t bit = core_pair_index(i, j, k);
        if ((changed >> bit) & 1U) {
          const bool before_ns = (report.baseline_pattern.mask >> bit) & 1U;
          step.flips.push_back({context[i], context[j], !before_ns, before_ns});
        }
      }
    }
    step.mcm_cells_identical = pairwise_cells_identical(matrix, augmented, context);
    report.steps.push_back(std::move(step));
  }
  return report;
}

bool holm_flag_invariance_check(const ResultsMatrix& matrix, const std::pair<std::string, std::string>& pair,
                                std::span<const std::vector<std::string>> subsets, double alpha) {
  std::optional<bool> reference;
  for (const auto& subset : subsets) {
    if (!contains(subset, pair.first) || !contains(subset, pair.second)) {
      throw Error(ErrorCode::PairNotInSubset, fmt::format("subset lacks '{}' or '{}'", pair.first, pair.second));
    }
    const ResultsMatrix sub = matrix.select(subset);
    const HolmFamily family = holm_all_pairs(sub, alpha);
    const bool flag = family.is_significant(sub.index_of(pair.first), sub.index_of(pair.second));
    if (!reference) {
      reference = flag;
    } else if (*reference != flag) {
      return false;
    }
  }
  return true;
}

nlohmann::ordered_json enumeration_to_json(const PatternEnumeration& e) {
  nlohmann::ordered_json doc;
  doc["core"] = e.core;
  doc["pool"] = e.pool;
  doc["k_extra"] = e.k_extra;
  doc["alpha"] = e.alpha;
  doc["mode"] = e.mode.kind == EnumerationMode::Kind::Exhaustive ? "exhaustive" : "sampled";
  if (e.mode.kind == EnumerationMode::Kind::Sampled) doc["samples"] = e.mode.samples;
  doc["seed"] = e.mode.seed;
  doc["total_subsets"] = e.total_subsets;
  doc["count_sum"] = e.count_sum();
  auto core_pairs = nlohmann::ordered_json::array();
  const std::size_t k = e.core.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      nlohmann::ordered_json p;
      p["bit"] = core_pair_index(i, j, k);
      p["pair"] = {e.core[i], e.core[j]};
      p["p"] = e.core_p_values[core_pair_index(i, j, k)];
      core_pairs.push_back(std::move(p));
    }
  }
  doc["core_pairs"] = std::move(core_pairs);
  auto patterns = nlohmann::ordered_json::array();
  for (const auto& pc : e.patterns) {
    nlohmann::ordered_json p;
    p["mask"] = mask_hex(pc.mask);
    p["count"] = pc.count;
    auto ns = nlohmann::ordered_json::array();
    SignificancePattern sp{e.core, pc.mask};
    for (const auto& [i, j] : sp.non_significant_pairs()) ns.push_back({e.core[i], e.core[j]});
    p["non_significant_pairs"] = std::move(ns);
    p["examples"] = pc.examples;
    patterns.push_back(std::move(p));
  }
  doc["patterns"] = std::move(patterns);
  return doc;
}

nlohmann::ordered_json rank_swap_to_json(const RankSwapReport& r) {
  nlohmann::ordered_json doc;
  doc["pair"] = {r.pair.first, r.pair.second};
  doc["order_a"] = r.order_a;
  doc["order_b"] = r.order_b;
  doc["average_ranks_a"] = {r.average_ranks_a.first, r.average_ranks_a.second};
  doc["average_ranks_b"] = {r.average_ranks_b.first, r.average_ranks_b.second};
  doc["swapped"] = r.swapped;
  doc["p"] = r.p_value;
  doc["significant_a"] = r.significant_a;
  doc["significant_b"] = r.significant_b;
  doc["mean_order_swapped"] = r.mean_order_swapped;
  return doc;
}

namespace {

nlohmann::ordered_json ranks_json(const std::vector<std::pair<std::string, double>>& ranks) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [name, ar] : ranks) out[name] = ar;
  return out;
}

}  // namespace

nlohmann::ordered_json weakened_attack_to_json(const WeakenedAttackReport& r) {
  nlohmann::ordered_json doc;
  doc["target"] = r.target;
  doc["reference"] = r.reference;
  doc["context"] = r.context;
  doc["baseline"] = {{"target_average_rank", r.baseline_target_average_rank},
                     {"average_ranks", ranks_json(r.baseline_average_ranks)},
                     {"pattern", mask_hex(r.baseline_pattern.mask)}};
  auto steps = nlohmann::ordered_json::array();
  for (const auto& s : r.steps) {
    nlohmann::ordered_json j;
    j["weight"] = s.weight;
    j["variant"] = s.variant;
    j["target_average_rank"] = s.target_average_rank;
    j["average_ranks"] = ranks_json(s.average_ranks);
    j["pattern"] = mask_hex(s.pattern.mask);
    auto flips = nlohmann::ordered_json::array();
    for (const auto& f : s.flips) {
      flips.push_back({{"pair", {f.first, f.second}},
                       {"significant_before", f.significant_before},
                       {"significant_after", f.significant_after}});
    }
    j["flips"] = std::move(flips);
    j["mcm_cells_identical"] = s.mcm_cells_identical;
    steps.push_back(std::move(j));
  }
  doc["steps"] = std::move(steps);
  return doc;
}

std::string render_pattern_svg(const SignificancePattern& pattern) {
  const std::size_t k = pattern.core.size();
  constexpr double size = 240.0;
  constexpr double radius = 80.0;
  const double c = size / 2.0;
  std::vector<std::pair<double, double>> pos(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double angle = -M_PI / 2.0 + 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(k, 1));
    pos[i] = {c + radius * std::cos(angle), c + radius * std::sin(angle)};
  }
  auto f = [](double v) { return fmt::format("{:.2f}", v); };
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\" "
      "font-family=\"DejaVu Sans, Arial, Helvetica, sans-serif\" font-size=\"11\">\n",
      f(size));
  out += fmt::format("<title>pattern {}</title>\n", mask_hex(pattern.mask));
  for (const auto& [i, j] : pattern.non_significant_pairs()) {
    out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#000000\" stroke-width=\"2\"/>\n",
                       f(pos[i].first), f(pos[i].second), f(pos[j].first), f(pos[j].second));
  }
  for (std::size_t i = 0; i < k; ++i) {
    out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"#000000\"/>\n", f(pos[i].first), f(pos[i].second));
    std::string label;
    for (char ch : pattern.core[i]) {
      if (ch == '<') label += "&lt;";
      else if (ch == '>') label += "&gt;";
      else if (ch == '&') label += "&amp;";
      else label.push_back(ch);
    }
    const double ly = pos[i].second < c ? pos[i].second - 10.0 : pos[i].second + 18.0;
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", f(pos[i].first), f(ly), label);
  }
  out += "</svg>\n";
  return out;
}

}  // namespace mcm
