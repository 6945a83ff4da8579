// Command-line front end: mcm, cd, stats, stability and selftest subcommands.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include "mcm/data.hpp"
#include "mcm/error.hpp"
#include "mcm/mcm_report.hpp"
#include "mcm/parallel.hpp"
#include "mcm/render.hpp"
#include "mcm/stability.hpp"
#include "mcm/stats.hpp"
#include "selftest.hpp"

#ifndef MCM_VERSION
#define MCM_VERSION "0.0.0"
#endif

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInvariant = 3;

constexpr std::size_t kExhaustiveLimit = 1'000'000;

struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

void ensure(bool condition, const std::string& what) {
  if (!condition) throw InvariantViolation(what);
}

struct InputOptions {
  std::string path;
  std::string direction;
  std::string format = "auto";
};

struct LoadedInput {
  std::string bytes;
  std::string sha256;
  mcm::ResultsMatrix matrix;
};

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr);
  std::string out;
  for (unsigned int i = 0; i < length; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

LoadedInput load_input(const InputOptions& opts) {
  std::string bytes;
  if (opts.path == "-") {
    bytes.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream file(opts.path, std::ios::binary);
    if (!file) throw mcm::Error(mcm::ErrorCode::Parse, fmt::format("cannot open '{}'", opts.path));
    bytes.assign(std::istreambuf_iterator<char>(file), {});
  }
  const auto direction = mcm::parse_direction(opts.direction);
  if (!direction) throw CLI::ValidationError("--direction", "must be 'higher' or 'lower'");
  mcm::InputFormat format = mcm::InputFormat::CSV;
  if (opts.format == "json" ||
      (opts.format == "auto" && std::filesystem::path(opts.path).extension() == ".json")) {
    format = mcm::InputFormat::JSON;
  }
  auto matrix = mcm::load_results_text(bytes, format, *direction);
  auto hash = sha256_hex(bytes);
  return {std::move(bytes), std::move(hash), std::move(matrix)};
}

void add_input_options(CLI::App* cmd, InputOptions& opts) {
  cmd->add_option("-i,--input", opts.path, "Results table (CSV or JSON); '-' reads stdin")->required();
  cmd->add_option("-d,--direction", opts.direction, "Score orientation (required)")
      ->required()
      ->check(CLI::IsMember({"higher", "lower"}));
  cmd->add_option("--input-format", opts.format, "Input format; auto picks JSON for *.json")
      ->check(CLI::IsMember({"auto", "csv", "json"}))
      ->capture_default_str();
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  std::istringstream in(text);
  while (std::getline(in, current, ',')) {
    if (!current.empty()) out.push_back(current);
  }
  return out;
}

json metadata(const LoadedInput& input, std::string_view command, json config) {
  json meta;
  meta["tool"] = "mcm";
  meta["version"] = MCM_VERSION;
  meta["command"] = command;
  meta["input_sha256"] = input.sha256;
  meta["direction"] = mcm::to_string(input.matrix.direction());
  meta["comparates"] = input.matrix.comparate_count();
  meta["tasks"] = input.matrix.task_count();
  meta["config"] = std::move(config);
  return meta;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mcm::Error(mcm::ErrorCode::InvalidConfig, fmt::format("cannot write '{}'", path));
  out << content;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

struct StatOptions {
  double alpha = 0.05;
  double tie_epsilon = 0.0;
  std::size_t exact_threshold = 25;
  std::string test = "none";
  double rope = 0.01;
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

void add_stat_options(CLI::App* cmd, StatOptions& opts, bool with_bayes) {
  cmd->add_option("-a,--alpha", opts.alpha, "Significance level")->capture_default_str();
  cmd->add_option("--tie-epsilon", opts.tie_epsilon, "Differences with |d| <= eps count as ties")
      ->capture_default_str();
  cmd->add_option("--exact-threshold", opts.exact_threshold,
                  "Largest nonzero count using the exact Wilcoxon distribution")
      ->capture_default_str();
  if (with_bayes) {
    cmd->add_option("--test", opts.test, "Additional pairwise test")
        ->check(CLI::IsMember({"none", "bayesian"}))
        ->capture_default_str();
    cmd->add_option("--rope", opts.rope, "Bayesian region of practical equivalence half-width")
        ->capture_default_str();
    cmd->add_option("--mc-samples", opts.mc_samples, "Bayesian Monte Carlo samples")->capture_default_str();
  }
  cmd->add_option("--seed", opts.seed, "Random seed")->capture_default_str();
  cmd->add_option("--threads", opts.threads, "Worker threads; 0 uses MCM_THREADS or the hardware count")
      ->capture_default_str();
}

std::size_t workers(const StatOptions& opts) {
  return opts.threads == 0 ? mcm::default_worker_count() : opts.threads;
}

json stat_config(const StatOptions& opts, bool bayes) {
  json c;
  c["alpha"] = opts.alpha;
  c["tie_epsilon"] = opts.tie_epsilon;
  c["exact_threshold"] = opts.exact_threshold;
  c["wilcoxon_zero_handling"] = "discard";
  c["test"] = opts.test;
  if (bayes) {
    c["rope"] = opts.rope;
    c["mc_samples"] = opts.mc_samples;
    c["prior_pseudo_observation"] = 0.0;
    c["prior_strength"] = 1.0;
  }
  c["seed"] = opts.seed;
  return c;
}

mcm::BayesConfig bayes_config(const StatOptions& opts) {
  mcm::BayesConfig cfg;
  cfg.rope = opts.rope;
  cfg.mc_samples = opts.mc_samples;
  cfg.seed = opts.seed;
  return cfg;
}

// Every command renders through one of these; the rendering itself is
// deterministic, so outputs depend only on input bytes and flags.

int run_mcm(const InputOptions& in, const StatOptions& opts, const std::string& rows, const std::string& cols,
            const std::string& format, const std::string& output) {
  const auto input = load_input(in);
  mcm::MCMConfig cfg;
  cfg.alpha = opts.alpha;
  cfg.tie_epsilon = opts.tie_epsilon;
  cfg.wilcoxon.exact_threshold = opts.exact_threshold;
  if (!rows.empty()) cfg.row_comparates = split_names(rows);
  if (!cols.empty()) cfg.column_comparates = split_names(cols);
  cfg.include_bayes = opts.test == "bayesian";
  cfg.bayes = bayes_config(opts);

  const auto report = mcm::build_mcm(input.matrix, cfg, workers(opts));
  for (std::size_t r = 0; r < report.row_order.size(); ++r) {
    for (std::size_t c = 0; c < report.column_order.size(); ++c) {
      const auto& cell = report.cell(r, c);
      if (!cell) continue;
      const auto& cmp = cell->comparison;
      ensure(cmp.wins + cmp.ties + cmp.losses == report.task_count, "win/tie/loss does not cover every task");
      ensure(cell->significant == (cmp.p_value < report.alpha), "significance flag disagrees with p");
    }
  }

  json config = stat_config(opts, cfg.include_bayes);
  config["rows"] = report.row_order;
  config["columns"] = report.column_order;
  config["format"] = format;
  const json meta = metadata(input, "mcm", std::move(config));

  if (format == "json") {
    json doc;
    doc["metadata"] = meta;
    doc["report"] = mcm::report_to_json(report);
    write_output(output, dump(doc));
  } else {
    const auto fmt = format == "html" ? mcm::DocumentFormat::HTML : mcm::DocumentFormat::SVG;
    write_output(output, mcm::render_mcm(report, mcm::RenderStyle{}, fmt, meta.dump()));
  }
  return 0;
}

mcm::PairwiseMethod parse_pairwise(const std::string& text) {
  return text == "nemenyi" ? mcm::PairwiseMethod::Nemenyi : mcm::PairwiseMethod::WilcoxonHolm;
}

json cd_layout_json(const mcm::CdLayout& layout) {
  json doc;
  doc["method"] = mcm::to_string(layout.method);
  doc["alpha"] = layout.alpha;
  doc["task_count"] = layout.task_count;
  json ranks = json::array();
  for (std::size_t i = 0; i < layout.names.size(); ++i) {
    ranks.push_back({{"comparate", layout.names[i]}, {"average_rank", layout.average_ranks[i]}});
  }
  doc["average_ranks"] = std::move(ranks);
  json cliques = json::array();
  for (const auto& [a, b] : layout.cliques) {
    json members = json::array();
    for (std::size_t i = a; i <= b; ++i) members.push_back(layout.names[i]);
    cliques.push_back(std::move(members));
  }
  doc["cliques"] = std::move(cliques);
  if (layout.critical_difference) doc["critical_difference"] = *layout.critical_difference;
  return doc;
}

int run_cd(const InputOptions& in, double alpha, const std::string& pairwise, const std::string& format,
           const std::string& output) {
  const auto input = load_input(in);
  const auto layout = mcm::compute_cd_layout(input.matrix, alpha, parse_pairwise(pairwise));
  for (std::size_t i = 1; i < layout.average_ranks.size(); ++i) {
    ensure(layout.average_ranks[i - 1] <= layout.average_ranks[i], "CD layout is not sorted by average rank");
  }
  json config;
  config["alpha"] = alpha;
  config["pairwise"] = pairwise;
  config["format"] = format;
  config["wilcoxon_zero_handling"] = "discard";
  const json meta = metadata(input, "cd", std::move(config));
  if (format == "json") {
    json doc;
    doc["metadata"] = meta;
    doc["layout"] = cd_layout_json(layout);
    write_output(output, dump(doc));
  } else {
    write_output(output, mcm::render_cd_diagram(layout, mcm::RenderStyle{}, meta.dump()));
  }
  return 0;
}

int run_stats(const InputOptions& in, const StatOptions& opts, const std::string& output) {
  const auto input = load_input(in);
  const auto& m = input.matrix;
  const auto table = mcm::compute_ranks(m);

  json doc;
  const bool bayes = opts.test == "bayesian";
  doc["metadata"] = metadata(input, "stats", stat_config(opts, bayes));
  doc["comparates"] = m.comparates();
  doc["tasks"] = m.tasks();

  json ranks = json::object();
  json average = json::object();
  for (std::size_t i = 0; i < m.comparate_count(); ++i) {
    double sum = 0.0;
    json row = json::array();
    for (std::size_t t = 0; t < m.task_count(); ++t) {
      row.push_back(table.rank(i, t));
      sum += table.rank(i, t);
    }
    ensure(sum / static_cast<double>(m.task_count()) == table.average_ranks[i], "average rank is not the row mean");
    ranks[m.comparates()[i]] = std::move(row);
    average[m.comparates()[i]] = table.average_ranks[i];
  }
  doc["ranks"] = std::move(ranks);
  doc["average_ranks"] = std::move(average);

  if (m.comparate_count() >= 3 && m.task_count() >= 2) {
    const auto f = mcm::friedman_test(m);
    doc["friedman"] = {{"statistic", f.statistic}, {"p", f.p_value}, {"degrees_of_freedom", f.degrees_of_freedom}};
  } else {
    doc["friedman"] = nullptr;
  }
  json nemenyi = json::object();
  if (m.comparate_count() <= mcm::kNemenyiMaxComparates) {
    nemenyi["critical_difference_0.05"] =
        mcm::nemenyi_critical_difference(m.comparate_count(), m.task_count(), mcm::NemenyiAlpha::P05);
    nemenyi["critical_difference_0.10"] =
        mcm::nemenyi_critical_difference(m.comparate_count(), m.task_count(), mcm::NemenyiAlpha::P10);
  }
  doc["nemenyi"] = std::move(nemenyi);

  mcm::PairwiseOptions popts;
  popts.tie_epsilon = opts.tie_epsilon;
  popts.wilcoxon.exact_threshold = opts.exact_threshold;
  const auto family = mcm::holm_all_pairs(m, opts.alpha, popts.wilcoxon);
  const auto cfg = bayes_config(opts);
  json pairs = json::array();
  for (std::size_t i = 0; i < m.comparate_count(); ++i) {
    for (std::size_t j = i + 1; j < m.comparate_count(); ++j) {
      const auto cmp = mcm::pairwise_comparison(m, m.comparates()[i], m.comparates()[j], popts);
      json cell = mcm::pairwise_to_json(cmp);
      cell["significant_uncorrected"] = cmp.p_value < opts.alpha;
      cell["significant_holm"] = static_cast<bool>(family.is_significant(i, j));
      if (bayes) {
        const auto diffs = mcm::oriented_differences(m, i, j);
        cell["bayes"] = mcm::bayes_to_json(mcm::bayesian_signed_rank(diffs, cfg, workers(opts)));
      }
      pairs.push_back(std::move(cell));
    }
  }
  doc["pairwise"] = std::move(pairs);
  write_output(output, dump(doc));
  return 0;
}

struct StabilityOptions {
  InputOptions input;
  double alpha = 0.05;
  std::size_t exact_threshold = 25;
  std::size_t threads = 0;
  std::string output;
  // enumerate
  std::string core;
  std::string pool;
  std::size_t k_extra = 4;
  std::string mode = "exhaustive";
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::size_t examples = 5;
  std::string pattern_svg_dir;
  // rank-swap
  std::string pair;
  std::string set_a;
  std::string set_b;
  // weaken
  std::string target;
  std::string reference;
  std::string weights = "1,0.9,0.8,0.7,0.6,0.5";
  std::string context;
};

void add_stability_common(CLI::App* cmd, StabilityOptions& opts) {
  add_input_options(cmd, opts.input);
  cmd->add_option("-a,--alpha", opts.alpha, "Holm family-wise level")->capture_default_str();
  cmd->add_option("--exact-threshold", opts.exact_threshold,
                  "Largest nonzero count using the exact Wilcoxon distribution")
      ->capture_default_str();
  cmd->add_option("-o,--output", opts.output, "Output JSON path (default stdout)");
}

int run_enumerate(const StabilityOptions& o) {
  const auto input = load_input(o.input);
  const auto core = split_names(o.core);
  std::vector<std::string> pool = split_names(o.pool);
  if (pool.empty()) {
    for (const auto& name : input.matrix.comparates()) {
      if (std::find(core.begin(), core.end(), name) == core.end()) pool.push_back(name);
    }
  }
  mcm::EnumerationMode mode = mcm::EnumerationMode::exhaustive(o.seed);
  if (o.mode == "sampled") {
    mode = mcm::EnumerationMode::sampled(o.samples, o.seed);
  } else if (mcm::binomial(pool.size(), o.k_extra) > kExhaustiveLimit) {
    throw mcm::Error(mcm::ErrorCode::InvalidConfig,
                     fmt::format("C({}, {}) exceeds {} subsets; use --mode sampled", pool.size(), o.k_extra,
                                 kExhaustiveLimit));
  }
  mcm::EnumerationOptions eopts;
  eopts.examples_per_pattern = o.examples;
  eopts.workers = o.threads == 0 ? mcm::default_worker_count() : o.threads;
  eopts.wilcoxon.exact_threshold = o.exact_threshold;
  const auto result = mcm::enumerate_patterns(input.matrix, core, pool, o.k_extra, o.alpha, mode, eopts);
  ensure(result.count_sum() == result.total_subsets, "pattern counts do not sum to the number of subsets");

  json config;
  config["alpha"] = o.alpha;
  config["exact_threshold"] = o.exact_threshold;
  config["core"] = core;
  config["pool"] = pool;
  config["k_extra"] = o.k_extra;
  config["mode"] = o.mode;
  if (o.mode == "sampled") config["samples"] = o.samples;
  config["seed"] = o.seed;
  config["examples_per_pattern"] = o.examples;
  json doc;
  doc["metadata"] = metadata(input, "stability enumerate", std::move(config));
  doc["enumeration"] = mcm::enumeration_to_json(result);
  write_output(o.output, dump(doc));

  if (!o.pattern_svg_dir.empty()) {
    std::filesystem::create_directories(o.pattern_svg_dir);
    for (const auto& p : result.patterns) {
      const auto svg = mcm::render_pattern_svg(mcm::SignificancePattern{result.core, p.mask});
      write_output((std::filesystem::path(o.pattern_svg_dir) / ("pattern_" + mcm::mask_hex(p.mask) + ".svg")).string(),
                   svg);
    }
  }
  return 0;
}

int run_rank_swap(const StabilityOptions& o) {
  const auto input = load_input(o.input);
  const auto pair = split_names(o.pair);
  if (pair.size() != 2) throw CLI::ValidationError("--pair", "expects exactly two names");
  const auto a = split_names(o.set_a);
  const auto b = split_names(o.set_b);
  mcm::WilcoxonOptions w{o.exact_threshold};
  const auto report = mcm::detect_rank_swap(input.matrix, {pair[0], pair[1]}, a, b, o.alpha, w);
  ensure(!report.mean_order_swapped, "mean-performance order changed with the comparate set");

  json config;
  config["alpha"] = o.alpha;
  config["exact_threshold"] = o.exact_threshold;
  config["pair"] = pair;
  config["set_a"] = a;
  config["set_b"] = b;
  json doc;
  doc["metadata"] = metadata(input, "stability rank-swap", std::move(config));
  doc["rank_swap"] = mcm::rank_swap_to_json(report);
  write_output(o.output, dump(doc));
  return 0;
}

int run_weaken(const StabilityOptions& o) {
  const auto input = load_input(o.input);
  std::vector<double> weights;
  for (const auto& w : split_names(o.weights)) {
    try {
      weights.push_back(std::stod(w));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--weights", fmt::format("'{}' is not a number", w));
    }
  }
  auto context = split_names(o.context);
  if (context.empty()) context = input.matrix.comparates();
  mcm::WilcoxonOptions w{o.exact_threshold};
  const auto report =
      mcm::weakened_variant_attack(input.matrix, o.target, o.reference, weights, context, o.alpha, w);
  for (const auto& step : report.steps) ensure(step.mcm_cells_identical, "MCM cell changed after augmentation");

  json config;
  config["alpha"] = o.alpha;
  config["exact_threshold"] = o.exact_threshold;
  config["target"] = o.target;
  config["reference"] = o.reference;
  config["weights"] = weights;
  config["context"] = context;
  json doc;
  doc["metadata"] = metadata(input, "stability weaken", std::move(config));
  doc["weakened_variant"] = mcm::weakened_attack_to_json(report);
  write_output(o.output, dump(doc));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-Comparison Matrix and critical-difference analysis of benchmark results"};
  app.set_version_flag("--version", MCM_VERSION);
  app.require_subcommand(1);
  std::function<int()> action;

  InputOptions mcm_in;
  StatOptions mcm_opts;
  std::string mcm_rows, mcm_cols, mcm_format = "svg", mcm_output;
  auto* mcm_cmd = app.add_subcommand("mcm", "Render the Multi-Comparison Matrix");
  add_input_options(mcm_cmd, mcm_in);
  add_stat_options(mcm_cmd, mcm_opts, true);
  mcm_cmd->add_option("--rows", mcm_rows, "Comma-separated row comparates (default all)");
  mcm_cmd->add_option("--cols", mcm_cols, "Comma-separated column comparates (default all)");
  mcm_cmd->add_option("-f,--format", mcm_format, "Output format")
      ->check(CLI::IsMember({"svg", "html", "json"}))
      ->capture_default_str();
  mcm_cmd->add_option("-o,--output", mcm_output, "Output path (default stdout)");
  mcm_cmd->callback([&] { action = [&] { return run_mcm(mcm_in, mcm_opts, mcm_rows, mcm_cols, mcm_format, mcm_output); }; });

  InputOptions cd_in;
  double cd_alpha = 0.05;
  std::string cd_pairwise = "wilcoxon-holm", cd_format = "svg", cd_output;
  auto* cd_cmd = app.add_subcommand("cd", "Render a critical-difference diagram");
  add_input_options(cd_cmd, cd_in);
  cd_cmd->add_option("-a,--alpha", cd_alpha, "Significance level (Nemenyi supports 0.05 and 0.10)")
      ->capture_default_str();
  cd_cmd->add_option("--pairwise", cd_pairwise, "Pairwise test joining comparates")
      ->check(CLI::IsMember({"nemenyi", "wilcoxon-holm"}))
      ->capture_default_str();
  cd_cmd->add_option("-f,--format", cd_format, "Output format")
      ->check(CLI::IsMember({"svg", "json"}))
      ->capture_default_str();
  cd_cmd->add_option("-o,--output", cd_output, "Output path (default stdout)");
  cd_cmd->callback([&] { action = [&] { return run_cd(cd_in, cd_alpha, cd_pairwise, cd_format, cd_output); }; });

  InputOptions stats_in;
  StatOptions stats_opts;
  std::string stats_output;
  auto* stats_cmd = app.add_subcommand("stats", "Dump ranks, Friedman, Nemenyi and pairwise statistics as JSON");
  add_input_options(stats_cmd, stats_in);
  add_stat_options(stats_cmd, stats_opts, true);
  stats_cmd->add_option("-o,--output", stats_output, "Output path (default stdout)");
  stats_cmd->callback([&] { action = [&] { return run_stats(stats_in, stats_opts, stats_output); }; });

  StabilityOptions st;
  auto* stability = app.add_subcommand("stability", "Significance-pattern and ranking manipulation experiments");
  stability->require_subcommand(1);
  stability->add_option("--threads", st.threads, "Worker threads; 0 uses MCM_THREADS or the hardware count")
      ->capture_default_str();

  auto* enumerate = stability->add_subcommand("enumerate", "Holm patterns over every extra-comparate subset");
  add_stability_common(enumerate, st);
  enumerate->add_option("--core", st.core, "Comma-separated core comparates (at most 11)")->required();
  enumerate->add_option("--pool", st.pool, "Comma-separated pool (default: all comparates outside the core)");
  enumerate->add_option("-k,--k-extra", st.k_extra, "Extra comparates per family")->capture_default_str();
  enumerate->add_option("--mode", st.mode, "exhaustive is limited to 1e6 subsets")
      ->check(CLI::IsMember({"exhaustive", "sampled"}))
      ->capture_default_str();
  enumerate->add_option("--samples", st.samples, "Subsets drawn in sampled mode")->capture_default_str();
  enumerate->add_option("--seed", st.seed, "Seed for sampling and example selection")->capture_default_str();
  enumerate->add_option("--examples", st.examples, "Example subsets kept per pattern")->capture_default_str();
  enumerate->add_option("--pattern-svg-dir", st.pattern_svg_dir, "Write one SVG graph per pattern here");
  enumerate->callback([&] { action = [&] { return run_enumerate(st); }; });

  auto* swap = stability->add_subcommand("rank-swap", "Compare a pair's average-rank order in two comparate sets");
  add_stability_common(swap, st);
  swap->add_option("--pair", st.pair, "Two comma-separated comparates")->required();
  swap->add_option("--set-a", st.set_a, "First comparate set")->required();
  swap->add_option("--set-b", st.set_b, "Second comparate set")->required();
  swap->callback([&] { action = [&] { return run_rank_swap(st); }; });

  auto* weaken = stability->add_subcommand("weaken", "Add weakened variants of a comparate and track ranks");
  add_stability_common(weaken, st);
  weaken->add_option("--target", st.target, "Comparate to weaken")->required();
  weaken->add_option("--reference", st.reference, "Weaker comparate mixed in")->required();
  weaken->add_option("--weights", st.weights, "Comma-separated target weights")->capture_default_str();
  weaken->add_option("--context", st.context, "Comparates analysed alongside the variant (default all)");
  weaken->callback([&] { action = [&] { return run_weaken(st); }; });

  bool selftest_verbose = false;
  auto* selftest = app.add_subcommand("selftest", "Run the embedded oracle checks");
  selftest->add_flag("-v,--verbose", selftest_verbose, "Print every check");
  selftest->callback([&] { action = [&] { return mcm::cli::run_selftest(std::cout, selftest_verbose) ? 0 : kExitInvariant; }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantViolation& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const mcm::Error& e) {
    std::cerr << "error [" << mcm::to_string(e.code()) << "]: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
}
