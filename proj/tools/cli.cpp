#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "ecorank/eval.hpp"
#include "ecorank/ingest.hpp"
#include "ecorank/io.hpp"
#include "ecorank/ranking.hpp"
#include "ecorank/report.hpp"
#include "ecorank/synth.hpp"
#include "json.hpp"

namespace ecorank::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

class UsageError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// ---------------------------------------------------------------------------
// Run manifest

std::string fnv1a64(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buffer[1 << 14];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    for (std::streamsize k = 0; k < in.gcount(); ++k) {
      hash ^= static_cast<unsigned char>(buffer[k]);
      hash *= 0x100000001b3ULL;
    }
  }
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << hash;
  return out.str();
}

/// Everything needed to reproduce one invocation.
class Manifest {
 public:
  Manifest(std::string subcommand, const std::vector<std::string>& args) {
    doc_["tool"] = "ecorank";
    doc_["version"] = ECORANK_VERSION;
    doc_["subcommand"] = std::move(subcommand);
    doc_["arguments"] = args;
    doc_["parameters"] = Json::object();
    doc_["inputs"] = Json::object();
    doc_["seeds"] = Json::array();
    doc_["outputs"] = Json::array();
  }

  template <typename T>
  void parameter(const std::string& key, const T& value) {
    doc_["parameters"][key] = value;
  }
  void input(const fs::path& path) { doc_["inputs"][path.string()] = fnv1a64(path); }
  void seed(std::uint64_t seed) { doc_["seeds"].push_back(seed); }
  void output(const fs::path& path) { doc_["outputs"].push_back(path.string()); }

  void save(const fs::path& path) const { write_text_file(path, doc_.dump(2) + "\n"); }

 private:
  Json doc_;
};

// ---------------------------------------------------------------------------
// Shared option handling

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw UsageError("invalid " + what + " '" + text + "'");
  }
}

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_number(item, what));
  return out;
}

/// "start:stop:step" inclusive; values rounded to 1e-9 to avoid drift.
std::vector<double> parse_grid(const std::string& text, const std::string& what) {
  const auto first = text.find(':');
  const auto second = text.find(':', first == std::string::npos ? first : first + 1);
  if (first == std::string::npos || second == std::string::npos) {
    throw UsageError(what + " grid must look like start:stop:step");
  }
  const double start = parse_number(text.substr(0, first), what);
  const double stop = parse_number(text.substr(first + 1, second - first - 1), what);
  const double step = parse_number(text.substr(second + 1), what);
  if (!(step > 0.0) || stop < start) throw UsageError(what + " grid needs step > 0 and stop >= start");
  const auto count = std::llround((stop - start) / step) + 1;
  std::vector<double> values;
  for (long long k = 0; k < count; ++k) values.push_back(std::round((start + k * step) * 1e9) / 1e9);
  return values;
}

struct MethodOptions {
  std::string method;
  int order = 2;
  int order_limit = kDefaultMrOrderLimit;
  double gamma = 1.0;
  int iterations = kDefaultFcmIterations;
  double tolerance = 0.0;
  CLI::Option* order_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* iters_opt = nullptr;
  CLI::Option* tol_opt = nullptr;

  void attach(CLI::App& app, bool required) {
    auto* opt = app.add_option("--method", method, "Ranking method")->check(CLI::IsMember({"mr", "fcm"}));
    if (required) opt->required();
    order_opt = app.add_option("--order", order, "MR order n (even)");
    app.add_option("--order-limit", order_limit, "Largest MR order accepted")->capture_default_str();
    gamma_opt = app.add_option("--gamma", gamma, "FCM extremality parameter");
    iters_opt = app.add_option("--iters", iterations, "FCM iterations")->capture_default_str();
    tol_opt = app.add_option("--tol", tolerance, "FCM early-stop tolerance (off unless given)");
  }

  bool given() const { return !method.empty(); }

  MethodConfig config() const {
    MethodConfig config;
    if (method == "mr") {
      if (gamma_opt->count() || iters_opt->count() || tol_opt->count()) {
        throw UsageError("--gamma, --iters and --tol apply to --method fcm only");
      }
      config.method = MrParams{order, order_limit};
    } else if (method == "fcm") {
      if (order_opt->count()) throw UsageError("--order applies to --method mr only");
      FcmParams params{gamma, iterations, std::nullopt};
      if (tol_opt->count()) params.tolerance = tolerance;
      config.method = params;
    } else {
      throw UsageError("--method must be mr or fcm");
    }
    try {
      validate(config);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    return config;
  }

  void record(Manifest& manifest, const MethodConfig& config) const {
    manifest.parameter("method", describe(config));
  }
};

void write_report(const EvaluationReport& report, const fs::path& dir, Manifest& manifest, std::ostream& out) {
  fs::create_directories(dir);
  const std::string stem = report_file_stem(report);
  const fs::path table = dir / (stem + ".report");
  const fs::path json = dir / (stem + ".report.json");
  write_text_file(table, format_report_table(report));
  write_text_file(json, format_report_json(report));
  manifest.output(table);
  manifest.output(json);
  manifest.save(dir / (stem + ".manifest.json"));
  out << format_report_table(report);
  out << "wrote " << table.string() << '\n';
}

BipartiteMatrix load_clean_matrix(const fs::path& path, std::ostream& err) {
  auto result = drop_isolated(load_matrix(path));
  if (result.removed_any()) {
    err << "note: dropped " << result.removed_countries.size() << " countries and " << result.removed_products.size()
        << " products without links\n";
  }
  return std::move(result.matrix);
}

// ---------------------------------------------------------------------------
// Subcommands

struct IngestArgs {
  std::string trades;
  std::string config;
  int year = 0;
  double threshold = 1.0;
  std::string core_countries;
  bool use_config_core = false;
  bool lenient = false;
  std::string out;
  std::string report;
};

int cmd_ingest(const IngestArgs& a, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  Manifest manifest("ingest", argv);
  ParseOptions parse_options;
  parse_options.strict = !a.lenient;
  const auto parsed = load_trade_records(a.trades, parse_options);
  manifest.input(a.trades);
  for (const auto& d : parsed.diagnostics) {
    err << a.trades << ":" << d.line << ":" << d.column << ": skipped: " << d.message << '\n';
  }

  CleaningConfig config;
  if (!a.config.empty()) {
    config = load_cleaning_config(a.config);
    manifest.input(a.config);
  }
  auto cleaned = clean_dataset(parsed.records, config);

  auto records = std::move(cleaned.records);
  if (!a.core_countries.empty()) {
    std::ifstream in(a.core_countries);
    if (!in) throw DataError("cannot open '" + a.core_countries + "'");
    std::vector<std::string> core;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] != '#') core.push_back(line);
    }
    manifest.input(a.core_countries);
    records = restrict_countries(records, core);
  } else if (a.use_config_core) {
    records = restrict_countries(records, config.core_countries);
  }

  const RcaMatrix rca = compute_rca(records, a.year);
  for (const auto& c : rca.zero_export_countries) err << "note: country " << c << " has no exports in " << a.year << '\n';
  const auto network = threshold_to_matrix(rca, a.threshold);

  const fs::path out_path = a.out;
  const fs::path report_path = a.report.empty() ? fs::path(a.out + ".cleaning") : fs::path(a.report);
  save_matrix(out_path, network.matrix);

  std::string report = format_cleaning_report(cleaned.report);
  std::ostringstream extra;
  extra << "[network]\n"
        << "year\t" << a.year << '\n'
        << "threshold\t" << format_double(a.threshold) << '\n'
        << "countries\t" << network.matrix.countries() << '\n'
        << "products\t" << network.matrix.products() << '\n'
        << "links\t" << network.matrix.links() << '\n'
        << "isolated_countries\t" << network.removed_countries.size() << '\n'
        << "isolated_products\t" << network.removed_products.size() << '\n';
  write_text_file(report_path, report + extra.str());

  manifest.parameter("year", a.year);
  manifest.parameter("threshold", a.threshold);
  manifest.parameter("strict", !a.lenient);
  manifest.parameter("restricted_to_core", !a.core_countries.empty() || a.use_config_core);
  manifest.output(out_path);
  manifest.output(report_path);
  manifest.save(a.out + ".manifest.json");
  out << "wrote " << out_path.string() << " (" << network.matrix.countries() << " countries, "
      << network.matrix.products() << " products, " << network.matrix.links() << " links)\n";
  return kSuccess;
}

struct RankArgs {
  std::string matrix;
  MethodOptions method;
  std::string prefix;
  std::string pbm;
  bool eci = false;
};

int cmd_rank(const RankArgs& a, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  const MethodConfig config = a.method.config();
  if (a.eci && !config.is_mr()) throw UsageError("--eci applies to --method mr only");
  Manifest manifest("rank", argv);
  a.method.record(manifest, config);
  const BipartiteMatrix m = load_clean_matrix(a.matrix, err);
  manifest.input(a.matrix);

  const MethodScores scores = score_network(m, config);
  if (scores.underflow) err << "warning: some scores underflowed to zero\n";
  if (scores.condensation_warning) err << "warning: gamma <= 0.6 lies in the condensed phase\n";

  const auto emit = [&](const fs::path& path, const std::string& content) {
    write_text_file(path, content);
    manifest.output(path);
    out << "wrote " << path.string() << '\n';
  };
  const std::string prefix = a.prefix;
  Ranking rankings[2];
  for (Side side : {Side::countries, Side::products}) {
    const std::string base = prefix + "." + to_string(side);
    std::ostringstream text;
    write_scores(text, scores.scores(side), scores.direction(side));
    emit(base + ".scores", text.str());
    rankings[side == Side::countries ? 0 : 1] = ranking_from_scores(scores.scores(side), scores.direction(side));
    std::ostringstream ranking_text;
    write_ranking(ranking_text, rankings[side == Side::countries ? 0 : 1]);
    emit(base + ".ranking", ranking_text.str());
  }

  if (a.eci) {
    // Fails with DegenerateScores when d^(n) is uniform.
    const auto& mr = std::get<MrParams>(config.method);
    const auto traj = mr_iterate<double>(m, mr.order, mr.order_limit);
    std::ostringstream text;
    write_scores(text, eci_scores(m, traj, mr.order), Direction::high_is_good);
    emit(prefix + ".countries.eci.scores", text.str());
  }

  if (!a.pbm.empty()) {
    std::ostringstream bitmap;
    write_pbm(bitmap, sort_matrix(m, rankings[0], rankings[1]));
    emit(a.pbm, bitmap.str());
  }
  manifest.save(prefix + ".manifest.json");
  return kSuccess;
}

struct EvalArgs {
  std::string matrix;
  std::string scores;
  std::string side;
  MethodOptions method;
  int trials = kDefaultTieTrials;
  std::uint64_t seed = 0;
  std::string etas = "0.01,0.05,0.1";
  int seeds = 10;
  std::string year_a;
  std::string year_b;
  std::string out_dir = ".";
};

int cmd_eval_extinction(const EvalArgs& a, const std::vector<std::string>& argv, std::ostream& out,
                        std::ostream& err) {
  if (a.trials < 1) throw UsageError("--trials must be at least 1");
  Manifest manifest("eval extinction", argv);
  manifest.parameter("trials", a.trials);
  manifest.seed(a.seed);
  const BipartiteMatrix m = load_clean_matrix(a.matrix, err);
  manifest.input(a.matrix);

  EvaluationReport report;
  if (!a.scores.empty()) {
    if (a.method.given()) throw UsageError("give either --scores or --method, not both");
    ScoreFile file = load_scores(a.scores);
    manifest.input(a.scores);
    if (!a.side.empty() && parse_side(a.side) != file.scores.side) {
      throw UsageError("--side does not match the side recorded in the score file");
    }
    report = extinction_report(m, file.scores, file.direction, a.trials, a.seed);
  } else {
    if (!a.method.given()) throw UsageError("extinction needs --scores or --method");
    const MethodConfig config = a.method.config();
    a.method.record(manifest, config);
    report = extinction_report(m, config, a.trials, a.seed);
    if (!a.side.empty()) {
      const std::string keep = parse_side(a.side) == Side::countries ? "E_C" : "E_P";
      const auto value = report.find({}, keep);
      report.statistic_columns = {keep};
      report.rows = {{{}, {value}}};
    }
  }
  write_report(report, a.out_dir, manifest, out);
  return kSuccess;
}

std::vector<std::uint64_t> seed_list(std::uint64_t base, int count) {
  if (count < 1) throw UsageError("--seeds must be at least 1");
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < count; ++k) seeds.push_back(base + static_cast<std::uint64_t>(k));
  return seeds;
}

int cmd_eval_noise(const EvalArgs& a, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  const MethodConfig config = a.method.config();
  const auto etas = parse_number_list(a.etas, "eta");
  if (etas.empty()) throw UsageError("--eta list is empty");
  for (double eta : etas) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw UsageError("--eta values must lie in [0, 1]");
  }
  const auto seeds = seed_list(a.seed, a.seeds);
  Manifest manifest("eval noise", argv);
  a.method.record(manifest, config);
  manifest.parameter("eta", etas);
  for (auto s : seeds) manifest.seed(s);
  const BipartiteMatrix m = load_clean_matrix(a.matrix, err);
  manifest.input(a.matrix);
  const auto report = noise_robustness(m, config, etas, seeds);
  write_report(report, a.out_dir, manifest, out);
  return kSuccess;
}

int cmd_eval_volatility(const EvalArgs& a, const std::vector<std::string>& argv, std::ostream& out,
                        std::ostream& err) {
  const MethodConfig config = a.method.config();
  Manifest manifest("eval volatility", argv);
  a.method.record(manifest, config);
  const BipartiteMatrix first = load_clean_matrix(a.year_a, err);
  const BipartiteMatrix second = load_clean_matrix(a.year_b, err);
  manifest.input(a.year_a);
  manifest.input(a.year_b);
  const auto report = volatility(first, second, config);
  write_report(report, a.out_dir, manifest, out);
  return kSuccess;
}

int cmd_eval_correlation(const EvalArgs& a, const std::vector<std::string>& argv, std::ostream& out,
                         std::ostream& err) {
  const MethodConfig config = a.method.config();
  Manifest manifest("eval correlation", argv);
  a.method.record(manifest, config);
  const BipartiteMatrix m = load_clean_matrix(a.matrix, err);
  manifest.input(a.matrix);
  const auto report = correlation_report(m, config);
  write_report(report, a.out_dir, manifest, out);
  return kSuccess;
}

struct SweepArgs {
  std::string matrix;
  std::string gamma_grid;
  std::string gammas;
  std::string order_grid;
  std::string orders;
  int iterations = kDefaultFcmIterations;
  std::string experiments = "extinction,correlation";
  int trials = kDefaultTieTrials;
  std::uint64_t seed = 0;
  std::string etas = "0.05";
  int seeds = 10;
  std::string out;
};

int cmd_sweep(const SweepArgs& a, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  const int grids = !a.gamma_grid.empty() + !a.gammas.empty() + !a.order_grid.empty() + !a.orders.empty();
  if (grids != 1) throw UsageError("give exactly one of --gamma-grid, --gammas, --order-grid, --orders");

  std::vector<MethodConfig> grid;
  if (!a.gamma_grid.empty() || !a.gammas.empty()) {
    const auto values = !a.gamma_grid.empty() ? parse_grid(a.gamma_grid, "gamma") : parse_number_list(a.gammas, "gamma");
    for (double g : values) grid.push_back(MethodConfig{FcmParams{g, a.iterations, std::nullopt}});
  } else {
    const auto values = !a.order_grid.empty() ? parse_grid(a.order_grid, "order") : parse_number_list(a.orders, "order");
    for (double n : values) {
      if (n != std::floor(n)) throw UsageError("MR orders must be integers");
      grid.push_back(MethodConfig{MrParams{static_cast<int>(n), std::max(kDefaultMrOrderLimit, static_cast<int>(n))}});
    }
  }
  if (grid.empty()) throw UsageError("sweep grid is empty");
  for (const auto& config : grid) {
    try {
      validate(config);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }

  SweepOptions options;
  options.experiments.clear();
  for (const auto& name : split_list(a.experiments)) {
    if (name == "extinction") {
      options.experiments.push_back(ExperimentKind::extinction);
    } else if (name == "correlation") {
      options.experiments.push_back(ExperimentKind::correlation);
    } else if (name == "noise") {
      options.experiments.push_back(ExperimentKind::noise);
    } else {
      throw UsageError("unknown sweep experiment '" + name + "'");
    }
  }
  if (options.experiments.empty()) throw UsageError("--experiments is empty");
  if (a.trials < 1) throw UsageError("--trials must be at least 1");
  options.trials = a.trials;
  options.seed = a.seed;
  options.etas = parse_number_list(a.etas, "eta");
  options.noise_seeds = seed_list(a.seed, a.seeds);

  Manifest manifest("sweep", argv);
  manifest.parameter("grid_size", grid.size());
  manifest.parameter("experiments", a.experiments);
  manifest.parameter("trials", a.trials);
  manifest.seed(a.seed);
  const BipartiteMatrix m = load_clean_matrix(a.matrix, err);
  manifest.input(a.matrix);

  const auto rows = sweep(m, grid, options);
  const std::string table = format_sweep_table(rows);
  if (a.out.empty()) {
    out << table;
  } else {
    write_text_file(a.out, table);
    manifest.output(a.out);
    manifest.save(a.out + ".manifest.json");
    out << "wrote " << a.out << " (" << rows.size() << " rows)\n";
  }
  return kSuccess;
}

struct SynthArgs {
  std::vector<long long> nested;
  std::vector<long long> random;
  double fill = 0.1;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_synth(const SynthArgs& a, const std::vector<std::string>& argv, std::ostream& out, std::ostream&) {
  const bool nested = !a.nested.empty();
  if (nested == !a.random.empty()) throw UsageError("give exactly one of --nested N M or --random N M");
  const auto& shape = nested ? a.nested : a.random;
  if (shape.size() != 2 || shape[0] < 1 || shape[1] < 1) throw UsageError("network shape must be two positive integers");
  if (!(a.noise >= 0.0 && a.noise <= 1.0)) throw UsageError("--noise must lie in [0, 1]");
  if (!(a.fill >= 0.0 && a.fill <= 1.0)) throw UsageError("--fill must lie in [0, 1]");

  Manifest manifest("synth", argv);
  manifest.seed(a.seed);
  BipartiteMatrix m = nested ? (a.noise > 0.0 ? nested_with_noise(shape[0], shape[1], a.noise, a.seed)
                                              : perfectly_nested(shape[0], shape[1]))
                             : random_matrix(shape[0], shape[1], a.fill, a.seed);
  if (!nested && a.noise > 0.0) m = drop_isolated(flip_noise(m, a.noise, a.seed + 1)).matrix;

  manifest.parameter("profile", nested ? "nested" : "random");
  manifest.parameter("countries", shape[0]);
  manifest.parameter("products", shape[1]);
  manifest.parameter("noise", a.noise);
  if (!nested) manifest.parameter("fill", a.fill);
  save_matrix(a.out, m);
  manifest.output(a.out);
  manifest.save(a.out + ".manifest.json");
  out << "wrote " << a.out << " (" << m.countries() << " countries, " << m.products() << " products, " << m.links()
      << " links)\n";
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Economic complexity rankings of country-product export networks", "ecorank"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ECORANK_VERSION);

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Build a binary network from trade records");
  ingest_cmd->add_option("--trades", ingest.trades, "Tab-separated trade file")->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--config", ingest.config, "Cleaning config file")->check(CLI::ExistingFile);
  ingest_cmd->add_option("--year", ingest.year, "Year to build")->required();
  ingest_cmd->add_option("--threshold", ingest.threshold, "RCA threshold (link if RCA >= threshold)")
      ->capture_default_str();
  ingest_cmd->add_option("--core-countries", ingest.core_countries, "Restrict to countries listed in this file")
      ->check(CLI::ExistingFile);
  ingest_cmd->add_flag("--core", ingest.use_config_core, "Restrict to the config's [core_countries]");
  ingest_cmd->add_flag("--lenient", ingest.lenient, "Skip malformed lines instead of failing");
  ingest_cmd->add_option("--out", ingest.out, "Output matrix file")->required();
  ingest_cmd->add_option("--report", ingest.report, "Cleaning report path (default <out>.cleaning)");

  RankArgs rank;
  auto* rank_cmd = app.add_subcommand("rank", "Score and rank countries and products");
  rank_cmd->add_option("matrix", rank.matrix, "Matrix file")->required()->check(CLI::ExistingFile);
  rank.method.attach(*rank_cmd, true);
  rank_cmd->add_option("--out-prefix", rank.prefix, "Prefix for score, ranking and manifest files")->required();
  rank_cmd->add_option("--pbm", rank.pbm, "Write the ranked matrix as a PBM bitmap");
  rank_cmd->add_flag("--eci", rank.eci, "Also write standardized MR country scores");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate rankings");
  eval_cmd->require_subcommand(1);
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out-dir", eval.out_dir, "Directory for report files")->capture_default_str();
  };
  auto* extinction_cmd = eval_cmd->add_subcommand("extinction", "Extinction areas");
  extinction_cmd->add_option("--matrix", eval.matrix, "Matrix file")->required()->check(CLI::ExistingFile);
  extinction_cmd->add_option("--scores", eval.scores, "Score file to evaluate")->check(CLI::ExistingFile);
  extinction_cmd->add_option("--side", eval.side, "countries or products");
  eval.method.attach(*extinction_cmd, false);
  extinction_cmd->add_option("--trials", eval.trials, "Random tie orderings to average")->capture_default_str();
  extinction_cmd->add_option("--seed", eval.seed, "Seed for tie shuffling")->capture_default_str();
  add_common(extinction_cmd);

  EvalArgs noise_args;
  auto* noise_cmd = eval_cmd->add_subcommand("noise", "Ranking robustness against random link flips");
  noise_cmd->add_option("--matrix", noise_args.matrix, "Matrix file")->required()->check(CLI::ExistingFile);
  noise_args.method.attach(*noise_cmd, true);
  noise_cmd->add_option("--eta", noise_args.etas, "Comma-separated flip fractions")->capture_default_str();
  noise_cmd->add_option("--seeds", noise_args.seeds, "Number of seeds")->capture_default_str();
  noise_cmd->add_option("--seed", noise_args.seed, "First seed")->capture_default_str();
  noise_cmd->add_option("--out-dir", noise_args.out_dir, "Directory for report files")->capture_default_str();

  EvalArgs vol_args;
  auto* volatility_cmd = eval_cmd->add_subcommand("volatility", "Rank correlation between two networks");
  volatility_cmd->add_option("--year-a", vol_args.year_a, "First matrix file")->required()->check(CLI::ExistingFile);
  volatility_cmd->add_option("--year-b", vol_args.year_b, "Second matrix file")->required()->check(CLI::ExistingFile);
  vol_args.method.attach(*volatility_cmd, true);
  volatility_cmd->add_option("--out-dir", vol_args.out_dir, "Directory for report files")->capture_default_str();

  EvalArgs corr_args;
  auto* correlation_cmd = eval_cmd->add_subcommand("correlation", "Rank correlation of scores with degree");
  correlation_cmd->add_option("--matrix", corr_args.matrix, "Matrix file")->required()->check(CLI::ExistingFile);
  corr_args.method.attach(*correlation_cmd, true);
  correlation_cmd->add_option("--out-dir", corr_args.out_dir, "Directory for report files")->capture_default_str();

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run experiments over a parameter grid");
  sweep_cmd->add_option("matrix", sweep_args.matrix, "Matrix file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--gamma-grid", sweep_args.gamma_grid, "FCM gamma grid start:stop:step");
  sweep_cmd->add_option("--gammas", sweep_args.gammas, "Comma-separated FCM gammas");
  sweep_cmd->add_option("--order-grid", sweep_args.order_grid, "MR order grid start:stop:step");
  sweep_cmd->add_option("--orders", sweep_args.orders, "Comma-separated MR orders");
  sweep_cmd->add_option("--iters", sweep_args.iterations, "FCM iterations")->capture_default_str();
  sweep_cmd->add_option("--experiments", sweep_args.experiments, "extinction, correlation, noise")
      ->capture_default_str();
  sweep_cmd->add_option("--trials", sweep_args.trials, "Tie orderings per extinction area")->capture_default_str();
  sweep_cmd->add_option("--seed", sweep_args.seed, "Base seed")->capture_default_str();
  sweep_cmd->add_option("--eta", sweep_args.etas, "Flip fractions for the noise experiment")->capture_default_str();
  sweep_cmd->add_option("--seeds", sweep_args.seeds, "Seeds for the noise experiment")->capture_default_str();
  sweep_cmd->add_option("--out", sweep_args.out, "Output table (stdout if omitted)");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic network");
  synth_cmd->add_option("--nested", synth.nested, "Perfectly nested N x M network")->expected(2);
  synth_cmd->add_option("--random", synth.random, "Random N x M network")->expected(2);
  synth_cmd->add_option("--fill", synth.fill, "Cell probability for --random")->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise, "Fraction of cells to flip")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output matrix file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*ingest_cmd) return cmd_ingest(ingest, args, out, err);
    if (*rank_cmd) return cmd_rank(rank, args, out, err);
    if (*extinction_cmd) return cmd_eval_extinction(eval, args, out, err);
    if (*noise_cmd) return cmd_eval_noise(noise_args, args, out, err);
    if (*volatility_cmd) return cmd_eval_volatility(vol_args, args, out, err);
    if (*correlation_cmd) return cmd_eval_correlation(corr_args, args, out, err);
    if (*sweep_cmd) return cmd_sweep(sweep_args, args, out, err);
    if (*synth_cmd) return cmd_synth(synth, args, out, err);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace ecorank::cli
