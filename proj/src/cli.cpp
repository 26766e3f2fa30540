#include "tracelab/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "tracelab/channel.hpp"
#include "tracelab/distinguish.hpp"
#include "tracelab/error.hpp"
#include "tracelab/genpoly.hpp"
#include "tracelab/hard_pairs.hpp"
#include "tracelab/kernels.hpp"
#include "tracelab/kmer_maps.hpp"
#include "tracelab/mle.hpp"
#include "tracelab/rng.hpp"
#include "tracelab/verify.hpp"

namespace tracelab::cli {

namespace {

// Keys that steer I/O or scheduling only; they never enter a record.
bool is_io_key(const std::string& key) {
  return key == "out" || key == "csv" || key == "threads" || key == "timestamp" || key == "in";
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Effective parameters: reads record the value used, defaults included.
class Params {
 public:
  explicit Params(ParamMap values) : values_(std::move(values)) {}

  std::string str(const std::string& key, const std::string& fallback) {
    const auto it = values_.find(key);
    const std::string v = it == values_.end() ? fallback : it->second;
    if (!is_io_key(key)) used_[key] = v;
    return v;
  }
  std::string required(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) throw Error(ErrorCode::Usage, "missing required flag --" + key);
    return str(key, it->second);
  }
  [[nodiscard]] bool has(const std::string& key) const { return values_.contains(key); }

  double real(const std::string& key, double fallback) {
    return parse_real(key, str(key, format(fallback)));
  }
  std::uint64_t integer(const std::string& key, std::uint64_t fallback) {
    return parse_integer(key, str(key, std::to_string(fallback)));
  }
  std::uint64_t required_integer(const std::string& key) { return parse_integer(key, required(key)); }
  BitString bits(const std::string& key) {
    try {
      return BitString::from_ascii(required(key));
    } catch (const Error&) {
      throw Error(ErrorCode::Usage, "--" + key + " must be a binary string");
    }
  }
  std::vector<std::uint64_t> integer_list(const std::string& key, const std::string& fallback) {
    std::vector<std::uint64_t> out;
    for (const auto& item : split_list(str(key, fallback))) out.push_back(parse_integer(key, item));
    if (out.empty()) throw Error(ErrorCode::Usage, "--" + key + " needs at least one value");
    return out;
  }

  [[nodiscard]] const ParamMap& used() const { return used_; }

  static std::string format(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
  }

 private:
  static double parse_real(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw Error(ErrorCode::Usage, "--" + key + " expects a number, got '" + v + "'");
    }
  }
  static std::uint64_t parse_integer(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
      const auto d = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw Error(ErrorCode::Usage, "--" + key + " expects a nonnegative integer, got '" + v + "'");
    }
  }

  ParamMap values_;
  ParamMap used_;
};

ChannelParams channel(Params& params) {
  try {
    return ChannelParams::with_deletion(params.real("p", 0.5));
  } catch (const Error&) {
    throw Error(ErrorCode::Usage, "--p must lie in [0, 1)");
  }
}

std::string iso_timestamp(const ParamMap& values) {
  if (const auto it = values.find("timestamp"); it != values.end()) return it->second;
  std::time_t seconds;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    seconds = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    seconds = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm utc{};
  gmtime_r(&seconds, &utc);
  std::ostringstream os;
  os << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json report_json(const std::vector<CheckReport>& reports, bool& all_pass) {
  json arr = json::array();
  all_pass = true;
  for (const auto& r : reports) {
    arr.push_back(to_json(r));
    all_pass = all_pass && r.pass;
  }
  return arr;
}

struct Outcome {
  json outputs = json::object();
  std::string summary;
  bool pass = true;
  std::string csv;  // written to --csv when non-empty
};

Outcome cmd_simulate(Params& params) {
  const BitString x = params.bits("x");
  const auto ch = channel(params);
  const std::string mode = params.str("mode", "sample");
  Outcome out;
  if (mode == "distribution") {
    out.outputs["distribution"] = to_json(trace_distribution(x, ch));
    out.summary = "exact trace distribution of " + x.to_ascii();
    return out;
  }
  if (mode != "sample") throw Error(ErrorCode::Usage, "--mode must be sample or distribution");
  const std::uint64_t seed = params.required_integer("seed");
  const std::uint64_t T = params.integer("T", 1);
  json traces = json::array();
  double total_length = 0.0;
  for (std::uint64_t t = 0; t < T; ++t) {
    const Trace tr = sample_trace(x, ch, derive_seed(seed, t));
    traces.push_back({{"bits", tr.bits.to_ascii()}, {"origins", tr.origins}});
    total_length += static_cast<double>(tr.bits.size());
  }
  out.outputs["traces"] = traces;
  out.outputs["mean_length"] = T ? total_length / static_cast<double>(T) : 0.0;
  out.summary = std::to_string(T) + " traces of " + x.to_ascii();
  return out;
}

Outcome cmd_density_map(Params& params) {
  const auto ch = channel(params);
  const std::string mode = params.str("mode", "exact");
  Outcome out;
  if (mode == "distinctness") {
    const std::uint64_t n = params.integer("n", 8);
    json rows = json::array();
    std::ostringstream csv;
    csv << "n,k,min_l1,x,y,pairs\n";
    double previous = std::numeric_limits<double>::infinity();
    for (std::uint64_t m = 1; m <= n; ++m) {
      const auto scan = distinctness_scan(m, ch);
      rows.push_back({{"n", m}, {"k", scan.k}, {"min_l1", scan.min_l1}, {"x", scan.x.to_ascii()},
                      {"y", scan.y.to_ascii()}, {"pairs", scan.pairs}});
      csv << m << ',' << scan.k << ',' << Params::format(scan.min_l1) << ',' << scan.x.to_ascii() << ','
          << scan.y.to_ascii() << ',' << scan.pairs << '\n';
      out.pass = out.pass && scan.min_l1 > 0.0;
      previous = scan.min_l1;
    }
    (void)previous;
    out.outputs["scan"] = rows;
    out.csv = csv.str();
    out.summary = "distinctness scan for n <= " + std::to_string(n);
    return out;
  }
  const BitString x = params.bits("x");
  if (mode == "mean") {
    out.outputs["mean_trace"] = mean_trace(x, ch);
    out.summary = "mean trace of " + x.to_ascii();
    return out;
  }
  if (mode != "exact") throw Error(ErrorCode::Usage, "--mode must be exact, mean or distinctness");
  const std::uint64_t k = params.integer("k", 1);
  out.outputs["map"] = to_json(density_map(x, k, ch));
  if (params.has("y")) {
    const BitString y = params.bits("y");
    out.outputs["l1_distance"] = map_l1_distance(density_map(x, k, ch), density_map(y, k, ch));
    out.outputs["linf_distance"] = map_linf_distance(density_map(x, k, ch), density_map(y, k, ch));
  }
  out.summary = std::to_string(k) + "-mer density map of " + x.to_ascii();
  return out;
}

Outcome cmd_genpoly(Params& params) {
  const BitString x = params.bits("x");
  const BitString w = params.bits("w");
  const auto ch = channel(params);
  const auto f = generating_polynomial(x, w, ch);
  Outcome out;
  out.outputs["coefficients"] = to_json(f);
  const auto circle = sup_on_circle(f, 1.0);
  out.outputs["circle_sup"] = circle.value;
  out.outputs["circle_theta"] = circle.theta;
  const double width = params.real("theta", default_arc_half_width(x.size()));
  if (!f.is_zero()) {
    const auto arc = sup_on_arc(f, ArcSpec::with_default_grid(width, f.degree()));
    out.outputs["arc_sup"] = arc.value;
    out.outputs["arc_theta"] = arc.theta;
    const auto contour = contour_coefficient_bound_check(f);
    out.outputs["contour_check"] = to_json(contour);
    out.pass = contour.pass;
  }
  out.summary = "generating polynomial of " + w.to_ascii() + " in " + x.to_ascii();
  return out;
}

Outcome cmd_hardpair(Params& params) {
  const auto ch = channel(params);
  const std::string mode = params.str("mode", "brute");
  Outcome out;
  if (mode == "sweep") {
    const auto Ls = params.integer_list("L", "8,27");
    const std::uint64_t seed = params.required_integer("seed");
    const std::uint64_t samples = params.integer("trials", 1000);
    std::ostringstream csv;
    csv << "L,min_sup,median_sup,pigeonhole_buckets,family_size\n";
    json rows = json::array();
    for (std::uint64_t L : Ls) {
      const auto family = build_family(L);
      const std::size_t c = family.cube_root;
      const std::uint64_t k = params.integer("k", c);
      const ArcSpec arc = ArcSpec::with_default_grid(default_arc_half_width(L), static_cast<int>(L) - 1);
      const auto best = brute_force_closest_pair(family, k, ch, arc);
      const double median = median_pair_sup(family, k, ch, arc, samples, seed);
      const auto hole = pigeonhole_search(family, k, default_feature_param(L).a, 2 * c,
                                          std::pow(2.0, -static_cast<double>(c) / 4.0));
      rows.push_back({{"L", L}, {"min_sup", best.sup}, {"median_sup", median},
                      {"pigeonhole_buckets", hole.distinct_buckets}, {"family_size", family.members.size()},
                      {"x", best.x.to_ascii()}, {"y", best.y.to_ascii()}});
      csv << L << ',' << Params::format(best.sup) << ',' << Params::format(median) << ','
          << hole.distinct_buckets << ',' << family.members.size() << '\n';
    }
    out.outputs["sweep"] = rows;
    out.csv = csv.str();
    out.summary = "hard-pair sweep over " + std::to_string(Ls.size()) + " block lengths";
    return out;
  }
  const std::uint64_t L = params.integer("L", 27);
  const auto family = build_family(L);
  const std::uint64_t k = params.integer("k", family.cube_root);
  const auto choice = default_feature_param(L);
  if (mode == "pigeonhole") {
    const std::size_t d = 2 * family.cube_root;
    const double side = params.real("side", std::pow(2.0, -static_cast<double>(family.cube_root) / 4.0));
    const auto hole = pigeonhole_search(family, k, choice.a, d, side);
    out.outputs = {{"L", L}, {"k", k}, {"a", choice.a}, {"a_clamped", choice.clamped}, {"d", d},
                   {"cube_side", side}, {"log2_cube_count", hole.log2_cube_count},
                   {"log2_family_size", hole.log2_family_size}, {"guaranteed", hole.guaranteed},
                   {"distinct_buckets", hole.distinct_buckets}};
    if (hole.first) {
      out.outputs["x"] = family.members[*hole.first].to_ascii();
      out.outputs["y"] = family.members[*hole.second].to_ascii();
      out.outputs["max_coordinate_gap"] = hole.max_coordinate_gap;
    }
    out.summary = hole.first ? "pigeonhole collision found" : "no pigeonhole collision";
    return out;
  }
  if (mode != "brute" && mode != "pad") throw Error(ErrorCode::Usage, "--mode must be brute, pad, pigeonhole or sweep");
  const ArcSpec arc = ArcSpec::with_default_grid(default_arc_half_width(L), static_cast<int>(L) - 1);
  const auto best = brute_force_closest_pair(family, k, ch, arc);
  out.outputs = to_json(best, L, k, ch.p);
  out.outputs["a_clamped"] = choice.clamped;
  const auto pathway = l1_pathway_check(best.x, best.y, k, ch);
  out.outputs["circle_sup"] = pathway.details["max_circle_sup"];
  out.outputs["l1_distance"] = pathway.details["l1_distance"];
  out.outputs["l1_pathway"] = to_json(pathway);
  out.pass = pathway.pass;
  if (mode == "pad") {
    const std::uint64_t n = params.integer("n", 4 * L);
    const auto padded = pad_and_bound(best.x, best.y, n, ch, k, default_arc_half_width(L));
    out.outputs["padded"] = {{"n", n}, {"arc_sup", padded.arc_sup}, {"outer_sup", padded.outer_sup},
                             {"circle_sup", padded.circle_sup},
                             {"unpadded_circle_sup", padded.unpadded_circle_sup},
                             {"factorization_error", padded.factorization_error},
                             {"report", to_json(padded.report)}};
    out.pass = out.pass && padded.report.pass;
  }
  out.summary = "closest pair in the L=" + std::to_string(L) + " family: arc sup " + Params::format(best.sup);
  return out;
}

std::vector<BitString> all_strings(std::size_t n) {
  std::vector<BitString> out;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) out.push_back(BitString::from_integer(v, n));
  return out;
}

Outcome cmd_mle(Params& params) {
  const std::string mode = params.str("mode", "lb");
  Outcome out;
  if (mode == "lb") {
    const std::uint64_t n = params.integer("n", 8);
    const std::uint64_t T = params.integer("T", n / 4);
    const auto lb = lb_verify(n, T);
    out.outputs = {{"n", n}, {"T", T}, {"t", lb.t}, {"claim_applies", lb.claim_applies},
                   {"prob_mle_null", lb.prob_mle_null}, {"multisets", lb.multisets},
                   {"multisets_mle_null", lb.tuples_mle_null}, {"uncovered_multiset", lb.uncovered_multiset},
                   {"distinguisher_null", lb.distinguisher_null}, {"distinguisher_min", lb.distinguisher_min},
                   {"distinguisher_max", lb.distinguisher_max}, {"pass", lb.pass}};
    out.pass = lb.pass;
    out.summary = "Pr[MLE = 0] = " + lb.prob_mle_null;
    return out;
  }
  const auto ch = channel(params);
  if (mode == "optimality") {
    const std::uint64_t n = params.integer("n", 3);
    const std::uint64_t T = params.integer("T", 2);
    const auto sources = all_strings(n);
    const auto report = optimality_bound_check(trace_product_family(sources, ch, T), 0, 0);
    out.outputs = to_json(report);
    out.pass = report.pass;
    out.summary = "optimality bound " + std::string(report.pass ? "holds" : "FAILS");
    return out;
  }
  const std::uint64_t seed = params.required_integer("seed");
  if (mode == "reconstruct") {
    const BitString x = params.bits("x");
    const std::uint64_t T = params.integer("T", 8);
    std::vector<Trace> traces;
    for (std::uint64_t t = 0; t < T; ++t) traces.push_back(sample_trace(x, ch, derive_seed(seed, t)));
    const auto result = trace_mle_reconstruct(traces, x.size(), ch);
    out.outputs = {{"estimate", result.estimate.to_ascii()}, {"log_likelihood", result.log_likelihood},
                   {"degenerate", result.degenerate}, {"correct", result.estimate == x}};
    out.summary = "MLE estimate " + result.estimate.to_ascii();
    return out;
  }
  if (mode != "curve") throw Error(ErrorCode::Usage, "--mode must be lb, optimality, reconstruct or curve");
  const std::uint64_t n = params.integer("n", 8);
  std::vector<BitString> pool;
  if (params.has("x")) {
    for (const auto& s : split_list(params.str("x", ""))) pool.push_back(BitString::from_ascii(s));
  } else {
    CounterRng rng(seed);
    for (int i = 0; i < 4; ++i) pool.push_back(BitString::from_integer(rng.below(std::uint64_t{1} << n), n));
  }
  const auto Ts = params.integer_list("T", "1,4,16,64,256");
  const std::vector<std::size_t> T_grid(Ts.begin(), Ts.end());
  const std::uint64_t trials = params.integer("trials", 200);
  const auto curve = amplified_success_curve(pool, ch, T_grid, trials, seed);
  out.outputs = {{"T_grid", curve.T_grid}, {"pooled", curve.pooled}, {"smoothed", curve.smoothed},
                 {"trend_ok", curve.trend_ok}};
  json pool_json = json::array();
  for (const auto& x : pool) pool_json.push_back(x.to_ascii());
  out.outputs["pool"] = pool_json;
  out.csv = success_curve_csv(curve);
  out.pass = curve.trend_ok;
  out.summary = "success curve over " + std::to_string(T_grid.size()) + " trace counts";
  return out;
}

Outcome cmd_distinguish(Params& params) {
  const BitString x = params.bits("x");
  const BitString y = params.bits("y");
  const auto ch = channel(params);
  const std::string method_name = params.str("method", "mean");
  Method method;
  if (method_name == "kgram") {
    method.kind = StatisticKind::Kgram;
    method.k = params.integer("k", 2);
  } else if (method_name != "mean") {
    throw Error(ErrorCode::Usage, "--method must be mean or kgram");
  }
  const std::uint64_t seed = params.required_integer("seed");
  const auto Ts = params.integer_list("T", "16");
  const std::uint64_t trials = params.integer("trials", 200);
  json rows = json::array();
  std::ostringstream csv;
  csv << "method,n,p,T,rate,ci_low,ci_high,seed\n";
  for (std::uint64_t T : Ts) {
    const auto rate = success_rate(x, y, ch, method, T, trials, seed);
    rows.push_back({{"T", T}, {"rate", rate.rate}, {"ci_low", rate.ci_low}, {"ci_high", rate.ci_high},
                    {"successes", rate.successes}, {"trials", rate.trials}});
    csv << method_name << ',' << x.size() << ',' << Params::format(ch.p) << ',' << T << ','
        << Params::format(rate.rate) << ',' << Params::format(rate.ci_low) << ','
        << Params::format(rate.ci_high) << ',' << seed << '\n';
  }
  Outcome out;
  out.outputs["rates"] = rows;
  out.csv = csv.str();
  out.summary = "success rates for " + x.to_ascii() + " vs " + y.to_ascii();
  return out;
}

Outcome cmd_verify(Params& params) {
  const std::string suite = params.str("suite", "all");
  const std::uint64_t seed = params.required_integer("seed");
  const auto reports = verify::run_suite(suite, seed);
  Outcome out;
  out.outputs["reports"] = report_json(reports, out.pass);
  std::size_t passed = 0;
  for (const auto& r : reports) passed += r.pass ? 1 : 0;
  out.summary = std::to_string(passed) + "/" + std::to_string(reports.size()) + " checks passed";
  return out;
}

Outcome cmd_report(Params& params, const ParamMap& values) {
  const auto it = values.find("in");
  if (it == values.end()) throw Error(ErrorCode::Usage, "missing required flag --in");
  std::ifstream in(it->second);
  if (!in) throw Error(ErrorCode::Usage, "cannot read " + it->second);
  (void)params;
  std::map<std::string, std::size_t> counts;
  std::ostringstream csv;
  csv << "line,command,seed,timestamp,version,key,value\n";
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": " + e.what());
    }
    const std::string command = rec.value("command", "");
    ++counts[command];
    const json outputs = rec.value("outputs", json::object());
    for (const auto& [key, value] : outputs.items()) {
      if (value.is_structured()) continue;
      csv << number << ',' << command << ',' << rec.value("seed", 0ULL) << ',' << rec.value("timestamp", "")
          << ',' << rec.value("version", "") << ',' << key << ',' << value.dump() << '\n';
    }
  }
  Outcome out;
  out.outputs["records"] = json(counts);
  out.csv = csv.str();
  std::size_t total = 0;
  for (const auto& [c, n] : counts) total += n;
  out.summary = std::to_string(total) + " records read";
  return out;
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{"n",   "k",    "p",     "T",      "L",       "seed",
                                             "trials", "out", "mode", "suite", "x",      "y",
                                             "w",   "in",   "csv",   "threads", "timestamp", "method",
                                             "theta", "side"};
  return keys;
}

ParamMap parse_config(const std::string& text) {
  ParamMap out;
  std::istringstream is(text);
  std::string line;
  std::size_t number = 0;
  const auto& keys = known_keys();
  while (std::getline(is, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": " + why);
    };
    if (eq == std::string::npos) fail("expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail("empty key");
    if (value.empty()) fail("empty value for '" + key + "'");
    if (value.find('=') != std::string::npos) fail("malformed value for '" + key + "'");
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) fail("unknown key '" + key + "'");
    out[key] = value;
  }
  return out;
}

ParamMap load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

ParamMap merge_params(const ParamMap& file_values, const ParamMap& flag_values) {
  ParamMap out = file_values;
  for (const auto& [k, v] : flag_values) out[k] = v;
  return out;
}

json to_json(const ExperimentRecord& record) {
  return json{{"command", record.command}, {"params", record.params}, {"outputs", record.outputs},
              {"seed", record.seed},       {"timestamp", record.timestamp}, {"version", record.version}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deletion-channel trace reconstruction laboratory", "tracelab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate", "sample traces or print the exact trace distribution"},
      {"density-map", "k-mer density maps, mean traces and the distinctness scan"},
      {"genpoly", "k-mer generating polynomials and their suprema"},
      {"hardpair", "separated-family hard pairs"},
      {"mle", "maximum likelihood experiments"},
      {"distinguish", "mean and k-gram distinguishers"},
      {"verify", "run invariant suites"},
      {"report", "summarise a JSON-lines result file"}};
  ParamMap flags;
  std::string config_path;
  std::map<std::string, std::string> raw;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    for (const auto& key : known_keys())
      sub->add_option("--" + key, raw[name + "/" + key], key);
    sub->add_option("--config", config_path, "flat key=value file; flags override it");
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  }
  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  for (const auto& key : known_keys())
    if (sub->count("--" + key) > 0) flags[key] = raw[command + "/" + key];

  try {
    const ParamMap file_values = config_path.empty() ? ParamMap{} : load_config(config_path);
    const ParamMap values = merge_params(file_values, flags);
    if (const auto it = values.find("threads"); it != values.end()) {
      Params tp(values);
      kernels::set_thread_count(static_cast<int>(tp.integer("threads", 1)));
    }
    Params params(values);
    Outcome outcome;
    if (command == "simulate") outcome = cmd_simulate(params);
    else if (command == "density-map") outcome = cmd_density_map(params);
    else if (command == "genpoly") outcome = cmd_genpoly(params);
    else if (command == "hardpair") outcome = cmd_hardpair(params);
    else if (command == "mle") outcome = cmd_mle(params);
    else if (command == "distinguish") outcome = cmd_distinguish(params);
    else if (command == "verify") outcome = cmd_verify(params);
    else outcome = cmd_report(params, values);

    ExperimentRecord record;
    record.command = command;
    record.params = params.used();
    record.outputs = outcome.outputs;
    if (const auto it = record.params.find("seed"); it != record.params.end())
      record.seed = std::stoull(it->second);
    record.timestamp = iso_timestamp(values);
    const std::string line = to_json(record).dump();
    out << command << ": " << outcome.summary << (outcome.pass ? "" : " [CHECK FAILED]") << '\n';
    if (const auto it = values.find("out"); it != values.end()) {
      std::ofstream file(it->second, std::ios::app);
      if (!file) throw Error(ErrorCode::Usage, "cannot write " + it->second);
      file << line << '\n';
    } else {
      out << line << '\n';
    }
    if (const auto it = values.find("csv"); it != values.end() && !outcome.csv.empty()) {
      std::ofstream file(it->second, std::ios::trunc);
      if (!file) throw Error(ErrorCode::Usage, "cannot write " + it->second);
      file << outcome.csv;
    }
    return outcome.pass ? 0 : 1;
  } catch (const Error& e) {
    err << e.what() << '\n';
    if (e.code() == ErrorCode::Usage || e.code() == ErrorCode::ParseError) {
      err << sub->help();
      return 2;
    }
    return 2;
  }
}

}  // namespace tracelab::cli
