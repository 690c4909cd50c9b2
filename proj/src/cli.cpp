#include "momentfix/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "momentfix/fixed_point.hpp"
#include "momentfix/harmonic_spectral.hpp"
#include "momentfix/moments.hpp"
#include "momentfix/numerics.hpp"
#include "momentfix/sequences.hpp"

namespace momentfix::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr Precision kDefaultPrecisionBits = 128;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  Precision bits = kDefaultPrecisionBits;
  std::string format = "json";
};

class Emitter {
 public:
  explicit Emitter(Precision bits) : digits_(decimal_digits_for(bits)) {}
  [[nodiscard]] std::string operator()(const HPReal& x) const { return x.to_string(digits_); }

 private:
  int digits_;
};

Json envelope(const std::string& command, Json params, Json results, Precision bits,
              std::optional<std::uint64_t> seed = std::nullopt) {
  Json env;
  env["command"] = command;
  env["params"] = std::move(params);
  env["precision_bits"] = bits;
  env["seed"] = seed ? Json(*seed) : Json(nullptr);
  env["results"] = std::move(results);
  return env;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i != 0) out << ',';
    out << cells[i];
  }
  out << '\n';
}

std::vector<std::string> read_tokens_from(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  auto tokens = read_term_tokens(in);
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return tokens;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

RealPrefix parse_start(const std::string& spec, std::size_t n_terms, Precision bits) {
  if (spec == "zero") return geometric(HPReal(0L, bits), n_terms);
  if (spec == "one") return geometric(HPReal(1L, bits), n_terms);
  if (spec.rfind("geometric:", 0) == 0) {
    HPReal a(0L, bits);
    try {
      a = HPReal::parse(spec.substr(10), bits);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--start: ") + e.what());
    }
    if (!in_unit_interval(a)) throw UsageError("--start geometric:a needs 0 <= a <= 1");
    return geometric(a, n_terms);
  }
  if (spec.rfind("file:", 0) == 0) {
    const auto tokens = read_tokens_from(spec.substr(5));
    if (tokens.empty()) throw UsageError("--start file has no terms");
    return parse_real_prefix(tokens, bits);
  }
  throw UsageError("--start must be zero, one, geometric:a or file:PATH");
}

// ---------------------------------------------------------------------------

int cmd_fixed_point(std::size_t n_terms, const Common& common, std::ostream& out) {
  const auto ctx = make_context(common.bits);
  const auto fp = fixed_point_terms(n_terms, ctx);
  const Emitter num(common.bits);
  bool ok = true;
  for (const auto& r : fp.residuals) ok = ok && abs(r) <= ctx.tol();

  if (common.format == "csv") {
    write_csv_row(out, {"n", "m_n", "residual"});
    for (std::size_t n = 1; n <= n_terms; ++n) {
      write_csv_row(out, {std::to_string(n), num(fp.terms.term(n)), num(fp.residuals[n - 1])});
    }
  } else {
    Json rows = Json::array();
    for (std::size_t n = 1; n <= n_terms; ++n) {
      rows.push_back({{"n", n}, {"m", num(fp.terms.term(n))}, {"residual", num(fp.residuals[n - 1])}});
    }
    Json results{{"rows", std::move(rows)},
                 {"max_abs_residual", num(fp.max_abs_residual())},
                 {"tol", num(ctx.tol())},
                 {"all_within_tol", ok}};
    out << envelope("fixed-point", {{"terms", n_terms}}, std::move(results), common.bits).dump(2) << '\n';
  }
  return ok ? kOk : kNumericalFault;
}

int cmd_iterate(const std::string& start_spec, std::size_t steps, std::size_t n_terms, const Common& common,
                std::ostream& out) {
  const auto ctx = make_context(common.bits);
  const RealPrefix start = parse_start(start_spec, n_terms, common.bits);
  const auto traj = iterate(start, steps, ctx);
  const Emitter num(common.bits);

  // step_ratio_k = d(T^k x, T^(k-1) x) / d(T^(k-1) x, T^(k-2) x), k >= 2
  auto orbit = [&](std::size_t k) -> const RealPrefix& { return k == 0 ? traj.start : traj.iterates[k - 1]; };
  std::vector<std::optional<RatioReport>> ratios(steps + 1);
  for (std::size_t k = 2; k <= steps; ++k) {
    if (metric(orbit(k - 2), orbit(k - 1)).lo > ctx.tol()) ratios[k] = contraction_ratio(orbit(k - 2), orbit(k - 1), ctx);
  }

  if (common.format == "csv") {
    std::vector<std::string> header{"step", "distance_lo", "distance_hi", "step_ratio", "step_bound"};
    for (std::size_t n = 1; n <= start.size(); ++n) header.push_back("x" + std::to_string(n));
    write_csv_row(out, header);
    for (std::size_t k = 1; k <= steps; ++k) {
      const auto& d = traj.distances_to_fixed_point[k - 1];
      std::vector<std::string> row{std::to_string(k), num(d.lo), num(d.hi), ratios[k] ? num(ratios[k]->ratio) : "",
                                   ratios[k] ? num(ratios[k]->bound_used) : ""};
      for (const auto& t : traj.iterates[k - 1]) row.push_back(num(t));
      write_csv_row(out, row);
    }
    return kOk;
  }

  Json rows = Json::array();
  for (std::size_t k = 1; k <= steps; ++k) {
    const auto& d = traj.distances_to_fixed_point[k - 1];
    Json terms = Json::array();
    for (const auto& t : traj.iterates[k - 1]) terms.push_back(num(t));
    rows.push_back({{"step", k},
                    {"distance_lo", num(d.lo)},
                    {"distance_hi", num(d.hi)},
                    {"step_ratio", ratios[k] ? Json(num(ratios[k]->ratio)) : Json(nullptr)},
                    {"step_bound", ratios[k] ? Json(num(ratios[k]->bound_used)) : Json(nullptr)},
                    {"iterate", std::move(terms)}});
  }
  const auto& last = traj.distances_to_fixed_point.back();
  Json results{{"steps", std::move(rows)}, {"final_distance_lo", num(last.lo)}, {"final_distance_hi", num(last.hi)}};
  Json params{{"start", start_spec}, {"steps", steps}, {"terms", start.size()}};
  out << envelope("iterate", std::move(params), std::move(results), common.bits).dump(2) << '\n';
  return kOk;
}

int cmd_lipschitz(const std::string& mode, std::size_t samples, std::uint64_t seed, std::size_t n_terms, bool in_c,
                  const std::string& a_values, const Common& common, std::ostream& out) {
  const auto ctx = make_context(common.bits);
  const Emitter num(common.bits);

  if (mode == "random") {
    if (samples == 0) throw UsageError("--samples must be >= 1");
    const auto summary = random_ratio_scan(samples, n_terms, seed, in_c, ctx);
    const HPReal bound = in_c ? ctx.real(8) / 9L : ctx.real(2);
    const bool within = summary.max_ratio <= bound + ctx.tol();
    if (common.format == "csv") {
      write_csv_row(out, {"samples", "skipped", "max_ratio", "bound_at_max", "max_excess_over_bound", "global_bound"});
      write_csv_row(out, {std::to_string(summary.samples), std::to_string(summary.skipped), num(summary.max_ratio),
                          num(summary.bound_at_max), num(summary.max_excess_over_bound), num(bound)});
    } else {
      Json results{{"samples", summary.samples},
                   {"skipped", summary.skipped},
                   {"max_ratio", num(summary.max_ratio)},
                   {"bound_at_max", num(summary.bound_at_max)},
                   {"max_excess_over_bound", num(summary.max_excess_over_bound)},
                   {"global_bound", num(bound)},
                   {"within_bound", within}};
      Json params{{"mode", mode}, {"samples", samples}, {"terms", n_terms}, {"in_c", in_c}};
      out << envelope("lipschitz", std::move(params), std::move(results), common.bits, seed).dump(2) << '\n';
    }
    return within ? kOk : kRefuted;
  }

  if (mode != "scan") throw UsageError("--mode must be random or scan");
  if (n_terms < 32) throw UsageError("--terms must be >= 32 in scan mode");
  std::vector<HPReal> as;
  for (const auto& item : split_list(a_values)) {
    try {
      as.push_back(HPReal::parse(item, common.bits));
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--a-values: ") + e.what());
    }
    if (as.back().sign() <= 0 || as.back() > 1L) throw UsageError("--a-values entries must lie in (0, 1]");
  }
  if (as.empty()) throw UsageError("--a-values is empty");
  const auto points = lipschitz_lower_scan(as, n_terms, ctx);

  // Ratios should grow as a decreases.
  bool monotone = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (points[i].a > points[j].a && !(points[i].ratio < points[j].ratio)) monotone = false;
    }
  }
  if (common.format == "csv") {
    write_csv_row(out, {"a", "ratio"});
    for (const auto& p : points) write_csv_row(out, {num(p.a), num(p.ratio)});
  } else {
    Json rows = Json::array();
    for (const auto& p : points) rows.push_back({{"a", num(p.a)}, {"ratio", num(p.ratio)}});
    Json results{{"points", std::move(rows)}, {"monotone", monotone}};
    Json params{{"mode", mode}, {"terms", n_terms}, {"a_values", a_values}};
    out << envelope("lipschitz", std::move(params), std::move(results), common.bits).dump(2) << '\n';
  }
  return kOk;
}

template <class Scalar, class Render>
int emit_cm(const CMResult<Scalar>& res, const std::string& input, std::size_t depth, bool exact, const Common& common,
            const Render& render, std::ostream& out, std::ostream& err) {
  err << "cm-check: " << to_string(res.verdict) << " (worst D[" << res.worst.m << "][" << res.worst.n
      << "] = " << render(res.worst.value) << ")\n";
  if (common.format == "csv") {
    write_csv_row(out, {"m", "n", "value"});
    for (std::size_t m = 0; m <= depth; ++m) {
      for (std::size_t n = 0; n + m <= depth; ++n) {
        write_csv_row(out, {std::to_string(m), std::to_string(n), render(res.table.at(m, n))});
      }
    }
  } else {
    Json table = Json::array();
    for (std::size_t m = 0; m <= depth; ++m) {
      for (std::size_t n = 0; n + m <= depth; ++n) {
        table.push_back({{"m", m}, {"n", n}, {"value", render(res.table.at(m, n))}});
      }
    }
    Json results{{"verdict", std::string(to_string(res.verdict))},
                 {"exact", exact},
                 {"worst", {{"m", res.worst.m}, {"n", res.worst.n}, {"value", render(res.worst.value)}}},
                 {"table", std::move(table)}};
    Json params{{"input", input}, {"depth", depth}, {"exact", exact}};
    out << envelope("cm-check", std::move(params), std::move(results), common.bits).dump(2) << '\n';
  }
  switch (res.verdict) {
    case CMVerdict::certified:
      return kOk;
    case CMVerdict::refuted:
      return kRefuted;
    case CMVerdict::inconclusive:
      return kInconclusive;
  }
  return kNumericalFault;
}

int cmd_cm_check(const std::string& input, std::size_t depth, bool exact, std::size_t fp_terms, const Common& common,
                 std::ostream& out, std::ostream& err) {
  if (depth == 0) throw UsageError("--depth must be >= 1");
  const auto ctx = make_context(common.bits);
  const Emitter num(common.bits);

  if (input == "fixed-point") {
    if (exact) throw UsageError("--exact is not available for the fixed point (irrational terms)");
    const std::size_t n = std::max(fp_terms, depth);
    const auto fp = fixed_point_terms(n, ctx);
    const auto res = cm_check(fp.terms, depth, ctx);
    return emit_cm(res, input, depth, false, common, num, out, err);
  }

  const auto tokens = read_tokens_from(input);
  if (tokens.size() < depth + 1) {
    throw UsageError("input has " + std::to_string(tokens.size()) + " terms; depth " + std::to_string(depth) +
                     " needs " + std::to_string(depth + 1));
  }
  const std::vector<std::string> tail(tokens.begin() + 1, tokens.end());
  if (exact) {
    if (ExactRational::parse(tokens.front()) != ExactRational(1)) throw UsageError("first term must be 1");
    const auto res = cm_check(parse_rational_prefix(tail), depth, ctx);
    auto render = [](const ExactRational& x) { return x.to_string(); };
    return emit_cm(res, input, depth, true, common, render, out, err);
  }
  if (!(HPReal::parse(tokens.front(), common.bits) == 1L)) throw UsageError("first term must be 1");
  const auto res = cm_check(parse_real_prefix(tail, common.bits), depth, ctx);
  return emit_cm(res, input, depth, false, common, num, out, err);
}

int cmd_spectral(std::size_t max_p, const std::string& eval_n, const Common& common, std::ostream& out) {
  const auto ctx = make_context(common.bits);
  const Emitter num(common.bits);
  std::vector<std::size_t> ns;
  for (const auto& item : split_list(eval_n)) {
    std::size_t pos = 0;
    long v = -1;
    try {
      v = std::stol(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || v < 0) throw UsageError("--eval-n entries must be non-negative integers");
    ns.push_back(static_cast<std::size_t>(v));
  }

  const auto table = spectral_table(max_p, ctx);
  struct Eval {
    std::size_t n;
    HPReal partial;
    HPReal target;
  };
  std::vector<Eval> evals;
  for (const auto n : ns) {
    HPReal target = 1L / ctx.real(harmonic(n + 1));
    evals.push_back({n, spectral_partial_sum(n, max_p, table), std::move(target)});
  }

  if (common.format == "csv") {
    write_csv_row(out, {"p", "xi", "alpha", "residual"});
    for (const auto& t : table) write_csv_row(out, {std::to_string(t.p), num(t.xi), num(t.alpha), num(t.residual)});
    if (!evals.empty()) {
      out << '\n';
      write_csv_row(out, {"n", "partial_sum", "target", "gap"});
      for (const auto& e : evals) {
        write_csv_row(out, {std::to_string(e.n), num(e.partial), num(e.target), num(e.target - e.partial)});
      }
    }
    return kOk;
  }
  Json rows = Json::array();
  for (const auto& t : table) {
    rows.push_back({{"p", t.p}, {"xi", num(t.xi)}, {"alpha", num(t.alpha)}, {"residual", num(t.residual)}});
  }
  Json evaluations = Json::array();
  for (const auto& e : evals) {
    evaluations.push_back(
        {{"n", e.n}, {"partial_sum", num(e.partial)}, {"target", num(e.target)}, {"gap", num(e.target - e.partial)}});
  }
  Json results{{"terms", std::move(rows)}, {"evaluations", std::move(evaluations)}};
  Json params{{"max_p", max_p}, {"eval_n", eval_n}};
  out << envelope("spectral", std::move(params), std::move(results), common.bits).dump(2) << '\n';
  return kOk;
}

Precision default_precision() {
  const char* env = std::getenv("MOMENTFIX_PRECISION_BITS");
  if (env == nullptr || *env == '\0') return kDefaultPrecisionBits;
  const std::string text(env);
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size()) throw UsageError("MOMENTFIX_PRECISION_BITS must be an integer");
  return static_cast<Precision>(v);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Common common;
  try {
    common.bits = default_precision();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  CLI::App app{"Fixed point, contraction and moment-sequence checks for x -> 1/(1+x_1+...+x_n)", "momentfix"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool with_bits_alias) {
    auto* opt = sub->add_option("--precision-bits" + std::string(with_bits_alias ? ",--bits" : ""), common.bits,
                                "Working precision in bits (>= 53)");
    opt->capture_default_str();
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  };

  std::size_t fp_terms = 16;
  auto* fixed = app.add_subcommand("fixed-point", "Terms of the fixed point with their defects");
  fixed->add_option("--terms", fp_terms, "Number of terms N")->capture_default_str();
  add_common(fixed, false);

  std::string start = "zero";
  std::size_t steps = 10;
  std::size_t it_terms = 64;
  auto* iter = app.add_subcommand("iterate", "Orbit of T from a start sequence");
  iter->add_option("--start", start, "zero | one | geometric:a | file:PATH")->capture_default_str();
  iter->add_option("--steps", steps, "Number of applications K")->capture_default_str();
  iter->add_option("--terms", it_terms, "Prefix length N (ignored for file starts)")->capture_default_str();
  add_common(iter, false);

  std::string mode = "random";
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::size_t lip_terms = 64;
  bool in_c = false;
  std::string a_values = "1,1e-2,1e-4,1e-6";
  auto* lip = app.add_subcommand("lipschitz", "Lipschitz ratios of T on random pairs or the geometric family");
  lip->add_option("--mode", mode, "random | scan")->check(CLI::IsMember({"random", "scan"}))->capture_default_str();
  lip->add_option("--samples", samples, "Random pairs")->capture_default_str();
  lip->add_option("--seed", seed, "RNG seed (mt19937_64)")->capture_default_str();
  lip->add_option("--terms", lip_terms, "Prefix length N")->capture_default_str();
  lip->add_flag("--in-c", in_c, "Draw pairs with first term >= 1/2");
  lip->add_option("--a-values", a_values, "Comma-separated a values for scan mode")->capture_default_str();
  add_common(lip, false);

  std::string input;
  std::size_t depth = 10;
  bool exact = false;
  std::size_t cm_terms = 24;
  auto* cm = app.add_subcommand("cm-check", "Complete-monotonicity table of a sequence starting with 1");
  cm->add_option("--input", input, "PATH or fixed-point")->required();
  cm->add_option("--depth", depth, "Maximum difference order D")->capture_default_str();
  auto* exact_flag = cm->add_flag("--exact", exact, "Exact rational arithmetic");
  cm->add_option("--terms", cm_terms, "Fixed-point terms used with --input fixed-point")->capture_default_str();
  add_common(cm, true);
  exact_flag->excludes(cm->get_option("--precision-bits"));

  std::size_t max_p = 20;
  std::string eval_n;
  auto* spectral = app.add_subcommand("spectral", "Digamma roots, weights and partial sums for 1/H_(n+1)");
  spectral->add_option("--max-p", max_p, "Largest root index P")->capture_default_str();
  spectral->add_option("--eval-n", eval_n, "Comma-separated n values for S(n, P)");
  add_common(spectral, false);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (common.bits < kMinPrecisionBits) throw UsageError("--precision-bits must be >= 53");
    if (fixed->parsed()) {
      if (fp_terms == 0) throw UsageError("--terms must be >= 1");
      return cmd_fixed_point(fp_terms, common, out);
    }
    if (iter->parsed()) {
      if (steps == 0) throw UsageError("--steps must be >= 1");
      if (it_terms == 0) throw UsageError("--terms must be >= 1");
      return cmd_iterate(start, steps, it_terms, common, out);
    }
    if (lip->parsed()) return cmd_lipschitz(mode, samples, seed, lip_terms, in_c, a_values, common, out);
    if (cm->parsed()) return cmd_cm_check(input, depth, exact, cm_terms, common, out, err);
    if (spectral->parsed()) return cmd_spectral(max_p, eval_n, common, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const NumericalFault& e) {
    err << "numerical fault: " << e.what() << '\n';
    return kNumericalFault;
  } catch (const PoleError& e) {
    err << "numerical fault: " << e.what() << '\n';
    return kNumericalFault;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kNumericalFault;
  }
  return kUsage;
}

}  // namespace momentfix::cli
