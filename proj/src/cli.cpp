#include "opineq/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "opineq/error.hpp"
#include "opineq/generators.hpp"
#include "opineq/inequalities.hpp"
#include "opineq/matrix_file.hpp"
#include "opineq/operator_analysis.hpp"
#include "opineq/report.hpp"
#include "opineq/tolerances.hpp"

namespace opineq {

namespace {

struct Input {
  std::string path;
  std::string bytes;
  Matrix matrix;
};

Input load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Parse, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  Input input{path, buf.str(), {}};
  input.matrix = parse_matrix(input.bytes, path);
  return input;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse:
    case ErrorCode::NotSquare:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::NonFinite:
    case ErrorCode::BadParams:
    case ErrorCode::BadSpec:
      return kExitUsage;
    default:
      return kExitViolation;
  }
}

std::string fmt(double v, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string fmt(Complex z) {
  return fmt(z.real()) + (z.imag() < 0 || std::signbit(z.imag()) ? "-" : "+") + fmt(std::abs(z.imag())) + "i";
}

std::string describe(const InequalityParams& p) {
  std::string s;
  if (p.r) s += "r=" + fmt(*p.r) + " ";
  s += "lambda=" + fmt(p.lambda) + " mu=" + fmt(p.mu);
  if (p.p) s += " p=" + fmt(*p.p);
  return s;
}

std::string_view status(const InequalityReport& r) {
  if (r.error) return "ERROR";
  if (!r.preconditions_met) return "VACUOUS";
  return r.passed ? "PASS" : "FAIL";
}

void print_report_line(std::ostream& out, const InequalityReport& r) {
  if (r.operator_index) out << "#" << *r.operator_index << " ";
  out << r.name() << " [" << to_string(r.mode) << "] " << describe(r.params) << ": ";
  if (r.error) {
    out << "ERROR " << to_string(*r.error) << ": " << r.error_message << "\n";
    return;
  }
  out << "lhs=" << fmt(r.lhs) << " rhs=" << fmt(r.rhs) << " slack=" << fmt(r.slack, "%.3e") << " " << status(r);
  if (!r.note.empty()) out << " (" << r.note << ")";
  out << "\n";
  if (r.witness) {
    out << "    witness:";
    for (Complex z : *r.witness) out << " " << fmt(z);
    out << "  pointwise lhs=" << fmt(*r.witness_lhs) << " rhs=" << fmt(*r.witness_rhs) << "\n";
  }
}

void print_profile(std::ostream& out, const OperatorProfile& p) {
  auto opt = [](const std::optional<double>& v) { return v ? fmt(*v, "%.15g") : std::string("undefined"); };
  out << "dim                        " << p.dim << "\n"
      << "op_norm                    " << fmt(p.op_norm, "%.15g") << "\n"
      << "numerical_radius           " << fmt(p.numerical_radius, "%.15g") << "\n"
      << "numerical_radius_of_square " << fmt(p.numerical_radius_of_square, "%.15g") << "\n"
      << "kernel_dim                 " << p.kernel_dim << "\n"
      << "kernels_equal              " << (p.kernels_equal ? "true" : "false") << "\n"
      << "is_ab_normal               " << (p.is_ab_normal ? "true" : "false") << "\n"
      << "alpha_sq                   " << opt(p.alpha_sq) << "\n"
      << "beta_sq                    " << opt(p.beta_sq) << "\n"
      << "alpha_opt                  " << opt(p.alpha_opt) << "\n"
      << "beta_opt                   " << opt(p.beta_opt) << "\n";
}

void print_factorization(std::ostream& out, const FactorizationResult& f) {
  out << f.kind << ": residual=" << fmt(f.residual, "%.3e") << " |F|=" << fmt(f.factor_norm, "%.15g")
      << " |F|^2=" << fmt(f.factor_norm_sq, "%.15g") << " constant " << f.constant_description << " = "
      << fmt(f.certified_infimum, "%.15g") << "\n"
      << "  matches: |F| " << (f.norm_matches_constant ? "yes" : "no") << ", |F|^2 "
      << (f.norm_sq_matches_constant ? "yes" : "no") << ", |F|^-2 " << (f.inverse_norm_sq_matches_constant ? "yes" : "no")
      << "; kernel_match " << (f.kernel_match ? "yes" : "no") << ", range_containment "
      << (f.range_containment ? "yes" : "no") << "\n";
  std::string m = serialize_matrix(f.factor);
  out << "  factor " << m.substr(0, m.find('\n')) << "\n";
  std::istringstream rows(m.substr(m.find('\n') + 1));
  for (std::string line; std::getline(rows, line);) out << "    " << line << "\n";
}

void print_summary(std::ostream& out, const Summary& s) {
  out << "summary: passed=" << s.passed << " failed=" << s.failed << " vacuous=" << s.vacuous << "\n";
}

std::vector<TheoremId> parse_theorem_list(const std::string& text) {
  std::vector<TheoremId> ids;
  if (text == "all" || text == "ALL") return {std::begin(kAllTheorems), std::end(kAllTheorems)};
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto id = parse_theorem_id(item);
    if (!id) throw Error(ErrorCode::BadParams, "unknown theorem '" + item + "'");
    ids.push_back(*id);
  }
  if (ids.empty()) throw Error(ErrorCode::BadParams, "empty theorem list");
  return ids;
}

std::vector<Mode> parse_modes(const std::string& text) {
  if (text == "both") return {Mode::Printed, Mode::Corrected};
  const auto mode = parse_mode(text);
  if (!mode) throw Error(ErrorCode::BadParams, "mode must be printed, corrected or both");
  return {*mode};
}

struct ParamFlags {
  std::optional<double> r;
  std::optional<std::string> lambda;
  std::optional<std::string> mu;
  std::optional<double> p;

  bool any() const { return r || lambda || mu || p; }

  InequalityParams resolve() const {
    InequalityParams params;
    params.r = r;
    params.p = p;
    if (lambda) {
      const auto z = parse_complex(*lambda);
      if (!z) throw Error(ErrorCode::BadParams, "cannot parse --lambda '" + *lambda + "'");
      params.lambda = *z;
    }
    if (mu) {
      const auto z = parse_complex(*mu);
      if (!z) throw Error(ErrorCode::BadParams, "cannot parse --mu '" + *mu + "'");
      params.mu = *z;
    }
    return params;
  }
};

void add_tolerance_flags(CLI::App* cmd, Tolerances& tol) {
  cmd->add_option("--tol-eig", tol.tol_eig, "Eigen/SVD residual tolerance")->capture_default_str();
  cmd->add_option("--tol-psd", tol.tol_psd, "Loewner-order slack")->capture_default_str();
  cmd->add_option("--tol-rank", tol.tol_rank_factor, "Rank threshold factor")->capture_default_str();
  cmd->add_option("--tol-slack", tol.tol_slack, "Allowed negative slack")->capture_default_str();
}

std::vector<TheoremCheck> build_checks(const std::vector<TheoremId>& ids, const std::vector<Mode>& modes,
                                       const ParamFlags& flags) {
  std::vector<TheoremCheck> checks;
  for (Mode mode : modes) {
    if (flags.any()) {
      const InequalityParams params = flags.resolve();
      for (TheoremId id : ids) checks.push_back({id, params, mode});
    } else {
      for (auto& c : default_checks(ids, mode)) checks.push_back(std::move(c));
    }
  }
  return checks;
}

// BadParams raised by user-supplied parameters is a usage error.
void rethrow_usage_errors(const std::vector<InequalityReport>& reports) {
  for (const auto& r : reports) {
    if (r.error && *r.error == ErrorCode::BadParams) throw Error(ErrorCode::BadParams, r.error_message);
  }
}

int finish(std::ostream& out, const ReportDocument& doc, bool json) {
  if (json) out << emit_json(doc);
  return doc.summary.failed == 0 ? kExitOk : kExitViolation;
}

}  // namespace

std::optional<Complex> parse_complex(std::string_view text) {
  auto parse_real = [](std::string_view s) -> std::optional<double> {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  };
  if (const auto comma = text.find(','); comma != std::string_view::npos) {
    const auto re = parse_real(text.substr(0, comma));
    const auto im = parse_real(text.substr(comma + 1));
    if (!re || !im) return std::nullopt;
    return Complex{*re, *im};
  }
  if (text.empty()) return std::nullopt;
  if (text.back() != 'i' && text.back() != 'j') {
    const auto re = parse_real(text);
    if (!re) return std::nullopt;
    return Complex{*re, 0.0};
  }
  std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  std::string_view re_part = split == std::string_view::npos ? std::string_view{} : body.substr(0, split);
  std::string_view im_part = split == std::string_view::npos ? body : body.substr(split);
  double re = 0.0;
  if (!re_part.empty()) {
    const auto v = parse_real(re_part);
    if (!v) return std::nullopt;
    re = *v;
  }
  double im = 0.0;
  if (im_part.empty() || im_part == "+") {
    im = 1.0;
  } else if (im_part == "-") {
    im = -1.0;
  } else {
    const auto v = parse_real(im_part);
    if (!v) return std::nullopt;
    im = *v;
  }
  return Complex{re, im};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks for (alpha, beta)-normal operators and their inequalities", "opineq"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  Tolerances tol;
  bool json = false;

  auto* analyze = app.add_subcommand("analyze", "Profile one operator: alpha, beta, w(T), w(T^2), |T|, S1/S2");
  std::string analyze_path;
  analyze->add_option("matrix", analyze_path, "Matrix file")->required();
  analyze->add_flag("--json", json, "Emit the JSON report");
  add_tolerance_flags(analyze, tol);

  auto* verify = app.add_subcommand("verify", "Check theorems on one operator");
  std::string verify_path;
  std::string theorem_list = "all";
  std::string mode_text = "corrected";
  ParamFlags flags;
  verify->add_option("matrix", verify_path, "Matrix file")->required();
  verify->add_option("--theorem", theorem_list, "Theorem id, comma list, or 'all'")->capture_default_str();
  verify->add_option("--mode", mode_text, "printed | corrected | both")->capture_default_str();
  verify->add_option("--r", flags.r, "r parameter");
  verify->add_option("--lambda", flags.lambda, "lambda (e.g. 1, i, 1+1i, 1,1)");
  verify->add_option("--mu", flags.mu, "mu (same forms as --lambda)");
  verify->add_option("--p", flags.p, "p parameter");
  verify->add_flag("--json", json, "Emit the JSON report");
  add_tolerance_flags(verify, tol);

  auto* sweep_cmd = app.add_subcommand("sweep", "Check theorems over a seeded random ensemble");
  std::string kind_text = "gaussian";
  EnsembleSpec spec;
  spec.dim = 4;
  spec.count = 10;
  std::string sweep_theorems = "all";
  std::string sweep_mode = "corrected";
  bool verbose = false;
  sweep_cmd->add_option("--kind", kind_text,
                        "gaussian | normal | unitary | invertible | rank-deficient | diagonal")
      ->capture_default_str();
  sweep_cmd->add_option("--dim", spec.dim, "Matrix dimension")->capture_default_str();
  sweep_cmd->add_option("--count", spec.count, "Number of operators")->capture_default_str();
  sweep_cmd->add_option("--seed", spec.seed, "Ensemble seed")->capture_default_str();
  sweep_cmd->add_option("--scale", spec.scale, "Entry scale")->capture_default_str();
  sweep_cmd->add_option("--theorems", sweep_theorems, "Comma list or 'all'")->capture_default_str();
  sweep_cmd->add_option("--mode", sweep_mode, "printed | corrected | both")->capture_default_str();
  sweep_cmd->add_flag("--json", json, "Emit the JSON report");
  sweep_cmd->add_flag("--verbose", verbose, "Print every check, not only failures");
  add_tolerance_flags(sweep_cmd, tol);

  auto* douglas = app.add_subcommand("douglas", "Factor T = S R with minimal |R|");
  std::string douglas_t;
  std::string douglas_s;
  douglas->add_option("T", douglas_t, "Matrix file for T")->required();
  douglas->add_option("S", douglas_s, "Matrix file for S")->required();
  douglas->add_flag("--json", json, "Emit the JSON report");
  add_tolerance_flags(douglas, tol);

  auto* pinv = app.add_subcommand("pinv", "Moore-Penrose pseudo-inverse");
  std::string pinv_path;
  std::string pinv_out;
  pinv->add_option("matrix", pinv_path, "Matrix file")->required();
  pinv->add_option("--out", pinv_out, "Output matrix file (default: stdout)");
  add_tolerance_flags(pinv, tol);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    tol.validate();
    ReportDocument doc;

    if (analyze->parsed()) {
      const Input in = load(analyze_path);
      doc.command = "analyze";
      doc.input_digest = sha256_hex(in.bytes);
      doc.profile = profile(in.matrix, tol);
      if (doc.profile->alpha_sq && *doc.profile->alpha_sq > 0.0) {
        auto [s1, s2] = construct_s1_s2(in.matrix, tol);
        doc.factorizations.push_back(std::move(s1));
        doc.factorizations.push_back(std::move(s2));
      }
      if (!json) {
        out << "matrix " << in.path << " (" << in.matrix.rows() << "x" << in.matrix.cols() << ")\n";
        print_profile(out, *doc.profile);
        for (const auto& f : doc.factorizations) print_factorization(out, f);
      }
      return finish(out, doc, json);
    }

    if (verify->parsed()) {
      const Input in = load(verify_path);
      if (!in.matrix.is_square()) throw Error(ErrorCode::NotSquare, "verify needs a square matrix");
      const auto checks = build_checks(parse_theorem_list(theorem_list), parse_modes(mode_text), flags);
      doc.command = "verify";
      doc.input_digest = sha256_hex(in.bytes);
      const SweepResult result = sweep(std::vector<Matrix>{in.matrix}, checks, tol);
      rethrow_usage_errors(result.reports);
      doc.reports = result.reports;
      for (auto& r : doc.reports) r.operator_index.reset();
      doc.summary = result.summary;
      if (!json) {
        for (const auto& r : doc.reports) print_report_line(out, r);
        print_summary(out, doc.summary);
      }
      return finish(out, doc, json);
    }

    if (sweep_cmd->parsed()) {
      const auto kind = parse_ensemble_kind(kind_text);
      if (!kind) throw Error(ErrorCode::BadSpec, "unknown ensemble kind '" + kind_text + "'");
      spec.kind = *kind;
      spec.validate();
      const auto ids = parse_theorem_list(sweep_theorems);
      const auto modes = parse_modes(sweep_mode);
      const auto checks = build_checks(ids, modes, ParamFlags{});
      doc.command = "sweep";
      doc.ensemble = spec;
      nlohmann::json canonical = {{"ensemble", to_json(doc)["ensemble"]},
                                  {"theorems", sweep_theorems},
                                  {"mode", sweep_mode},
                                  {"tolerances", {tol.tol_eig, tol.tol_psd, tol.tol_rank_factor, tol.tol_slack}}};
      doc.input_digest = sha256_hex(canonical.dump());
      SweepResult result = sweep(spec, checks, tol);
      doc.reports = std::move(result.reports);
      doc.summary = result.summary;
      if (!json) {
        out << "ensemble " << to_string(spec.kind) << " dim=" << spec.dim << " count=" << spec.count
            << " seed=" << spec.seed << " checks/operator=" << checks.size() << "\n";
        for (const auto& r : doc.reports) {
          if (verbose || !r.passed) print_report_line(out, r);
        }
        print_summary(out, doc.summary);
      }
      return finish(out, doc, json);
    }

    if (douglas->parsed()) {
      const Input t = load(douglas_t);
      const Input s = load(douglas_s);
      doc.command = "douglas";
      doc.input_digest = sha256_hex(t.bytes + '\0' + s.bytes);
      doc.factorizations.push_back(douglas_factorization(t.matrix, s.matrix, tol));
      if (!json) print_factorization(out, doc.factorizations.front());
      return finish(out, doc, json);
    }

    if (pinv->parsed()) {
      const Input in = load(pinv_path);
      const Matrix p = pseudo_inverse(in.matrix, tol);
      if (pinv_out.empty()) {
        out << serialize_matrix(p);
      } else {
        write_matrix_file(pinv_out, p);
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kExitUsage;
}

}  // namespace opineq
