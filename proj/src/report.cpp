#include "opineq/report.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <limits>

#include "opineq/error.hpp"

namespace opineq {

namespace {

using nlohmann::json;

constexpr ErrorCode kAllErrorCodes[] = {
    ErrorCode::NotHermitian,   ErrorCode::NoConvergence, ErrorCode::NotSquare,  ErrorCode::ShapeMismatch,
    ErrorCode::NonFinite,      ErrorCode::KernelMismatch, ErrorCode::ZeroOperator, ErrorCode::NotMajorized,
    ErrorCode::AlphaZero,      ErrorCode::BadParams,     ErrorCode::BadSpec,    ErrorCode::Parse,
};

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorCode::Parse, "report JSON: " + what);
}

json real(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double get_real(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  schema_error("expected a number, got " + j.dump());
}

json opt_real(const std::optional<double>& v) { return v ? real(*v) : json(nullptr); }

std::optional<double> get_opt_real(const json& j) {
  if (j.is_null()) return std::nullopt;
  return get_real(j);
}

json complex_json(Complex z) { return json::array({real(z.real()), real(z.imag())}); }

Complex get_complex(const json& j) {
  if (!j.is_array() || j.size() != 2) schema_error("expected [re, im], got " + j.dump());
  return {get_real(j[0]), get_real(j[1])};
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Complex z : v) out.push_back(complex_json(z));
  return out;
}

Vector get_vector(const json& j) {
  if (!j.is_array()) schema_error("expected an array of [re, im]");
  Vector v;
  for (const auto& z : j) v.push_back(get_complex(z));
  return v;
}

json matrix_json(const Matrix& m) {
  json data = json::array();
  for (Complex z : m.entries()) data.push_back(complex_json(z));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Matrix get_matrix(const json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  Vector data = get_vector(j.at("data"));
  if (data.size() != rows * cols) schema_error("matrix data length does not match rows*cols");
  return Matrix(rows, cols, std::move(data));
}

template <typename Enum, typename Range>
Enum get_enum(const json& j, const Range& all, const char* what) {
  const auto& s = j.get_ref<const std::string&>();
  for (Enum e : all) {
    if (to_string(e) == s) return e;
  }
  schema_error(std::string("unknown ") + what + " '" + s + "'");
}

json params_json(const InequalityParams& p) {
  return {{"r", opt_real(p.r)}, {"lambda", complex_json(p.lambda)}, {"mu", complex_json(p.mu)}, {"p", opt_real(p.p)}};
}

InequalityParams get_params(const json& j) {
  InequalityParams p;
  p.r = get_opt_real(j.at("r"));
  p.lambda = get_complex(j.at("lambda"));
  p.mu = get_complex(j.at("mu"));
  p.p = get_opt_real(j.at("p"));
  return p;
}

json inequality_json(const InequalityReport& r) {
  json j;
  j["theorem"] = r.theorem ? json(std::string(to_string(*r.theorem))) : json(nullptr);
  j["lemma"] = r.lemma ? json(std::string(to_string(*r.lemma))) : json(nullptr);
  j["mode"] = std::string(to_string(r.mode));
  j["params"] = params_json(r.params);
  j["lhs"] = real(r.lhs);
  j["rhs"] = real(r.rhs);
  j["slack"] = real(r.slack);
  j["passed"] = r.passed;
  j["preconditions_met"] = r.preconditions_met;
  j["witness"] = r.witness ? vector_json(*r.witness) : json(nullptr);
  j["witness_lhs"] = opt_real(r.witness_lhs);
  j["witness_rhs"] = opt_real(r.witness_rhs);
  j["note"] = r.note;
  j["error"] = r.error ? json(std::string(to_string(*r.error))) : json(nullptr);
  j["error_message"] = r.error_message;
  j["operator_index"] = r.operator_index ? json(*r.operator_index) : json(nullptr);
  return j;
}

InequalityReport get_inequality(const json& j) {
  InequalityReport r;
  if (!j.at("theorem").is_null()) r.theorem = get_enum<TheoremId>(j["theorem"], kAllTheorems, "theorem");
  if (!j.at("lemma").is_null()) r.lemma = get_enum<LemmaId>(j["lemma"], kAllLemmas, "lemma");
  const auto mode = parse_mode(j.at("mode").get<std::string>());
  if (!mode) schema_error("unknown mode");
  r.mode = *mode;
  r.params = get_params(j.at("params"));
  r.lhs = get_real(j.at("lhs"));
  r.rhs = get_real(j.at("rhs"));
  r.slack = get_real(j.at("slack"));
  r.passed = j.at("passed").get<bool>();
  r.preconditions_met = j.at("preconditions_met").get<bool>();
  if (!j.at("witness").is_null()) r.witness = get_vector(j["witness"]);
  r.witness_lhs = get_opt_real(j.at("witness_lhs"));
  r.witness_rhs = get_opt_real(j.at("witness_rhs"));
  r.note = j.at("note").get<std::string>();
  if (!j.at("error").is_null()) r.error = get_enum<ErrorCode>(j["error"], kAllErrorCodes, "error code");
  r.error_message = j.at("error_message").get<std::string>();
  if (!j.at("operator_index").is_null()) r.operator_index = j["operator_index"].get<std::size_t>();
  return r;
}

json factorization_json(const FactorizationResult& f) {
  return {
      {"kind", f.kind},
      {"factor", matrix_json(f.factor)},
      {"residual", real(f.residual)},
      {"factor_norm", real(f.factor_norm)},
      {"factor_norm_sq", real(f.factor_norm_sq)},
      {"certified_infimum", real(f.certified_infimum)},
      {"constant_description", f.constant_description},
      {"norm_matches_constant", f.norm_matches_constant},
      {"norm_sq_matches_constant", f.norm_sq_matches_constant},
      {"inverse_norm_sq_matches_constant", f.inverse_norm_sq_matches_constant},
      {"kernel_match", f.kernel_match},
      {"range_containment", f.range_containment},
      {"kernel_angle", real(f.kernel_angle)},
      {"range_angle", real(f.range_angle)},
  };
}

FactorizationResult get_factorization(const json& j) {
  FactorizationResult f;
  f.kind = j.at("kind").get<std::string>();
  f.factor = get_matrix(j.at("factor"));
  f.residual = get_real(j.at("residual"));
  f.factor_norm = get_real(j.at("factor_norm"));
  f.factor_norm_sq = get_real(j.at("factor_norm_sq"));
  f.certified_infimum = get_real(j.at("certified_infimum"));
  f.constant_description = j.at("constant_description").get<std::string>();
  f.norm_matches_constant = j.at("norm_matches_constant").get<bool>();
  f.norm_sq_matches_constant = j.at("norm_sq_matches_constant").get<bool>();
  f.inverse_norm_sq_matches_constant = j.at("inverse_norm_sq_matches_constant").get<bool>();
  f.kernel_match = j.at("kernel_match").get<bool>();
  f.range_containment = j.at("range_containment").get<bool>();
  f.kernel_angle = get_real(j.at("kernel_angle"));
  f.range_angle = get_real(j.at("range_angle"));
  return f;
}

json profile_json(const OperatorProfile& p) {
  return {
      {"dim", p.dim},
      {"alpha_opt", opt_real(p.alpha_opt)},
      {"beta_opt", opt_real(p.beta_opt)},
      {"alpha_sq", opt_real(p.alpha_sq)},
      {"beta_sq", opt_real(p.beta_sq)},
      {"numerical_radius", real(p.numerical_radius)},
      {"numerical_radius_of_square", real(p.numerical_radius_of_square)},
      {"op_norm", real(p.op_norm)},
      {"kernel_dim", p.kernel_dim},
      {"kernels_equal", p.kernels_equal},
      {"is_ab_normal", p.is_ab_normal},
  };
}

OperatorProfile get_profile(const json& j) {
  OperatorProfile p;
  p.dim = j.at("dim").get<std::size_t>();
  p.alpha_opt = get_opt_real(j.at("alpha_opt"));
  p.beta_opt = get_opt_real(j.at("beta_opt"));
  p.alpha_sq = get_opt_real(j.at("alpha_sq"));
  p.beta_sq = get_opt_real(j.at("beta_sq"));
  p.numerical_radius = get_real(j.at("numerical_radius"));
  p.numerical_radius_of_square = get_real(j.at("numerical_radius_of_square"));
  p.op_norm = get_real(j.at("op_norm"));
  p.kernel_dim = j.at("kernel_dim").get<std::size_t>();
  p.kernels_equal = j.at("kernels_equal").get<bool>();
  p.is_ab_normal = j.at("is_ab_normal").get<bool>();
  return p;
}

json ensemble_json(const EnsembleSpec& e) {
  return {{"kind", std::string(to_string(e.kind))},
          {"dim", e.dim},
          {"count", e.count},
          {"seed", e.seed},
          {"scale", real(e.scale)}};
}

EnsembleSpec get_ensemble(const json& j) {
  EnsembleSpec e;
  const auto kind = parse_ensemble_kind(j.at("kind").get<std::string>());
  if (!kind) schema_error("unknown ensemble kind");
  e.kind = *kind;
  e.dim = j.at("dim").get<std::size_t>();
  e.count = j.at("count").get<std::size_t>();
  e.seed = j.at("seed").get<std::uint64_t>();
  e.scale = get_real(j.at("scale"));
  return e;
}

}  // namespace

nlohmann::json to_json(const ReportDocument& doc) {
  json j;
  j["tool_version"] = doc.tool_version;
  j["command"] = doc.command;
  j["input_digest"] = doc.input_digest;
  j["ensemble"] = doc.ensemble ? ensemble_json(*doc.ensemble) : json(nullptr);
  j["profile"] = doc.profile ? profile_json(*doc.profile) : json(nullptr);
  j["reports"] = json::array();
  for (const auto& r : doc.reports) j["reports"].push_back(inequality_json(r));
  j["factorizations"] = json::array();
  for (const auto& f : doc.factorizations) j["factorizations"].push_back(factorization_json(f));
  j["summary"] = {{"passed", doc.summary.passed}, {"failed", doc.summary.failed}, {"vacuous", doc.summary.vacuous}};
  return j;
}

ReportDocument report_from_json(const nlohmann::json& j) {
  try {
    ReportDocument doc;
    doc.tool_version = j.at("tool_version").get<std::string>();
    doc.command = j.at("command").get<std::string>();
    doc.input_digest = j.at("input_digest").get<std::string>();
    if (!j.at("ensemble").is_null()) doc.ensemble = get_ensemble(j["ensemble"]);
    if (!j.at("profile").is_null()) doc.profile = get_profile(j["profile"]);
    for (const auto& r : j.at("reports")) doc.reports.push_back(get_inequality(r));
    for (const auto& f : j.at("factorizations")) doc.factorizations.push_back(get_factorization(f));
    const auto& s = j.at("summary");
    doc.summary.passed = s.at("passed").get<std::size_t>();
    doc.summary.failed = s.at("failed").get<std::size_t>();
    doc.summary.vacuous = s.at("vacuous").get<std::size_t>();
    return doc;
  } catch (const nlohmann::json::exception& e) {
    schema_error(e.what());
  }
}

std::string emit_json(const ReportDocument& doc) { return to_json(doc).dump(2) + "\n"; }

ReportDocument parse_report(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    schema_error(e.what());
  }
  return report_from_json(j);
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

}  // namespace opineq
