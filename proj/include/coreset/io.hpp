/**
 * Serialization boundary: strict JSON parsing of decision-problem inputs with
 * positional error messages, JSON emission of reports with stable key order,
 * CSV table writing, and run manifests (command line, seed, digests, timing)
 * embedded in every emitted artifact.
 *
 * Conventions: polynomials are ascending integer coefficient arrays; an n x n
 * matrix is a flat row-major array of n^2 residues; a matrix polynomial is
 * the array of its coefficient matrices, ascending in degree.
 *
 * @copyright Apache License 2.0
 */
#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "coreset/decide.hpp"

namespace coreset {

using Json = nlohmann::ordered_json;

/// Malformed user input (as opposed to internal invariant violations); the
/// message always names the offending position.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// JSON emission
// ---------------------------------------------------------------------------

inline Json poly_to_json(const FpPoly& f) {
  Json coeffs = Json::array();
  for (int i = 0; i <= f.degree(); ++i) coeffs.push_back(f.coeff(static_cast<std::size_t>(i)).value());
  return coeffs;
}

inline Json matrix_to_json(const Matrix<Fp>& m) {
  Json flat = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) flat.push_back(m.at(i, j).value());
  }
  return flat;
}

inline Json matrix_poly_to_json(const MatrixPoly<Fp>& f) {
  Json coeffs = Json::array();
  for (const auto& c : f.coeffs()) coeffs.push_back(matrix_to_json(c));
  return coeffs;
}

inline Json factor_report_to_json(const FactorReport& fr) {
  Json j;
  j["factor"] = poly_to_json(fr.p);
  j["factor_text"] = fr.p.to_string();
  j["multiplicity"] = fr.multiplicity;
  j["members_at_max_multiplicity"] = fr.sp_size;
  if (fr.b_intersection_dim) j["b_intersection_dim"] = *fr.b_intersection_dim;
  if (fr.image_sum_dim) j["image_sum_dim"] = *fr.image_sum_dim;
  j["passed"] = fr.passed;
  return j;
}

inline Json core_report_to_json(const CoreReport& rep) {
  Json j;
  j["verdict"] = to_string(rep.verdict);
  j["method"] = to_string(rep.method);
  j["mu"] = poly_to_json(rep.mu);
  j["mu_text"] = rep.mu.to_string();
  if (rep.witness) j["witness"] = matrix_poly_to_json(*rep.witness);
  Json factors = Json::array();
  for (const auto& fr : rep.factors) factors.push_back(factor_report_to_json(fr));
  j["factors"] = std::move(factors);
  return j;
}

// ---------------------------------------------------------------------------
// JSON parsing with positional diagnostics
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t require_uint(const Json& j, const std::string& where, std::uint64_t min_value) {
  if (!j.is_number_integer() || (j.is_number_integer() && j.get<std::int64_t>() < 0)) {
    throw InputError(where + ": expected a nonnegative integer");
  }
  const std::uint64_t v = j.get<std::uint64_t>();
  if (v < min_value) {
    throw InputError(where + ": value " + std::to_string(v) + " is below the minimum " +
                     std::to_string(min_value));
  }
  return v;
}

}  // namespace detail

/// A decision-problem instance: the modulus, the matrix size, and the set.
struct DecideInput {
  std::uint32_t q = 2;
  std::size_t n = 1;
  std::vector<Matrix<Fp>> matrices;
};

inline FpPoly poly_from_json(const Json& j, std::uint32_t q, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of coefficients");
  std::vector<Fp> coeffs;
  coeffs.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::uint64_t c =
        detail::require_uint(j[i], where + "[" + std::to_string(i) + "]", 0);
    if (c >= q) {
      throw InputError(where + "[" + std::to_string(i) + "]: entry " + std::to_string(c) +
                       " out of range for q=" + std::to_string(q));
    }
    coeffs.emplace_back(static_cast<std::uint32_t>(c), q);
  }
  return FpPoly(std::move(coeffs));
}

inline Matrix<Fp> matrix_from_json(const Json& j, std::size_t n, std::uint32_t q,
                                   const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected a flat row-major array");
  if (j.size() != n * n) {
    throw InputError(where + ": expected " + std::to_string(n * n) + " entries, got " +
                     std::to_string(j.size()));
  }
  Matrix<Fp> m = Matrix<Fp>::zero(n, n, Fp(0, q));
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string spot = where + "[" + std::to_string(k) + "]";
    const std::uint64_t v = detail::require_uint(j[k], spot, 0);
    if (v >= q) {
      throw InputError(spot + ": entry " + std::to_string(v) + " out of range for q=" +
                       std::to_string(q));
    }
    m.at(k / n, k % n) = Fp(static_cast<std::uint32_t>(v), q);
  }
  return m;
}

inline DecideInput parse_decide_input(const Json& j) {
  if (!j.is_object()) throw InputError("input: expected a JSON object");
  for (const auto& key : {"q", "n", "matrices"}) {
    if (!j.contains(key)) throw InputError(std::string(key) + ": missing required field");
  }
  DecideInput in;
  const std::uint64_t q = detail::require_uint(j["q"], "q", 2);
  try {
    (void)Fp(0, static_cast<std::uint32_t>(q));
  } catch (const std::domain_error&) {
    throw InputError("q: " + std::to_string(q) + " is not prime");
  }
  in.q = static_cast<std::uint32_t>(q);
  in.n = static_cast<std::size_t>(detail::require_uint(j["n"], "n", 1));
  if (!j["matrices"].is_array()) throw InputError("matrices: expected an array");
  for (std::size_t i = 0; i < j["matrices"].size(); ++i) {
    in.matrices.push_back(
        matrix_from_json(j["matrices"][i], in.n, in.q, "matrices[" + std::to_string(i) + "]"));
  }
  return in;
}

inline DecideInput parse_decide_input_text(const std::string& text) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw InputError("input: not valid JSON");
  return parse_decide_input(j);
}

inline Json decide_input_to_json(const DecideInput& in) {
  Json j;
  j["q"] = in.q;
  j["n"] = in.n;
  Json ms = Json::array();
  for (const auto& m : in.matrices) ms.push_back(matrix_to_json(m));
  j["matrices"] = std::move(ms);
  return j;
}

/// Rebuild an emitted report from its JSON form (q is needed to reconstruct
/// residues; n only when a witness is present).
inline CoreReport core_report_from_json(const Json& j, std::uint32_t q, std::size_t n) {
  if (!j.is_object()) throw InputError("report: expected a JSON object");
  CoreReport rep;
  const std::string verdict = j.at("verdict").get<std::string>();
  if (verdict == "core") {
    rep.verdict = Verdict::kCore;
  } else if (verdict == "not-core") {
    rep.verdict = Verdict::kNotCore;
  } else {
    throw InputError("verdict: unknown value '" + verdict + "'");
  }
  const std::string method = j.at("method").get<std::string>();
  if (method == "oracle") {
    rep.method = Method::kOracle;
  } else if (method == "factorwise") {
    rep.method = Method::kFactorwise;
  } else if (method == "structural") {
    rep.method = Method::kStructural;
  } else {
    throw InputError("method: unknown value '" + method + "'");
  }
  rep.mu = poly_from_json(j.at("mu"), q, "mu");
  if (j.contains("witness")) {
    std::vector<Matrix<Fp>> coeffs;
    const Json& w = j.at("witness");
    if (!w.is_array()) throw InputError("witness: expected an array of matrices");
    for (std::size_t i = 0; i < w.size(); ++i) {
      coeffs.push_back(matrix_from_json(w[i], n, q, "witness[" + std::to_string(i) + "]"));
    }
    rep.witness = MatrixPoly<Fp>(std::move(coeffs));
  }
  if (j.contains("factors")) {
    for (std::size_t i = 0; i < j.at("factors").size(); ++i) {
      const Json& f = j.at("factors")[i];
      FactorReport fr;
      fr.p = poly_from_json(f.at("factor"), q, "factors[" + std::to_string(i) + "].factor");
      fr.multiplicity = f.at("multiplicity").get<std::size_t>();
      fr.sp_size = f.at("members_at_max_multiplicity").get<std::size_t>();
      if (f.contains("b_intersection_dim")) fr.b_intersection_dim = f.at("b_intersection_dim").get<std::size_t>();
      if (f.contains("image_sum_dim")) fr.image_sum_dim = f.at("image_sum_dim").get<std::size_t>();
      fr.passed = f.at("passed").get<bool>();
      rep.factors.push_back(std::move(fr));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Human-readable rendering
// ---------------------------------------------------------------------------

inline std::string matrix_to_text(const Matrix<Fp>& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) s += ", ";
      s += std::to_string(m.at(i, j).value());
    }
    s += "]";
  }
  return s + "]";
}

/// Multi-line rendering of f(x) = sum_k B_k x^k (right evaluation
/// f(A) = sum_k B_k A^k); zero coefficients are omitted.
inline std::string matrix_poly_to_text(const MatrixPoly<Fp>& f) {
  std::string s = "f(x) = sum_k B_k x^k with nonzero coefficients:";
  for (std::size_t k = 0; k < f.coeffs().size(); ++k) {
    if (f.coeffs()[k].is_zero()) continue;
    s += "\n  B_" + std::to_string(k) + " = " + matrix_to_text(f.coeffs()[k]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  return out + "\n";
}

/// Header plus rows; every row must match the header width.
inline std::string csv_table(const std::vector<std::string>& header,
                             const std::vector<std::vector<std::string>>& rows) {
  std::string out = csv_line(header);
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw std::logic_error("csv_table: row width " + std::to_string(row.size()) +
                             " does not match header width " + std::to_string(header.size()));
    }
    out += csv_line(row);
  }
  return out;
}

/// Shortest decimal that round-trips a double (for CSV/JSON emission).
inline std::string double_to_string(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// Run manifests
// ---------------------------------------------------------------------------

/// Provenance block embedded in every emitted artifact: enough to re-run the
/// command and to detect that inputs or configuration changed.
struct RunManifest {
  std::string command_line;
  std::string version{kVersion};
  std::uint64_t seed = 0;
  bool seeded = false;            ///< false when the command uses no randomness
  std::string config_digest;      ///< digest of the effective configuration
  std::string input_digest;       ///< digest of the raw input bytes ("" if none)
  std::string timestamp_utc;
  double wall_seconds = 0.0;
};

inline std::string utc_timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline RunManifest make_manifest(std::string command_line, const Json& config,
                                 std::optional<std::uint64_t> seed,
                                 const std::string& raw_input) {
  RunManifest m;
  m.command_line = std::move(command_line);
  m.config_digest = fnv1a64_hex(config.dump());
  if (seed) {
    m.seed = *seed;
    m.seeded = true;
  }
  if (!raw_input.empty()) m.input_digest = fnv1a64_hex(raw_input);
  m.timestamp_utc = utc_timestamp_now();
  return m;
}

inline Json manifest_to_json(const RunManifest& m) {
  Json j;
  j["command_line"] = m.command_line;
  j["version"] = m.version;
  if (m.seeded) j["seed"] = m.seed;
  j["config_digest"] = m.config_digest;
  if (!m.input_digest.empty()) j["input_digest"] = m.input_digest;
  j["timestamp_utc"] = m.timestamp_utc;
  j["wall_seconds"] = m.wall_seconds;
  return j;
}

}  // namespace coreset
