#pragma once

// JSON and CSV exchange formats for operators, tableaux and reports. Floats
// are always written with 17 significant digits and '\n' line endings so
// that identical inputs give byte-identical files.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sbp_time/butcher.hpp"
#include "sbp_time/errors.hpp"
#include "sbp_time/linalg.hpp"
#include "sbp_time/ode_solver.hpp"
#include "sbp_time/order_conditions.hpp"
#include "sbp_time/sbp_operator.hpp"

namespace sbp_time::io {

inline std::string format_double(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", x == 0.0 ? 0.0 : x);
  return buffer;
}

inline std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

inline std::string json_array(const Vector& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(v(i));
  }
  return out + "]";
}

inline std::string json_matrix(const Matrix& m, const std::string& indent) {
  std::string out = "[\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += indent + "  " + json_array(m.row(i).transpose());
    out += i + 1 < m.rows() ? ",\n" : "\n";
  }
  return out + indent + "]";
}

// Operators ------------------------------------------------------------------

inline std::string operator_to_json(const SbpOperator& op) {
  std::string out = "{\n";
  out += "  \"nodes\": " + json_array(op.nodes) + ",\n";
  out += "  \"D\": " + json_matrix(op.D, "  ") + ",\n";
  out += "  \"M\": " + json_matrix(op.M, "  ") + ",\n";
  out += "  \"tL\": " + json_array(op.tL) + ",\n";
  out += "  \"tR\": " + json_array(op.tR) + ",\n";
  out += "  \"T\": " + format_double(op.T) + "\n";
  return out + "}\n";
}

namespace detail {

inline nlohmann::json parse(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

inline Vector vector_field(const nlohmann::json& j, const char* key) {
  require(j.contains(key) && j.at(key).is_array(), ErrorKind::ParseError, std::string("missing array ") + key);
  std::vector<double> values;
  for (const auto& x : j.at(key)) {
    require(x.is_number(), ErrorKind::ParseError, std::string("non-numeric entry in ") + key);
    values.push_back(x.get<double>());
  }
  require(!values.empty(), ErrorKind::ParseError, std::string("empty array ") + key);
  return linalg::from_span(values);
}

inline Matrix matrix_field(const nlohmann::json& j, const char* key) {
  require(j.contains(key) && j.at(key).is_array(), ErrorKind::ParseError, std::string("missing matrix ") + key);
  std::vector<std::vector<double>> rows;
  for (const auto& row : j.at(key)) {
    require(row.is_array(), ErrorKind::ParseError, std::string("matrix rows must be arrays in ") + key);
    auto& r = rows.emplace_back();
    for (const auto& x : row) {
      require(x.is_number(), ErrorKind::ParseError, std::string("non-numeric entry in ") + key);
      r.push_back(x.get<double>());
    }
  }
  try {
    return linalg::from_rows(rows);
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError, std::string(key) + ": " + e.what());
  }
}

inline double number_field(const nlohmann::json& j, const char* key) {
  require(j.contains(key) && j.at(key).is_number(), ErrorKind::ParseError, std::string("missing number ") + key);
  return j.at(key).get<double>();
}

}  // namespace detail

/// Imports an operator; orders are measured with `validate` since the
/// format does not store them.
inline SbpOperator operator_from_json(const std::string& text) {
  const auto j = detail::parse(text);
  SbpOperator op;
  op.nodes = detail::vector_field(j, "nodes");
  op.D = detail::matrix_field(j, "D");
  op.M = detail::matrix_field(j, "M");
  op.tL = detail::vector_field(j, "tL");
  op.tR = detail::vector_field(j, "tR");
  op.T = detail::number_field(j, "T");
  op.boundary_rows = op.size();
  op.norm_kind = op.M.isDiagonal() ? NormKind::Diagonal : NormKind::Dense;
  op.label = "imported operator, s=" + std::to_string(op.size());
  check_well_formed(op);
  const auto report = validate(op);
  op.interior_order = report.interior_accuracy;
  op.boundary_order = report.boundary_accuracy;
  return op;
}

// Tableaux -------------------------------------------------------------------

inline std::string tableau_to_json(const ButcherTableau& tab) {
  std::string out = "{\n";
  out += "  \"s\": " + std::to_string(tab.stages()) + ",\n";
  out += "  \"A\": " + json_matrix(tab.A, "  ") + ",\n";
  out += "  \"b\": " + json_array(tab.b) + ",\n";
  out += "  \"c\": " + json_array(tab.c) + ",\n";
  out += "  \"provenance\": " + json_string(tab.provenance) + "\n";
  return out + "}\n";
}

inline ButcherTableau tableau_from_json(const std::string& text) {
  const auto j = detail::parse(text);
  Matrix A = detail::matrix_field(j, "A");
  Vector b = detail::vector_field(j, "b");
  Vector c = detail::vector_field(j, "c");
  if (j.contains("s")) {
    require(j.at("s").is_number_integer() && j.at("s").get<Eigen::Index>() == b.size(), ErrorKind::ParseError,
            "stage count does not match b");
  }
  std::string provenance = j.contains("provenance") && j.at("provenance").is_string()
                               ? j.at("provenance").get<std::string>()
                               : std::string("imported");
  return make_tableau(std::move(A), std::move(b), std::move(c), std::move(provenance));
}

/// "i,j,Aij" rows, then "i,b" and "i,c" sections; indices are 1-based.
inline std::string tableau_to_csv(const ButcherTableau& tab) {
  std::string out = "i,j,Aij\n";
  const Eigen::Index s = tab.stages();
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) {
      out += std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + format_double(tab.A(i, j)) + "\n";
    }
  }
  out += "i,b\n";
  for (Eigen::Index i = 0; i < s; ++i) out += std::to_string(i + 1) + "," + format_double(tab.b(i)) + "\n";
  out += "i,c\n";
  for (Eigen::Index i = 0; i < s; ++i) out += std::to_string(i + 1) + "," + format_double(tab.c(i)) + "\n";
  return out;
}

/// Butcher array layout, right-aligned at 10 significant digits.
inline std::string tableau_to_text(const ButcherTableau& tab) {
  auto cell = [](double x) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%17.10g", x == 0.0 ? 0.0 : x);
    return std::string(buffer);
  };
  std::string out = "# " + tab.provenance + "\n";
  const Eigen::Index s = tab.stages();
  for (Eigen::Index i = 0; i < s; ++i) {
    out += cell(tab.c(i)) + " |";
    for (Eigen::Index j = 0; j < s; ++j) out += cell(tab.A(i, j));
    out += "\n";
  }
  out += std::string(17, '-') + "-+" + std::string(static_cast<std::size_t>(17 * s), '-') + "\n";
  out += std::string(17, ' ') + " |";
  for (Eigen::Index j = 0; j < s; ++j) out += cell(tab.b(j));
  return out + "\n";
}

// Reports --------------------------------------------------------------------

inline std::string stability_samples_csv(const StabilityReport& report) {
  std::string out = "re_z,im_z,abs_R\n";
  for (const auto& sample : report.samples) {
    out += format_double(sample.z.real()) + "," + format_double(sample.z.imag()) + "," +
           format_double(sample.abs_R) + "\n";
  }
  return out;
}

inline std::string stability_summary_json(const StabilityReport& report, const std::string& provenance) {
  std::string out = "{\n";
  out += "  \"provenance\": " + json_string(provenance) + ",\n";
  out += std::string("  \"a_stable_sampled\": ") + (report.a_stable_sampled ? "true" : "false") + ",\n";
  out += "  \"max_abs_R_on_imaginary_axis\": " + format_double(report.max_abs_R_on_imaginary_axis) + ",\n";
  out += "  \"max_abs_R_left_half_plane\": " + format_double(report.max_abs_R_left_half_plane) + ",\n";
  out += "  \"large_z\": " + format_double(report.grid.large_z) + ",\n";
  out += "  \"abs_R_at_large_z\": " + format_double(report.R_at_large_z) + ",\n";
  out += std::string("  \"l_stable\": ") + (report.l_stable ? "true" : "false") + ",\n";
  out += "  \"samples\": " + std::to_string(report.samples.size()) + "\n";
  return out + "}\n";
}

inline std::string stability_summary_text(const StabilityReport& report) {
  return std::string("a_stable=") + (report.a_stable_sampled ? "true" : "false") +
         " l_stable=" + (report.l_stable ? "true" : "false") +
         " max_abs_R_imag=" + format_double(report.max_abs_R_on_imaginary_axis) +
         " max_abs_R_lhp=" + format_double(report.max_abs_R_left_half_plane) +
         " abs_R_large_z=" + format_double(report.R_at_large_z) + "\n";
}

inline std::string order_report_json(const OrderReport& report, const std::string& provenance) {
  auto list = [](const std::vector<double>& values) {
    std::string out = "[";
    for (std::size_t k = 0; k < values.size(); ++k) out += (k ? ", " : "") + format_double(values[k]);
    return out + "]";
  };
  std::string out = "{\n";
  out += "  \"provenance\": " + json_string(provenance) + ",\n";
  out += "  \"B_order\": " + std::to_string(report.B_order) + ",\n";
  out += "  \"C_order\": " + std::to_string(report.C_order) + ",\n";
  out += "  \"D_order\": " + std::to_string(report.D_order) + ",\n";
  out += "  \"butcher_bound\": " + std::to_string(report.butcher_bound) + ",\n";
  out += "  \"tree_order\": " + std::to_string(report.tree_order) + ",\n";
  out += "  \"B_residuals\": " + list(report.B_residuals) + ",\n";
  out += "  \"C_residuals\": " + list(report.C_residuals) + ",\n";
  out += "  \"D_residuals\": " + list(report.D_residuals) + ",\n";
  out += "  \"trees\": [\n";
  for (std::size_t k = 0; k < report.tree_conditions.size(); ++k) {
    const auto& t = report.tree_conditions[k];
    out += "    {\"tree\": " + json_string(t.notation) + ", \"order\": " + std::to_string(t.order) +
           ", \"weight\": " + format_double(t.elementary_weight) + ", \"expected\": " + format_double(t.expected) +
           ", \"residual\": " + format_double(t.residual) + "}";
    out += k + 1 < report.tree_conditions.size() ? ",\n" : "\n";
  }
  out += "  ]\n";
  return out + "}\n";
}

inline std::string order_report_text(const OrderReport& report) {
  std::string out = "B=" + std::to_string(report.B_order) + " C=" + std::to_string(report.C_order) +
                    " D=" + std::to_string(report.D_order) + " butcher_bound=" + std::to_string(report.butcher_bound) +
                    " tree_order=" + std::to_string(report.tree_order) + "\n";
  for (const auto& t : report.tree_conditions) {
    out += "  order " + std::to_string(t.order) + "  " + t.notation + "  weight=" + format_double(t.elementary_weight) +
           "  expected=" + format_double(t.expected) + "  residual=" + format_double(t.residual) + "\n";
  }
  return out;
}

/// Header `resolution,error,eoc`; eoc is empty on the first row.
inline std::string convergence_csv(const ConvergenceReport& report) {
  std::string out = "resolution,error,eoc\n";
  for (std::size_t k = 0; k < report.errors.size(); ++k) {
    out += std::to_string(report.resolutions[k]) + "," + format_double(report.errors[k]) + ",";
    if (k > 0) out += format_double(report.eoc[k - 1]);
    out += "\n";
  }
  return out;
}

}  // namespace sbp_time::io
