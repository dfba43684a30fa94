// SPDX-License-Identifier: Apache-2.0

#include "qres/json_io.hpp"

#include <fstream>
#include <sstream>

namespace qres::io {

namespace {

json complex_parts_to_json(const qcore::Matrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json re_row = json::array(), im_row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re_row.push_back(m(i, j).real());
      im_row.push_back(m(i, j).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

qcore::Matrix complex_parts_from_json(const json& j, Eigen::Index rows,
                                      Eigen::Index cols) {
  if (!j.contains("re") || !j.contains("im")) {
    throw ParseError("matrix document needs 're' and 'im' arrays");
  }
  const json& re = j.at("re");
  const json& im = j.at("im");
  if (!re.is_array() || !im.is_array() ||
      static_cast<Eigen::Index>(re.size()) != rows ||
      static_cast<Eigen::Index>(im.size()) != rows) {
    throw ParseError("matrix rows do not match the declared dimension");
  }
  qcore::Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& re_row = re.at(i);
    const json& im_row = im.at(i);
    if (static_cast<Eigen::Index>(re_row.size()) != cols ||
        static_cast<Eigen::Index>(im_row.size()) != cols) {
      throw ParseError("matrix columns do not match the declared dimension");
    }
    for (Eigen::Index jj = 0; jj < cols; ++jj) {
      if (!re_row.at(jj).is_number() || !im_row.at(jj).is_number()) {
        throw ParseError("matrix entries must be numbers");
      }
      m(i, jj) = qcore::Complex(re_row.at(jj).get<double>(),
                                im_row.at(jj).get<double>());
    }
  }
  return m;
}

}  // namespace

json matrix_to_json(const qcore::Matrix& m) {
  if (m.rows() != m.cols()) {
    throw ParseError("matrix_to_json expects a square matrix");
  }
  json j = complex_parts_to_json(m);
  j["dim"] = static_cast<int>(m.rows());
  return j;
}

qcore::Matrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") ||
      !j.at("dim").is_number_integer()) {
    throw ParseError("matrix document needs an integer 'dim'");
  }
  const int dim = j.at("dim").get<int>();
  if (dim <= 0) throw ParseError("matrix 'dim' must be positive");
  return complex_parts_from_json(j, dim, dim);
}

json density_to_json(const qcore::DensityMatrix& rho) {
  return matrix_to_json(rho.entries());
}

qcore::DensityMatrix density_from_json(const json& j) {
  return qcore::DensityMatrix(matrix_from_json(j));
}

json channel_to_json(const qcore::QuantumChannel& channel) {
  return json{{"dim_in", channel.dim_in()},
              {"dim_out", channel.dim_out()},
              {"superoperator", complex_parts_to_json(channel.superoperator())}};
}

qcore::QuantumChannel channel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim_in") || !j.contains("dim_out") ||
      !j.contains("superoperator")) {
    throw ParseError(
        "channel document needs 'dim_in', 'dim_out' and 'superoperator'");
  }
  const int dim_in = j.at("dim_in").get<int>();
  const int dim_out = j.at("dim_out").get<int>();
  if (dim_in <= 0 || dim_out <= 0) {
    throw ParseError("channel dimensions must be positive");
  }
  const qcore::Matrix s = complex_parts_from_json(
      j.at("superoperator"), static_cast<Eigen::Index>(dim_out) * dim_out,
      static_cast<Eigen::Index>(dim_in) * dim_in);
  return qcore::QuantumChannel::from_superoperator(s, dim_in, dim_out);
}

json group_to_json(const twirl::FiniteUnitaryGroup& group) {
  json elements = json::array();
  for (const qcore::Matrix& u : group.elements()) {
    elements.push_back(matrix_to_json(u));
  }
  json j{{"dim", group.dim()}, {"elements", std::move(elements)}};
  if (!group.labels().empty()) j["labels"] = group.labels();
  return j;
}

twirl::FiniteUnitaryGroup group_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("elements") ||
      !j.at("elements").is_array() || j.at("elements").empty()) {
    throw ParseError("group document needs 'dim' and a non-empty 'elements'");
  }
  const int dim = j.at("dim").get<int>();
  std::vector<qcore::Matrix> elements;
  for (const json& e : j.at("elements")) {
    elements.push_back(matrix_from_json(e));
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    labels = j.at("labels").get<std::vector<std::string>>();
  }
  return twirl::FiniteUnitaryGroup(dim, std::move(elements), std::move(labels));
}

json ext_real_to_json(const entropy::ExtReal& value) {
  if (value.infinite) {
    return json{{"bits", nullptr}, {"infinite", true}};
  }
  return json{{"bits", value.value}, {"infinite", false}};
}

json bound_report_to_json(const bounds::BoundReport& report) {
  json rows = json::array();
  for (const bounds::SandwichRow& row : report.sandwich) {
    rows.push_back(json{{"delta", row.delta},
                        {"lower_bits", ext_real_to_json(row.lower)},
                        {"upper_bits", ext_real_to_json(row.upper)}});
  }
  return json{{"eps", report.epsilon},
              {"state_dim", report.state_dim},
              {"rdm", report.rdm_tag},
              {"log2_upper", ext_real_to_json(report.log2_upper)},
              {"sandwich", std::move(rows)},
              {"best_lower", ext_real_to_json(report.best_lower)},
              {"best_upper", ext_real_to_json(report.best_upper)}};
}

json rate_to_json(const bounds::Rate& rate) {
  return json{{"first_order", rate.first_order},
              {"second_order", rate.second_order}};
}

json simulation_to_json(const codesim::SimulationResult& result) {
  return json{{"M", result.messages},
              {"mean_success", result.mean_success},
              {"stderr", result.stderr_mean},
              {"seed", result.seed},
              {"eps_target", result.eps_target},
              {"best_success", result.best_success},
              {"best_index", result.best_index},
              {"per_codebook", result.per_codebook}};
}

json achievability_to_json(const codesim::AchievabilityReport& report) {
  return json{{"m_best", report.m_best},
              {"log2_m_best", report.log2_m_best},
              {"m_mean", report.m_mean},
              {"log2_m_mean", report.log2_m_mean},
              {"bounds", bound_report_to_json(report.sandwich)}};
}

json demo_to_json(const schurweyl::ThreeQubitDemo& demo) {
  const auto vector_to_json = [](const qcore::Vector& v) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      re.push_back(v[i].real());
      im.push_back(v[i].imag());
    }
    return json{{"re", std::move(re)}, {"im", std::move(im)}};
  };
  return json{{"projector_21", matrix_to_json(demo.p21)},
              {"projector_3", matrix_to_json(demo.p3)},
              {"x_21", vector_to_json(demo.x21)},
              {"x_3", vector_to_json(demo.x3)},
              {"x", vector_to_json(demo.x)},
              {"twirled", matrix_to_json(demo.twirled)},
              {"residuals",
               json{{"fixed_x21", demo.residual_fixed_x21},
                    {"fixed_x3", demo.residual_fixed_x3},
                    {"block_x21", demo.residual_block_x21},
                    {"block_x3", demo.residual_block_x3},
                    {"final", demo.residual_final}}}};
}

json schur_weyl_table_to_json(const schurweyl::SchurWeylTable& table) {
  json rows = json::array();
  long long syt_square_sum = 0;
  long long dimension_sum = 0;
  for (const schurweyl::SchurWeylRecord& rec : table.records) {
    rows.push_back(json{{"partition", rec.lambda.parts()},
                        {"syt_count", rec.syt},
                        {"schur_dim", rec.schur_dim},
                        {"projector_trace", rec.syt * rec.schur_dim}});
    syt_square_sum += rec.syt * rec.syt;
    dimension_sum += rec.syt * rec.schur_dim;
  }
  return json{{"n", table.n},
              {"d", table.d},
              {"records", std::move(rows)},
              {"syt_square_sum", syt_square_sum},
              {"dimension_sum", dimension_sum}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << text;
}

}  // namespace qres::io
