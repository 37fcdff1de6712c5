#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wristmood/svm.hpp"

namespace wristmood::svm {

namespace {

constexpr const char* kFormat = "wristmood-svm-model/1";

using nlohmann::ordered_json;

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  return rows;
}

Matrix matrix_from(const nlohmann::json& rows, std::size_t cols) {
  Matrix m(0, cols);
  for (const auto& r : rows) {
    const auto v = r.get<std::vector<double>>();
    m.append_row(v);
  }
  return m;
}

}  // namespace

std::string model_to_json(const SvmModel& model) {
  ordered_json j;
  j["format"] = kFormat;
  j["target"] = model.target;
  j["C"] = model.C;
  j["gamma"] = model.gamma;
  j["seed"] = model.seed;
  j["cv_accuracy"] = model.cv_accuracy;
  j["classes"] = model.classes;
  j["class_names"] = model.class_names;
  j["scaler"] = {{"min", model.scaler.min}, {"max", model.scaler.max}};
  ordered_json pairs = ordered_json::array();
  for (const auto& p : model.pairs) {
    ordered_json pj;
    pj["positive"] = p.positive_label;
    pj["negative"] = p.negative_label;
    pj["rho"] = p.rho;
    pj["iterations"] = p.iterations;
    pj["converged"] = p.converged;
    pj["coef"] = p.coef;
    pj["support_vectors"] = matrix_json(p.support_vectors);
    pairs.push_back(std::move(pj));
  }
  j["pairs"] = std::move(pairs);
  return j.dump(1);
}

SvmModel model_from_json(const std::string& text) {
  SvmModel m;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != kFormat)
      fail(ErrorCode::kMalformedHeader, "unrecognized model format");
    m.target = j.value("target", "");
    m.C = j.at("C").get<double>();
    m.gamma = j.at("gamma").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.cv_accuracy = j.at("cv_accuracy").get<double>();
    m.classes = j.at("classes").get<std::vector<int>>();
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    m.scaler.min = j.at("scaler").at("min").get<std::vector<double>>();
    m.scaler.max = j.at("scaler").at("max").get<std::vector<double>>();
    if (m.scaler.min.size() != m.scaler.max.size())
      fail(ErrorCode::kDimensionMismatch, "scaler bounds differ in length");
    for (const auto& pj : j.at("pairs")) {
      BinarySvm p;
      p.positive_label = pj.at("positive").get<int>();
      p.negative_label = pj.at("negative").get<int>();
      p.rho = pj.at("rho").get<double>();
      p.iterations = pj.at("iterations").get<std::size_t>();
      p.converged = pj.at("converged").get<bool>();
      p.coef = pj.at("coef").get<std::vector<double>>();
      p.C = m.C;
      p.gamma = m.gamma;
      p.support_vectors = matrix_from(pj.at("support_vectors"), m.scaler.dim());
      if (p.support_vectors.rows() != p.coef.size())
        fail(ErrorCode::kDimensionMismatch, "support vector count does not match coefficients");
      m.pairs.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kMissingField, std::string("invalid model file: ") + e.what());
  }
  const std::size_t k = m.classes.size();
  if (m.pairs.size() != k * (k - 1) / 2)
    fail(ErrorCode::kDimensionMismatch, "pair count does not match class count");
  return m;
}

void save_model(const std::string& path, const SvmModel& model) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out << model_to_json(model) << '\n';
  if (!out) fail(ErrorCode::kIo, "write failed for " + path);
}

SvmModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace wristmood::svm
