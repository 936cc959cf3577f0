#include "cdag/value.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cdag/error.hpp"

namespace cdag {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Json complex_json(Complex c) { return Json{{"re", c.real()}, {"im", c.imag()}}; }

template <typename Vec>
Json complex_array(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

}  // namespace

std::string_view value_kind(const Value& v) noexcept {
  return std::visit(overloaded{[](double) { return std::string_view("real"); },
                               [](Complex) { return std::string_view("complex"); },
                               [](const FourMomentum&) { return std::string_view("momentum"); },
                               [](const SubdiagramState&) { return std::string_view("state"); },
                               [](const Matrix&) { return std::string_view("matrix"); }},
                    v);
}

Json value_to_json(const Value& v) {
  return std::visit(
      overloaded{[](double d) { return Json(d); }, [](Complex c) { return complex_json(c); },
                 [](const FourMomentum& p) { return Json{p(0), p(1), p(2), p(3)}; },
                 [](const SubdiagramState& s) {
                   Json j;
                   j["momentum"] = {s.momentum(0), s.momentum(1), s.momentum(2), s.momentum(3)};
                   j["absorbed"] = s.absorbed;
                   std::visit(overloaded{[&](const qed::BiSpinor& b) {
                                           j["kind"] = "bispinor";
                                           j["value"] = complex_array(b.components);
                                         },
                                         [&](const qed::AdjointBiSpinor& b) {
                                           j["kind"] = "adjoint_bispinor";
                                           j["value"] = complex_array(b.components);
                                         },
                                         [&](const qed::LorentzVectorC& l) {
                                           j["kind"] = "lorentz_vector";
                                           j["value"] = complex_array(l.components);
                                         },
                                         [&](Complex c) {
                                           j["kind"] = "scalar";
                                           j["value"] = complex_json(c);
                                         }},
                              s.value);
                   return j;
                 },
                 [](const Matrix& m) {
                   Json rows = Json::array();
                   for (Eigen::Index r = 0; r < m.rows(); ++r) {
                     Json row = Json::array();
                     for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
                     rows.push_back(std::move(row));
                   }
                   return rows;
                 }},
      v);
}

Value value_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_object() && j.contains("re")) return Complex(j.at("re").get<double>(), j.value("im", 0.0));
  if (j.is_array() && !j.empty() && j.front().is_array()) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (static_cast<Eigen::Index>(j[r].size()) != cols) throw Error(ErrorCode::Parse, "ragged matrix rows");
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
  }
  if (j.is_array() && j.size() == 4 && std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_number(); })) {
    return FourMomentum(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
  }
  throw Error(ErrorCode::Parse, "cannot decode value " + j.dump());
}

InputRecord input_record_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::Parse, "input record must be an array");
  InputRecord rec;
  rec.reserve(j.size());
  for (const auto& v : j) rec.push_back(value_from_json(v));
  return rec;
}

std::vector<double> flatten(const Value& v) {
  std::vector<double> out;
  auto push_c = [&](Complex c) {
    out.push_back(c.real());
    out.push_back(c.imag());
  };
  std::visit(overloaded{[&](double d) { out.push_back(d); }, [&](Complex c) { push_c(c); },
                        [&](const FourMomentum& p) { out.assign(p.data(), p.data() + 4); },
                        [&](const SubdiagramState& s) {
                          std::visit(overloaded{[&](const auto& spinor) {
                                                  for (int i = 0; i < 4; ++i) push_c(spinor.components(i));
                                                },
                                                [&](Complex c) { push_c(c); }},
                                     s.value);
                        },
                        [&](const Matrix& m) { out.assign(m.data(), m.data() + m.size()); }},
             v);
  return out;
}

double relative_difference(const Value& a, const Value& b) {
  if (a.index() != b.index()) return std::numeric_limits<double>::infinity();
  const auto fa = flatten(a);
  const auto fb = flatten(b);
  if (fa.size() != fb.size()) return std::numeric_limits<double>::infinity();
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    diff = std::max(diff, std::abs(fa[i] - fb[i]));
    scale = std::max({scale, std::abs(fa[i]), std::abs(fb[i])});
  }
  if (std::isnan(diff)) return std::numeric_limits<double>::infinity();
  if (scale == 0.0) return 0.0;
  return diff / scale;
}

}  // namespace cdag
