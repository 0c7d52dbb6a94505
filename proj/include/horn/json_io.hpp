#pragma once

// JSON and CSV forms of the library types.  JSON follows nlohmann conventions
// but through named functions (the value types are std::vector aliases, so
// ADL conversions would collide with the built-in ones).  Infinite entries
// serialize as the strings "inf" / "-inf".

#include <json.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "horn/hive.hpp"
#include "horn/interpolate.hpp"
#include "horn/partial.hpp"
#include "horn/witness.hpp"

namespace horn {

using json = nlohmann::json;

// ---- scalars and spectra ----------------------------------------------------

inline json entry_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return json(v);
}

inline double entry_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("entry_from_json: unknown sentinel '" + s + "'");
  }
  if (!j.is_number()) throw std::invalid_argument("entry_from_json: expected number or sentinel");
  return j.get<double>();
}

inline json spectrum_to_json(const Spectrum& s) {
  json a = json::array();
  for (double v : s) a.push_back(entry_to_json(v));
  return a;
}

inline Spectrum spectrum_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("spectrum_from_json: expected array");
  Spectrum s;
  for (const auto& e : j) s.push_back(entry_from_json(e));
  return s;
}

inline json two_sided_to_json(const TwoSidedSpectrum& s) {
  return json{{"pos", spectrum_to_json(s.pos)}, {"neg", spectrum_to_json(s.neg)}};
}

inline TwoSidedSpectrum two_sided_from_json(const json& j) {
  if (!j.is_object() || !j.contains("pos") || !j.contains("neg"))
    throw std::invalid_argument("two_sided_from_json: expected {\"pos\":[...],\"neg\":[...]}");
  TwoSidedSpectrum s;
  s.pos = spectrum_from_json(j["pos"]);
  s.neg = spectrum_from_json(j["neg"]);
  s.validate();
  return s;
}

inline json partial_to_json(const PartialSpectrum& p) {
  json spec = json::object();
  for (const auto& [n, v] : p.entries()) spec[std::to_string(n)] = entry_to_json(v);
  return json{{"spec", spec}};
}

inline PartialSpectrum partial_from_json(const json& j) {
  if (!j.is_object() || !j.contains("spec") || !j["spec"].is_object())
    throw std::invalid_argument("partial_from_json: expected {\"spec\":{...}}");
  std::map<int, double> entries;
  for (const auto& [key, val] : j["spec"].items()) {
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(key, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("partial_from_json: bad index key '" + key + "'");
    }
    if (used != key.size())
      throw std::invalid_argument("partial_from_json: bad index key '" + key + "'");
    entries[n] = entry_from_json(val);
  }
  return PartialSpectrum(std::move(entries));
}

// ---- tuples and records -----------------------------------------------------

inline json index_set_to_json(const IndexSet& I) {
  json a = json::array();
  for (int i : I) a.push_back(i);
  return a;
}

inline IndexSet index_set_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("index_set_from_json: expected array");
  std::vector<int> v;
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw std::invalid_argument("index_set_from_json: expected integers");
    v.push_back(e.get<int>());
  }
  return IndexSet(std::move(v));
}

inline json tuple_to_json(const HornTuple& t) {
  json J = json::array();
  for (const auto& Jk : t.J) J.push_back(index_set_to_json(Jk));
  return json{{"m", t.m()}, {"N", t.N}, {"r", t.r()}, {"I", index_set_to_json(t.I)}, {"J", J}};
}

inline HornTuple tuple_from_json(const json& j) {
  if (!j.is_object() || !j.contains("N") || !j.contains("I") || !j.contains("J"))
    throw std::invalid_argument("tuple_from_json: expected {\"N\":...,\"I\":[...],\"J\":[[...]]}");
  std::vector<IndexSet> J;
  for (const auto& Jk : j["J"]) J.push_back(index_set_from_json(Jk));
  HornTuple t(j["N"].get<int>(), index_set_from_json(j["I"]), std::move(J));
  if (j.contains("r") && j["r"].get<int>() != t.r())
    throw std::invalid_argument("tuple_from_json: r does not match |I|");
  if (j.contains("m") && j["m"].get<int>() != t.m())
    throw std::invalid_argument("tuple_from_json: m does not match |J|");
  return t;
}

inline json record_to_json(const InequalityRecord& rec) {
  json q = json::array();
  for (int v : rec.q) q.push_back(v);
  json j{{"family", family_name(rec.family)},
         {"tuple", tuple_to_json(rec.tuple)},
         {"q", q},
         {"lhs", entry_to_json(rec.lhs)},
         {"rhs", entry_to_json(rec.rhs)},
         {"geq", rec.geq},
         {"bar_image", rec.bar_image},
         {"auto_sat", rec.auto_sat}};
  if (!rec.auto_sat) j["slack"] = entry_to_json(rec.slack());
  return j;
}

namespace detail {

// comma-free rendering for one CSV cell: (I|J1|...|Jm), indices space-separated
inline std::string tuple_cell(const HornTuple& t) {
  std::ostringstream os;
  os << '(';
  auto one = [&](const IndexSet& s) {
    bool first = true;
    for (int i : s) {
      if (!first) os << ' ';
      os << i;
      first = false;
    }
  };
  one(t.I);
  for (const auto& Jk : t.J) {
    os << '|';
    one(Jk);
  }
  os << ')';
  return os.str();
}

inline std::string number_cell(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

// Fixed-column violation table; q is space-separated, empty for the finite
// families.
inline std::string records_to_csv(const std::vector<InequalityRecord>& recs) {
  std::ostringstream os;
  os << "family,N,r,tuple,q,lhs,rhs,slack\n";
  for (const auto& rec : recs) {
    os << family_name(rec.family) << ',' << rec.tuple.N << ',' << rec.tuple.r() << ','
       << detail::tuple_cell(rec.tuple) << ',';
    for (std::size_t k = 0; k < rec.q.size(); ++k) {
      if (k) os << ' ';
      os << rec.q[k];
    }
    os << ',' << detail::number_cell(rec.lhs) << ',' << detail::number_cell(rec.rhs) << ','
       << (rec.auto_sat ? "auto" : detail::number_cell(rec.slack())) << '\n';
  }
  return os.str();
}

// ---- matrices and witnesses ---------------------------------------------------

inline json matrix_to_json(const Eigen::MatrixXcd& M) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json rrow = json::array(), irow = json::array();
    for (int c = 0; c < M.cols(); ++c) {
      rrow.push_back(M(i, c).real());
      irow.push_back(M(i, c).imag());
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  return json{{"rows", M.rows()}, {"cols", M.cols()}, {"re", re}, {"im", im}};
}

inline Eigen::MatrixXcd matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    throw std::invalid_argument("matrix_from_json: expected {\"re\":[[...]],\"im\":[[...]]}");
  const auto& re = j["re"];
  const auto& im = j["im"];
  const int rows = static_cast<int>(re.size());
  const int cols = rows > 0 ? static_cast<int>(re[0].size()) : 0;
  if (im.size() != re.size()) throw std::invalid_argument("matrix_from_json: re/im shape mismatch");
  Eigen::MatrixXcd M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(re[i].size()) != cols || static_cast<int>(im[i].size()) != cols)
      throw std::invalid_argument("matrix_from_json: ragged rows");
    for (int c = 0; c < cols; ++c)
      M(i, c) = std::complex<double>(re[i][c].get<double>(), im[i][c].get<double>());
  }
  return M;
}

inline json witness_to_json(const WitnessSet& w) {
  json B = json::array();
  for (const auto& Bk : w.B) B.push_back(matrix_to_json(Bk));
  json errs = json::array();
  for (double e : w.spectrum_errors) errs.push_back(e);
  return json{{"A", matrix_to_json(w.A)},
              {"B", B},
              {"sum_residual", w.sum_residual},
              {"spectrum_errors", errs},
              {"seed", w.seed},
              {"iterations", w.iterations},
              {"converged", w.converged}};
}

inline WitnessSet witness_from_json(const json& j) {
  WitnessSet w;
  w.A = matrix_from_json(j.at("A"));
  for (const auto& Bk : j.at("B")) w.B.push_back(matrix_from_json(Bk));
  w.sum_residual = j.value("sum_residual", 0.0);
  if (j.contains("spectrum_errors"))
    for (const auto& e : j["spectrum_errors"]) w.spectrum_errors.push_back(e.get<double>());
  w.seed = j.value("seed", std::uint64_t{0});
  w.iterations = j.value("iterations", 0);
  w.converged = j.value("converged", false);
  return w;
}

// ---- interpolation and hives --------------------------------------------------

inline json interpolation_to_json(const InterpolationResult& r) {
  json betas = json::array();
  for (const auto& b : r.betas) betas.push_back(spectrum_to_json(b));
  json tree = json::array();
  for (const auto& node : r.decomposition)
    tree.push_back(json{{"level", node.level},
                        {"size", node.size},
                        {"tau", node.tau},
                        {"walk_steps", node.walk_steps},
                        {"tuple", tuple_to_json(node.tuple)}});
  return json{{"alpha", spectrum_to_json(r.alpha)},
              {"betas", betas},
              {"decomposition", tree},
              {"steps", r.steps}};
}

// One row per interior-adjacent point with all four corners defined, so every
// cell of the row is meaningful.
inline std::string hive_to_csv(const Hive& h) {
  std::ostringstream os;
  os << "i,j,f,x,y,z\n";
  for (int i = 1; i <= h.width(); ++i)
    for (int j = 1; j <= h.height(); ++j) {
      if (!h.is_defined(i, j) || !h.is_defined(i - 1, j) || !h.is_defined(i, j - 1) ||
          !h.is_defined(i - 1, j - 1))
        continue;
      os << i << ',' << j << ',' << detail::number_cell(h.f(i, j)) << ','
         << detail::number_cell(h.x(i, j)) << ',' << detail::number_cell(h.y(i, j)) << ','
         << detail::number_cell(h.z(i, j)) << '\n';
    }
  return os.str();
}

}  // namespace horn
