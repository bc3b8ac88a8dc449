#pragma once

// Matrix documents (plain text and JSON, with arbitrary-precision entries
// carried as strings when they exceed safe JSON number range), continuation
// reports, and CSV export of loop samples.

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "intmat.hpp"
#include "monodromy.hpp"
#include "normal_forms.hpp"

namespace maslov::io {

using json = nlohmann::ordered_json;

// Largest magnitude stored as a JSON number; beyond this entries become
// decimal strings to survive double-precision JSON readers.
inline constexpr long long kJsonIntLimit = 9007199254740992LL;  // 2^53

inline Int parse_int(const std::string& text) {
  try {
    size_t pos = 0;
    std::string t = text;
    while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos])))
      ++pos;
    t = t.substr(pos);
    if (t.empty()) throw std::invalid_argument("empty");
    return Int(t);
  } catch (const std::invalid_argument&) {
    throw ParseError("not an integer: '" + text + "'");
  }
}

inline json int_to_json(const Int& x) {
  if (x.fits_slong_p()) {
    long v = x.get_si();
    if (v <= kJsonIntLimit && v >= -kJsonIntLimit) return json(v);
  }
  return json(x.get_str());
}

inline Int int_from_json(const json& j) {
  if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) return parse_int(j.get<std::string>());
  throw ParseError("matrix entry is neither an integer nor a string");
}

// Text document: first line the dimension, then n rows of n entries.
inline IntMat read_matrix_text(std::istream& in) {
  long long n = 0;
  if (!(in >> n) || n <= 0)
    throw ParseError("matrix document: bad dimension line");
  if (n > 64) throw ParseError("matrix document: dimension too large");
  IntMat m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < n; ++j) {
      std::string tok;
      if (!(in >> tok))
        throw ParseError("matrix document: expected " + std::to_string(n * n) +
                         " entries");
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          parse_int(tok);
    }
  return m;
}

inline void write_matrix_text(std::ostream& out, const IntMat& m) {
  out << m.rows() << "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j)
      out << (j ? " " : "") << m(i, j).get_str();
    out << "\n";
  }
}

inline json matrix_to_json(const IntMat& m) {
  json entries = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(int_to_json(m(i, j)));
    entries.push_back(std::move(row));
  }
  return json{{"n", m.rows()}, {"entries", std::move(entries)}};
}

inline IntMat matrix_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("entries"))
    throw ParseError("matrix document: expected keys 'n' and 'entries'");
  long long n = doc["n"].get<long long>();
  if (n <= 0 || n > 64) throw ParseError("matrix document: bad dimension");
  const json& entries = doc["entries"];
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(n))
    throw ParseError("matrix document: 'entries' must hold n rows");
  IntMat m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const json& row = entries[i];
    if (!row.is_array() || row.size() != m.cols())
      throw ParseError("matrix document: row " + std::to_string(i) +
                       " must hold n entries");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = int_from_json(row[j]);
  }
  return m;
}

// Sniff the leading non-space character: '{' selects the JSON form.
inline IntMat read_matrix_auto(std::istream& in) {
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  std::size_t pos = text.find_first_not_of(" \t\r\n");
  if (pos == std::string::npos) throw ParseError("matrix document: empty input");
  if (text[pos] == '{') {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
      throw ParseError("matrix document: malformed JSON");
    return matrix_from_json(doc);
  }
  std::istringstream ss(text);
  return read_matrix_text(ss);
}

// Comma-separated integer list, e.g. "0,2"; length enforced when nonzero.
inline IntVec parse_int_list(const std::string& text, std::size_t expect = 0) {
  IntVec out;
  std::string cur;
  std::istringstream ss(text);
  while (std::getline(ss, cur, ',')) out.push_back(parse_int(cur));
  if (out.empty()) throw ParseError("expected a comma-separated integer list");
  if (expect && out.size() != expect)
    throw ParseError("expected " + std::to_string(expect) +
                     " comma-separated integers, got '" + text + "'");
  return out;
}

inline json vector_to_json(const IntVec& v) {
  json arr = json::array();
  for (const Int& x : v) arr.push_back(int_to_json(x));
  return arr;
}

inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json signature_to_json(const EigenSignature& s) {
  return json{{"has_plus_one", s.has_plus_one},
              {"has_minus_one", s.has_minus_one},
              {"ma_plus", s.ma_plus},
              {"mg_plus", s.mg_plus},
              {"ma_minus", s.ma_minus},
              {"mg_minus", s.mg_minus},
              {"other_eigenvalues_irrational", s.other_eigenvalues_irrational}};
}

inline json classification_to_json(const ClassificationResult& c) {
  return json{{"form", form_tag_name(c.form)},
              {"signature", signature_to_json(c.signature)},
              {"normal_form", matrix_to_json(c.normal_form)},
              {"conjugator", matrix_to_json(c.conjugator)}};
}

inline json report_to_json(const MonodromyReport& rep, const LoopSpec& loop,
                           const SystemSpec& sys) {
  json out;
  out["loop"] = json{{"center", {loop.j0, loop.h0}},
                     {"radii", {loop.rj, loop.rh}},
                     {"samples", loop.samples},
                     {"orientation", loop.clockwise ? "cw" : "ccw"},
                     {"system", {sys.a, sys.b}}};
  out["monodromy"] = matrix_to_json(rep.m);
  out["maslov"] = vector_to_json(rep.mu);
  out["winding_k"] = rep.k;
  out["action_residual"] = rep.action_residual;
  out["max_winding_deviation"] = rep.max_winding_deviation;
  out["theorem"] = verdict_name(rep.verdict);
  out["classification"] = classification_to_json(rep.classification);
  return out;
}

// One row per loop sample, closing sample included.
inline void write_csv(std::ostream& out, const MonodromyReport& rep) {
  out << "s,j,h,theta_unwrapped,I1,I2,w1,w2\n";
  for (const LoopSample& ls : rep.samples) {
    out << fmt_double(ls.s) << ',' << fmt_double(ls.cycle.j) << ','
        << fmt_double(ls.cycle.h) << ',' << fmt_double(ls.theta_cont) << ','
        << fmt_double(ls.cycle.i1) << ',' << fmt_double(ls.i2_cont) << ','
        << fmt_double(ls.cycle.w1) << ',' << fmt_double(ls.cycle.w2) << '\n';
  }
}

}  // namespace maslov::io
