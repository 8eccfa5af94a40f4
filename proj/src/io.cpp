#include "coh/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace coh::io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int read_dim(const json& j) {
  const json& d = field(j, "dim");
  if (!d.is_number_integer() || d.get<long>() < 1) throw ParseError("\"dim\" must be a positive integer");
  return d.get<int>();
}

double number(const json& j) {
  if (!j.is_number()) throw ParseError("expected a number");
  return j.get<double>();
}

cplx complex_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ParseError("complex entries are [re, im] pairs");
  return {number(j[0]), number(j[1])};
}

CMatrix entries_from(const json& rows, Index d) {
  if (!rows.is_array() || static_cast<Index>(rows.size()) != d)
    throw ParseError("matrix must have dim rows");
  CMatrix m(d, d);
  for (Index n = 0; n < d; ++n) {
    const json& row = rows[n];
    if (!row.is_array() || static_cast<Index>(row.size()) != d)
      throw ParseError("matrix rows must have dim entries");
    for (Index k = 0; k < d; ++k) m(n, k) = complex_from(row[k]);
  }
  return m;
}

json entries_of(const CMatrix& m) {
  json rows = json::array();
  for (Index n = 0; n < m.rows(); ++n) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back({m(n, k).real(), m(n, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Permutation perm_from(const json& j, Index d) {
  if (!j.is_array() || static_cast<Index>(j.size()) != d)
    throw ParseError("permutation must have dim entries");
  Permutation p;
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw ParseError("permutation entries must be integers");
    const int v = x.get<int>();
    if (v < 0 || v >= d || seen[v]) throw ParseError("not a permutation of 0..dim-1");
    seen[v] = true;
    p.push_back(v);
  }
  return p;
}

}  // namespace

json to_json(const CMatrix& m) { return {{"dim", m.rows()}, {"entries", entries_of(m)}}; }

CMatrix matrix_from_json(const json& j) { return entries_from(field(j, "entries"), read_dim(j)); }

json to_json(const Observable& m) {
  json effects = json::array();
  for (const auto& e : m.effects) effects.push_back(to_json(e));
  return {{"dim", m.dim()}, {"effects", effects}};
}

Observable observable_from_json(const json& j) {
  const int d = read_dim(j);
  const json& effects = field(j, "effects");
  if (!effects.is_array() || effects.empty()) throw ParseError("\"effects\" must be a nonempty array");
  Observable m;
  for (const auto& e : effects) {
    CMatrix x = e.is_object() ? matrix_from_json(e) : entries_from(e, d);
    if (x.rows() != d) throw ParseError("effect dimension differs from dim");
    m.effects.push_back(std::move(x));
  }
  return m;
}

json to_json(const IncoherentObservable& p) {
  json rows = json::array();
  for (Index n = 0; n < p.table.rows(); ++n) {
    json row = json::array();
    for (Index j = 0; j < p.table.cols(); ++j) row.push_back(p.table(n, j));
    rows.push_back(std::move(row));
  }
  return {{"dim", p.table.rows()}, {"table", rows}};
}

IncoherentObservable incoherent_from_json(const json& j) {
  const int d = read_dim(j);
  const json& rows = field(j, "table");
  if (!rows.is_array() || static_cast<int>(rows.size()) != d) throw ParseError("table must have dim rows");
  if (!rows[0].is_array() || rows[0].empty()) throw ParseError("table rows must be nonempty arrays");
  const std::size_t k = rows[0].size();
  RMatrix t(d, static_cast<Index>(k));
  for (int n = 0; n < d; ++n) {
    if (!rows[n].is_array() || rows[n].size() != k) throw ParseError("table rows differ in length");
    for (std::size_t c = 0; c < k; ++c) t(n, static_cast<Index>(c)) = number(rows[n][c]);
  }
  return IncoherentObservable{t};
}

json to_json(const GiiWitness& w) {
  json blocks = json::array();
  for (const auto& b : w.blocks) blocks.push_back(to_json(b));
  return {{"blocks", blocks}, {"provenance", to_string(w.provenance)}};
}

GiiWitness witness_from_json(const json& j) {
  GiiWitness w;
  const json& blocks = field(j, "blocks");
  if (!blocks.is_array() || blocks.empty()) throw ParseError("\"blocks\" must be a nonempty array");
  for (const auto& b : blocks) w.blocks.push_back(matrix_from_json(b));
  if (j.contains("provenance")) {
    try {
      w.provenance = provenance_from_string(j.at("provenance").get<std::string>());
    } catch (const std::exception&) {
      throw ParseError("unknown provenance");
    }
  }
  return w;
}

json to_json(const FeasibilityVerdict& v) {
  json out = {{"status", to_string(v.status)}, {"iterations", v.iterations}};
  if (std::isfinite(v.residual))
    out["residual"] = v.residual;
  else
    out["residual"] = nullptr;
  return out;
}

json to_json(const SymmetryGroup& g) {
  json elems = json::array();
  for (std::size_t i = 0; i < g.order(); ++i) {
    json ph = json::array();
    for (Index n = 0; n < g.dim; ++n) ph.push_back({g.phases[i](n).real(), g.phases[i](n).imag()});
    elems.push_back({{"perm", g.perms[i]}, {"phases", ph}});
  }
  return {{"dim", g.dim}, {"elements", elems}};
}

SymmetryGroup group_from_json(const json& j) {
  SymmetryGroup g;
  g.dim = read_dim(j);
  const json& elems = field(j, "elements");
  if (!elems.is_array() || elems.empty()) throw ParseError("\"elements\" must be a nonempty array");
  for (const auto& e : elems) {
    g.perms.push_back(perm_from(field(e, "perm"), g.dim));
    CVector u = CVector::Ones(g.dim);
    if (e.contains("phases")) {
      const json& ph = e.at("phases");
      if (!ph.is_array() || static_cast<Index>(ph.size()) != g.dim)
        throw ParseError("phases must have dim entries");
      for (Index n = 0; n < g.dim; ++n) {
        u(n) = complex_from(ph[n]);
        if (std::abs(std::abs(u(n)) - 1.0) > kClassTol) throw ParseError("phases must have modulus one");
      }
    }
    g.phases.push_back(u);
  }
  if (!is_closed(g)) throw ParseError("group elements are not closed under composition");
  return g;
}

bool is_symmetry_of(const SymmetryGroup& g, const CMatrix& c, double tol) {
  if (c.rows() != g.dim) return false;
  for (std::size_t i = 0; i < g.order(); ++i)
    if ((act_on(c, g.perms[i], g.phases[i]) - c).cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(1) << '\n';
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), cols_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::sep() {
  if (pos_ == cols_) throw std::logic_error("CsvWriter: too many fields in row");
  if (pos_++) out_ << ',';
}

CsvWriter& CsvWriter::operator<<(double x) {
  sep();
  out_ << fmt(x);
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& s) {
  sep();
  out_ << s;
  return *this;
}

void CsvWriter::end_row() {
  if (pos_ != cols_) throw std::logic_error("CsvWriter: short row");
  out_ << '\n';
  pos_ = 0;
}

}  // namespace coh::io
