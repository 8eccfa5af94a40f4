#pragma once

// JSON encoding of matrices, observables, witnesses, verdicts and groups
// (complex numbers as [re, im]), and CSV formatting.

#include "coh/gii.hpp"
#include "coh/symmetry.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace coh::io {

using json = nlohmann::json;

/// Raised for malformed input documents.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

json to_json(const Observable& m);
Observable observable_from_json(const json& j);

json to_json(const IncoherentObservable& p);
IncoherentObservable incoherent_from_json(const json& j);

json to_json(const GiiWitness& w);
GiiWitness witness_from_json(const json& j);

json to_json(const FeasibilityVerdict& v);

json to_json(const SymmetryGroup& g);
/// Phases are taken as given; validate against a matrix with is_symmetry_of.
SymmetryGroup group_from_json(const json& j);
/// Every element leaves c invariant with its stated phases.
bool is_symmetry_of(const SymmetryGroup& g, const CMatrix& c, double tol = kClassTol);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

/// %.12g
std::string fmt(double x);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  CsvWriter& operator<<(double x);
  CsvWriter& operator<<(const std::string& s);
  void end_row();

 private:
  std::ostream& out_;
  std::size_t cols_;
  std::size_t pos_ = 0;
  void sep();
};

}  // namespace coh::io
