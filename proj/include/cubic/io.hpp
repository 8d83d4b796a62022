#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubic/detmethod.hpp"
#include "cubic/lattice.hpp"

namespace cubic {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Curve spec file: '#' comments; lines
//   name <identifier>
//   coeffs c0 .. c9          (fixed monomial order)  or  poly <expression>
//   base x0 x1 x2            (optional rational base point)
//   basis <path>             (optional companion MW-basis file)
struct CurveSpec {
  std::string name;
  CubicForm f;
  std::optional<PlanePoint> base;
  std::optional<std::string> basis_ref;
};

CurveSpec load_curve_spec(const std::string& path);

// FNV-1a over the decimal rendering; lets a third party re-check matrices.
std::string matrix_hash(const IntMat& m);

std::string format_count_csv(const std::vector<CountRow>& rows);
std::string format_height_csv(const HeightReport& rep);
std::string format_class_csv(const std::vector<DescentClass>& classes, long m);
std::string format_growth_csv(const GrowthReport& rep);

// Plain-text, self-contained certificate for one class-bound run.
std::string format_certificate(const CurveSpec& curve, const ClassBoundReport& rep,
                               const MonomialBasis& basis,
                               const std::vector<ResidueBucket>& buckets);

void write_file(const std::string& path, const std::string& content);

}  // namespace cubic
