#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "bk/moduli.hpp"
#include "bk/strong_div.hpp"
#include "bk/tseries.hpp"

namespace bk::cli {

using nlohmann::json;

inline constexpr const char* kSchema = "bk/1";

// Malformed or inconsistent input; maps to exit code 2.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws SchemaError when j is not an object or has a key outside `allowed`,
// or misses one of `required`.
void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional = {});

// Field elements are integers: the base-p code of the coordinates in the
// basis 1, X, ..., X^{n-1} of F_p[X]/(modulus).
Elem read_elem(const json& j, const Field& f);
int read_int(const json& j, const std::string& where);

Tower read_tower(const json& j);
json write_tower(const Tower& t);

// Laurent polynomial [[exponent, element], ...]; a truncated series is
// {"terms": [...], "cap": c} with coefficients from c on unknown.
USeries read_series(const json& j, const Field& f);
json write_series(const USeries& s);
UVec read_vector(const json& j, const Field& f);
json write_vector(const UVec& v);
UMatrix read_matrix(const json& j, const Field& f);
json write_matrix(const UMatrix& m);

// [[u_exponent, [t^0, t^1, ...]], ...]
TSeries read_tseries(const json& j, const Field& f);
json write_tseries(const TSeries& s);
TMatrix read_tmatrix(const json& j, const Field& f);
json write_tmatrix(const TMatrix& m);

// {"rank": n, "frobenius": [matrix per block]}
BKModule read_module(const json& j, const Tower& t);
json write_module(const BKModule& m);

RankOneData read_rank_one(const json& j, const Tower& t);  // reads weights and optional twist
// {"weights", "twist"?, "generators": [vector in e-coordinates, ...]}
InducedLattice read_lattice(const json& j, const Tower& t);
json write_lattice(const InducedLattice& m);

// Induced: {"weights", "twist"?, "generators": [[tseries per e_j], ...]}.
// General: {"module": module, "basis": [tmatrix per block]}.
Family read_family(const json& j, const Tower& t);

std::vector<JHFactor> read_factors(const json& j);
std::vector<Subspace> read_flag(const json& j, const BKModule& m);

json write_shape(const ShapeAssignment& s);

}  // namespace bk::cli
