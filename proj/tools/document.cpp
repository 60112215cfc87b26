#include "document.hpp"

#include <algorithm>

namespace bk::cli {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  for (const char* k : required)
    if (!j.contains(k)) throw SchemaError(where + ": missing field '" + k + "'");
  for (const auto& [key, value] : j.items()) {
    auto match = [&](const char* k) { return key == k; };
    if (std::none_of(required.begin(), required.end(), match) && std::none_of(optional.begin(), optional.end(), match))
      throw SchemaError(where + ": unknown field '" + key + "'");
  }
}

int read_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SchemaError(where + ": expected an integer");
  return j.get<int>();
}

Elem read_elem(const json& j, const Field& f) {
  if (!j.is_number_integer()) throw SchemaError("field element must be an integer code");
  const auto v = j.get<long long>();
  if (v < 0 || v >= static_cast<long long>(f.size()))
    throw SchemaError("field element " + std::to_string(v) + " outside F_" + std::to_string(f.size()));
  return Elem{static_cast<std::uint32_t>(v)};
}

Tower read_tower(const json& j) {
  check_keys(j, "tower", {"p", "deg_k", "deg_l", "deg_F"});
  try {
    return make_tower(read_int(j["p"], "tower.p"), read_int(j["deg_k"], "tower.deg_k"),
                      read_int(j["deg_l"], "tower.deg_l"), read_int(j["deg_F"], "tower.deg_F"));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("tower: ") + e.what());
  } catch (const FieldError& e) {
    throw SchemaError(std::string("tower: ") + e.what());
  }
}

json write_tower(const Tower& t) {
  return {{"p", t.p}, {"deg_k", t.deg_k}, {"deg_l", t.deg_l}, {"deg_F", t.deg_F()}};
}

USeries read_series(const json& j, const Field& f) {
  if (j.is_object()) {
    check_keys(j, "series", {"terms", "cap"});
    if (!j["cap"].is_number_integer()) throw SchemaError("series cap must be an integer");
    return USeries::zero_mod(f, j["cap"].get<long long>()) + read_series(j["terms"], f);
  }
  if (!j.is_array()) throw SchemaError("series: expected [[exponent, element], ...]");
  USeries s(&f);
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2) throw SchemaError("series term must be [exponent, element]");
    if (!term[0].is_number_integer()) throw SchemaError("series exponent must be an integer");
    s += USeries::monomial(f, read_elem(term[1], f), term[0].get<long long>());
  }
  return s;
}

json write_series(const USeries& s) {
  json out = json::array();
  for (const auto& [e, c] : s.terms()) out.push_back({e, c.code});
  if (s.is_exact()) return out;
  return {{"terms", out}, {"cap", s.cap()}};
}

UVec read_vector(const json& j, const Field& f) {
  if (!j.is_array()) throw SchemaError("vector: expected an array of series");
  UVec v;
  for (const auto& x : j) v.push_back(read_series(x, f));
  return v;
}

json write_vector(const UVec& v) {
  json out = json::array();
  for (const auto& s : v) out.push_back(write_series(s));
  return out;
}

UMatrix read_matrix(const json& j, const Field& f) {
  if (!j.is_array() || j.empty()) throw SchemaError("matrix: expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  UMatrix m(j.size(), cols, USeries(&f));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw SchemaError("matrix: rows of unequal length");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = read_series(j[i][c], f);
  }
  return m;
}

json write_matrix(const UMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(write_series(m(i, c)));
    out.push_back(row);
  }
  return out;
}

TSeries read_tseries(const json& j, const Field& f) {
  if (!j.is_array()) throw SchemaError("T-series: expected [[u_exponent, [t^0, t^1, ...]], ...]");
  TSeries s(&f);
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2 || !term[0].is_number_integer() || !term[1].is_array())
      throw SchemaError("T-series term must be [u_exponent, [coefficients]]");
    std::vector<Elem> c;
    for (const auto& x : term[1]) c.push_back(read_elem(x, f));
    s += TSeries::monomial(f, TPoly(&f, std::move(c)), term[0].get<long long>());
  }
  return s;
}

json write_tseries(const TSeries& s) {
  json out = json::array();
  for (const auto& [e, c] : s.terms()) {
    json coeffs = json::array();
    for (Elem x : c.coeffs()) coeffs.push_back(x.code);
    out.push_back({e, coeffs});
  }
  return out;
}

TMatrix read_tmatrix(const json& j, const Field& f) {
  if (!j.is_array() || j.empty()) throw SchemaError("T-matrix: expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  TMatrix m(j.size(), cols, TSeries(&f));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw SchemaError("T-matrix: rows of unequal length");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = read_tseries(j[i][c], f);
  }
  return m;
}

json write_tmatrix(const TMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(write_tseries(m(i, c)));
    out.push_back(row);
  }
  return out;
}

BKModule read_module(const json& j, const Tower& t) {
  check_keys(j, "module", {"rank", "frobenius"});
  const int rank = read_int(j["rank"], "module.rank");
  if (rank < 1) throw SchemaError("module.rank must be positive");
  if (!j["frobenius"].is_array() || static_cast<int>(j["frobenius"].size()) != t.deg_k)
    throw SchemaError("module.frobenius needs one matrix per embedding of k");
  BKModule m{t, static_cast<std::size_t>(rank), {}};
  for (const auto& a : j["frobenius"]) {
    UMatrix mat = read_matrix(a, *t.field);
    if (mat.rows() != m.rank || mat.cols() != m.rank) throw SchemaError("module.frobenius: matrix is not rank x rank");
    m.frobenius.push_back(std::move(mat));
  }
  return m;
}

json write_module(const BKModule& m) {
  json blocks = json::array();
  for (const auto& a : m.frobenius) blocks.push_back(write_matrix(a));
  return {{"rank", m.rank}, {"frobenius", blocks}};
}

RankOneData read_rank_one(const json& j, const Tower& t) {
  if (!j.contains("weights") || !j["weights"].is_array()) throw SchemaError("weights: expected an array");
  std::vector<int> w;
  for (const auto& x : j["weights"]) w.push_back(read_int(x, "weights"));
  if (static_cast<int>(w.size()) != t.deg_l) throw SchemaError("weights: need one entry per embedding of l");
  RankOneData n = RankOneData::untwisted(t, std::move(w));
  if (j.contains("twist")) {
    if (!j["twist"].is_array() || static_cast<int>(j["twist"].size()) != t.deg_l)
      throw SchemaError("twist: need one element per embedding of l");
    for (std::size_t i = 0; i < n.twist.size(); ++i) {
      n.twist[i] = read_elem(j["twist"][i], *t.field);
      if (t.field->is_zero(n.twist[i])) throw SchemaError("twist entries must be nonzero");
    }
  }
  return n;
}

InducedLattice read_lattice(const json& j, const Tower& t) {
  check_keys(j, "lattice", {"weights", "generators"}, {"twist"});
  const RankOneData n = read_rank_one(j, t);
  if (!j["generators"].is_array()) throw SchemaError("lattice.generators: expected an array");
  std::vector<UVec> gens;
  for (const auto& g : j["generators"]) {
    UVec v = read_vector(g, *t.field);
    if (static_cast<int>(v.size()) != t.deg_l) throw SchemaError("lattice generator needs deg_l entries");
    gens.push_back(std::move(v));
  }
  try {
    return InducedLattice::from_generators(n, gens);
  } catch (const PrecisionError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("lattice: ") + e.what());
  }
}

json write_lattice(const InducedLattice& m) {
  json gens = json::array();
  for (const auto& v : m.basis_vectors()) gens.push_back(write_vector(v));
  json twist = json::array();
  for (Elem x : m.ambient.twist) twist.push_back(x.code);
  return {{"weights", m.ambient.weights}, {"twist", twist}, {"generators", gens}};
}

Family read_family(const json& j, const Tower& t) {
  const Field& f = *t.field;
  if (j.contains("module")) {
    check_keys(j, "family", {"module", "basis"});
    Family fam{read_module(j["module"], t), std::nullopt, {}};
    if (!j["basis"].is_array() || static_cast<int>(j["basis"].size()) != t.deg_k)
      throw SchemaError("family.basis needs one matrix per embedding of k");
    for (const auto& b : j["basis"]) {
      TMatrix m = read_tmatrix(b, f);
      if (m.rows() != fam.ambient.rank || m.cols() != fam.ambient.rank) throw SchemaError("family.basis: wrong size");
      fam.basis.push_back(std::move(m));
    }
    return fam;
  }
  check_keys(j, "family", {"weights", "generators"}, {"twist"});
  const RankOneData n = read_rank_one(j, t);
  std::vector<TVec> gens;
  if (!j["generators"].is_array()) throw SchemaError("family.generators: expected an array");
  for (const auto& g : j["generators"]) {
    if (!g.is_array()) throw SchemaError("family generator: expected an array of T-series");
    TVec v;
    for (const auto& x : g) v.push_back(read_tseries(x, f));
    gens.push_back(std::move(v));
  }
  try {
    return induced_family(n, gens);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("family: ") + e.what());
  }
}

std::vector<JHFactor> read_factors(const json& j) {
  if (!j.is_array()) throw SchemaError("factors: expected an array");
  std::vector<JHFactor> out;
  for (const auto& x : j) {
    check_keys(x, "factor", {"niveau", "exponent", "twist"});
    out.push_back({read_int(x["niveau"], "factor.niveau"), x["exponent"].get<long long>(), x["twist"].get<long long>()});
  }
  return out;
}

std::vector<Subspace> read_flag(const json& j, const BKModule& m) {
  if (!j.is_array()) throw SchemaError("flag: expected an array of subspaces");
  std::vector<Subspace> out;
  for (const auto& sub : j) {
    if (!sub.is_array() || static_cast<int>(sub.size()) != m.blocks())
      throw SchemaError("flag subspace: need one list of vectors per block");
    Subspace s;
    for (const auto& block : sub) {
      if (!block.is_array()) throw SchemaError("flag subspace block: expected an array of vectors");
      std::vector<UVec> vecs;
      for (const auto& v : block) {
        UVec x = read_vector(v, m.field());
        if (x.size() != m.rank) throw SchemaError("flag vector has the wrong length");
        vecs.push_back(std::move(x));
      }
      s.push_back(std::move(vecs));
    }
    out.push_back(std::move(s));
  }
  return out;
}

json write_shape(const ShapeAssignment& s) {
  json out = json::array();
  for (const auto& b : s) {
    if (b.mixed)
      out.push_back({{"mixed", true}, {"alpha", b.alpha.code}});
    else
      out.push_back({{"mixed", false}, {"x", {b.x_low, b.x_high}}});
  }
  return out;
}

}  // namespace bk::cli
