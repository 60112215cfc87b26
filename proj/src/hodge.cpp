#include "bk/hodge.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "bk/linalg.hpp"

namespace bk {

std::vector<int> HodgeType::flattened() const {
  std::vector<int> out;
  for (const auto& w : weights) out.insert(out.end(), w.begin(), w.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::string HodgeType::to_string() const {
  std::string s = "[";
  for (std::size_t t = 0; t < weights.size(); ++t) {
    if (t) s += ", ";
    s += "{";
    for (std::size_t i = 0; i < weights[t].size(); ++i) {
      if (i) s += ",";
      s += std::to_string(weights[t][i]);
    }
    s += "}";
  }
  return s + "]";
}

HodgeType graded_dims(const BKModule& m, long long precision) {
  if (!check_height(m, m.tower.p, precision)) throw std::domain_error("graded_dims needs height <= p");
  HodgeType out;
  for (const auto& exps : hodge_exponents(m, precision)) {
    std::vector<int> w(exps.begin(), exps.end());
    std::sort(w.begin(), w.end());
    out.weights.push_back(std::move(w));
  }
  return out;
}

long long cokernel_dim(const BKModule& m, int block, int i) {
  validate(m);
  if (i <= 0) return 0;
  const Field& f = m.field();
  const std::size_t n = m.rank;
  const UMatrix& a = m.frobenius.at(static_cast<std::size_t>(block));
  const auto width = static_cast<std::size_t>(i) * n;
  // Coordinates: component l, degree d -> l * i + d.
  std::vector<FVec> rows;
  for (std::size_t k = 0; k < n; ++k)
    for (int shift = 0; shift < i; ++shift) {
      FVec row(width, f.zero());
      for (std::size_t l = 0; l < n; ++l)
        for (int d = shift; d < i; ++d) row[l * static_cast<std::size_t>(i) + static_cast<std::size_t>(d)] = a(l, k).coeff(d - shift);
      rows.push_back(std::move(row));
    }
  return static_cast<long long>(width) - static_cast<long long>(rank_of(f, rows, width));
}

long long brute_force_graded(const BKModule& m, int block, int i, long long precision) {
  if (precision < 2LL * (i + 1)) throw PrecisionError("brute_force_graded needs precision >= 2(i+1)");
  const auto n = static_cast<long long>(m.rank);
  auto k = [&](int j) { return cokernel_dim(m, block, j); };
  auto gr = [&](int j) { return j < 0 ? 0 : n - k(j + 1) + k(j); };
  return gr(i) - gr(i - 1);
}

long long tangent_count(long long d, const std::vector<int>& w) {
  long long pairs = 0;
  std::map<int, long long> mult;
  for (int x : w) ++mult[x];
  long long below = 0;
  for (const auto& [x, c] : mult) {
    pairs += c * below;
    below += c;
  }
  return d * d + pairs;
}

std::vector<TypeClass> group_by_type(const std::vector<BKModule>& modules, long long precision) {
  std::map<HodgeType, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < modules.size(); ++i) {
    const auto& a = modules[i].tower;
    const auto& b = modules.front().tower;
    if (a.p != b.p || a.deg_k != b.deg_k || a.deg_l != b.deg_l || a.field->size() != b.field->size() ||
        modules[i].rank != modules.front().rank)
      throw std::invalid_argument("group_by_type: modules live over different towers or ranks");
    classes[graded_dims(modules[i], precision)].push_back(i);
  }
  std::vector<TypeClass> out;
  for (auto& [t, members] : classes) out.push_back({t, std::move(members)});
  return out;
}

}  // namespace bk
