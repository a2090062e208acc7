#include "nchodge/exterior.hpp"

#include <bit>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace nchodge {

WedgeResult wedge_insert(int j, std::uint32_t mask) {
  std::uint32_t bit = 1u << (j - 1);
  if (mask & bit) return {0, 0};
  int smaller = std::popcount(mask & (bit - 1));
  return {(smaller % 2 == 0) ? 1 : -1, mask | bit};
}

std::pair<int, std::vector<int>> wedge_insert(int j, const std::vector<int>& idx) {
  std::uint32_t mask = 0;
  for (int v : idx) mask |= 1u << (v - 1);
  WedgeResult w = wedge_insert(j, mask);
  if (w.sign == 0) return {0, {}};
  std::vector<int> out;
  for (int v = 0; v < 32; ++v)
    if (w.mask & (1u << v)) out.push_back(v + 1);
  return {w.sign, out};
}

ExteriorBasis::ExteriorBasis(int n) : n_(n) {
  if (n < 1 || n > 16) throw std::invalid_argument("ExteriorBasis: n out of range");
  const int dim = 1 << n;
  pos_of_mask_.assign(dim, -1);
  offsets_.assign(n + 2, 0);
  // degree-major, lexicographic within a degree: enumerate increasing tuples
  // by recursion over the smallest element
  for (int k = 0; k <= n; ++k) {
    offsets_[k] = static_cast<int>(masks_.size());
    std::vector<int> stack;
    auto rec = [&](auto&& self, int start, int remaining, std::uint32_t acc) -> void {
      if (remaining == 0) {
        pos_of_mask_[acc] = static_cast<int>(masks_.size());
        masks_.push_back(acc);
        return;
      }
      for (int v = start; v <= n - remaining + 1; ++v)
        self(self, v + 1, remaining - 1, acc | (1u << (v - 1)));
    };
    rec(rec, 1, k, 0u);
  }
  offsets_[n + 1] = static_cast<int>(masks_.size());
}

int ExteriorBasis::degree(int pos) const { return std::popcount(masks_[pos]); }

std::vector<int> ExteriorBasis::tuple_at(int pos) const {
  std::vector<int> out;
  for (int v = 0; v < n_; ++v)
    if (masks_[pos] & (1u << v)) out.push_back(v + 1);
  return out;
}

nlohmann::json ExteriorBasis::to_json() const {
  nlohmann::json tuples = nlohmann::json::array();
  for (int p = 0; p < dim(); ++p) tuples.push_back(tuple_at(p));
  return nlohmann::json{{"n", n_}, {"tuples", tuples}};
}

ExteriorBasis ExteriorBasis::from_json(const nlohmann::json& j) {
  ExteriorBasis b(j.at("n").get<int>());
  const auto& tuples = j.at("tuples");
  if (static_cast<int>(tuples.size()) != b.dim())
    throw std::invalid_argument("ExteriorBasis: tuple count mismatch");
  for (int p = 0; p < b.dim(); ++p)
    if (tuples[p].get<std::vector<int>>() != b.tuple_at(p))
      throw std::invalid_argument("ExteriorBasis: serialized order mismatch");
  return b;
}

Mat build_T(const ExteriorBasis& basis, int j) {
  const int m = basis.dim();
  Mat t = Mat::Zero(m, m);
  for (int col = 0; col < m; ++col) {
    WedgeResult w = wedge_insert(j, basis.mask_at(col));
    if (w.sign != 0) t(basis.position(w.mask), col) = static_cast<double>(w.sign);
  }
  return t;
}

Mat build_T_adjoint(const ExteriorBasis& basis, int j) {
  const int m = basis.dim();
  const std::uint32_t bit = 1u << (j - 1);
  Mat a = Mat::Zero(m, m);
  for (int col = 0; col < m; ++col) {
    std::uint32_t mask = basis.mask_at(col);
    if (!(mask & bit)) continue;
    int smaller = std::popcount(mask & (bit - 1));
    a(basis.position(mask & ~bit), col) = (smaller % 2 == 0) ? 1.0 : -1.0;
  }
  return a;
}

Mat build_bracket_term(const ExteriorBasis& basis, const LieAlgebra& lie) {
  const int m = basis.dim();
  const int n = basis.n();
  if (lie.n != n) throw std::invalid_argument("build_bracket_term: dimension mismatch");
  Mat b = Mat::Zero(m, m);
  for (int col = 0; col < m; ++col) {
    std::uint32_t mask = basis.mask_at(col);
    int kpos = 0;
    for (int ik = 1; ik <= n; ++ik) {
      if (!(mask & (1u << (ik - 1)))) continue;
      ++kpos;  // 1-based position of i_k inside the sorted tuple
      std::uint32_t rest = mask & ~(1u << (ik - 1));
      double outer = (kpos % 2 == 1) ? 1.0 : -1.0;  // (-1)^{k+1}
      for (int a = 1; a <= n; ++a) {
        for (int bb = 1; bb <= n; ++bb) {
          if (a == bb) continue;
          double cc = lie.at(ik - 1, a - 1, bb - 1);
          if (cc == 0.0) continue;
          WedgeResult w1 = wedge_insert(bb, rest);
          if (w1.sign == 0) continue;
          WedgeResult w2 = wedge_insert(a, w1.mask);
          if (w2.sign == 0) continue;
          b(basis.position(w2.mask), col) += -0.5 * outer * cc * (w1.sign * w2.sign);
        }
      }
    }
  }
  return b;
}

Mat build_grading(const ExteriorBasis& basis) {
  const int m = basis.dim();
  Mat g = Mat::Zero(m, m);
  for (int p = 0; p < m; ++p) g(p, p) = (basis.degree(p) % 2 == 0) ? 1.0 : -1.0;
  return g;
}

Mat degree_projection(const ExteriorBasis& basis, int k) {
  const int m = basis.dim();
  Mat pi = Mat::Zero(m, m);
  for (int p = 0; p < m; ++p)
    if (basis.degree(p) == k) pi(p, p) = 1.0;
  return pi;
}

}  // namespace nchodge
