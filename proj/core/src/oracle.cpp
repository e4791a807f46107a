#include <Eigen/Dense>
#include <cmath>

#include "box_system.hpp"
#include "divflow/error.hpp"
#include "divflow/obstacle.hpp"

namespace divflow {

ObstacleSolution brute_force_oracle(const ObstacleProblem& p) {
  auto s = detail::make_box_system(p);
  const auto interior = s.grid->interior_nodes();
  const std::size_t m = interior.size();
  if (m > 12) throw Error(ErrorCode::TooLarge, "brute_force_oracle: " + std::to_string(m) + " interior nodes (max 12)");
  if (p.bound == 0.0 && !p.center)
    return detail::finish(p, std::vector<double>(s.grid->node_count(), 0.0), 0, true);

  // Dense Laplacian on the interior unknowns; non-interior neighbours are 0.
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs(m);
  std::vector<std::ptrdiff_t> slot(s.grid->node_count(), -1);
  for (std::size_t q = 0; q < m; ++q) slot[interior[q]] = static_cast<std::ptrdiff_t>(q);
  for (std::size_t q = 0; q < m; ++q) {
    const std::size_t k = interior[q];
    rhs[q] = s.g[k];
    lap(q, q) = s.diag;
    for (int a = 0; a < s.dim; ++a)
      for (std::ptrdiff_t o : {s.offset[a], -s.offset[a]}) {
        const std::ptrdiff_t nb = slot[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) + o)];
        if (nb >= 0) lap(q, nb) -= s.inv_h2[a];
      }
  }

  const double gscale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
  const double feas_eps = 1e-12 * std::max(1.0, std::isinf(p.bound) ? 1.0 : p.bound);
  const double sign_eps = 1e-10 * gscale;

  std::size_t patterns = 1;
  for (std::size_t q = 0; q < m; ++q) patterns *= 3;

  std::vector<int> digit(m, 0);
  std::vector<double> best;
  double best_energy = std::numeric_limits<double>::infinity();
  Eigen::VectorXd w(m);

  // Patterns are visited in lexicographic order (first interior node most
  // significant) and only strictly better energies replace the incumbent.
  for (std::size_t code = 0; code < patterns; ++code) {
    std::size_t c = code;
    for (std::size_t q = m; q-- > 0;) {
      digit[q] = static_cast<int>(c % 3);
      c /= 3;
    }
    std::vector<int> free_idx;
    bool ok = true;
    for (std::size_t q = 0; q < m && ok; ++q) {
      const std::size_t k = interior[q];
      switch (static_cast<Contact>(digit[q])) {
        case Contact::Free: free_idx.push_back(static_cast<int>(q)); break;
        case Contact::Lower: w[q] = s.lo[k]; ok = std::isfinite(w[q]); break;
        case Contact::Upper: w[q] = s.hi[k]; ok = std::isfinite(w[q]); break;
      }
    }
    if (!ok) continue;

    if (!free_idx.empty()) {
      const auto nf = static_cast<Eigen::Index>(free_idx.size());
      Eigen::MatrixXd a(nf, nf);
      Eigen::VectorXd b(nf);
      for (Eigen::Index r = 0; r < nf; ++r) {
        b[r] = rhs[free_idx[r]];
        for (std::size_t q = 0; q < m; ++q)
          if (digit[q] != 0) b[r] -= lap(free_idx[r], q) * w[q];
        for (Eigen::Index cidx = 0; cidx < nf; ++cidx) a(r, cidx) = lap(free_idx[r], free_idx[cidx]);
      }
      Eigen::VectorXd x = a.llt().solve(b);
      for (Eigen::Index r = 0; r < nf; ++r) w[free_idx[r]] = x[r];
    }

    for (std::size_t q = 0; q < m && ok; ++q) {
      const std::size_t k = interior[q];
      if (w[q] > s.hi[k] + feas_eps || w[q] < s.lo[k] - feas_eps) ok = false;
      const double r = rhs[q] - lap.row(q).dot(w);
      if (digit[q] == static_cast<int>(Contact::Upper) && r < -sign_eps) ok = false;
      if (digit[q] == static_cast<int>(Contact::Lower) && r > sign_eps) ok = false;
    }
    if (!ok) continue;

    const double e = 0.5 * w.dot(lap * w) - rhs.dot(w);
    if (e < best_energy) {
      best_energy = e;
      best.assign(s.grid->node_count(), 0.0);
      for (std::size_t q = 0; q < m; ++q) best[interior[q]] = s.clamp(w[q], interior[q]);
    }
  }
  if (best.empty()) throw Error(ErrorCode::NonConverged, "brute_force_oracle: no admissible contact pattern");

  auto sol = detail::finish(p, std::move(best), static_cast<long>(patterns), true);
  sol.kkt_residual = kkt_report(p, sol.w).kkt_residual;
  return sol;
}

}  // namespace divflow
