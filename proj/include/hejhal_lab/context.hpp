#pragma once

#include <memory>
#include <vector>

#include "hejhal_lab/laplace.hpp"
#include "hejhal_lab/szego.hpp"

namespace hejhal_lab {

struct SolverSettings {
  int N = 256;
  // The Dirichlet grid uses N * dirichlet_oversample nodes per curve: the
  // trace of 2 du/dz takes two spectral derivatives and needs the headroom.
  int dirichlet_oversample = 2;
  double cond_limit = 1e12;
};

// Factorized solvers for one domain: Kerzman-Stein on N nodes per curve,
// Dirichlet on the oversampled grid, and the harmonic measures.
class KernelContext {
 public:
  KernelContext(const Domain& d, SolverSettings s = {})
      : settings_(s),
        grid_(std::make_shared<const BoundaryGrid>(sample_boundary(d, s.N))),
        dgrid_(s.dirichlet_oversample == 1
                   ? grid_
                   : std::make_shared<const BoundaryGrid>(sample_boundary(d, s.N * s.dirichlet_oversample))),
        dirichlet_(dgrid_, s.cond_limit),
        szego_(grid_, s.cond_limit) {
    for (size_t j = 1; j < d.curve_count(); ++j) harmonic_.push_back(harmonic_measure(dirichlet_, j));
  }

  const Domain& domain() const { return grid_->domain; }
  const SolverSettings& settings() const { return settings_; }
  int connectivity() const { return domain().connectivity(); }
  const BoundaryGrid& grid() const { return *grid_; }
  const BoundaryGrid& dirichlet_grid() const { return *dgrid_; }
  const DirichletSolver& dirichlet() const { return dirichlet_; }
  const KerzmanSteinSolver& szego_solver() const { return szego_; }
  const HarmonicMeasure& harmonic(size_t j) const { return harmonic_.at(j - 1); }

  SzegoField szego(cplx a) const { return solve_szego(szego_, a); }
  BergmanField bergman(cplx w) const { return BergmanField(dirichlet_, w); }
  GreenEvaluator green(cplx w) const { return GreenEvaluator(dirichlet_, w); }

  // (F_1'(z), ..., F_{n-1}'(z)).
  Eigen::VectorXcd dF(cplx z) const {
    Eigen::VectorXcd out(Eigen::Index(harmonic_.size()));
    for (size_t j = 0; j < harmonic_.size(); ++j) out[Eigen::Index(j)] = harmonic_[j].dF(z);
    return out;
  }

 private:
  SolverSettings settings_;
  std::shared_ptr<const BoundaryGrid> grid_, dgrid_;
  DirichletSolver dirichlet_;
  KerzmanSteinSolver szego_;
  std::vector<HarmonicMeasure> harmonic_;
};

}  // namespace hejhal_lab
