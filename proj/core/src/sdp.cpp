#include "combforge/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "combforge/conventions.hpp"

namespace combforge {

namespace {

using RMatrix = Eigen::MatrixXd;

struct RealTriplet {
  int r;
  int c;
  double v;
};

// One realified constraint: per-block sparse symmetric coefficients.
struct RealConstraint {
  std::vector<std::pair<int, std::vector<RealTriplet>>> terms;  // (block, ...)
  double rhs = 0.0;
};

// [[Re, -Im], [Im, Re]] with an overall factor so that
// <realify(A), realify(X)> equals the complex <A, X>.
std::vector<RealTriplet> realify_sparse(const SparseHermitian& coeff,
                                        Index d) {
  std::vector<RealTriplet> out;
  out.reserve(coeff.size() * 2);
  for (const auto& e : coeff) {
    const double re = 0.5 * e.v.real();
    const double im = 0.5 * e.v.imag();
    const int r = static_cast<int>(e.r), c = static_cast<int>(e.c);
    const int dd = static_cast<int>(d);
    if (re != 0.0) {
      out.push_back({r, c, re});
      out.push_back({r + dd, c + dd, re});
    }
    if (im != 0.0) {
      out.push_back({r, c + dd, -im});
      out.push_back({r + dd, c, im});
    }
  }
  return out;
}

RMatrix realify_dense(const Matrix& m) {
  const Index d = m.rows();
  RMatrix out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = m.real();
  out.bottomRightCorner(d, d) = m.real();
  out.topRightCorner(d, d) = -m.imag();
  out.bottomLeftCorner(d, d) = m.imag();
  return out;
}

Matrix derealify(const RMatrix& m) {
  const Index d = m.rows() / 2;
  Matrix out(d, d);
  out.real() = 0.5 * (m.topLeftCorner(d, d) + m.bottomRightCorner(d, d));
  out.imag() = 0.5 * (m.bottomLeftCorner(d, d) - m.topRightCorner(d, d));
  return out;
}

double sparse_trace_product(const std::vector<RealTriplet>& a,
                            const RMatrix& x) {
  // Tr(A X) = sum A(p,q) X(q,p).
  double s = 0.0;
  for (const auto& e : a) s += e.v * x(e.c, e.r);
  return s;
}

void scatter_add(RMatrix& target, const std::vector<RealTriplet>& a,
                 double scale) {
  for (const auto& e : a) target(e.r, e.c) += scale * e.v;
}

// Largest alpha with S + alpha * dS PSD, via the Cholesky-whitened spectrum.
double max_step(const RMatrix& s, const RMatrix& ds) {
  Eigen::LLT<RMatrix> llt(s);
  if (llt.info() != Eigen::Success) return 0.0;
  RMatrix l = llt.matrixL();
  RMatrix b = l.triangularView<Eigen::Lower>().solve(ds);
  b = l.triangularView<Eigen::Lower>().solve(b.transpose()).transpose();
  b = 0.5 * (b + b.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<RMatrix> es(b, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

}  // namespace

std::vector<SparseHermitian> hermitian_basis(Index d) {
  std::vector<SparseHermitian> basis;
  basis.reserve(static_cast<std::size_t>(d * d));
  {
    SparseHermitian id;
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (Index i = 0; i < d; ++i) id.push_back({i, i, Complex(s, 0)});
    basis.push_back(std::move(id));
  }
  for (Index l = 1; l < d; ++l) {
    SparseHermitian diag;
    const double s = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (Index i = 0; i < l; ++i) diag.push_back({i, i, Complex(s, 0)});
    diag.push_back({l, l, Complex(-s * static_cast<double>(l), 0)});
    basis.push_back(std::move(diag));
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (Index a = 0; a < d; ++a) {
    for (Index b = a + 1; b < d; ++b) {
      basis.push_back({{a, b, Complex(r, 0)}, {b, a, Complex(r, 0)}});
      basis.push_back({{a, b, Complex(0, -r)}, {b, a, Complex(0, r)}});
    }
  }
  return basis;
}

std::size_t SdpProblem::add_block(std::string label, Index dim) {
  if (dim < 1) throw std::invalid_argument("SdpProblem: block dim < 1");
  for (const auto& b : blocks_) {
    if (b.label == label) {
      throw std::invalid_argument("SdpProblem: duplicate block '" + label +
                                  "'");
    }
  }
  blocks_.push_back({std::move(label), dim});
  objective_.push_back(Matrix::Zero(dim, dim));
  return blocks_.size() - 1;
}

std::size_t SdpProblem::block_index(const std::string& label) const {
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].label == label) return i;
  }
  throw std::invalid_argument("SdpProblem: unknown block '" + label + "'");
}

void SdpProblem::set_objective(std::size_t block, Matrix c) {
  if (block >= blocks_.size()) {
    throw std::invalid_argument("SdpProblem: bad block index");
  }
  if (c.rows() != blocks_[block].dim || c.cols() != blocks_[block].dim) {
    throw std::invalid_argument("SdpProblem: objective dim mismatch");
  }
  const double scale = std::max(max_abs(c), 1e-300);
  if (max_abs(c - c.adjoint()) > 1e-12 * scale) {
    throw std::invalid_argument("SdpProblem: objective not Hermitian");
  }
  objective_[block] = 0.5 * (c + c.adjoint().eval());
}

void SdpProblem::add_constraint(SdpConstraint c) {
  for (const auto& t : c.terms) {
    if (t.block >= blocks_.size()) {
      throw std::invalid_argument("SdpProblem: constraint names bad block");
    }
    const Index d = blocks_[t.block].dim;
    for (const auto& e : t.coeff) {
      if (e.r < 0 || e.c < 0 || e.r >= d || e.c >= d) {
        throw std::invalid_argument("SdpProblem: coefficient index outside "
                                    "block");
      }
    }
  }
  constraints_.push_back(std::move(c));
}

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::unbounded: return "unbounded";
    case SdpStatus::max_iter: return "max_iter";
    case SdpStatus::singular: return "singular";
  }
  return "?";
}

SdpHealth health(const SdpSolution& s) {
  SdpHealth h;
  h.rel_gap = s.gap;
  h.primal_residual = s.residuals.primal_eq;
  h.weak_duality_violation = std::max(0.0, s.primal_value - s.dual_value);
  return h;
}

SdpSolution solve(const SdpProblem& p, const SolveOptions& opts) {
  const std::size_t nb = p.blocks().size();
  const std::size_t m = p.constraints().size();
  if (nb == 0) throw std::invalid_argument("solve: no blocks");
  if (m == 0) throw std::invalid_argument("solve: no constraints");

  std::vector<Index> cdim(nb), rdim(nb);
  Index total_real = 0;
  for (std::size_t b = 0; b < nb; ++b) {
    cdim[b] = p.blocks()[b].dim;
    rdim[b] = 2 * cdim[b];
    total_real += rdim[b];
  }
  if (total_real > opts.max_real_dim) {
    throw std::invalid_argument(
        "solve: total real dimension " + std::to_string(total_real) +
        " exceeds cap " + std::to_string(opts.max_real_dim));
  }

  // ---- realification ------------------------------------------------------
  std::vector<RMatrix> c_real(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    c_real[b] = 0.5 * realify_dense(p.objective()[b]);
  }
  std::vector<RealConstraint> cons(m);
  RVector rhs(static_cast<Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    cons[i].rhs = p.constraints()[i].rhs;
    rhs(static_cast<Index>(i)) = cons[i].rhs;
    for (const auto& t : p.constraints()[i].terms) {
      auto trips = realify_sparse(t.coeff, cdim[t.block]);
      if (!trips.empty()) {
        cons[i].terms.push_back({static_cast<int>(t.block), std::move(trips)});
      }
    }
  }
  // Constraint lists grouped per block for the Schur assembly.
  std::vector<std::vector<std::pair<int, const std::vector<RealTriplet>*>>>
      by_block(nb);
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& t : cons[i].terms) {
      by_block[static_cast<std::size_t>(t.first)].push_back(
          {static_cast<int>(i), &t.second});
    }
  }

  // ---- initial point ------------------------------------------------------
  // Identity-proportional primal blocks, least-squares fitted to the
  // trace-level constraints; dual slack eta * I from the objective norm.
  std::vector<RMatrix> x(nb), z(nb);
  {
    RMatrix t = RMatrix::Zero(static_cast<Index>(m), static_cast<Index>(nb));
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& term : cons[i].terms) {
        double tr = 0.0;
        for (const auto& e : term.second) {
          if (e.r == e.c) tr += e.v;
        }
        t(static_cast<Index>(i), term.first) += tr;
      }
    }
    RMatrix gram = t.transpose() * t;
    gram.diagonal().array() += 1e-10 * (1.0 + gram.diagonal().maxCoeff());
    RVector s = gram.ldlt().solve(t.transpose() * rhs);
    double eta = 1.0;
    for (std::size_t b = 0; b < nb; ++b) {
      eta = std::max(eta, max_abs(p.objective()[b]));
    }
    for (std::size_t b = 0; b < nb; ++b) {
      double sb = s(static_cast<Index>(b));
      if (!std::isfinite(sb)) sb = 1.0;
      sb = std::clamp(sb, 1e-2, 1e3);
      x[b] = sb * RMatrix::Identity(rdim[b], rdim[b]);
      z[b] = (1.0 + eta) * RMatrix::Identity(rdim[b], rdim[b]);
    }
  }
  RVector y = RVector::Zero(static_cast<Index>(m));

  const double rhs_norm = 1.0 + rhs.norm();
  double c_norm = 1.0;
  for (std::size_t b = 0; b < nb; ++b) c_norm = std::max(c_norm, max_abs(c_real[b]));

  auto operator_a = [&](const std::vector<RMatrix>& xs) {
    RVector out(static_cast<Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (const auto& t : cons[i].terms) {
        s += sparse_trace_product(t.second, xs[static_cast<std::size_t>(t.first)]);
      }
      out(static_cast<Index>(i)) = s;
    }
    return out;
  };

  SdpSolution sol;
  sol.dual_multipliers = y;
  double cond_estimate = 1.0;

  const Index n_total = total_real;
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    // Residuals.
    RVector rp = rhs - operator_a(x);
    std::vector<RMatrix> rd(nb);
    double dinf = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      rd[b] = c_real[b] + z[b];
    }
    for (std::size_t i = 0; i < m; ++i) {
      const double yi = y(static_cast<Index>(i));
      if (yi == 0.0) continue;
      for (const auto& t : cons[i].terms) {
        scatter_add(rd[static_cast<std::size_t>(t.first)], t.second, -yi);
      }
    }
    for (std::size_t b = 0; b < nb; ++b) {
      dinf = std::max(dinf, max_abs(rd[b]));
    }

    double mu = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      mu += (x[b].array() * z[b].array()).sum();
    }
    mu /= static_cast<double>(n_total);

    double pobj = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      pobj += (c_real[b].array() * x[b].array()).sum();
    }
    const double dobj = rhs.dot(y);
    const double absgap = std::abs(dobj - pobj);
    const double relgap = absgap / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double pinf = rp.norm() / rhs_norm;
    const double dinf_rel = dinf / c_norm;

    sol.primal_value = pobj;
    sol.dual_value = dobj;
    sol.gap = relgap;
    sol.residuals.primal_eq = pinf;
    sol.residuals.dual_ineq = dinf_rel;

    if ((absgap <= opts.gap_tol_abs || relgap <= opts.gap_tol_rel) &&
        pinf <= opts.res_tol && dinf_rel <= opts.res_tol) {
      sol.status = SdpStatus::optimal;
      break;
    }
    if (!std::isfinite(mu) || mu > 1e14) {
      sol.status = SdpStatus::unbounded;
      break;
    }

    // Inverses of Z.
    std::vector<RMatrix> zinv(nb);
    bool z_ok = true;
    for (std::size_t b = 0; b < nb; ++b) {
      Eigen::LLT<RMatrix> llt(z[b]);
      if (llt.info() != Eigen::Success) {
        z_ok = false;
        break;
      }
      zinv[b] = llt.solve(RMatrix::Identity(rdim[b], rdim[b]));
    }
    if (!z_ok) {
      sol.status = SdpStatus::singular;
      break;
    }

    // Schur complement M_ij = sum_b Tr(A_i X A_j Z^{-1}).
    RMatrix schur = RMatrix::Zero(static_cast<Index>(m),
                                  static_cast<Index>(m));
    for (std::size_t b = 0; b < nb; ++b) {
      const auto& list = by_block[b];
      const RMatrix& xb = x[b];
      const RMatrix& zb = zinv[b];
      for (std::size_t ii = 0; ii < list.size(); ++ii) {
        const auto& [ci, ai] = list[ii];
        for (std::size_t jj = ii; jj < list.size(); ++jj) {
          const auto& [cj, aj] = list[jj];
          double s = 0.0;
          for (const auto& e : *ai) {
            for (const auto& f : *aj) {
              s += e.v * f.v * xb(e.c, f.r) * zb(f.c, e.r);
            }
          }
          schur(ci, cj) += s;
          if (ci != cj) schur(cj, ci) += s;
        }
      }
    }
    cond_estimate = schur.diagonal().maxCoeff() /
                    std::max(schur.diagonal().minCoeff(), 1e-300);

    Eigen::LDLT<RMatrix> schur_fact(schur);
    {
      int tries = 0;
      double reg = 1e-14 * (1.0 + schur.diagonal().maxCoeff());
      while (schur_fact.info() != Eigen::Success && tries < 4) {
        schur.diagonal().array() += reg;
        schur_fact.compute(schur);
        reg *= 100.0;
        ++tries;
      }
      if (schur_fact.info() != Eigen::Success) {
        sol.status = SdpStatus::singular;
        break;
      }
    }

    // Direction from the linearized complementarity X Z = nu I:
    //   dX = Rc Z^{-1} - X dZ Z^{-1},  dZ = A*(dy) - Rd,
    //   M dy = <A_i, Rc Z^{-1} + X Rd Z^{-1}> - rp.
    auto solve_direction = [&](const std::vector<RMatrix>& rc,
                               std::vector<RMatrix>& dx,
                               std::vector<RMatrix>& dz, RVector& dy) {
      RVector h(static_cast<Index>(m));
      std::vector<RMatrix> t(nb);
      for (std::size_t b = 0; b < nb; ++b) {
        t[b] = rc[b] * zinv[b] + x[b] * rd[b] * zinv[b];
      }
      for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (const auto& term : cons[i].terms) {
          s += sparse_trace_product(term.second,
                                    t[static_cast<std::size_t>(term.first)]);
        }
        h(static_cast<Index>(i)) = s - rp(static_cast<Index>(i));
      }
      dy = schur_fact.solve(h);
      for (std::size_t b = 0; b < nb; ++b) {
        dz[b] = -rd[b];
      }
      for (std::size_t i = 0; i < m; ++i) {
        const double dyi = dy(static_cast<Index>(i));
        if (dyi == 0.0) continue;
        for (const auto& term : cons[i].terms) {
          scatter_add(dz[static_cast<std::size_t>(term.first)], term.second,
                      dyi);
        }
      }
      for (std::size_t b = 0; b < nb; ++b) {
        dx[b] = (rc[b] - x[b] * dz[b]) * zinv[b];
        dx[b] = 0.5 * (dx[b] + dx[b].transpose()).eval();
      }
    };

    // Predictor (affine, nu = 0).
    std::vector<RMatrix> rc(nb), dx_aff(nb), dz_aff(nb);
    RVector dy_aff;
    for (std::size_t b = 0; b < nb; ++b) rc[b] = -x[b] * z[b];
    solve_direction(rc, dx_aff, dz_aff, dy_aff);

    double ap_aff = 1.0, ad_aff = 1.0;
    for (std::size_t b = 0; b < nb; ++b) {
      ap_aff = std::min(ap_aff, max_step(x[b], dx_aff[b]));
      ad_aff = std::min(ad_aff, max_step(z[b], dz_aff[b]));
    }
    double mu_aff = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      mu_aff += ((x[b] + ap_aff * dx_aff[b]).array() *
                 (z[b] + ad_aff * dz_aff[b]).array())
                    .sum();
    }
    mu_aff /= static_cast<double>(n_total);
    double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3.0);

    // Corrector.
    std::vector<RMatrix> dx(nb), dz(nb);
    RVector dy;
    for (std::size_t b = 0; b < nb; ++b) {
      rc[b] = -x[b] * z[b] - dx_aff[b] * dz_aff[b];
      rc[b].diagonal().array() += sigma * mu;
    }
    solve_direction(rc, dx, dz, dy);

    double ap = opts.step_fraction, ad = opts.step_fraction;
    for (std::size_t b = 0; b < nb; ++b) {
      ap = std::min(ap, opts.step_fraction * max_step(x[b], dx[b]));
      ad = std::min(ad, opts.step_fraction * max_step(z[b], dz[b]));
    }
    ap = std::min(ap, 1.0);
    ad = std::min(ad, 1.0);
    if (!std::isfinite(ap) || !std::isfinite(ad) || ap <= 0 || ad <= 0) {
      sol.status = SdpStatus::singular;
      break;
    }

    for (std::size_t b = 0; b < nb; ++b) {
      x[b] += ap * dx[b];
      z[b] += ad * dz[b];
      x[b] = 0.5 * (x[b] + x[b].transpose()).eval();
      z[b] = 0.5 * (z[b] + z[b].transpose()).eval();
    }
    y += ad * dy;
  }

  if (iter == opts.max_iter) {
    sol.status = SdpStatus::max_iter;
    // Refresh the report for the final iterate.
    RVector rp = rhs - operator_a(x);
    std::vector<RMatrix> rd(nb);
    double dinf = 0.0;
    for (std::size_t b = 0; b < nb; ++b) rd[b] = c_real[b] + z[b];
    for (std::size_t i = 0; i < m; ++i) {
      const double yi = y(static_cast<Index>(i));
      if (yi == 0.0) continue;
      for (const auto& t : cons[i].terms) {
        scatter_add(rd[static_cast<std::size_t>(t.first)], t.second, -yi);
      }
    }
    for (std::size_t b = 0; b < nb; ++b) dinf = std::max(dinf, max_abs(rd[b]));
    double pobj = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      pobj += (c_real[b].array() * x[b].array()).sum();
    }
    const double dobj = rhs.dot(y);
    sol.primal_value = pobj;
    sol.dual_value = dobj;
    sol.gap = std::abs(dobj - pobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    sol.residuals.primal_eq = rp.norm() / rhs_norm;
    sol.residuals.dual_ineq = dinf / c_norm;
  }
  sol.iterations = iter;
  sol.condition_estimate = cond_estimate;
  sol.dual_multipliers = y;

  // De-realify primal blocks and record the PSD margin.
  sol.primal_blocks.resize(nb);
  double min_eig = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    sol.primal_blocks[b] = derealify(x[b]);
    Eigen::SelfAdjointEigenSolver<Matrix> es(sol.primal_blocks[b],
                                             Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, es.eigenvalues()(0));
  }
  sol.residuals.psd_min_eig = min_eig;
  return sol;
}

}  // namespace combforge
