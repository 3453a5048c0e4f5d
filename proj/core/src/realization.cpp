#include "combforge/realization.hpp"

#include <Eigen/SVD>
#include <stdexcept>

#include "combforge/conventions.hpp"
#include "combforge/spectral.hpp"

namespace combforge {

namespace {

std::string mem_label(std::size_t k) { return "#m" + std::to_string(k); }

// Purification of X_k: column vec(sqrt(X_k)) on (V_k factors, purifier #p).
ComplexMatrix purification(const HermitianOperator& xk,
                           const std::string& purifier_label) {
  HermitianOperator root = matrix_sqrt_psd(xk);
  Layout layout = xk.layout().concat(
      Layout::single(purifier_label, xk.layout().total_dim()));
  return ComplexMatrix::column(layout, vec(root.matrix()));
}

}  // namespace

void check_realization(const UnitaryRealization& r) {
  const std::size_t n = r.rounds.n();
  if (r.memory_dims.size() != n + 1 || r.unitaries.size() != n) {
    throw std::invalid_argument("check_realization: size mismatch");
  }
  if (std::abs(r.v.m.norm() - 1.0) > 1e-14) {
    throw std::invalid_argument("check_realization: v is not a unit vector");
  }
  if (r.v.rows.total_dim() != r.memory_dims[0]) {
    throw std::invalid_argument("check_realization: v not on Z_0");
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto& rd = r.rounds.round(k);
    const Index din = r.memory_dims[k] * rd.x_dim;
    const Index dout = rd.y_dim * r.memory_dims[k + 1];
    if (din != dout) {
      throw std::invalid_argument(
          "check_realization: dimension chain broken at round " +
          std::to_string(k + 1));
    }
    const Matrix& u = r.unitaries[k].m;
    if (u.rows() != dout || u.cols() != din) {
      throw std::invalid_argument("check_realization: U_" +
                                  std::to_string(k + 1) + " has wrong shape");
    }
    if (max_abs(u.adjoint() * u - Matrix::Identity(din, din)) > kUnitaryTol) {
      throw std::invalid_argument("check_realization: U_" +
                                  std::to_string(k + 1) + " is not unitary");
    }
  }
}

StrategyOperator recompose_realization(const UnitaryRealization& r) {
  check_realization(r);
  const std::size_t n = r.rounds.n();

  // Feed every input half of vec(I); the realization is pure throughout, so
  // track the state vector.
  const Layout xs = r.rounds.inputs();
  ComplexMatrix psi = tensor_product(r.v, vectorize(ComplexMatrix::identity(xs)));
  for (std::size_t k = 0; k < n; ++k) {
    psi = apply_left(r.unitaries[k], psi);
  }

  // X = Tr_{Z_n}(psi psi*), arranged as (Y_1..Y_n, X_1..X_n).
  std::vector<std::string> sys;
  for (const auto& rd : r.rounds.rounds()) sys.push_back(rd.y_label);
  for (const auto& rd : r.rounds.rounds()) sys.push_back(rd.x_label + "'");
  std::string zn;
  for (const auto& f : psi.rows.factors()) {
    if (std::find(sys.begin(), sys.end(), f.label) == sys.end()) {
      zn = f.label;
    }
  }
  ComplexMatrix grouped = matricize(psi, sys, {zn});
  Matrix x = grouped.m * grouped.m.adjoint();
  HermitianOperator op = HermitianOperator::from_symmetrized(
      r.rounds.strategy_layout(), std::move(x));
  return validate_strategy(op, r.rounds);
}

UnitaryRealization unitary_realization(const StrategyOperator& s) {
  const std::size_t n = s.rounds.n();
  if (s.hierarchy.size() != n - 1) {
    throw std::invalid_argument(
        "unitary_realization: strategy lacks its marginal hierarchy");
  }

  // Padded memory dims z_k = prod(y) * prod_{i>k}(y_i) * prod_{i<=k}(x_i);
  // they satisfy z_{k-1} x_k = z_k y_k and dominate the purifier dims d_k.
  Index prod_y = 1;
  for (const auto& rd : s.rounds.rounds()) prod_y *= rd.y_dim;
  std::vector<Index> z(n + 1), d(n + 1);
  d[0] = 1;
  for (std::size_t k = 0; k <= n; ++k) {
    Index tail_y = 1, head_x = 1;
    for (std::size_t i = k; i < n; ++i) tail_y *= s.rounds.round(i).y_dim;
    for (std::size_t i = 0; i < k; ++i) head_x *= s.rounds.round(i).x_dim;
    z[k] = prod_y * tail_y * head_x;
    if (k > 0) {
      d[k] = d[k - 1] * s.rounds.round(k - 1).x_dim * s.rounds.round(k - 1).y_dim;
    }
  }

  // psi_0 is the scalar purification of the empty hierarchy level.
  ComplexMatrix psi_prev = ComplexMatrix::column(
      Layout::single("#p", 1), CVector::Ones(1));

  std::vector<ComplexMatrix> unitaries;
  for (std::size_t k = 1; k <= n; ++k) {
    const auto& rd = s.rounds.round(k - 1);
    const HermitianOperator& xk = (k == n) ? s.op : s.hierarchy[k - 1];

    // chi = psi_{k-1} (x) vec(I_{X_k}); the fed copy "@in" enters the
    // isometry, the reference copy keeps the register's name.
    ComplexMatrix feed{Layout::single(rd.x_label + "@in", rd.x_dim),
                       Layout::single(rd.x_label, rd.x_dim),
                       Matrix::Identity(rd.x_dim, rd.x_dim)};
    ComplexMatrix chi =
        tensor_product(psi_prev, vectorize(feed, {rd.x_label}));

    // Shared system side: (Y_1..Y_{k-1}, X_1..X_{k-1}, X_k).
    std::vector<std::string> shared;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      shared.push_back(s.rounds.round(i).y_label);
    }
    for (std::size_t i = 0; i + 1 < k; ++i) {
      shared.push_back(s.rounds.round(i).x_label);
    }
    shared.push_back(rd.x_label);

    ComplexMatrix g = matricize(chi, shared, {"#p", rd.x_label + "@in"});
    ComplexMatrix psi_k = purification(xk, "#q");
    ComplexMatrix f = matricize(psi_k, shared, {rd.y_label, "#q"});

    // Connecting map on the purifier side: G V^T = F.
    ComplexMatrix vt = matmul(pseudo_inverse(g, kPinvRankTolFactor), f);
    const double match = frobenius(g.m * vt.m - f.m);
    if (match > 1e-8 * std::max(1.0, frobenius(f.m))) {
      throw std::runtime_error(
          "unitary_realization: purification matching failed at round " +
          std::to_string(k) + " (residual " + std::to_string(match) + ")");
    }
    Matrix v_part = vt.m.transpose();  // A_in -> A_out

    // The reduced state on A_in is conj(G^dagger G), so the isometric part of
    // v_part lives on the conjugated right-singular subspace; complete it on
    // the conjugated kernel.
    Eigen::JacobiSVD<Matrix> svd(g.m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff =
        (sv.size() ? kPinvRankTolFactor * sv(0) : 0.0);
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    Matrix vg = svd.matrixV().conjugate();        // columns: supp then kernel
    Matrix supp = vg.leftCols(rank);
    Matrix kern = vg.rightCols(vg.cols() - rank);

    Matrix w_img = v_part * supp;  // orthonormal by the purification match
    const double gram =
        max_abs(w_img.adjoint() * w_img - Matrix::Identity(rank, rank));
    if (gram > 1e-8) {
      throw std::runtime_error(
          "unitary_realization: connecting map not isometric at round " +
          std::to_string(k) + " (Gram residual " + std::to_string(gram) + ")");
    }
    Matrix v_full;
    if (kern.cols() > 0) {
      Matrix completed = complete_isometry(w_img);
      Matrix extra = completed.middleCols(rank, kern.cols());
      v_full = w_img * supp.adjoint() + extra * kern.adjoint();
    } else {
      v_full = w_img * supp.adjoint();
    }

    // Pad into the z-sized memories and complete to a square unitary.  The
    // embedded action occupies the leading input indices (m < d_{k-1}).
    const Index a_in = d[k - 1] * rd.x_dim;
    const Index u_rows = rd.y_dim * z[k];
    Matrix cols = Matrix::Zero(u_rows, a_in);
    for (Index m = 0; m < d[k - 1]; ++m) {
      for (Index xx = 0; xx < rd.x_dim; ++xx) {
        const Index src_col = m * rd.x_dim + xx;
        for (Index y = 0; y < rd.y_dim; ++y) {
          for (Index p = 0; p < d[k]; ++p) {
            cols(y * z[k] + p, src_col) = v_full(y * d[k] + p, src_col);
          }
        }
      }
    }
    Matrix u = complete_isometry(cols);
    Layout u_rows_layout = Layout::single(rd.y_label, rd.y_dim)
                               .concat(Layout::single(mem_label(k), z[k]));
    Layout u_cols_layout = Layout::single(mem_label(k - 1), z[k - 1])
                               .concat(Layout::single(rd.x_label, rd.x_dim));
    unitaries.emplace_back(u_rows_layout, u_cols_layout, std::move(u));

    // Next round matches against psi_k; its purifier takes over the "#p" name.
    std::vector<std::string> names = psi_k.rows.labels();
    names.back() = "#p";
    psi_prev =
        ComplexMatrix::column(psi_k.rows.relabeled(names), psi_k.m.col(0));
  }

  CVector v0 = CVector::Zero(z[0]);
  v0(0) = 1.0;
  UnitaryRealization out{
      ComplexMatrix::column(Layout::single(mem_label(0), z[0]), std::move(v0)),
      std::move(z), std::move(unitaries), s.rounds};
  check_realization(out);
  return out;
}

UnitaryRealization transpose_realization(const UnitaryRealization& r,
                                         const ComplexMatrix& w) {
  check_realization(r);
  const std::size_t n = r.rounds.n();
  if (w.rows.total_dim() != r.memory_dims[n] || !w.is_column()) {
    throw std::invalid_argument("transpose_realization: w is not on Z_n");
  }
  if (std::abs(w.m.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("transpose_realization: w is not a unit "
                                "vector");
  }
  RoundStructure rev = r.rounds.reversed();

  std::vector<Index> mem(n + 1);
  for (std::size_t k = 0; k <= n; ++k) mem[k] = r.memory_dims[n - k];

  std::vector<ComplexMatrix> unitaries;
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t k = n + 1 - j;  // forward round index
    const ComplexMatrix& u = r.unitaries[k - 1];
    // Entrywise transpose: maps (Y_k, Z_k) -> (Z_{k-1}, X_k).
    ComplexMatrix ut{u.cols, u.rows, u.m.transpose()};
    // Swap factor orders back to (memory, input) -> (output, memory).
    const auto& fwd = r.rounds.round(k - 1);
    ut = permute_cols(ut, {mem_label(k), fwd.y_label});
    ut = permute_rows(ut, {fwd.x_label, mem_label(k - 1)});
    // Rename memory registers to the reversed chain #m'0..#m'n.
    Layout rows = ut.rows.relabeled({fwd.x_label, "#m'" + std::to_string(j)});
    Layout cols =
        ut.cols.relabeled({"#m'" + std::to_string(j - 1), fwd.y_label});
    unitaries.emplace_back(rows, cols, std::move(ut.m));
  }

  ComplexMatrix v0 = ComplexMatrix::column(
      Layout::single("#m'0", mem[0]), w.m.col(0));
  return UnitaryRealization{std::move(v0), std::move(mem),
                            std::move(unitaries), rev};
}

}  // namespace combforge
