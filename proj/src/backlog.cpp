#include "dppsim/backlog.hpp"

#include <limits>
#include <stdexcept>

namespace dppsim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void zero_commodity_entries(Matrix& M, const Topology& topology) {
  for (int c = 0; c < topology.commodity_count(); ++c)
    M(topology.commodities[c], c) = 0.0;
}
}  // namespace

BacklogKind backlog_kind_from_name(const std::string& name) {
  if (name == "bp") return BacklogKind::bp;
  if (name == "sp") return BacklogKind::sp;
  if (name == "qsp") return BacklogKind::qsp;
  if (name == "qsp_clamped") return BacklogKind::qsp_clamped;
  throw std::invalid_argument("unknown backlog kind: " + name);
}

std::string backlog_kind_name(BacklogKind kind) {
  switch (kind) {
    case BacklogKind::bp: return "bp";
    case BacklogKind::sp: return "sp";
    case BacklogKind::qsp: return "qsp";
    case BacklogKind::qsp_clamped: return "qsp_clamped";
  }
  return "bp";
}

Matrix init_distances(const Topology& topology) {
  Matrix D = Matrix::Constant(topology.n, topology.commodity_count(), kInf);
  for (int c = 0; c < topology.commodity_count(); ++c) D(topology.commodities[c], c) = 0.0;
  return D;
}

Matrix distance_relax_step(const Matrix& D, const Topology& topology) {
  Matrix next = D;
  for (int c = 0; c < static_cast<int>(D.cols()); ++c) {
    for (int i = 0; i < topology.n; ++i) {
      double best = kInf;
      for (int j : topology.out_neighbors[i]) best = std::min(best, D(j, c));
      if (best < kInf) next(i, c) = std::min(D(i, c), 1.0 + best);
    }
  }
  return next;
}

Matrix relax_to_fixed_point(Matrix D, const Topology& topology) {
  for (int sweep = 0; sweep < topology.n; ++sweep) {
    Matrix next = distance_relax_step(D, topology);
    if (next == D) break;
    D = std::move(next);
  }
  return D;
}

Matrix bp_backlog(const Matrix& Q, const Topology& topology) {
  Matrix U = Q;
  zero_commodity_entries(U, topology);
  return U;
}

Matrix sp_backlog(const Matrix& Q, const Matrix& D, double sp_weight,
                  const Topology& topology) {
  if (!(sp_weight > 0.0)) throw std::invalid_argument("sp_weight must be positive");
  const double n = static_cast<double>(topology.n);
  Matrix U = Q;
  for (int c = 0; c < static_cast<int>(D.cols()); ++c)
    for (int i = 0; i < topology.n; ++i)
      U(i, c) += sp_weight * (std::isinf(D(i, c)) ? n : D(i, c));
  zero_commodity_entries(U, topology);
  return U;
}

Matrix qsp_value_iteration_step(const Matrix& U_prev, const Matrix& Q,
                                const Topology& topology) {
  const int m = topology.commodity_count();
  const double q_cap = std::max(1.0, Q.size() > 0 ? Q.maxCoeff() : 1.0);
  const double fallback = topology.n * q_cap;
  Matrix U = Matrix::Zero(topology.n, m);
  for (int c = 0; c < m; ++c) {
    const int dest = topology.commodities[c];
    for (int i = 0; i < topology.n; ++i) {
      if (i == dest) continue;
      double best = kInf;
      for (int j : topology.out_neighbors[i]) best = std::min(best, U_prev(j, c));
      U(i, c) = Q(i, c) + (std::isinf(best) ? fallback : best);
    }
  }
  return U;
}

Matrix clamp_backlog(const Matrix& U, const Matrix& Q, double B,
                     const Topology& topology) {
  if (B < 0.0) throw std::invalid_argument("clamp bound B must be non-negative");
  const Matrix lower = (Q.array() - B).matrix();
  const Matrix upper = (Q.array() + B).matrix();
  Matrix out = U.cwiseMax(lower).cwiseMin(upper);
  zero_commodity_entries(out, topology);
  return out;
}

bool verify_backlog_bound(const Matrix& U, const Matrix& Q, double B) {
  return (U - Q).cwiseAbs().maxCoeff() <= B + 1e-12;
}

}  // namespace dppsim
