#pragma once

#include <string>

#include "dppsim/topology.hpp"
#include "dppsim/types.hpp"

namespace dppsim {

// Backlog functions U drive the routing weights W(i,j,c) = U(i,c) - U(j,c).
// All of them keep the destination entries at exactly zero.

enum class BacklogKind { bp, sp, qsp, qsp_clamped };

BacklogKind backlog_kind_from_name(const std::string& name);
std::string backlog_kind_name(BacklogKind kind);

// Hop-count distances to each commodity, infinity for unreachable pairs.
Matrix init_distances(const Topology& topology);

// One synchronous relaxation: D'(i,c) = min(D(i,c), 1 + min_{j in N_i} D(j,c)).
// Monotone non-increasing entrywise; reaches the BFS fixed point within
// diameter-many applications.
Matrix distance_relax_step(const Matrix& D, const Topology& topology);

// Repeated relaxation until the fixed point (at most n sweeps).
Matrix relax_to_fixed_point(Matrix D, const Topology& topology);

// U = Q.
Matrix bp_backlog(const Matrix& Q, const Topology& topology);

// U = Q + sp_weight * D with unreachable distances replaced by n.
Matrix sp_backlog(const Matrix& Q, const Matrix& D, double sp_weight,
                  const Topology& topology);

// One value-iteration sweep of the queue-biased shortest-path recursion
// U(i,c) = Q(i,c) + min_{j in N_i} U_prev(j,c), with current queues standing
// in for the expectation. Isolated nodes fall back to Q(i,c) + n * q_cap
// where q_cap = max(1, max Q entry).
Matrix qsp_value_iteration_step(const Matrix& U_prev, const Matrix& Q,
                                const Topology& topology);

// Entrywise clamp of U into [Q - B, Q + B]; guarantees the bound below.
Matrix clamp_backlog(const Matrix& U, const Matrix& Q, double B,
                     const Topology& topology);

// True iff max |U - Q| <= B + 1e-12.
bool verify_backlog_bound(const Matrix& U, const Matrix& Q, double B);

}  // namespace dppsim
