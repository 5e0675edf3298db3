#pragma once

#include "ddrhc/centralized.hpp"
#include "ddrhc/distributed.hpp"
#include "ddrhc/schedule.hpp"

#include <cstdint>
#include <string>

namespace ddrhc::verify {

// ---------------------------------------------------------------------------
// Deterministic instance generators (hash-seeded, storage-free LTV models).

uint64_t mix64(uint64_t x);
/// Matrix with uniform(-scale, scale) entries, a pure function of the key.
Mat seeded_matrix(uint64_t seed, uint64_t tag, int rows, int cols, double scale = 1.0);

Topology chain_topology(int n);
Topology ring_topology(int n);
Topology binary_tree_topology(int n);
Topology random_topology(int n, uint64_t seed, double edge_prob = 0.4);
Topology all_to_all_topology(int n);

// Source/sink orientations of the path, cycle, and balanced binary tree:
// even-indexed (even-depth) vertices feed their neighbors' outputs. These
// satisfy the exactness coverage condition; uniformly directed variants above
// do not (see exactness_coverage_holds).
Topology covered_chain(int n);
Topology covered_ring(int n);  // n must be even
Topology covered_tree(int n);

/// Brute-force enumeration of the coverage condition
/// forall i, p,q in D+_i : D+_p x D+_q subset-of psi_i at step k.
bool exactness_coverage_holds(const Topology& t, int k = 0);

/// Random heterogeneous LTV network on the given topology; dynamics are
/// contraction-scaled so window costs stay well conditioned.
Network random_network(const Topology& topo, uint64_t seed, int n_max = 3, int m_max = 2,
                       int o_max = 2);

/// Random sparse gain schedule on the pattern (arbitrary, not optimized).
GainSchedule random_sparse_gains(const Network& net, int k, int H, uint64_t seed,
                                 double scale = 0.3);

// ---------------------------------------------------------------------------
// Reference implementations kept independent of the synthesis path.

/// Textbook dense finite-horizon LQR: K = (B'PB+R)^{-1} B'PA with the
/// difference-form Riccati update.
GainSchedule reference_lqr(const Network& net, int k, int H);

// ---------------------------------------------------------------------------
// Verification checks (shared by the CLI `verify` subcommand and the tests).

struct CheckReport {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // worst observed deviation
  std::string detail;
};

CheckReport check_exactness(int seeds, int H, double tol);
CheckReport check_cost_identity(int seeds, double tol);
CheckReport check_lqr_equivalence(int seeds, double tol);
CheckReport check_scheduling_arithmetic();
CheckReport check_sparsity(bool inject_violation);

struct VerifyOptions {
  int exactness_seeds = 10;
  int cost_seeds = 25;
  int lqr_seeds = 10;
  bool inject_sparsity_violation = false;
};

std::vector<CheckReport> run_verification_suite(const VerifyOptions& opt);

}  // namespace ddrhc::verify
