#include "ddrhc/centralized.hpp"
#include "ddrhc/verification.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace ddrhc;

TEST_SUITE_BEGIN("centralized");

namespace {

Network scalar_network(double a, double b, double h, double q, double r) {
  Network net;
  net.topology = verify::chain_topology(1);
  AgentModel m;
  m.state_dim = 1;
  m.input_dim = 1;
  m.A = [a](int) { return Mat::Constant(1, 1, a); };
  m.B = [b](int) { return Mat::Constant(1, 1, b); };
  m.H = [h](int, int) { return Mat::Constant(1, 1, h); };
  m.Q = [q](int) { return Mat::Constant(1, 1, q); };
  m.R = [r](int) { return Mat::Constant(1, 1, r); };
  net.agents.push_back(m);
  return net;
}

}  // namespace

TEST_CASE("zero input channel yields zero gains") {
  const Network net = scalar_network(0.9, 0.0, 1.0, 1.0, 1.0);
  const CentralizedResult res = synthesize_window(net, 0, 1);
  CHECK((*res.gains.find(0, 0, 0))(0, 0) == 0.0);
}

TEST_CASE("all-ones pattern reproduces the textbook finite-horizon LQR") {
  for (uint64_t seed = 0; seed < 8; ++seed) {
    const Network net = verify::random_network(verify::all_to_all_topology(3), 100 + seed);
    const CentralizedResult res = synthesize_window(net, 0, 12);
    const GainSchedule ref = verify::reference_lqr(net, 0, 12);
    const auto uo = net.input_offsets(), xo = net.state_offsets();
    for (int tau = 0; tau < 12; ++tau) {
      const Mat K = res.gains.dense(tau, uo, xo);
      const Mat Kr = ref.dense(tau, uo, xo);
      CHECK((K - Kr).norm() / Kr.norm() <= 1e-10);
    }
  }
}

TEST_CASE("gain blocks outside the pattern are absent") {
  const Topology topo = verify::chain_topology(4);
  const Network net = verify::random_network(topo, 11);
  const CentralizedResult res = synthesize_window(net, 0, 6);
  CHECK(res.gains.respects(topo));
  CHECK(res.gains.find(0, 3, 2) == nullptr);
  CHECK(res.gains.find(3, 2, 2) != nullptr);  // 2 in D-_3
}

TEST_CASE("cost-to-go stays symmetric") {
  const Network net = verify::random_network(verify::random_topology(4, 9), 12);
  const CentralizedResult res = synthesize_window(net, 0, 15);
  for (const Mat& P : res.cost_to_go.P)
    CHECK((P - P.transpose()).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("evaluate_cost worked examples") {
  SUBCASE("zero state costs nothing") {
    const Network net = verify::random_network(verify::chain_topology(2), 13);
    const CentralizedResult res = synthesize_window(net, 0, 5);
    CHECK(evaluate_cost(net, res.gains, Vec::Zero(net.global_state_dim())) == 0.0);
  }
  SUBCASE("scalar open-loop sum: J = 3 x0^2") {
    const Network net = scalar_network(1.0, 1.0, 1.0, 1.0, 1.0);
    GainSchedule zero(0, 2, 2);  // K = 0 everywhere
    const Vec x0 = Vec::Constant(1, 1.7);
    CHECK(evaluate_cost(net, zero, x0) == doctest::Approx(3.0 * 1.7 * 1.7).epsilon(1e-12));
  }
}

TEST_CASE("cost identity holds for arbitrary sparse gains") {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    const int N = 2 + static_cast<int>(verify::mix64(seed) % 5);
    const int H = 3 + static_cast<int>(verify::mix64(seed ^ 1) % 18);
    const Network net = verify::random_network(verify::random_topology(N, seed), 40 + seed);
    const GainSchedule gains = verify::random_sparse_gains(net, 0, H, 60 + seed);
    const CostToGo ctg = propagate_cost(net, gains);
    const Vec x0 = verify::seeded_matrix(80 + seed, 1, net.global_state_dim(), 1);
    const double J = evaluate_cost(net, gains, x0);
    CHECK(std::abs(J - x0.dot(ctg.at(0) * x0)) <= 1e-9 * std::max(std::abs(J), 1e-9));
    // The identity holds from any tau: check the tail cost at mid-window.
    const int mid = H / 2;
    Vec x = x0;
    double tail = 0.0;
    for (int tau = 0; tau < H; ++tau) {
      const GlobalMatrices g = assemble_global(net, tau);
      const Mat K = gains.dense(tau, g.u_off, g.x_off);
      const Vec z = g.H * x, u = -K * x;
      if (tau >= mid) tail += z.dot(g.Q * z) + u.dot(g.R * u);
      x = g.A * x + g.B * u;
    }
    const GlobalMatrices gT = assemble_global(net, H);
    const Vec zT = gT.H * x;
    tail += zT.dot(gT.Q * zT);
    Vec xmid = x0;
    for (int tau = 0; tau < mid; ++tau) {
      const GlobalMatrices g = assemble_global(net, tau);
      xmid = (g.A - g.B * gains.dense(tau, g.u_off, g.x_off)) * xmid;
    }
    CHECK(std::abs(tail - xmid.dot(ctg.at(mid) * xmid)) <=
          1e-9 * std::max(std::abs(tail), 1e-9));
  }
}

TEST_CASE("closed_loop_rollout") {
  const Network net = verify::random_network(verify::chain_topology(3), 21);
  SUBCASE("zero gains propagate open loop by A alone") {
    GainSchedule zero(0, 4, 4);
    const Vec x0 = verify::seeded_matrix(5, 5, net.global_state_dim(), 1);
    const Rollout r = closed_loop_rollout(net, zero, x0, 4);
    Vec x = x0;
    for (int tau = 0; tau < 4; ++tau) x = assemble_global(net, tau).A * x;
    CHECK(r.x.back().isApprox(x, 1e-14));
    for (const Vec& u : r.u) CHECK(u.isZero(0.0));
  }
  SUBCASE("zero initial state stays zero") {
    const CentralizedResult res = synthesize_window(net, 0, 5);
    const Rollout r = closed_loop_rollout(net, res.gains, Vec::Zero(net.global_state_dim()), 5);
    for (const Vec& x : r.x) CHECK(x.isZero(0.0));
  }
  SUBCASE("missing step raises a scheduling error") {
    const CentralizedResult res = synthesize_window(net, 0, 3);
    CHECK_THROWS_AS(
        closed_loop_rollout(net, res.gains, Vec::Ones(net.global_state_dim()), 4),
        SchedulingError);
  }
}

TEST_CASE("weight validation rejects indefinite R") {
  Network net = verify::random_network(verify::chain_topology(2), 23);
  const int m = net.agents[1].input_dim;
  net.agents[1].R = [m](int) { return Mat(-Mat::Identity(m, m)); };
  CHECK_THROWS_AS(synthesize_window(net, 0, 3), ValidationError);
}

TEST_SUITE_END();
