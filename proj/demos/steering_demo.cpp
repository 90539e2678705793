// Solve a classical bridge between two disks, then steer Euler-Maruyama
// paths with the optimal control and compare terminal moments to the target.
#include <cstdio>

#include "sbridge/schrodinger.hpp"
#include "sbridge/sinkhorn.hpp"

using namespace sbridge;

int main() {
  const double eps = 0.5;
  const LinearSystem sys = make_brownian(2, eps);
  Vector c0(2), c1(2);
  c0 << 0.0, 1.5;
  c1 << 1.5, 0.0;
  const DiscreteMeasure mu0 =
      discretize_support(make_ball(c0, 0.7), uniform_density(), 120, 1);
  const DiscreteMeasure mu1 =
      discretize_support(make_ball(c1, 0.7), uniform_density(), 120, 2);

  const BridgeSolution sol = sinkhorn_solve(log_kernel_matrix(eps, mu0, mu1), mu0, mu1, {});
  std::printf("converged in %d passes, final residual %.3g\n", sol.iterations,
              sol.history.back().residual_rho0);
  if (sol.kappa_hat) std::printf("empirical contraction: %.9g\n", *sol.kappa_hat);

  BridgeController controller(sys, sol.potentials, mu1);
  const int paths = 5000, steps = 300;
  const std::vector<int> draw = sample_atoms(mu0, paths, 3);
  Matrix x0(2, paths);
  for (int p = 0; p < paths; ++p) x0.col(p) = mu0.points.col(draw[p]);
  const SimulationResult sim = simulate_bridge(
      sys, [&](double t, const Matrix& x) { return controller.control(t, x); }, x0, steps,
      paths, 4);

  const Vector want = measure_mean(mu1), got = sim.terminal_mean();
  std::printf("terminal mean: got (%.4f, %.4f), target (%.4f, %.4f), excluded %d\n", got(0),
              got(1), want(0), want(1), sim.excluded);
  return 0;
}
