// Metric operator of H = [[0, 1], [x^2, 0]] and its Hermitian counterpart, plus the
// exceptional point at x = 0.
#include <iostream>
#include <vector>

#include "specsing/specsing.hpp"

using namespace specsing;

int main() {
  const double x = 2.0;
  const Matrix h = two_level_hamiltonian(x);
  const BiorthSystem sys = biorth_with_right(h, two_level_right_eigenvectors(x));
  const MetricOperator mo = metric(sys);
  const Hermitized herm = hermitize(h, mo);
  std::cout << "eigenvalues:\n" << sys.eigenvalues.transpose() << "\n";
  std::cout << "eta_+:\n" << mo.eta << "\n";
  std::cout << "h = rho H rho^-1:\n" << herm.h << "\n";
  std::cout << "intertwining residual: " << intertwine_residual(h, mo) << "\n";

  std::vector<double> ts;
  for (int i = 0; i <= 40; ++i) ts.push_back(-1.0 + 0.05 * i);
  const auto scan = exceptional_scan(two_level_hamiltonian, ts);
  for (const auto& ep : scan.exceptional)
    std::cout << "exceptional point at x = " << ep.t << " (algebraic " << ep.algebraic << ", geometric "
              << ep.geometric << ")\n";
}
