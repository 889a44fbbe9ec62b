// Output-degree distributions for the rateless code, including the
// low-SNR-optimized distribution used throughout the simulations and the
// asymptotic density it approximates.
#pragma once

#include <string>
#include <vector>

#include "mma/rng.hpp"

namespace mma {

// Omega(x) = sum_d Omega_d x^d.  coefficient(d) is the probability of
// degree d; entries for absent degrees are zero.
class DegreeDistribution {
 public:
  DegreeDistribution() = default;
  // pairs of (degree, probability); must sum to 1 within 1e-9.
  DegreeDistribution(std::vector<std::pair<int, double>> terms);

  int max_degree() const { return max_degree_; }
  double coefficient(int degree) const;
  const std::vector<std::pair<int, double>>& terms() const { return terms_; }

  double mean_degree() const;

  int sample(RandomStream& rng) const;

 private:
  std::vector<std::pair<int, double>> terms_;
  std::vector<double> cumulative_;
  int max_degree_ = 0;
};

// The 15-term distribution with maximum degree 300 optimized for the low
// SNR regime; used by every device.
DegreeDistribution paper_degree_distribution();

int sample_degree(const DegreeDistribution& dd, RandomStream& rng);

// Plain-text "degree coefficient" lines.
std::string degree_distribution_to_text(const DegreeDistribution& dd);
DegreeDistribution degree_distribution_from_text(const std::string& text);
DegreeDistribution load_degree_distribution(const std::string& path);
void save_degree_distribution(const DegreeDistribution& dd,
                              const std::string& path);

// phi(x) = E[tanh(U/2)] with U ~ N(x, 2x); strictly increasing from 0 to 1.
// Evaluated by quadrature.
double phi(double x);

// Inverse of phi on (0, 1) by bisection.
double phi_inverse(double y);

// Cumulative asymptotic degree density
//   F(x) = 1/(4 ln 2) * integral_0^x phi^{-1}(t) dt,  x in [0, 1],
// discretized on a grid.  mass = F(grid.back()); normalized_increments sum
// to one and approximate the density over grid cells.
struct AsymptoticDegreeDensity {
  std::vector<double> grid;
  std::vector<double> cumulative;
  std::vector<double> normalized_increments;
  double mass = 0.0;
};

AsymptoticDegreeDensity asymptotic_degree_density(
    const std::vector<double>& grid);

}  // namespace mma
