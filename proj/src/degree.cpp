#include "mma/degree.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mma {

DegreeDistribution::DegreeDistribution(
    std::vector<std::pair<int, double>> terms)
    : terms_(std::move(terms)) {
  std::sort(terms_.begin(), terms_.end());
  double sum = 0.0;
  for (const auto& [d, p] : terms_) {
    if (d < 1) throw std::invalid_argument("degree < 1");
    if (p < 0.0) throw std::invalid_argument("negative degree probability");
    sum += p;
    max_degree_ = std::max(max_degree_, d);
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("degree probabilities must sum to 1");
  }
  cumulative_.reserve(terms_.size());
  double acc = 0.0;
  for (const auto& [d, p] : terms_) {
    acc += p;
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
}

double DegreeDistribution::coefficient(int degree) const {
  for (const auto& [d, p] : terms_) {
    if (d == degree) return p;
  }
  return 0.0;
}

double DegreeDistribution::mean_degree() const {
  double m = 0.0;
  for (const auto& [d, p] : terms_) m += d * p;
  return m;
}

int DegreeDistribution::sample(RandomStream& rng) const {
  double u = rng.uniform();
  for (std::size_t i = 0; i < cumulative_.size(); ++i) {
    if (u < cumulative_[i]) return terms_[i].first;
  }
  return terms_.back().first;
}

DegreeDistribution paper_degree_distribution() {
  return DegreeDistribution({{1, 0.0174},
                             {2, 0.3488},
                             {3, 0.2309},
                             {4, 0.0695},
                             {5, 0.0873},
                             {6, 0.0002},
                             {7, 0.0805},
                             {8, 0.0004},
                             {11, 0.0191},
                             {12, 0.0518},
                             {23, 0.0123},
                             {24, 0.0310},
                             {59, 0.0220},
                             {60, 0.0020},
                             {300, 0.0268}});
}

int sample_degree(const DegreeDistribution& dd, RandomStream& rng) {
  return dd.sample(rng);
}

std::string degree_distribution_to_text(const DegreeDistribution& dd) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& [d, p] : dd.terms()) out << d << " " << p << "\n";
  return out.str();
}

DegreeDistribution degree_distribution_from_text(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::pair<int, double>> terms;
  int d;
  double p;
  while (in >> d >> p) terms.emplace_back(d, p);
  if (terms.empty()) throw std::invalid_argument("empty degree distribution");
  return DegreeDistribution(std::move(terms));
}

DegreeDistribution load_degree_distribution(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return degree_distribution_from_text(buf.str());
}

void save_degree_distribution(const DegreeDistribution& dd,
                              const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << degree_distribution_to_text(dd);
}

double phi(double x) {
  if (x <= 0.0) throw std::invalid_argument("phi: x must be > 0");
  // E[tanh(U/2)], U ~ N(x, 2x).  Substituting u = x + 2 sqrt(x) t gives
  // (1/sqrt(pi)) * integral tanh((x + 2 sqrt(x) t)/2) exp(-t^2) dt,
  // integrated by Simpson's rule over |t| <= 8.
  const int steps = 800;  // even
  const double lo = -8.0, hi = 8.0;
  const double h = (hi - lo) / steps;
  const double s = 2.0 * std::sqrt(x);
  auto f = [&](double t) {
    return std::tanh(0.5 * (x + s * t)) * std::exp(-t * t);
  };
  double acc = f(lo) + f(hi);
  for (int i = 1; i < steps; ++i) {
    acc += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return acc * h / 3.0 / std::sqrt(3.141592653589793238462643383279502884);
}

double phi_inverse(double y) {
  if (y <= 0.0 || y >= 1.0) {
    throw std::invalid_argument("phi_inverse: y must be in (0, 1)");
  }
  double lo = 1e-12, hi = 1.0;
  while (phi(hi) < y) {
    hi *= 2.0;
    if (hi > 1e6) throw std::runtime_error("phi_inverse: no bracket");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * (1.0 + hi); ++it) {
    double mid = 0.5 * (lo + hi);
    (phi(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

AsymptoticDegreeDensity asymptotic_degree_density(
    const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= 0.0 || grid[i] > 1.0 ||
        (i > 0 && grid[i] <= grid[i - 1])) {
      throw std::invalid_argument("grid must be increasing in (0, 1]");
    }
  }
  const double scale = 1.0 / (4.0 * std::log(2.0));
  AsymptoticDegreeDensity out;
  out.grid = grid;
  out.cumulative.resize(grid.size());

  // Trapezoidal accumulation of phi^{-1} from 0; phi^{-1}(t) -> 0 as t -> 0.
  double prev_x = 0.0, prev_f = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double x = grid[i];
    // Clamp away from 1 where the inverse diverges (integrably).
    double f = phi_inverse(std::min(x, 1.0 - 1e-9));
    acc += 0.5 * (f + prev_f) * (x - prev_x);
    out.cumulative[i] = scale * acc;
    prev_x = x;
    prev_f = f;
  }
  out.mass = out.cumulative.back();
  out.normalized_increments.resize(grid.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.normalized_increments[i] = (out.cumulative[i] - prev) / out.mass;
    prev = out.cumulative[i];
  }
  return out;
}

}  // namespace mma
