#pragma once

#include <array>
#include <span>
#include <vector>

#include "marchenko/measure.hpp"

namespace marchenko {

enum class Side { plus, minus };
enum class Branch { upper, lower };

// F(lam) = -sigma_{-1} + (1 - sigma_{-2}) lam + int dsigma/(t - lam).
cplx f_discrete(const Measure& sigma, cplx lam);

// F(lam) = lam + int dsigma/(t - lam).
cplx f_continuous(const Measure& sigma, cplx lam);

// Conformal coordinate: -lam - 1/lam (jacobi) or -lam^2 (schrodinger).
cplx phi(const Setting& setting, cplx lam);

// Preimage of z under phi. The upper branch is |lam| < 1 (jacobi) or the
// second quadrant (schrodinger); the lower branch is the other preimage.
// Real z is ambiguous.
cplx phi_inv(const Setting& setting, cplx z, Branch branch);

// Limit of phi_inv(x + i eps, upper) as eps decreases to 0.
cplx phi_inv_boundary(const Setting& setting, double x);

// F together with the moments it needs, for repeated evaluation.
class FFunction {
 public:
  FFunction(Measure sigma, const Setting& setting);

  cplx operator()(cplx lam) const;

  // m_+(z) = F(lam_upper), m_-(z) = -conj(F(conj(lam_lower))), for Im z >= 0.
  // Real z is read as the boundary value from the upper half plane.
  cplx m(cplx z, Side side) const;

  // h(lam), the factored form of m_+(phi(lam)) + m_-(phi(lam)).
  cplx h(cplx lam) const;

  const Measure& sigma() const { return sigma_; }
  const Setting& setting() const { return setting_; }
  double sigma_m1() const { return sigma_m1_; }
  double sigma_m2() const { return sigma_m2_; }

 private:
  Measure sigma_;
  Setting setting_;
  double sigma_m1_ = 0.0;
  double sigma_m2_ = 0.0;
};

cplx m_value(const Measure& sigma, const Setting& setting, cplx z, Side side);
cplx h_fn(const Measure& sigma, const Setting& setting, cplx lam);

struct AdmissibilitySample {
  double parameter = 0.0;
  double value = 0.0;
};

struct AdmissibilityReport {
  bool passed = false;
  double min_value = 0.0;
  double argmin = 0.0;
  // The discrete scan cannot rule out an unresolved interior minimum.
  bool heuristic = false;
  std::vector<AdmissibilitySample> samples;
};

// B(E) = 1 - sigma_{-2} + int dsigma/(t^2 + E t + 1) for |E| > 2.
double boundary_function(const Measure& sigma, double E);

// Scan of B over |E| > R on both rays, parametrized by E = -/+(s + 1/s).
AdmissibilityReport admissible_discrete(const Measure& sigma, const Setting& setting,
                                        int grid = 4096);

// The single value 1 + int dsigma/(t^2 - R^2).
AdmissibilityReport admissible_continuous(const Measure& sigma, const Setting& setting);

// Zeros of B on |E| > 2, ascending. These are the eigenvalues of the
// reconstructed operator outside [-2, 2].
std::vector<double> boundary_roots(const Measure& sigma);

// One constant piece of a Krein function; a = -inf or b = +inf are allowed.
struct KreinStep {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
};

// C exp( int (1/(t - z) - t/(t^2 + 1)) xi(t) dt ) in closed form. Real z is
// read as the boundary value from the upper half plane.
cplx herglotz_exp(std::span<const KreinStep> xi, double C, cplx z);

inline constexpr std::array<double, 5> kDefaultEtas = {1e-3, 5e-4, 2.5e-4, 1.25e-4, 6.25e-5};

struct DensityEstimate {
  double value = 0.0;
  double error = 0.0;
};

// Density of the spectral measure of m_side at x, from Im m(x + i eta)/pi
// extrapolated to eta = 0.
DensityEstimate stieltjes_density(const FFunction& F, Side side, double x,
                                  std::span<const double> etas = kDefaultEtas,
                                  double tol = 1e-8);
DensityEstimate stieltjes_density(const Measure& sigma, const Setting& setting, Side side,
                                  double x, std::span<const double> etas = kDefaultEtas,
                                  double tol = 1e-8);

// max over the grid of |m_+(x + i eta) + conj(m_-(x + i eta))|.
double reflectionless_residual(const Measure& sigma, const Setting& setting,
                               std::span<const double> grid, double eta);

}  // namespace marchenko
