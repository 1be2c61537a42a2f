#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geostat/errors.hpp"
#include "geostat/fields.hpp"
#include "geostat/special.hpp"

// Covariance and correlation families behind the competition generators:
// stationary Matérn, the kernel-mixture nonstationary Matérn, the Gneiting
// non-separable space-time class, and the parsimonious/flexible bivariate
// Matérn, plus the deterministic mean surfaces and effective-range search.
// Distances are Euclidean on the unit square throughout.

namespace geostat {

// ---------------------------------------------------------------------------
// Stationary Matérn

struct MaternParams {
  double sigma2 = 1.0;      // marginal variance
  double range = 0.1;       // same units as distance
  double smoothness = 1.0;  // nu
  double nugget = 0.0;      // tau^2

  void validate() const {
    if (!(sigma2 > 0.0) || !(range > 0.0) || !(smoothness > 0.0) || !(nugget >= 0.0))
      throw DomainError("MaternParams: need sigma2, range, smoothness > 0 and nugget >= 0");
  }
};

// sigma^2 M_nu(h / a) + tau^2 1[h = 0].
inline double stationary_matern_cov(const MaternParams& p, double h) {
  p.validate();
  if (!(h >= 0.0)) throw DomainError("stationary_matern_cov: negative distance");
  double c = p.sigma2 * matern_correlation(p.smoothness, h / p.range);
  if (h == 0.0) c += p.nugget;
  return c;
}

// ---------------------------------------------------------------------------
// Gneiting non-separable space-time covariance
//
//   C(h,u) = sigma^2 / psi(u) * M_nu( (h/a_s) / psi(u)^{beta/2} ),
//   psi(u) = a_t |u|^{2 alpha} + 1.

struct GneitingParams {
  double sigma2 = 1.0;
  double a_s = 0.1;   // spatial range
  double a_t = 1.0;   // temporal range
  double alpha = 1.0; // temporal smoothness, in (0,1]
  double beta = 1.0;  // space-time interaction, in (0,1]
  double smoothness = 1.0;

  void validate() const {
    if (!(sigma2 > 0.0) || !(a_s > 0.0) || !(a_t > 0.0) || !(smoothness > 0.0) ||
        !(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0))
      throw DomainError("GneitingParams: parameter outside its admissible range");
  }
};

inline double gneiting_cov(const GneitingParams& p, double h, double u) {
  p.validate();
  if (!(h >= 0.0)) throw DomainError("gneiting_cov: negative distance");
  u = std::abs(u);
  // psi == 1 exactly at u = 0, so the pure-spatial reduction is bit-identical.
  const double psi = (u == 0.0) ? 1.0 : p.a_t * std::pow(u, 2.0 * p.alpha) + 1.0;
  const double arg = (h / p.a_s) / ((psi == 1.0) ? 1.0 : std::pow(psi, 0.5 * p.beta));
  return p.sigma2 / psi * matern_correlation(p.smoothness, arg);
}

// ---------------------------------------------------------------------------
// Nonstationary Matérn (kernel-mixture construction)

struct ReferenceSite {
  Point site;          // in [0,1]^2
  double sigma = 1.0;  // standard deviation at the site
  double lambda1 = 0.1;
  double lambda2 = 0.1;  // eigenvalue ranges of the kernel matrix

  void validate() const {
    if (!(sigma > 0.0) || !(lambda1 > 0.0) || !(lambda2 > 0.0))
      throw DomainError("ReferenceSite: sigma and eigenvalues must be positive");
    if (!(site.x >= -1e-12 && site.x <= 1.0 + 1e-12 && site.y >= -1e-12 &&
          site.y <= 1.0 + 1e-12))
      throw DomainError("ReferenceSite: location outside the unit square");
  }
};

struct NonstatMaternModel {
  std::vector<ReferenceSite> sites;
  double bandwidth = 0.09;  // h; the Gaussian kernel exponent uses 2h exactly
  double rotation = 0.0;    // phi in [0, pi/2]
  double smoothness = 1.0;  // nu
  double nugget = 0.0;      // tau^2

  void validate() const {
    if (sites.empty()) throw DomainError("NonstatMaternModel: need at least one site");
    for (const auto& s : sites) s.validate();
    if (!(bandwidth > 0.0) || !(smoothness > 0.0) || !(nugget >= 0.0) ||
        !(rotation >= 0.0 && rotation <= M_PI / 2.0 + 1e-12))
      throw DomainError("NonstatMaternModel: parameter outside its admissible range");
  }
};

// Normalized Gaussian-kernel weights w(s, s~_k) = K(s, s~_k) / sum_k K(s, s~_k)
// with K = exp{-||s - s~_k||^2 / (2h)}.
inline std::vector<double> nonstat_weights(const NonstatMaternModel& m, Point s) {
  std::vector<double> w(m.sites.size());
  double total = 0.0;
  for (std::size_t k = 0; k < m.sites.size(); ++k) {
    const double dx = s.x - m.sites[k].site.x;
    const double dy = s.y - m.sites[k].site.y;
    w[k] = std::exp(-(dx * dx + dy * dy) / (2.0 * m.bandwidth));
    total += w[k];
  }
  for (double& v : w) v /= total;
  return w;
}

// Weight-mixed local parameters. The kernel matrix is the spectral form
// R(phi) diag(lambda1, lambda2) R(phi)^T, stored by its three distinct
// entries.
struct LocalParams {
  double sigma = 0.0;
  double k11 = 0.0, k12 = 0.0, k22 = 0.0;

  double det() const { return k11 * k22 - k12 * k12; }
};

inline LocalParams local_params(const NonstatMaternModel& m, Point s) {
  const auto w = nonstat_weights(m, s);
  double sigma = 0.0, lam1 = 0.0, lam2 = 0.0;
  for (std::size_t k = 0; k < m.sites.size(); ++k) {
    sigma += w[k] * m.sites[k].sigma;
    lam1 += w[k] * m.sites[k].lambda1;
    lam2 += w[k] * m.sites[k].lambda2;
  }
  const double c = std::cos(m.rotation), sn = std::sin(m.rotation);
  LocalParams out;
  out.sigma = sigma;
  out.k11 = c * c * lam1 + sn * sn * lam2;
  out.k22 = sn * sn * lam1 + c * c * lam2;
  out.k12 = c * sn * (lam1 - lam2);
  return out;
}

// Pair value from precomputed local parameters:
//   sigma_i sigma_j |K_i|^{1/4} |K_j|^{1/4} |(K_i+K_j)/2|^{-1/2} M_nu(2 sqrt(nu Q)),
// Q the squared Mahalanobis distance under the averaged kernel matrix.
inline double nonstat_pair_cov(const LocalParams& a, const LocalParams& b, Point si,
                               Point sj, double smoothness) {
  const double m11 = 0.5 * (a.k11 + b.k11);
  const double m12 = 0.5 * (a.k12 + b.k12);
  const double m22 = 0.5 * (a.k22 + b.k22);
  const double det_avg = m11 * m22 - m12 * m12;
  const double dx = si.x - sj.x;
  const double dy = si.y - sj.y;
  // closed 2x2 inverse for the quadratic form
  const double q = (m22 * dx * dx - 2.0 * m12 * dx * dy + m11 * dy * dy) / det_avg;
  const double prefactor = a.sigma * b.sigma * std::pow(a.det(), 0.25) *
                           std::pow(b.det(), 0.25) / std::sqrt(det_avg);
  const double r = 2.0 * std::sqrt(smoothness * std::max(q, 0.0));
  return prefactor * matern_correlation(smoothness, r);
}

// Nugget-free nonstationary Matérn value; matrix assembly adds the nugget on
// the diagonal by row index.
inline double nonstat_matern_cov_smooth(const NonstatMaternModel& m, Point si, Point sj) {
  return nonstat_pair_cov(local_params(m, si), local_params(m, sj), si, sj, m.smoothness);
}

// Full kernel value: tau^2 1[s_i == s_j] plus the smooth part.
inline double nonstat_matern_cov(const NonstatMaternModel& m, Point si, Point sj) {
  m.validate();
  double c = nonstat_matern_cov_smooth(m, si, sj);
  if (si.x == sj.x && si.y == sj.y) c += m.nugget;
  return c;
}

// ---------------------------------------------------------------------------
// Bivariate Matérn (parsimonious and flexible)

// Collocated cross-correlation for the parsimonious model in d = 2:
//   rho_12 = beta_12 sqrt(Γ(nu11+1)/Γ(nu11)) sqrt(Γ(nu22+1)/Γ(nu22))
//            Γ((nu11+nu22)/2) / Γ((nu11+nu22)/2 + 1),
// which simplifies to beta_12 sqrt(nu11 nu22) / ((nu11+nu22)/2).
inline double parsimonious_rho(double nu11, double nu22, double beta12) {
  if (!(nu11 > 0.0) || !(nu22 > 0.0))
    throw DomainError("parsimonious_rho: smoothness must be positive");
  const double g1 = std::tgamma(nu11 + 1.0) / std::tgamma(nu11);
  const double g2 = std::tgamma(nu22 + 1.0) / std::tgamma(nu22);
  const double mid = 0.5 * (nu11 + nu22);
  return beta12 * std::sqrt(g1) * std::sqrt(g2) * std::tgamma(mid) / std::tgamma(mid + 1.0);
}

struct BivariateMaternParams {
  enum class Flavor { Parsimonious, Flexible };
  Flavor flavor = Flavor::Parsimonious;
  double sigma11_sq = 1.0;  // marginal variances; sigma_ii below is the sqrt
  double sigma22_sq = 1.0;
  double beta12 = 0.0;  // in (-1,1)
  double nu11 = 1.0;
  double nu22 = 1.0;
  double a11 = 0.1;
  double a22 = 0.1;
  double taubar = 0.0;  // flexible only; cross-range interpolation weight

  void validate() const {
    if (!(sigma11_sq > 0.0) || !(sigma22_sq > 0.0) || !(nu11 > 0.0) || !(nu22 > 0.0) ||
        !(a11 > 0.0) || !(a22 > 0.0) || !(taubar >= 0.0))
      throw DomainError("BivariateMaternParams: parameter outside its admissible range");
    if (!(beta12 > -1.0 && beta12 < 1.0))
      throw DomainError("BivariateMaternParams: beta12 must lie in (-1,1)");
    if (flavor == Flavor::Parsimonious && a11 != a22)
      throw DomainError("BivariateMaternParams: parsimonious model needs a11 == a22");
  }

  double cross_range() const {
    if (flavor == Flavor::Parsimonious) return a11;
    const double a12_sq =
        0.5 * (a11 * a11 + a22 * a22) + taubar * (a11 - a22) * (a11 - a22);
    return std::sqrt(a12_sq);
  }
};

// C_ij(h) = rho_ij sigma_ii sigma_jj M_{nu_ij}(h / a_ij) with rho_ii = 1,
// nu_12 = (nu11 + nu22)/2 and the flavor's cross range.
inline double bivariate_matern_cov(const BivariateMaternParams& p, double h, int i, int j) {
  p.validate();
  if ((i != 1 && i != 2) || (j != 1 && j != 2))
    throw VariableIndexOutOfRange("bivariate_matern_cov: variable index must be 1 or 2");
  if (!(h >= 0.0)) throw DomainError("bivariate_matern_cov: negative distance");
  if (i == j) {
    const double var = (i == 1) ? p.sigma11_sq : p.sigma22_sq;
    const double nu = (i == 1) ? p.nu11 : p.nu22;
    const double a = (i == 1) ? p.a11 : p.a22;
    return var * matern_correlation(nu, h / a);
  }
  const double rho = parsimonious_rho(p.nu11, p.nu22, p.beta12);
  const double sig = std::sqrt(p.sigma11_sq) * std::sqrt(p.sigma22_sq);
  return rho * sig * matern_correlation(0.5 * (p.nu11 + p.nu22), h / p.cross_range());
}

// ---------------------------------------------------------------------------
// Deterministic mean surfaces

struct MeanSurface {
  enum class Kind { Zero, Mean1a, Mean1b };
  Kind kind = Kind::Zero;
};

inline double mean_surface_eval(const MeanSurface& m, Point s) {
  switch (m.kind) {
    case MeanSurface::Kind::Zero:
      return 0.0;
    case MeanSurface::Kind::Mean1a: {
      const double t = 0.5 * (s.x + s.y) - 0.9;
      const double t3 = t * t * t;
      return 5.0 * std::sin(30.0 * t3) * std::cos(20.0 * t3 * t) +
             0.5 * std::exp(std::sin(30.0 * s.x) + std::sin(13.0 * s.y)) +
             0.5 * (0.5 * (s.x + s.y) - 0.2);
    }
    case MeanSurface::Kind::Mean1b: {
      const double u = 0.5 * (s.x + s.y);
      const double v = u - 1.2;
      const double v2 = v * v;
      return 3.0 * std::sin(20.0 * (u + 1.9)) * std::cos(20.0 * v2 * v2 * v2) +
             0.6 * std::exp(std::sin(25.0 * s.x) + std::sin(13.0 * s.y)) +
             0.5 * (u - 0.2);
    }
  }
  return 0.0;
}

inline std::string to_string(MeanSurface::Kind k) {
  switch (k) {
    case MeanSurface::Kind::Zero: return "zero";
    case MeanSurface::Kind::Mean1a: return "mean_1a";
    case MeanSurface::Kind::Mean1b: return "mean_1b";
  }
  return "?";
}

inline MeanSurface::Kind mean_surface_from_string(const std::string& name) {
  if (name == "zero") return MeanSurface::Kind::Zero;
  if (name == "mean_1a") return MeanSurface::Kind::Mean1a;
  if (name == "mean_1b") return MeanSurface::Kind::Mean1b;
  throw ParseError("unknown mean surface '" + name + "'");
}

// ---------------------------------------------------------------------------
// Effective range: the distance at which a monotone non-increasing
// correlation falls to the threshold (0.05 reproduces every finite EffRange
// table entry). nullopt means the correlation stays above the threshold over
// the whole bracket, the tables' "infinite" case.

inline std::optional<double> effective_range(const std::function<double(double)>& correlation,
                                             double lo, double hi,
                                             double threshold = 0.05) {
  if (!(lo >= 0.0) || !(hi > lo)) throw BadBracket("effective_range: need 0 <= lo < hi");
  if (!(correlation(lo) > threshold))
    throw BadBracket("effective_range: correlation(lo) must exceed the threshold");
  if (correlation(hi) > threshold) return std::nullopt;
  double a = lo, b = hi;
  while (b - a > 1e-6) {
    const double mid = 0.5 * (a + b);
    if (correlation(mid) > threshold)
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

}  // namespace geostat
