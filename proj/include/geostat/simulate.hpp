#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geostat/fields.hpp"
#include "geostat/linalg.hpp"
#include "geostat/model.hpp"
#include "geostat/parallel.hpp"
#include "geostat/rng.hpp"

// Exact Gaussian random-field simulation Z = m + L e + tau eta, plus presets
// reproducing every published generator configuration at configurable scale.

namespace geostat {

// Exact simulation factors an n x n matrix, so it is capped; paper-scale
// million-point generation is out of scope (mean-plus-noise data excepted,
// which needs no factorization).
inline constexpr std::size_t kDefaultDenseCap = 20000;

// Full covariance matrix of the design: entry (i,j) is the pairwise kernel
// value, with the nugget on the diagonal only. Rows fill in parallel; entries
// are pure functions of (i,j), so the result is thread-count independent.
inline SymmetricMatrix build_covariance_matrix(const CovarianceModel& model,
                                               const Dataset& design) {
  validate(design);
  if (design.size() == 0) throw EmptyInput("build_covariance_matrix: empty design");
  const PairCovariance cov(model, design);
  const Eigen::Index n = Eigen::Index(design.size());
  Eigen::MatrixXd mat(n, n);
  parallel_for(std::size_t(n), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        mat(Eigen::Index(i), Eigen::Index(j)) = cov.full(i, j);
  });
  return SymmetricMatrix::from_lower(std::move(mat));
}

namespace detail {

inline Eigen::VectorXd standard_normals(std::size_t n, std::uint64_t seed,
                                        std::string_view purpose) {
  Rng rng(seed, purpose);
  Eigen::VectorXd v(Eigen::Index(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.next_normal();
  return v;
}

inline SymmetricMatrix build_smooth_covariance_matrix(const CovarianceModel& model,
                                                      const Dataset& design) {
  const PairCovariance cov(model, design);
  const Eigen::Index n = Eigen::Index(design.size());
  Eigen::MatrixXd mat(n, n);
  parallel_for(std::size_t(n), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        mat(Eigen::Index(i), Eigen::Index(j)) = cov.smooth(i, j);
  });
  return SymmetricMatrix::from_lower(std::move(mat));
}

}  // namespace detail

// Draws one realization on the design. The correlated part factors the
// nugget-free covariance; the nugget is added as independent noise, matching
// the field decomposition Z = m + Y + eps. Streams: "field" and "nugget".
inline Dataset sample_grf(const CovarianceModel& model, Dataset design, std::uint64_t seed,
                          std::size_t dense_cap = kDefaultDenseCap) {
  model_validate(model);
  require_kind(model, design, "sample_grf");
  validate(design);
  const std::size_t n = design.size();
  if (n == 0) throw EmptyInput("sample_grf: empty design");

  Eigen::VectorXd z = Eigen::VectorXd::Zero(Eigen::Index(n));
  if (!std::holds_alternative<MeanPlusNugget>(model)) {
    if (n > dense_cap)
      throw DenseCapExceeded("sample_grf: " + std::to_string(n) +
                             " rows exceed the dense cap of " + std::to_string(dense_cap));
    const CholeskyFactor factor =
        cholesky(detail::build_smooth_covariance_matrix(model, design));
    z = factor.lower() * detail::standard_normals(n, seed, "field");
  }
  const double nugget = model_nugget(model);
  if (nugget > 0.0) {
    const Eigen::VectorXd eta = detail::standard_normals(n, seed, "nugget");
    z += std::sqrt(nugget) * eta;
  }
  design.z.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    design.z[i] = model_mean(model, design.row(i)) + z[Eigen::Index(i)];

  for (const auto& [k, v] : model_to_kv(model)) design.metadata[k] = v;
  design.metadata["seed"] = std::to_string(seed);
  return design;
}

// ---------------------------------------------------------------------------
// Presets: the published generator configurations.

struct DesignRecipe {
  enum class Kind { Grid, Uniform };
  Kind kind = Kind::Uniform;
  std::size_t n = 100;  // grid: total points (side = round(sqrt(n))); uniform:
                        // point count; bivariate: distinct locations
  int m_slots = 0;      // > 0 replicates the design over that many time slots
  bool bivariate = false;
  SplitScheme::Kind scheme = SplitScheme::Kind::Random10;
};

struct Preset {
  std::string name;
  CovarianceModel model;
  DesignRecipe design;
};

namespace detail {

inline NonstatMaternModel paper_nonstat_model() {
  NonstatMaternModel m;
  m.sites = {
      ReferenceSite{Point{0.25, 0.25}, 3.5, 0.03, 0.03},
      ReferenceSite{Point{0.25, 0.75}, 1.9, 0.07, 0.07},
      ReferenceSite{Point{0.75, 0.25}, 1.8, 0.10, 0.10},
      ReferenceSite{Point{0.75, 0.75}, 0.7, 0.30, 0.30},
  };
  m.bandwidth = 0.09;
  m.rotation = M_PI / 2.0;
  m.smoothness = 0.7;
  m.nugget = 0.3;
  return m;
}

inline GneitingParams st_params(double alpha, double a_s, double a_t) {
  GneitingParams p;
  p.sigma2 = 0.9;
  p.alpha = alpha;
  p.beta = 0.9;
  p.smoothness = 1.0;
  p.a_s = a_s;
  p.a_t = a_t;
  return p;
}

inline BivariateMaternParams bivariate_params(BivariateMaternParams::Flavor flavor,
                                              double nu11, double nu22, double a11,
                                              double a22) {
  BivariateMaternParams p;
  p.flavor = flavor;
  p.sigma11_sq = 0.9;
  p.sigma22_sq = 0.9;
  p.beta12 = 0.9;
  p.nu11 = nu11;
  p.nu22 = nu22;
  p.a11 = a11;
  p.a22 = a22;
  p.taubar = 0.0;
  return p;
}

}  // namespace detail

inline const std::vector<Preset>& preset_table() {
  static const std::vector<Preset> table = [] {
    std::vector<Preset> t;
    using DK = DesignRecipe::Kind;
    using SK = SplitScheme::Kind;
    using Flavor = BivariateMaternParams::Flavor;

    t.push_back({"1a-1", MeanPlusNugget{MeanSurface{MeanSurface::Kind::Mean1a}, 0.1},
                 DesignRecipe{DK::Grid, 100000, 0, false, SK::Random10}});
    t.push_back({"1b-1", MeanPlusNugget{MeanSurface{MeanSurface::Kind::Mean1b}, 0.3},
                 DesignRecipe{DK::Grid, 1000000, 0, false, SK::Random10}});
    t.push_back({"1a-2", detail::paper_nonstat_model(),
                 DesignRecipe{DK::Uniform, 100000, 0, false, SK::Random10}});
    t.push_back({"1b-2", detail::paper_nonstat_model(),
                 DesignRecipe{DK::Uniform, 1000000, 0, false, SK::Random10}});

    // Space-time grid of Table settings: three dependence regimes x three
    // missingness schemes, at 1K and 10K spatial locations, 100 slots.
    struct StRow {
      double alpha, a_s, a_t;
      SK scheme;
    };
    const StRow rows[] = {
        {0.6, 0.02, 1.0, SK::RS},   {0.6, 0.08, 0.24, SK::RS},  {0.08, 0.4, 1.0, SK::RS},
        {0.6, 0.02, 1.0, SK::RST},  {0.6, 0.08, 0.24, SK::RST}, {0.08, 0.4, 1.0, SK::RST},
        {0.6, 0.02, 1.0, SK::T10},  {0.6, 0.08, 0.24, SK::T10}, {0.08, 0.4, 1.0, SK::T10},
    };
    for (int i = 0; i < 18; ++i) {
      const StRow& r = rows[i % 9];
      const std::size_t n = (i < 9) ? 1000 : 10000;
      t.push_back({"ST" + std::to_string(i + 1),
                   detail::st_params(r.alpha, r.a_s, r.a_t),
                   DesignRecipe{DK::Uniform, n, 100, false, r.scheme}});
    }

    const char* biv_sizes[] = {"a", "b"};
    for (int s = 0; s < 2; ++s) {
      const std::size_t locations = (s == 0) ? 25000 : 250000;
      const std::string base = std::string("3") + biv_sizes[s];
      t.push_back({base + "-1",
                   detail::bivariate_params(Flavor::Parsimonious, 0.6, 1.4, 0.03, 0.03),
                   DesignRecipe{DK::Uniform, locations, 0, true, SK::Random10}});
      t.push_back({base + "-2",
                   detail::bivariate_params(Flavor::Flexible, 0.9, 0.9, 0.02, 0.3),
                   DesignRecipe{DK::Uniform, locations, 0, true, SK::Random10}});
      t.push_back({base + "-3",
                   detail::bivariate_params(Flavor::Flexible, 0.6, 1.4, 0.03, 0.1),
                   DesignRecipe{DK::Uniform, locations, 0, true, SK::Random10}});
    }
    return t;
  }();
  return table;
}

// Table-row aliases: ST1..ST9 are also known as 2a-1..2a-9, ST10..ST18 as
// 2b-1..2b-9.
inline Preset preset(const std::string& name) {
  std::string wanted = name;
  if (name.size() >= 4 && (name.rfind("2a-", 0) == 0 || name.rfind("2b-", 0) == 0)) {
    const int row = int(parse_int(name.substr(3)));
    if (row >= 1 && row <= 9)
      wanted = "ST" + std::to_string(name[1] == 'a' ? row : row + 9);
  }
  for (const Preset& p : preset_table())
    if (p.name == wanted) return p;
  throw UnknownPreset("no preset named '" + name + "'");
}

// Instantiates the recipe's point design. The scale override shrinks the
// design only, never the model parameters. Stream tag: "locations".
inline Dataset make_design(const DesignRecipe& recipe, std::uint64_t seed,
                           std::optional<std::size_t> n_override = std::nullopt,
                           std::optional<int> m_override = std::nullopt) {
  DesignRecipe r = recipe;
  if (n_override) r.n = *n_override;
  if (m_override && r.m_slots > 0) r.m_slots = *m_override;

  std::vector<Point> pts;
  if (r.kind == DesignRecipe::Kind::Grid) {
    const int side = std::max(2, int(std::lround(std::sqrt(double(r.n)))));
    pts = make_grid(side);
  } else {
    pts = sample_uniform_locations(r.n, seed);
  }

  Dataset d;
  if (r.m_slots > 0) {
    d.kind = DatasetKind::SpaceTime;
    for (const SpaceTimePoint& p : make_spacetime_design(pts, r.m_slots)) {
      d.x.push_back(p.point.x);
      d.y.push_back(p.point.y);
      d.t.push_back(p.t);
    }
  } else if (r.bivariate) {
    d.kind = DatasetKind::Bivariate;
    for (int v = 1; v <= 2; ++v)
      for (const Point& p : pts) {
        d.x.push_back(p.x);
        d.y.push_back(p.y);
        d.var.push_back(v);
      }
  } else {
    d.kind = DatasetKind::Spatial;
    for (const Point& p : pts) {
      d.x.push_back(p.x);
      d.y.push_back(p.y);
    }
  }
  d.metadata["design"] = r.kind == DesignRecipe::Kind::Grid ? "grid" : "uniform";
  d.metadata["design_n"] = std::to_string(r.n);
  if (r.m_slots > 0) d.metadata["design_m_slots"] = std::to_string(r.m_slots);
  if (r.bivariate) d.metadata["design_bivariate"] = "1";
  d.metadata["scheme"] = to_string(r.scheme);
  return d;
}

// Generate a dataset from a preset (or any model + recipe). The metadata
// sidecar fully determines regeneration.
inline Dataset generate(const CovarianceModel& model, const DesignRecipe& recipe,
                        std::uint64_t seed,
                        std::optional<std::size_t> n_override = std::nullopt,
                        std::optional<int> m_override = std::nullopt,
                        std::size_t dense_cap = kDefaultDenseCap) {
  Dataset design = make_design(recipe, seed, n_override, m_override);
  return sample_grf(model, std::move(design), seed, dense_cap);
}

inline Dataset generate_preset(const std::string& name, std::uint64_t seed,
                               std::optional<std::size_t> n_override = std::nullopt,
                               std::optional<int> m_override = std::nullopt,
                               std::size_t dense_cap = kDefaultDenseCap) {
  const Preset p = preset(name);
  Dataset d = generate(p.model, p.design, seed, n_override, m_override, dense_cap);
  d.metadata["preset"] = p.name;
  return d;
}

// Rebuild a dataset, bit-identically, from a metadata sidecar produced by
// generate().
inline Dataset regenerate(const KeyValues& metadata,
                          std::size_t dense_cap = kDefaultDenseCap) {
  const CovarianceModel model = model_from_kv(metadata);
  DesignRecipe r;
  r.kind = require_key(metadata, "design") == "grid" ? DesignRecipe::Kind::Grid
                                                     : DesignRecipe::Kind::Uniform;
  r.n = std::size_t(parse_int(require_key(metadata, "design_n")));
  r.m_slots = metadata.count("design_m_slots")
                  ? int(parse_int(metadata.at("design_m_slots")))
                  : 0;
  r.bivariate = metadata.count("design_bivariate") > 0;
  r.scheme = split_kind_from_string(require_key(metadata, "scheme"));
  const std::uint64_t seed = std::uint64_t(parse_int(require_key(metadata, "seed")));
  Dataset d = generate(model, r, seed, std::nullopt, std::nullopt, dense_cap);
  if (metadata.count("preset")) d.metadata["preset"] = metadata.at("preset");
  return d;
}

}  // namespace geostat
