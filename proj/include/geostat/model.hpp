#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "geostat/errors.hpp"
#include "geostat/fields.hpp"
#include "geostat/io.hpp"
#include "geostat/kernels.hpp"

// The tagged union of generating processes, with a uniform interface for the
// mean, the diagonal nugget variance and the nugget-free pairwise covariance,
// and a flat key=value serialization used by metadata sidecars, fit-result
// files and inline CLI model specs.

namespace geostat {

// Deterministic mean plus i.i.d. noise; tau is the noise standard deviation.
struct MeanPlusNugget {
  MeanSurface surface;
  double tau = 0.1;

  void validate() const {
    if (!(tau > 0.0)) throw DomainError("MeanPlusNugget: tau must be positive");
  }
};

using CovarianceModel =
    std::variant<MeanPlusNugget, MaternParams, NonstatMaternModel, GneitingParams,
                 BivariateMaternParams>;

inline void model_validate(const CovarianceModel& m) {
  std::visit([](const auto& p) { p.validate(); }, m);
}

inline std::string model_name(const CovarianceModel& m) {
  struct Visitor {
    std::string operator()(const MeanPlusNugget&) const { return "mean_plus_nugget"; }
    std::string operator()(const MaternParams&) const { return "stationary_matern"; }
    std::string operator()(const NonstatMaternModel&) const { return "nonstat_matern"; }
    std::string operator()(const GneitingParams&) const { return "gneiting"; }
    std::string operator()(const BivariateMaternParams&) const { return "bivariate_matern"; }
  };
  return std::visit(Visitor{}, m);
}

inline DatasetKind model_kind(const CovarianceModel& m) {
  struct Visitor {
    DatasetKind operator()(const MeanPlusNugget&) const { return DatasetKind::Spatial; }
    DatasetKind operator()(const MaternParams&) const { return DatasetKind::Spatial; }
    DatasetKind operator()(const NonstatMaternModel&) const { return DatasetKind::Spatial; }
    DatasetKind operator()(const GneitingParams&) const { return DatasetKind::SpaceTime; }
    DatasetKind operator()(const BivariateMaternParams&) const {
      return DatasetKind::Bivariate;
    }
  };
  return std::visit(Visitor{}, m);
}

inline void require_kind(const CovarianceModel& m, const Dataset& d, const char* what) {
  if (model_kind(m) != d.kind)
    throw KindMismatch(std::string(what) + ": model '" + model_name(m) + "' needs " +
                       to_string(model_kind(m)) + " data, got " + to_string(d.kind));
}

// Variance added on the covariance diagonal (tau^2).
inline double model_nugget(const CovarianceModel& m) {
  struct Visitor {
    double operator()(const MeanPlusNugget& p) const { return p.tau * p.tau; }
    double operator()(const MaternParams& p) const { return p.nugget; }
    double operator()(const NonstatMaternModel& p) const { return p.nugget; }
    double operator()(const GneitingParams&) const { return 0.0; }
    double operator()(const BivariateMaternParams&) const { return 0.0; }
  };
  return std::visit(Visitor{}, m);
}

inline double model_mean(const CovarianceModel& m, const Row& at) {
  if (const auto* p = std::get_if<MeanPlusNugget>(&m))
    return mean_surface_eval(p->surface, Point{at.x, at.y});
  return 0.0;
}

// Nugget-free covariance between two observation rows. Matrix assembly adds
// the nugget on the diagonal by row index.
inline double model_smooth_cov(const CovarianceModel& m, const Row& a, const Row& b) {
  struct Visitor {
    const Row& a;
    const Row& b;
    double operator()(const MeanPlusNugget&) const { return 0.0; }
    double operator()(const MaternParams& p) const {
      return p.sigma2 * matern_correlation(p.smoothness, std::hypot(a.x - b.x, a.y - b.y) / p.range);
    }
    double operator()(const NonstatMaternModel& p) const {
      return nonstat_matern_cov_smooth(p, Point{a.x, a.y}, Point{b.x, b.y});
    }
    double operator()(const GneitingParams& p) const {
      return gneiting_cov(p, std::hypot(a.x - b.x, a.y - b.y), a.t - b.t);
    }
    double operator()(const BivariateMaternParams& p) const {
      return bivariate_matern_cov(p, std::hypot(a.x - b.x, a.y - b.y), a.var, b.var);
    }
  };
  return std::visit(Visitor{a, b}, m);
}

// ---------------------------------------------------------------------------
// Flat serialization

inline KeyValues model_to_kv(const CovarianceModel& m) {
  KeyValues kv;
  kv["model"] = model_name(m);
  struct Visitor {
    KeyValues& kv;
    void operator()(const MeanPlusNugget& p) const {
      kv["surface"] = to_string(p.surface.kind);
      kv["tau"] = format_double(p.tau);
    }
    void operator()(const MaternParams& p) const {
      kv["sigma2"] = format_double(p.sigma2);
      kv["range"] = format_double(p.range);
      kv["smoothness"] = format_double(p.smoothness);
      kv["nugget"] = format_double(p.nugget);
    }
    void operator()(const NonstatMaternModel& p) const {
      kv["sites"] = std::to_string(p.sites.size());
      for (std::size_t k = 0; k < p.sites.size(); ++k) {
        const std::string prefix = "site" + std::to_string(k + 1) + ".";
        kv[prefix + "x"] = format_double(p.sites[k].site.x);
        kv[prefix + "y"] = format_double(p.sites[k].site.y);
        kv[prefix + "sigma"] = format_double(p.sites[k].sigma);
        kv[prefix + "lambda1"] = format_double(p.sites[k].lambda1);
        kv[prefix + "lambda2"] = format_double(p.sites[k].lambda2);
      }
      kv["bandwidth"] = format_double(p.bandwidth);
      kv["rotation"] = format_double(p.rotation);
      kv["smoothness"] = format_double(p.smoothness);
      kv["nugget"] = format_double(p.nugget);
    }
    void operator()(const GneitingParams& p) const {
      kv["sigma2"] = format_double(p.sigma2);
      kv["a_s"] = format_double(p.a_s);
      kv["a_t"] = format_double(p.a_t);
      kv["alpha"] = format_double(p.alpha);
      kv["beta"] = format_double(p.beta);
      kv["smoothness"] = format_double(p.smoothness);
    }
    void operator()(const BivariateMaternParams& p) const {
      kv["flavor"] = p.flavor == BivariateMaternParams::Flavor::Parsimonious
                         ? "parsimonious"
                         : "flexible";
      kv["sigma11_sq"] = format_double(p.sigma11_sq);
      kv["sigma22_sq"] = format_double(p.sigma22_sq);
      kv["beta12"] = format_double(p.beta12);
      kv["nu11"] = format_double(p.nu11);
      kv["nu22"] = format_double(p.nu22);
      kv["a11"] = format_double(p.a11);
      kv["a22"] = format_double(p.a22);
      kv["taubar"] = format_double(p.taubar);
    }
  };
  std::visit(Visitor{kv}, m);
  return kv;
}

inline CovarianceModel model_from_kv(const KeyValues& kv) {
  const std::string& name = require_key(kv, "model");
  CovarianceModel m;
  if (name == "mean_plus_nugget") {
    MeanPlusNugget p;
    p.surface.kind = mean_surface_from_string(require_key(kv, "surface"));
    p.tau = parse_double(require_key(kv, "tau"));
    m = p;
  } else if (name == "stationary_matern") {
    MaternParams p;
    p.sigma2 = parse_double(require_key(kv, "sigma2"));
    p.range = parse_double(require_key(kv, "range"));
    p.smoothness = parse_double(require_key(kv, "smoothness"));
    p.nugget = kv.count("nugget") ? parse_double(kv.at("nugget")) : 0.0;
    m = p;
  } else if (name == "nonstat_matern") {
    NonstatMaternModel p;
    const std::size_t count = std::size_t(parse_int(require_key(kv, "sites")));
    for (std::size_t k = 1; k <= count; ++k) {
      const std::string prefix = "site" + std::to_string(k) + ".";
      ReferenceSite s;
      s.site.x = parse_double(require_key(kv, prefix + "x"));
      s.site.y = parse_double(require_key(kv, prefix + "y"));
      s.sigma = parse_double(require_key(kv, prefix + "sigma"));
      s.lambda1 = parse_double(require_key(kv, prefix + "lambda1"));
      s.lambda2 = parse_double(require_key(kv, prefix + "lambda2"));
      p.sites.push_back(s);
    }
    p.bandwidth = parse_double(require_key(kv, "bandwidth"));
    p.rotation = parse_double(require_key(kv, "rotation"));
    p.smoothness = parse_double(require_key(kv, "smoothness"));
    p.nugget = kv.count("nugget") ? parse_double(kv.at("nugget")) : 0.0;
    m = p;
  } else if (name == "gneiting") {
    GneitingParams p;
    p.sigma2 = parse_double(require_key(kv, "sigma2"));
    p.a_s = parse_double(require_key(kv, "a_s"));
    p.a_t = parse_double(require_key(kv, "a_t"));
    p.alpha = parse_double(require_key(kv, "alpha"));
    p.beta = parse_double(require_key(kv, "beta"));
    p.smoothness = parse_double(require_key(kv, "smoothness"));
    m = p;
  } else if (name == "bivariate_matern") {
    BivariateMaternParams p;
    const std::string& flavor = require_key(kv, "flavor");
    if (flavor == "parsimonious")
      p.flavor = BivariateMaternParams::Flavor::Parsimonious;
    else if (flavor == "flexible")
      p.flavor = BivariateMaternParams::Flavor::Flexible;
    else
      throw ParseError("unknown bivariate flavor '" + flavor + "'");
    p.sigma11_sq = parse_double(require_key(kv, "sigma11_sq"));
    p.sigma22_sq = parse_double(require_key(kv, "sigma22_sq"));
    p.beta12 = parse_double(require_key(kv, "beta12"));
    p.nu11 = parse_double(require_key(kv, "nu11"));
    p.nu22 = parse_double(require_key(kv, "nu22"));
    p.a11 = parse_double(require_key(kv, "a11"));
    p.a22 = kv.count("a22") ? parse_double(kv.at("a22")) : p.a11;
    p.taubar = kv.count("taubar") ? parse_double(kv.at("taubar")) : 0.0;
    m = p;
  } else {
    throw ParseError("unknown model '" + name + "'");
  }
  model_validate(m);
  return m;
}

// Pairwise covariance evaluator over one dataset. For the nonstationary
// model the per-row local parameters are precomputed once, which turns the
// O(n^2) matrix fill from O(n^2 M) kernel-weight evaluations into O(n M).
class PairCovariance {
 public:
  PairCovariance(const CovarianceModel& model, const Dataset& data)
      : model_(&model), data_(&data), nugget_(model_nugget(model)) {
    require_kind(model, data, "covariance");
    if (const auto* p = std::get_if<NonstatMaternModel>(&model)) {
      locals_.reserve(data.size());
      for (std::size_t i = 0; i < data.size(); ++i)
        locals_.push_back(local_params(*p, Point{data.x[i], data.y[i]}));
    }
  }

  double nugget() const { return nugget_; }

  // Nugget-free covariance between rows i and j.
  double smooth(std::size_t i, std::size_t j) const {
    if (!locals_.empty())
      return nonstat_pair(locals_[i], locals_[j], data_->row(i), data_->row(j));
    return model_smooth_cov(*model_, data_->row(i), data_->row(j));
  }

  double full(std::size_t i, std::size_t j) const {
    double c = smooth(i, j);
    if (i == j) c += nugget_;
    return c;
  }

  // Cross covariance against an external target row (never gets a nugget).
  double smooth_vs(const Row& target, std::size_t j) const {
    if (!locals_.empty()) {
      const auto* p = std::get_if<NonstatMaternModel>(model_);
      return nonstat_pair(local_params(*p, Point{target.x, target.y}), locals_[j], target,
                          data_->row(j));
    }
    return model_smooth_cov(*model_, target, data_->row(j));
  }

  // Observation variance at a target row (includes the nugget).
  double at_target(const Row& target) const {
    return model_smooth_cov(*model_, target, target) + nugget_;
  }

  const CovarianceModel& model() const { return *model_; }
  const Dataset& data() const { return *data_; }

 private:
  double nonstat_pair(const LocalParams& a, const LocalParams& b, const Row& ra,
                      const Row& rb) const {
    const auto* p = std::get_if<NonstatMaternModel>(model_);
    return nonstat_pair_cov(a, b, Point{ra.x, ra.y}, Point{rb.x, rb.y}, p->smoothness);
  }

  const CovarianceModel* model_;
  const Dataset* data_;
  double nugget_;
  std::vector<LocalParams> locals_;
};

}  // namespace geostat
