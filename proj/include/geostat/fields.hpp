#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "geostat/errors.hpp"
#include "geostat/io.hpp"
#include "geostat/rng.hpp"

// Dataset representation on the unit square, location designs, and the
// competition train/test splitting schemes.

namespace geostat {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Time slots are integers 0..m-1 carried as reals, matching effective ranges
// expressed in slot units.
struct SpaceTimePoint {
  Point point;
  double t = 0.0;
};

enum class DatasetKind { Spatial, SpaceTime, Bivariate };

inline std::string to_string(DatasetKind k) {
  switch (k) {
    case DatasetKind::Spatial: return "spatial";
    case DatasetKind::SpaceTime: return "spacetime";
    case DatasetKind::Bivariate: return "bivariate";
  }
  return "?";
}

// One observation row in a uniform shape: t is 0 for purely spatial data and
// var is 1 except for bivariate rows.
struct Row {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
  int var = 1;
};

// Column-oriented observations. z may be empty (a prediction-target table);
// every other column is present exactly when the kind requires it.
struct Dataset {
  DatasetKind kind = DatasetKind::Spatial;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> t;    // SpaceTime only
  std::vector<int> var;     // Bivariate only, entries in {1,2}
  std::vector<double> z;
  KeyValues metadata;

  std::size_t size() const { return x.size(); }
  bool has_values() const { return !z.empty(); }

  Row row(std::size_t i) const {
    return Row{x[i], y[i], kind == DatasetKind::SpaceTime ? t[i] : 0.0,
               kind == DatasetKind::Bivariate ? var[i] : 1};
  }
};

inline void validate(const Dataset& d) {
  const std::size_t n = d.size();
  if (d.y.size() != n) throw DimensionMismatch("dataset: x/y length mismatch");
  if (d.has_values() && d.z.size() != n)
    throw DimensionMismatch("dataset: z length mismatch");
  if (d.kind == DatasetKind::SpaceTime && d.t.size() != n)
    throw DimensionMismatch("spacetime dataset: t length mismatch");
  if (d.kind == DatasetKind::Bivariate && d.var.size() != n)
    throw DimensionMismatch("bivariate dataset: var length mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(d.x[i]) || !std::isfinite(d.y[i]))
      throw DomainError("dataset: non-finite coordinate at row " + std::to_string(i));
    if (d.has_values() && !std::isfinite(d.z[i]))
      throw DomainError("dataset: non-finite value at row " + std::to_string(i));
    if (d.kind == DatasetKind::SpaceTime && !(d.t[i] >= 0.0))
      throw DomainError("dataset: negative time at row " + std::to_string(i));
    if (d.kind == DatasetKind::Bivariate && d.var[i] != 1 && d.var[i] != 2)
      throw VariableIndexOutOfRange("dataset: var must be 1 or 2 at row " +
                                    std::to_string(i));
  }
}

namespace detail {

struct PointKeyHash {
  std::size_t operator()(const std::pair<double, double>& p) const {
    const std::uint64_t hx = mix64(std::bit_cast<std::uint64_t>(p.first));
    const std::uint64_t hy = mix64(std::bit_cast<std::uint64_t>(p.second));
    return std::size_t(hx ^ (hy * 0x9E3779B97F4A7C15ull));
  }
};

// Distinct (x,y) locations in first-appearance order, plus each row's
// location id.
inline std::pair<std::vector<std::vector<std::size_t>>, std::vector<std::size_t>>
group_rows_by_location(const Dataset& d) {
  std::unordered_map<std::pair<double, double>, std::size_t, PointKeyHash> ids;
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> row_loc(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto key = std::make_pair(d.x[i], d.y[i]);
    auto [it, inserted] = ids.try_emplace(key, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
    row_loc[i] = it->second;
  }
  return {std::move(groups), std::move(row_loc)};
}

}  // namespace detail

// k x k grid of cell midpoints ((i+0.5)/k, (j+0.5)/k), row-major (x fastest).
inline std::vector<Point> make_grid(int k) {
  if (k < 2) throw DomainError("make_grid: k must be >= 2");
  std::vector<Point> pts;
  pts.reserve(std::size_t(k) * k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i)
      pts.push_back(Point{(i + 0.5) / k, (j + 0.5) / k});
  return pts;
}

// n uniform points on the unit square; exact duplicates are resampled.
// Stream tag: "locations".
inline std::vector<Point> sample_uniform_locations(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw DomainError("sample_uniform_locations: n must be >= 1");
  Rng rng(seed, "locations");
  std::unordered_map<std::pair<double, double>, bool, detail::PointKeyHash> seen;
  seen.reserve(n * 2);
  std::vector<Point> pts;
  pts.reserve(n);
  while (pts.size() < n) {
    const double px = rng.next_unit();
    const double py = rng.next_unit();
    if (seen.try_emplace(std::make_pair(px, py), true).second)
      pts.push_back(Point{px, py});
  }
  return pts;
}

// Cross product of a spatial design with time slots 0..m-1, time-major.
inline std::vector<SpaceTimePoint> make_spacetime_design(const std::vector<Point>& spatial,
                                                         int m) {
  if (m < 1) throw DomainError("make_spacetime_design: m must be >= 1");
  std::vector<SpaceTimePoint> pts;
  pts.reserve(spatial.size() * std::size_t(m));
  for (int slot = 0; slot < m; ++slot)
    for (const Point& p : spatial)
      pts.push_back(SpaceTimePoint{p, double(slot)});
  return pts;
}

// Missingness schemes. Random10 serves the spatial and bivariate
// sub-competitions; RS, RST and T10 are the space-time prediction settings.
struct SplitScheme {
  enum class Kind { Random10, RS, RST, T10 };
  Kind kind = Kind::Random10;
  double test_fraction = 0.1;  // ignored by T10
};

inline std::string to_string(SplitScheme::Kind k) {
  switch (k) {
    case SplitScheme::Kind::Random10: return "random10";
    case SplitScheme::Kind::RS: return "rs";
    case SplitScheme::Kind::RST: return "rst";
    case SplitScheme::Kind::T10: return "t10";
  }
  return "?";
}

inline SplitScheme::Kind split_kind_from_string(const std::string& name) {
  if (name == "random10") return SplitScheme::Kind::Random10;
  if (name == "rs") return SplitScheme::Kind::RS;
  if (name == "rst") return SplitScheme::Kind::RST;
  if (name == "t10") return SplitScheme::Kind::T10;
  throw ParseError("unknown split scheme '" + name + "'");
}

struct TrainTestSplit {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> test_indices;  // strictly increasing
};

namespace detail {

inline std::size_t round_half_up(double v) {
  return std::size_t(std::floor(v + 0.5));
}

// k distinct draws from 0..n-1 by partial Fisher-Yates, returned sorted.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                           Rng& rng) {
  if (k > n) throw DomainError("sample_without_replacement: k > n");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + std::size_t(rng.next_below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline Dataset take_rows(const Dataset& d, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.kind = d.kind;
  out.metadata = d.metadata;
  out.x.reserve(rows.size());
  out.y.reserve(rows.size());
  for (std::size_t i : rows) {
    out.x.push_back(d.x[i]);
    out.y.push_back(d.y[i]);
    if (d.kind == DatasetKind::SpaceTime) out.t.push_back(d.t[i]);
    if (d.kind == DatasetKind::Bivariate) out.var.push_back(d.var[i]);
    if (d.has_values()) out.z.push_back(d.z[i]);
  }
  return out;
}

}  // namespace detail

// Partition the dataset per the scheme. Deterministic in (dataset, scheme,
// seed); stream tag "split". Test sizes use round-half-up of
// fraction * count, which reproduces the published 90K/10K, 900K/100K and
// 45K/5K figures.
inline TrainTestSplit split(const Dataset& d, const SplitScheme& scheme,
                            std::uint64_t seed) {
  validate(d);
  if (!(scheme.test_fraction > 0.0 && scheme.test_fraction < 1.0))
    throw DomainError("split: test_fraction must lie in (0,1)");
  const std::size_t n = d.size();
  if (n == 0) throw EmptyInput("split: empty dataset");
  Rng rng(seed, "split");

  std::vector<std::size_t> test_rows;
  using Kind = SplitScheme::Kind;
  switch (scheme.kind) {
    case Kind::Random10: {
      if (d.kind == DatasetKind::Spatial) {
        test_rows = detail::sample_without_replacement(
            n, detail::round_half_up(scheme.test_fraction * double(n)), rng);
      } else if (d.kind == DatasetKind::Bivariate) {
        // 10% of locations; both variable rows at a drawn location leave.
        auto [groups, row_loc] = detail::group_rows_by_location(d);
        for (const auto& g : groups)
          if (g.size() != 2 || d.var[g[0]] == d.var[g[1]])
            throw DomainError("split: bivariate dataset must hold each location "
                              "exactly twice, once per variable");
        const auto locs = detail::sample_without_replacement(
            groups.size(),
            detail::round_half_up(scheme.test_fraction * double(groups.size())), rng);
        for (std::size_t loc : locs)
          for (std::size_t row : groups[loc]) test_rows.push_back(row);
        std::sort(test_rows.begin(), test_rows.end());
      } else {
        throw IncompatibleScheme("split: random10 applies to spatial or bivariate data");
      }
      break;
    }
    case Kind::RS: {
      if (d.kind != DatasetKind::SpaceTime)
        throw IncompatibleScheme("split: rs applies to space-time data");
      auto [groups, row_loc] = detail::group_rows_by_location(d);
      const auto locs = detail::sample_without_replacement(
          groups.size(),
          detail::round_half_up(scheme.test_fraction * double(groups.size())), rng);
      for (std::size_t loc : locs)
        for (std::size_t row : groups[loc]) test_rows.push_back(row);
      std::sort(test_rows.begin(), test_rows.end());
      break;
    }
    case Kind::RST: {
      if (d.kind != DatasetKind::SpaceTime)
        throw IncompatibleScheme("split: rst applies to space-time data");
      test_rows = detail::sample_without_replacement(
          n, detail::round_half_up(scheme.test_fraction * double(n)), rng);
      break;
    }
    case Kind::T10: {
      if (d.kind != DatasetKind::SpaceTime)
        throw IncompatibleScheme("split: t10 applies to space-time data");
      std::vector<double> slots(d.t);
      std::sort(slots.begin(), slots.end());
      slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
      if (slots.size() < 11)
        throw IncompatibleScheme("split: t10 needs more than 10 distinct time slots");
      const double cutoff = slots[slots.size() - 10];
      for (std::size_t i = 0; i < n; ++i)
        if (d.t[i] >= cutoff) test_rows.push_back(i);
      break;
    }
  }

  std::vector<char> is_test(n, 0);
  for (std::size_t i : test_rows) is_test[i] = 1;
  std::vector<std::size_t> train_rows;
  train_rows.reserve(n - test_rows.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!is_test[i]) train_rows.push_back(i);

  TrainTestSplit out;
  out.train = detail::take_rows(d, train_rows);
  out.test = detail::take_rows(d, test_rows);
  out.test_indices = std::move(test_rows);
  out.train.metadata["split_role"] = "train";
  out.test.metadata["split_role"] = "test";
  for (Dataset* part : {&out.train, &out.test}) {
    part->metadata["split_scheme"] = to_string(scheme.kind);
    part->metadata["split_seed"] = std::to_string(seed);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV schemas. Spatial: x,y,z; space-time: x,y,t,z; bivariate: x,y,var,z.
// Target tables omit the z column. Header row mandatory.

inline std::string dataset_csv(const Dataset& d, bool include_values = true) {
  include_values = include_values && d.has_values();
  std::string out;
  out.reserve(d.size() * 40 + 16);
  out += "x,y";
  if (d.kind == DatasetKind::SpaceTime) out += ",t";
  if (d.kind == DatasetKind::Bivariate) out += ",var";
  if (include_values) out += ",z";
  out += '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    out += format_double(d.x[i]);
    out += ',';
    out += format_double(d.y[i]);
    if (d.kind == DatasetKind::SpaceTime) {
      out += ',';
      out += format_double(d.t[i]);
    }
    if (d.kind == DatasetKind::Bivariate) {
      out += ',';
      out += std::to_string(d.var[i]);
    }
    if (include_values) {
      out += ',';
      out += format_double(d.z[i]);
    }
    out += '\n';
  }
  return out;
}

inline void write_dataset_csv(const std::filesystem::path& path, const Dataset& d,
                              bool include_values = true) {
  atomic_write_text(path, dataset_csv(d, include_values));
}

// Reads any of the dataset schemas; the kind comes from the header. The value
// column may be named z or zhat (submissions reuse the same key columns).
inline Dataset read_dataset_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError(path.string() + ": empty file");
  const auto header = split(trim(lines[0]), ',');
  int col_x = -1, col_y = -1, col_t = -1, col_var = -1, col_z = -1;
  for (int c = 0; c < int(header.size()); ++c) {
    const std::string name(trim(header[c]));
    if (name == "x") col_x = c;
    else if (name == "y") col_y = c;
    else if (name == "t") col_t = c;
    else if (name == "var") col_var = c;
    else if (name == "z" || name == "zhat") col_z = c;
  }
  if (col_x < 0 || col_y < 0)
    throw ParseError(path.string() + ": header must name x and y columns");
  Dataset d;
  d.kind = col_t >= 0 ? DatasetKind::SpaceTime
           : col_var >= 0 ? DatasetKind::Bivariate
                          : DatasetKind::Spatial;
  const std::size_t n = lines.size() - 1;
  d.x.reserve(n);
  d.y.reserve(n);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(trim(lines[i]), ',');
    if (cells.size() != header.size())
      throw ParseError(path.string() + ": row " + std::to_string(i) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(header.size()));
    d.x.push_back(parse_double(cells[col_x]));
    d.y.push_back(parse_double(cells[col_y]));
    if (col_t >= 0) d.t.push_back(parse_double(cells[col_t]));
    if (col_var >= 0) d.var.push_back(int(parse_int(cells[col_var])));
    if (col_z >= 0) d.z.push_back(parse_double(cells[col_z]));
  }
  validate(d);
  return d;
}

}  // namespace geostat
