#include "orbit/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <json.hpp>

#include "orbit/io.hpp"
#include "orbit/kdtree.hpp"
#include "orbit/reduce.hpp"
#include "orbit/triangle.hpp"

namespace orbit::bench {

namespace {

using json = nlohmann::ordered_json;

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kSqrt3 = 1.73205080756887729353;
constexpr double kDegenerate = 1e-12;

enum Stream : std::uint64_t {
  kDistortionStream = 1,
  kDatabaseStream = 2,
  kNoiseStream = 3,
  kSurveyStream = 4,
};

const std::set<std::string> kDistortionMaps{"gamma", "psi_triangle"};
const std::set<std::string> kClassificationMaps{"exact", "gamma", "psi_triangle"};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Triangle gaussian_triangle(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Triangle t;
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 2; ++r) t(r, c) = gauss(rng);
  return t;
}

AnyMatrix gaussian_configuration(std::mt19937_64& rng, Group group, int n, int l) {
  std::normal_distribution<double> gauss;
  if (!is_complex_group(group)) {
    RealMatrix m(n, l);
    for (int c = 0; c < l; ++c)
      for (int r = 0; r < n; ++r) m(r, c) = gauss(rng);
    return m;
  }
  ComplexMatrix m(n, l);
  for (int c = 0; c < l; ++c)
    for (int r = 0; r < n; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      m(r, c) = Complex(re, im);
    }
  return m;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::ConfigInvalid, what);
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Distortion: return "distortion";
    case ExperimentKind::Classification: return "classify";
    case ExperimentKind::LowerConstant: return "lower-constant";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
  if (text == "distortion") return ExperimentKind::Distortion;
  if (text == "classify" || text == "classification") return ExperimentKind::Classification;
  if (text == "lower-constant") return ExperimentKind::LowerConstant;
  throw Error(ErrorCode::ConfigInvalid, "unknown experiment '" + std::string(text) + "'");
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const std::uint64_t s = splitmix64(splitmix64(seed ^ splitmix64(stream)) + index);
  return std::mt19937_64(s);
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  switch (kind) {
    case ExperimentKind::Distortion:
      cfg.maps = {"gamma", "psi_triangle"};
      break;
    case ExperimentKind::Classification:
      cfg.maps = {"exact", "gamma", "psi_triangle"};
      for (int i = 0; i <= 6; ++i) cfg.noise_grid.push_back(0.005 * i);
      break;
    case ExperimentKind::LowerConstant:
      cfg.maps = {"reduced"};
      cfg.group = {Group::Orthogonal, 1};
      cfg.l = 4;
      cfg.n_pairs = 10000;
      break;
  }
  return cfg;
}

void validate(const ExperimentConfig& cfg, ExperimentKind kind) {
  require(cfg.histogram_bins >= 1, "histogram_bins must be >= 1");
  require(!cfg.maps.empty(), "maps must not be empty");
  switch (kind) {
    case ExperimentKind::Distortion:
      require(cfg.n_pairs >= 1, "n_pairs must be >= 1");
      require(cfg.group.kind == Group::Euclidean && cfg.group.n == 2 && cfg.l == 3,
              "the distortion experiment runs on planar triangles (group E, n=2, l=3)");
      for (const auto& m : cfg.maps) require(kDistortionMaps.count(m) == 1, "map '" + m + "' not allowed here");
      break;
    case ExperimentKind::Classification:
      require(cfg.db_size >= 1, "db_size must be >= 1");
      require(cfg.noise_draws >= 1, "noise_draws must be >= 1");
      require(!cfg.noise_grid.empty(), "noise_grid must not be empty");
      require(cfg.group.kind == Group::Euclidean && cfg.group.n == 2 && cfg.l == 3,
              "the classification experiment runs on planar triangles (group E, n=2, l=3)");
      for (std::size_t i = 0; i < cfg.noise_grid.size(); ++i) {
        require(std::isfinite(cfg.noise_grid[i]) && cfg.noise_grid[i] >= 0.0, "noise values must be >= 0");
        require(i == 0 || cfg.noise_grid[i] > cfg.noise_grid[i - 1], "noise_grid must be strictly increasing");
      }
      for (const auto& m : cfg.maps) require(kClassificationMaps.count(m) == 1, "map '" + m + "' not allowed here");
      break;
    case ExperimentKind::LowerConstant:
      require(cfg.n_pairs >= 1, "n_pairs must be >= 1");
      require(cfg.group.n >= 1 && cfg.l >= 1, "n and l must be positive");
      for (const auto& m : cfg.maps) require(m == "reduced", "map '" + m + "' not allowed here");
      break;
  }
}

const RatioStats& ExperimentReport::ratio(std::string_view map) const {
  for (const auto& r : ratios)
    if (r.map == map) return r;
  throw Error(ErrorCode::UnknownId, "report has no ratio statistics for '" + std::string(map) + "'");
}

const RateEntry& ExperimentReport::rate(std::string_view map, double noise) const {
  for (const auto& r : rates)
    if (r.map == map && r.noise == noise) return r;
  throw Error(ErrorCode::UnknownId, "report has no rate for '" + std::string(map) + "'");
}

RatioStats summarize(std::string map, const std::vector<double>& values, double lo, double hi, std::size_t bins) {
  RatioStats s;
  s.map = std::move(map);
  s.count = values.size();
  s.histogram_lo = lo;
  s.histogram_hi = hi;
  s.histogram.assign(bins, 0);
  if (values.empty()) return s;

  double sum = 0.0;
  double log_sum = 0.0;
  bool all_positive = true;
  s.min = values.front();
  s.max = values.front();
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
    if (v > 0.0) log_sum += std::log(v);
    else all_positive = false;
  }
  const auto count = static_cast<double>(values.size());
  s.mean = sum / count;
  s.log_mean = all_positive ? log_sum / count : std::numeric_limits<double>::quiet_NaN();
  double sq = 0.0;
  double log_sq = 0.0;
  for (double v : values) {
    sq += (v - s.mean) * (v - s.mean);
    if (all_positive) log_sq += (std::log(v) - s.log_mean) * (std::log(v) - s.log_mean);
  }
  const double dof = values.size() > 1 ? count - 1.0 : 1.0;
  s.stddev = std::sqrt(sq / dof);
  s.log_stddev = all_positive ? std::sqrt(log_sq / dof) : std::numeric_limits<double>::quiet_NaN();

  const double width = (hi - lo) / static_cast<double>(bins);
  for (double v : values) {
    auto b = static_cast<long>(std::floor((v - lo) / width));
    b = std::clamp(b, 0L, static_cast<long>(bins) - 1);
    ++s.histogram[static_cast<std::size_t>(b)];
  }

  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  for (double p : {0.0, 0.001, 0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99, 1.0}) {
    s.quantiles.emplace_back(p, quantile_sorted(sorted, p));
  }
  return s;
}

ExperimentReport distortion_experiment(const ExperimentConfig& cfg) {
  validate(cfg, ExperimentKind::Distortion);
  const std::size_t n = cfg.n_pairs;
  std::vector<double> gamma_ratio(n), psi_ratio(n);
  std::vector<std::size_t> redraws(n, 0);

  parallel_for(n, cfg.threads, [&](std::size_t i) {
    auto rng = trial_rng(cfg.seed, kDistortionStream, i);
    for (;;) {
      const Triangle a = gaussian_triangle(rng);
      const Triangle b = gaussian_triangle(rng);
      const double d = dist_euclidean(RealMatrix(a), RealMatrix(b)).distance;
      if (d < kDegenerate) {
        ++redraws[i];
        continue;
      }
      gamma_ratio[i] = (gamma(a).vec() - gamma(b).vec()).norm() / d;
      psi_ratio[i] = (psi_triangle(a).vec() - psi_triangle(b).vec()).norm() / d;
      return;
    }
  });

  ExperimentReport report;
  report.kind = ExperimentKind::Distortion;
  report.config = cfg;
  report.resampled = std::accumulate(redraws.begin(), redraws.end(), std::size_t{0});
  for (const auto& map : cfg.maps) {
    if (map == "gamma") report.ratios.push_back(summarize(map, gamma_ratio, 0.0, kSqrt3, cfg.histogram_bins));
    else report.ratios.push_back(summarize(map, psi_ratio, 1.0, kSqrt2, cfg.histogram_bins));
  }
  return report;
}

ExperimentReport classification_experiment(const ExperimentConfig& cfg) {
  validate(cfg, ExperimentKind::Classification);
  const std::size_t db = cfg.db_size;
  const std::size_t draws = cfg.noise_draws;

  std::vector<Triangle> database(db);
  RealMatrix gamma_points(3, static_cast<Eigen::Index>(db));
  RealMatrix psi_points(3, static_cast<Eigen::Index>(db));
  for (std::size_t i = 0; i < db; ++i) {
    auto rng = trial_rng(cfg.seed, kDatabaseStream, i);
    database[i] = gaussian_triangle(rng);
    gamma_points.col(static_cast<Eigen::Index>(i)) = gamma(database[i]).vec();
    psi_points.col(static_cast<Eigen::Index>(i)) = psi_triangle(database[i]).vec();
  }
  const KdTree gamma_index(gamma_points);
  const KdTree psi_index(psi_points);

  const bool use_exact = std::count(cfg.maps.begin(), cfg.maps.end(), "exact") > 0;
  const bool use_gamma = std::count(cfg.maps.begin(), cfg.maps.end(), "gamma") > 0;
  const bool use_psi = std::count(cfg.maps.begin(), cfg.maps.end(), "psi_triangle") > 0;

  // one byte per trial: bit 0 exact wrong, bit 1 gamma wrong, bit 2 psi wrong
  const std::size_t trials = cfg.noise_grid.size() * db * draws;
  std::vector<unsigned char> wrong(trials, 0);

  parallel_for(trials, cfg.threads, [&](std::size_t t) {
    const std::size_t level = t / (db * draws);
    const std::size_t target = (t / draws) % db;
    auto rng = trial_rng(cfg.seed, kNoiseStream, t);
    std::normal_distribution<double> gauss;
    Triangle noisy = database[target];
    const double eps = cfg.noise_grid[level];
    for (int c = 0; c < 3; ++c)
      for (int r = 0; r < 2; ++r) noisy(r, c) += eps * gauss(rng);

    unsigned char bits = 0;
    if (use_exact) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < db; ++j) {
        const double d = triangle_orbit_distance(noisy, database[j]);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (best != target) bits |= 1;
    }
    if (use_gamma && gamma_index.nearest(gamma(noisy).vec(), 1).front().index != target) bits |= 2;
    if (use_psi && psi_index.nearest(psi_triangle(noisy).vec(), 1).front().index != target) bits |= 4;
    wrong[t] = bits;
  });

  ExperimentReport report;
  report.kind = ExperimentKind::Classification;
  report.config = cfg;
  for (const auto& map : cfg.maps) {
    const unsigned char bit = map == "exact" ? 1 : (map == "gamma" ? 2 : 4);
    for (std::size_t level = 0; level < cfg.noise_grid.size(); ++level) {
      RateEntry e;
      e.map = map;
      e.noise = cfg.noise_grid[level];
      e.trials = db * draws;
      const std::size_t base = level * db * draws;
      for (std::size_t t = base; t < base + e.trials; ++t) e.errors += (wrong[t] & bit) ? 1 : 0;
      e.rate = static_cast<double>(e.errors) / static_cast<double>(e.trials);
      report.rates.push_back(e);
    }
  }
  return report;
}

ExperimentReport lower_constant_survey(const ExperimentConfig& cfg) {
  validate(cfg, ExperimentKind::LowerConstant);
  const ReducedEmbedding reduced(cfg.group, cfg.l);
  const std::size_t n = cfg.n_pairs;
  std::vector<double> ratio(n);
  std::vector<std::size_t> redraws(n, 0);

  parallel_for(n, cfg.threads, [&](std::size_t i) {
    auto rng = trial_rng(cfg.seed, kSurveyStream, i);
    for (;;) {
      const AnyMatrix a = gaussian_configuration(rng, cfg.group.kind, cfg.group.n, cfg.l);
      const AnyMatrix b = gaussian_configuration(rng, cfg.group.kind, cfg.group.n, cfg.l);
      const double d = orbit_distance(cfg.group.kind, a, b);
      if (d < kDegenerate) {
        ++redraws[i];
        continue;
      }
      ratio[i] = reduced(a).distance_to(reduced(b)) / d;
      return;
    }
  });

  ExperimentReport report;
  report.kind = ExperimentKind::LowerConstant;
  report.config = cfg;
  report.resampled = std::accumulate(redraws.begin(), redraws.end(), std::size_t{0});
  report.ratios.push_back(summarize("reduced", ratio, 0.0, kSqrt2, cfg.histogram_bins));
  return report;
}

ExperimentReport run(ExperimentKind kind, const ExperimentConfig& cfg) {
  switch (kind) {
    case ExperimentKind::Distortion: return distortion_experiment(cfg);
    case ExperimentKind::Classification: return classification_experiment(cfg);
    case ExperimentKind::LowerConstant: return lower_constant_survey(cfg);
  }
  throw Error(ErrorCode::ConfigInvalid, "unknown experiment kind");
}

namespace {

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["n_pairs"] = cfg.n_pairs;
  j["db_size"] = cfg.db_size;
  j["noise_draws"] = cfg.noise_draws;
  j["noise_grid"] = cfg.noise_grid;
  j["maps"] = cfg.maps;
  j["group"] = std::string(to_string(cfg.group.kind));
  j["n"] = cfg.group.n;
  j["l"] = cfg.l;
  j["histogram_bins"] = cfg.histogram_bins;
  j["threads"] = cfg.threads;
  return j;
}

}  // namespace

std::string config_json(const ExperimentConfig& cfg) { return config_to_json(cfg).dump(2); }

ExperimentConfig config_from_json(const std::string& text, ExperimentKind kind) {
  ExperimentConfig cfg = default_config(kind);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("config is not valid JSON: ") + e.what());
  }
  require(j.is_object(), "config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "n_pairs") cfg.n_pairs = value.get<std::size_t>();
      else if (key == "db_size") cfg.db_size = value.get<std::size_t>();
      else if (key == "noise_draws") cfg.noise_draws = value.get<std::size_t>();
      else if (key == "noise_grid") cfg.noise_grid = value.get<std::vector<double>>();
      else if (key == "maps") cfg.maps = value.get<std::vector<std::string>>();
      else if (key == "group") {
        const GroupAction g = parse_group(value.get<std::string>());
        cfg.group.kind = g.kind;
        if (g.n > 0) cfg.group.n = g.n;
      } else if (key == "n") cfg.group.n = value.get<int>();
      else if (key == "l") cfg.l = value.get<int>();
      else if (key == "histogram_bins") cfg.histogram_bins = value.get<std::size_t>();
      else if (key == "threads") cfg.threads = value.get<unsigned>();
      else throw Error(ErrorCode::ConfigInvalid, "unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("config field has the wrong type: ") + e.what());
  }
  validate(cfg, kind);
  return cfg;
}

std::string report_json(const ExperimentReport& report) {
  json j;
  j["kind"] = std::string(to_string(report.kind));
  json cfg = config_to_json(report.config);
  // thread count does not affect results and is left out so reports from
  // serial and parallel runs compare equal
  cfg.erase("threads");
  j["config"] = cfg;
  j["resampled"] = report.resampled;
  json ratios = json::array();
  for (const auto& r : report.ratios) {
    json q = json::array();
    for (const auto& [p, v] : r.quantiles) q.push_back({p, v});
    ratios.push_back({{"map", r.map},
                      {"count", r.count},
                      {"min", r.min},
                      {"max", r.max},
                      {"mean", r.mean},
                      {"stddev", r.stddev},
                      {"log_mean", r.log_mean},
                      {"log_stddev", r.log_stddev},
                      {"quantiles", q},
                      {"histogram", {{"lo", r.histogram_lo}, {"hi", r.histogram_hi}, {"counts", r.histogram}}}});
  }
  j["ratios"] = ratios;
  json rates = json::array();
  for (const auto& e : report.rates) {
    rates.push_back({{"map", e.map}, {"noise", e.noise}, {"errors", e.errors}, {"trials", e.trials}, {"rate", e.rate}});
  }
  j["rates"] = rates;
  return j.dump(2) + "\n";
}

std::string report_csv(const ExperimentReport& report) {
  std::string out;
  if (report.kind == ExperimentKind::Classification) {
    out = "map,noise,errors,trials,rate\n";
    for (const auto& e : report.rates) {
      out += e.map + "," + format_double(e.noise) + "," + std::to_string(e.errors) + "," + std::to_string(e.trials) +
             "," + format_double(e.rate) + "\n";
    }
    return out;
  }
  out = "map,bin,lo,hi,count\n";
  for (const auto& r : report.ratios) {
    const double width = (r.histogram_hi - r.histogram_lo) / static_cast<double>(r.histogram.size());
    for (std::size_t b = 0; b < r.histogram.size(); ++b) {
      const double lo = r.histogram_lo + width * static_cast<double>(b);
      out += r.map + "," + std::to_string(b) + "," + format_double(lo) + "," + format_double(lo + width) + "," +
             std::to_string(r.histogram[b]) + "\n";
    }
  }
  return out;
}

}  // namespace orbit::bench
