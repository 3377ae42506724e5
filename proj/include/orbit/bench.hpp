#pragma once

// Seeded experiment harness.
//
// Every trial draws from its own generator, seeded from (master seed, stream,
// trial index), and results are reduced in trial order, so reports do not
// depend on the number of worker threads.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "orbit/metrics.hpp"

namespace orbit::bench {

enum class ExperimentKind { Distortion, Classification, LowerConstant };

std::string_view to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(std::string_view text);

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::size_t n_pairs = 100000;
  std::size_t db_size = 500;
  std::size_t noise_draws = 20;
  std::vector<double> noise_grid;
  std::vector<std::string> maps;
  GroupAction group{Group::Euclidean, 2};
  int l = 3;
  std::size_t histogram_bins = 40;
  unsigned threads = 1;
};

/// Defaults used by the CLI when a config file omits a field.
ExperimentConfig default_config(ExperimentKind kind);

/// ConfigInvalid on any violation (zero counts, unsorted or negative noise
/// grid, maps not allowed for the experiment, wrong shape for the triangle
/// experiments).
void validate(const ExperimentConfig& cfg, ExperimentKind kind);

struct RatioStats {
  std::string map;
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  double log_mean = 0.0;
  double log_stddev = 0.0;
  std::vector<std::pair<double, double>> quantiles;  // (probability, value)
  double histogram_lo = 0.0;
  double histogram_hi = 0.0;
  std::vector<std::size_t> histogram;  // values outside [lo, hi] go to the end bins
};

struct RateEntry {
  std::string map;
  double noise = 0.0;
  std::size_t errors = 0;
  std::size_t trials = 0;
  double rate = 0.0;
};

struct ExperimentReport {
  ExperimentKind kind = ExperimentKind::Distortion;
  ExperimentConfig config;
  std::size_t resampled = 0;  // degenerate pairs redrawn
  std::vector<RatioStats> ratios;
  std::vector<RateEntry> rates;

  const RatioStats& ratio(std::string_view map) const;
  const RateEntry& rate(std::string_view map, double noise) const;
};

/// Ratios |map(A) - map(B)| / d_E(2)(A, B) over random Gaussian triangle
/// pairs, for maps in {gamma, psi_triangle}.
ExperimentReport distortion_experiment(const ExperimentConfig& cfg);

/// Nearest-neighbour classification of noisy copies of database triangles,
/// for maps in {exact, gamma, psi_triangle}.
ExperimentReport classification_experiment(const ExperimentConfig& cfg);

/// Distribution of |reduced(A) - reduced(B)| / d_G(A, B) for the reduced map
/// of cfg.group on n x l configurations.
ExperimentReport lower_constant_survey(const ExperimentConfig& cfg);

ExperimentReport run(ExperimentKind kind, const ExperimentConfig& cfg);

/// Deterministic generator for one trial of one stream.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Runs body(i) for i in [0, count) on up to `threads` workers.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body);

/// Summary statistics of `values` in index order.
RatioStats summarize(std::string map, const std::vector<double>& values, double lo, double hi, std::size_t bins);

std::string report_json(const ExperimentReport& report);
std::string report_csv(const ExperimentReport& report);
std::string config_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text, ExperimentKind kind);

}  // namespace orbit::bench

#include "orbit/detail/parallel.hpp"
