#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "terramap/data_table.hpp"

namespace terramap {

struct BenchRow {
  std::string name;
  double mean_s = 0;
  double sd_s = 0;  // sample standard deviation, 0 for a single repetition
  std::vector<double> samples;
};

struct BenchReport {
  std::size_t n_samples = 0;
  int reps = 0;
  int width = 0;
  int height = 0;
  std::vector<BenchRow> rows;

  const BenchRow* find(const std::string& name) const;
  std::string table() const;
  std::string csv() const;
};

// n points from a fixed mixture of five Gaussians over a Denmark-sized box,
// with a shuffled copy as edge destinations (lat, lon, lat_departure,
// lon_departure, lat_arrival, lon_arrival).
DataTable bench_data(std::size_t n, std::uint64_t seed = 42);

// Times invalidate + first draw of each visualization on a blank offscreen
// target. Data generation and layer construction are not timed.
BenchReport bench(std::size_t n_samples = 1000000, int reps = 10,
                  std::vector<std::string> only = {},
                  const std::function<void(const std::string&, int)>& progress = {});

inline const std::vector<std::string>& bench_names() {
  static const std::vector<std::string> names{"dot", "graph", "hist", "kde", "voronoi"};
  return names;
}

}  // namespace terramap
