#include "terramap/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include "terramap/error.hpp"
#include "terramap/layers.hpp"

namespace terramap {

namespace {

struct Blob {
  double lon, lat, sd_lon, sd_lat, weight;
};

// Roughly the larger Danish cities.
constexpr Blob kBlobs[] = {
    {12.57, 55.68, 0.25, 0.15, 0.40},
    {10.20, 56.16, 0.20, 0.12, 0.20},
    {10.39, 55.40, 0.18, 0.10, 0.15},
    {9.92, 57.05, 0.20, 0.12, 0.15},
    {8.45, 55.47, 0.15, 0.10, 0.10},
};

const BoundingBox kBenchBox{57.8, 8.0, 54.5, 13.0};

std::unique_ptr<Layer> make_layer(const std::string& name, const DataTable& data) {
  if (name == "dot") return std::make_unique<DotLayer>(data);
  if (name == "graph") return std::make_unique<GraphLayer>(data);
  if (name == "hist") return std::make_unique<HistLayer>(data);
  if (name == "kde") return std::make_unique<KdeLayer>(data);
  if (name == "voronoi") return std::make_unique<VoronoiLayer>(data);
  throw DataError("unknown benchmark '" + name + "'");
}

}  // namespace

const BenchRow* BenchReport::find(const std::string& name) const {
  for (const auto& r : rows) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

std::string BenchReport::table() const {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "%zu samples, %d repetitions, %dx%d offscreen\n", n_samples, reps, width,
                height);
  out << line;
  std::snprintf(line, sizeof line, "%-12s %10s %10s\n", "", "mean (s)", "sd (s)");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-12s %10.3f %10.3f\n", r.name.c_str(), r.mean_s, r.sd_s);
    out << line;
  }
  return out.str();
}

std::string BenchReport::csv() const {
  std::ostringstream out;
  out << "visualization,mean_s,sd_s,reps,n_samples\n";
  char line[128];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%s,%.6f,%.6f,%zu,%zu\n", r.name.c_str(), r.mean_s, r.sd_s,
                  r.samples.size(), n_samples);
    out << line;
  }
  return out.str();
}

DataTable bench_data(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> weights;
  for (const auto& b : kBlobs) weights.push_back(b.weight);
  std::discrete_distribution<int> pick(weights.begin(), weights.end());
  std::normal_distribution<double> normal;

  std::vector<double> lat(n), lon(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Blob& b = kBlobs[pick(rng)];
    lon[i] = std::clamp(b.lon + b.sd_lon * normal(rng), kBenchBox.west(), kBenchBox.east());
    lat[i] = std::clamp(b.lat + b.sd_lat * normal(rng), kBenchBox.south(), kBenchBox.north());
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> lat_to(n), lon_to(n);
  for (std::size_t i = 0; i < n; ++i) {
    lat_to[i] = lat[perm[i]];
    lon_to[i] = lon[perm[i]];
  }
  return DataTable::from_columns({{"lat", lat},
                                  {"lon", lon},
                                  {"lat_departure", lat},
                                  {"lon_departure", lon},
                                  {"lat_arrival", std::move(lat_to)},
                                  {"lon_arrival", std::move(lon_to)}});
}

BenchReport bench(std::size_t n_samples, int reps, std::vector<std::string> only,
                  const std::function<void(const std::string&, int)>& progress) {
  if (reps < 1) throw DataError("bench needs at least one repetition");
  if (only.empty()) only = bench_names();
  const DataTable data = bench_data(n_samples);

  BenchReport report;
  report.n_samples = n_samples;
  report.reps = reps;
  report.width = 1280;
  report.height = 768;
  const ViewState view = fit_view(kBenchBox, report.width, report.height);
  const Projection proj(view);
  RenderTarget target(report.width, report.height, TargetKind::Offscreen);
  UiManager ui;
  const MouseState mouse;

  for (const auto& name : only) {
    BenchRow row;
    row.name = name;
    for (int r = 0; r < reps; ++r) {
      if (progress) progress(name, r);
      auto layer = make_layer(name, data);
      target.clear({255, 255, 255, 255});
      const auto t0 = std::chrono::steady_clock::now();
      layer->invalidate(proj);
      layer->draw(proj, target, mouse, ui);
      const auto t1 = std::chrono::steady_clock::now();
      row.samples.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    const double k = static_cast<double>(row.samples.size());
    row.mean_s = std::accumulate(row.samples.begin(), row.samples.end(), 0.0) / k;
    if (row.samples.size() > 1) {
      double ss = 0;
      for (double s : row.samples) ss += (s - row.mean_s) * (s - row.mean_s);
      row.sd_s = std::sqrt(ss / (k - 1));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace terramap
