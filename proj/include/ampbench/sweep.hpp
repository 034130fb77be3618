#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ampbench/closed_forms.hpp"

namespace ampbench {

/// Round a double through its 12-significant-digit decimal form, so that
/// CSV and JSON emissions of the same run parse back to identical values.
inline double round12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

inline std::string format12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// One output record, shared by every emitting subcommand.
struct ResultRow {
  double g = 0.0;
  double lambda = 0.0;
  std::string quantity;
  double value = 0.0;
  std::string meta;  // seeds, dims, and anything else needed to reproduce
};

struct SweepConfig {
  std::vector<double> g_values;
  std::vector<double> lambda_values;
  std::vector<std::string> quantities;  // f_det | f_prob | cft | norm_gap
  std::string format = "csv";
};

inline void validate(const SweepConfig& config) {
  if (config.g_values.empty() || config.lambda_values.empty() ||
      config.quantities.empty())
    throw std::invalid_argument("sweep: g, lambda and quantity lists must be nonempty");
  for (double g : config.g_values)
    if (!(g >= 1.0)) throw std::domain_error("sweep: all g values must be >= 1");
  for (double lambda : config.lambda_values)
    if (!(lambda >= 0.0))
      throw std::domain_error("sweep: all lambda values must be >= 0");
  for (const std::string& q : config.quantities)
    if (q != "f_det" && q != "f_prob" && q != "cft" && q != "norm_gap")
      throw std::invalid_argument("sweep: unknown quantity '" + q + "'");
  if (config.format != "csv" && config.format != "json")
    throw std::invalid_argument("sweep: format must be csv or json");
}

inline int thread_budget() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("AMPBENCH_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return static_cast<int>(n);
}

/// Evaluate the requested quantities over the (g, lambda) grid. Grid points
/// are computed concurrently (capped by AMPBENCH_THREADS) but the rows come
/// back in deterministic grid order: g outer, lambda middle, quantity inner.
inline std::vector<ResultRow> run_sweep(const SweepConfig& config) {
  validate(config);
  struct Point {
    double g, lambda;
    std::string quantity;
  };
  std::vector<Point> grid;
  for (double g : config.g_values)
    for (double lambda : config.lambda_values)
      for (const std::string& q : config.quantities)
        grid.push_back(Point{g, lambda, q});

  std::vector<ResultRow> rows(grid.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Point& pt = grid[i];
      double value = 0.0;
      if (pt.quantity == "f_det")
        value = optimal_squeezer(pt.g, pt.lambda).fidelity;
      else if (pt.quantity == "f_prob")
        value = probabilistic_fidelity(pt.g, pt.lambda);
      else if (pt.quantity == "cft")
        value = classical_fidelity_threshold(pt.g, pt.lambda);
      else  // norm_gap: heralded quantum advantage over the classical bound
        value = probabilistic_fidelity(pt.g, pt.lambda) -
                classical_fidelity_threshold(pt.g, pt.lambda);
      rows[i] = ResultRow{round12(pt.g), round12(pt.lambda), pt.quantity,
                          round12(value), "exact"};
    }
  };

  const int threads = std::min<int>(thread_budget(), static_cast<int>(grid.size()));
  if (threads <= 1) {
    work(0, grid.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (grid.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(grid.size(), begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return rows;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "g,lambda,quantity,value,meta\n";
  for (const ResultRow& r : rows)
    out << format12(r.g) << ',' << format12(r.lambda) << ','
        << csv_escape(r.quantity) << ',' << format12(r.value) << ','
        << csv_escape(r.meta) << '\n';
  return out.str();
}

inline std::string to_json(const std::vector<ResultRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ResultRow& r : rows)
    arr.push_back({{"g", r.g},
                   {"lambda", r.lambda},
                   {"quantity", r.quantity},
                   {"value", r.value},
                   {"meta", r.meta}});
  return arr.dump(2) + "\n";
}

inline std::string emit(const std::vector<ResultRow>& rows,
                        const std::string& format) {
  return format == "json" ? to_json(rows) : to_csv(rows);
}

}  // namespace ampbench
