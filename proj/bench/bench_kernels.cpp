// Times each OpenMP kernel against its serial reference on a Digg-sized
// layout and checks that both produce the same bits.
//
//   bench_kernels [nodes] [entries] [repeats]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <vector>

#include "trendcast/kernels.hpp"

using namespace trendcast;
namespace k = trendcast::kernels;

namespace {

double best_of(int repeats, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    f();
    best = std::min(best,
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return best * 1e3;
}

template <class T>
bool same_bits(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0;
}

void report(const char* name, double serial_ms, double parallel_ms, bool equal) {
  std::printf("%-22s %10.2f %10.2f %8.2fx  %s\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, equal ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t nodes = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 300000;
  const std::size_t entries = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 3000000;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 5;

  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> node(0, nodes - 1);
  std::uniform_int_distribution<Timestamp> when(0, 10000000);

  // Per-node sorted timestamps with a collector per entry.
  std::vector<std::size_t> offsets(nodes + 1, 0);
  std::vector<std::size_t> owner(entries);
  for (auto& o : owner) ++offsets[(o = node(rng)) + 1];
  for (std::size_t v = 0; v < nodes; ++v) offsets[v + 1] += offsets[v];
  std::vector<Timestamp> times(entries);
  std::vector<std::uint32_t> collectors(entries);
  for (auto& t : times) t = when(rng);
  for (auto& c : collectors) c = static_cast<std::uint32_t>(node(rng));
  for (std::size_t v = 0; v < nodes; ++v) {
    std::sort(times.begin() + offsets[v], times.begin() + offsets[v + 1]);
  }
  const k::TimeIndexView index{offsets, times};
  const k::CsrView followers{offsets, collectors};

  std::vector<double> weight(nodes), share(nodes), scores(nodes, 1.0 / double(nodes));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& w : weight) w = unit(rng);
  for (std::size_t v = 0; v < nodes; ++v) {
    const auto d = offsets[v + 1] - offsets[v];
    share[v] = d == 0 ? 0.0 : 1.0 / double(d);
  }

  std::printf("nodes %zu, entries %zu, threads %d, best of %d\n", nodes, entries,
              omp_get_max_threads(), repeats);
  std::printf("%-22s %10s %10s %9s\n", "kernel", "serial ms", "openmp ms", "speedup");

  const Timestamp t = 6000000;
  const Duration window = 2000000;
  {
    std::vector<std::int64_t> a(nodes), b(nodes);
    const double s = best_of(repeats, [&] { k::reference::window_counts(index, t, window, a); });
    const double p = best_of(repeats, [&] { k::window_counts(index, t, window, b); });
    report("window_counts", s, p, same_bits(a, b));
  }
  {
    std::vector<double> a(nodes), b(nodes);
    const double s = best_of(repeats, [&] {
      k::reference::window_weighted_sums(index, collectors, weight, t, window, a);
    });
    const double p = best_of(
        repeats, [&] { k::window_weighted_sums(index, collectors, weight, t, window, b); });
    report("window_weighted_sums", s, p, same_bits(a, b));
  }
  {
    std::vector<double> a(nodes), b(nodes);
    const double s = best_of(repeats, [&] { k::reference::powers(weight, -0.7, a); });
    const double p = best_of(repeats, [&] { k::powers(weight, -0.7, b); });
    report("powers", s, p, same_bits(a, b));
  }
  {
    std::vector<double> a(nodes), b(nodes);
    double ra = 0, rb = 0;
    const double base = 0.15 / double(nodes);
    const double s = best_of(repeats, [&] {
      ra = k::reference::pagerank_sweep(followers, share, scores, base, 0.85, a);
    });
    const double p =
        best_of(repeats, [&] { rb = k::pagerank_sweep(followers, share, scores, base, 0.85, b); });
    report("pagerank_sweep", s, p, same_bits(a, b) && ra == rb);
  }
  {
    std::vector<double> a(nodes), b(nodes);
    double ga = 0, gb = 0;
    const double s = best_of(repeats, [&] {
      ga = k::reference::leaderrank_sweep(followers, share, scores, 1.0, a);
    });
    const double p =
        best_of(repeats, [&] { gb = k::leaderrank_sweep(followers, share, scores, 1.0, b); });
    report("leaderrank_sweep", s, p, same_bits(a, b) && ga == gb);
  }
  {
    double ra = 0, rb = 0;
    const double s = best_of(repeats, [&] { ra = k::reference::sum(weight); });
    const double p = best_of(repeats, [&] { rb = k::sum(weight); });
    report("sum", s, p, ra == rb);
  }
}
