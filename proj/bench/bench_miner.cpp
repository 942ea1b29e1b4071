// Serial reference vs OpenMP kernels for keyword extraction and support counting.
// Usage: bench_miner [baskets=5000] [texts=2000] [min_support=0.01]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "keybasket/keyness.hpp"
#include "keybasket/miner.hpp"
#include "synth.hpp"

using namespace keybasket;

namespace {

template <typename F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void line(const char* what, double serial, double parallel, bool same) {
  std::printf("%-28s serial %8.3f s  parallel %8.3f s  speedup %5.2fx  %s\n", what, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n_tx = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 5000;
  const std::size_t n_docs = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 2000;
  const double support = argc > 3 ? std::strtod(argv[3], nullptr) : 0.01;
  const int reps = 3;
  std::printf("threads: %d\n", omp_get_max_threads());

  synth::PlantedSpec spec;
  spec.n_docs = n_docs;
  const auto planted = synth::planted_corpus(spec, 1);
  keyness::TransactionBuild ser_build, par_build;
  const double ks = best_of(reps, [&] {
    ser_build = keyness::build_transactions_serial(planted.corpus, planted.reference, {});
  });
  const double kp = best_of(reps, [&] {
    par_build = keyness::build_transactions(planted.corpus, planted.reference, {});
  });
  line(("keywords, " + std::to_string(n_docs) + " texts").c_str(), ks, kp, ser_build.lists == par_build.lists);

  const auto ts = miner::TransactionSet::from_baskets(synth::scale_baskets(n_tx, 8));
  miner::FrequentItemsets ser, par;
  const double ms = best_of(reps, [&] { ser = miner::frequent_itemsets(ts, support, 4, miner::Counting::serial); });
  const double mp = best_of(reps, [&] { par = miner::frequent_itemsets(ts, support, 4, miner::Counting::parallel); });
  line(("itemsets, " + std::to_string(n_tx) + " baskets").c_str(), ms, mp, ser == par);
  std::printf("frequent itemsets: %zu\n", par.size());
  return ser == par && ser_build.lists == par_build.lists ? 0 : 1;
}
