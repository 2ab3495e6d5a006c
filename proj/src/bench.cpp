#include "prism/bench.hpp"

#include <chrono>
#include <sstream>

#include "prism/dataset.hpp"
#include "prism/server.hpp"

namespace prism {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<BenchPoint> run_bench(const std::vector<u64>& domain_sizes,
                                  const std::vector<u64>& owner_counts,
                                  const std::vector<unsigned>& thread_counts, u64 seed,
                                  double fill) {
  std::vector<BenchPoint> out;
  for (u64 b : domain_sizes)
    for (u64 m : owner_counts)
      for (unsigned threads : thread_counts) {
        PublicParams params = generate_params(m, b, /*domain_max=*/100, seed);
        ParamsSet views = views_from(params);
        SplitMix64 data_rng(derive_seed(seed, b ^ (m << 20)));

        BenchPoint point{b, m, threads, 0, 0, 0};
        ServerEngine s1(views.server_views[0]), s2(views.server_views[1]);
        s1.set_threads(threads);
        s2.set_threads(threads);
        const u64 qid = derive_seed(seed, 0xbe);

        auto t0 = std::chrono::steady_clock::now();
        for (u64 j = 1; j <= m; ++j) {
          PresenceTable table;
          table.bits.resize(b);
          for (auto& bit : table.bits)
            bit = data_rng.uniform(1000) < static_cast<u64>(fill * 1000) ? 1 : 0;
          OwnerShareBundle bundle = share_tables(table, views.owner_view,
                                                 static_cast<std::uint32_t>(j),
                                                 /*with_verification=*/false, derive_seed(seed, j));
          s1.store_shares(qid, static_cast<std::uint32_t>(j), bundle.per_server[0]);
          s2.store_shares(qid, static_cast<std::uint32_t>(j), bundle.per_server[1]);
        }
        point.share_gen = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        std::vector<u64> out1 = s1.psi_eval(qid);
        std::vector<u64> out2 = s2.psi_eval(qid);
        point.server_eval = seconds_since(t0) / 2;  // per server

        t0 = std::chrono::steady_clock::now();
        PsiResult res = psi_finalize(out1, out2, views.owner_view);
        point.owner_finalize = seconds_since(t0);
        if (res.common.size() != b) throw protocol_error("bench: bad result length");
        out.push_back(point);
      }
  return out;
}

std::string bench_csv(const std::vector<BenchPoint>& points) {
  std::ostringstream os;
  os << "b,m,threads,share_gen_s,server_eval_s,owner_finalize_s\n";
  for (const auto& p : points)
    os << p.b << ',' << p.m << ',' << p.threads << ',' << p.share_gen << ',' << p.server_eval
       << ',' << p.owner_finalize << '\n';
  return os.str();
}

}  // namespace prism
