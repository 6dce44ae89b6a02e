#include <benchmark/benchmark.h>

#include <set>

#include "hamsync/bounds.hpp"
#include "hamsync/gf2codes.hpp"
#include "hamsync/gf2k.hpp"
#include "hamsync/hashing.hpp"
#include "hamsync/probproto.hpp"
#include "hamsync/syncdet.hpp"
#include "hamsync/tcp.hpp"

using namespace hamsync;

namespace {

void BM_SyndromeHamming(benchmark::State& state) {
  const auto code = syncdet::DecodingCode::make(gf2::hamming_7_4());
  Rng rng(1);
  const Word x = random_word(7, rng);
  const syncdet::SyncInstance inst(x, random_word_within(x, 1, rng), Bounds(Rational(1, 7), 7));
  for (auto _ : state) benchmark::DoNotOptimize(syncdet::syndrome_sync(code, inst));
}
BENCHMARK(BM_SyndromeHamming);

void BM_ListdecSync(benchmark::State& state) {
  Rng rng(2);
  const auto code = std::make_shared<const gf2::LinearCode>(gf2::random_linear_code(14, 5, rng));
  const Word x = random_word(14, rng);
  const syncdet::SyncInstance inst(x, random_word_within(x, 3, rng), Bounds(Rational(3, 14), 14));
  for (auto _ : state) benchmark::DoNotOptimize(syncdet::listdec_sync(code, 3, inst));
}
BENCHMARK(BM_ListdecSync);

void BM_Nba(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  std::set<Word> distinct;
  while (distinct.size() < 8) distinct.insert(random_word(n, rng));
  const std::vector<Word> set(distinct.begin(), distinct.end());
  for (auto _ : state) benchmark::DoNotOptimize(hashing::nba_protocol(set[3], set));
}
BENCHMARK(BM_Nba)->Arg(256)->Arg(4096);

void BM_MultiNba(benchmark::State& state) {
  Rng rng(4);
  std::set<Word> distinct;
  while (distinct.size() < 8) distinct.insert(random_word(256, rng));
  const std::vector<Word> ys(distinct.begin(), distinct.end());
  const std::vector<Word> xs{ys[0], ys[5], ys[2], ys[7]};
  for (auto _ : state) benchmark::DoNotOptimize(hashing::multi_nba_protocol(xs, ys, rng));
}
BENCHMARK(BM_MultiNba);

void BM_RsCorrect(benchmark::State& state) {
  const rs::GaloisField f(8);
  Rng rng(5);
  std::vector<rs::FieldElem> blocks(32);
  for (auto& b : blocks) b = {static_cast<std::uint32_t>(rng() % 256)};
  const auto extra = rs::rs_extra_evals(f, blocks, 16);
  auto received = blocks;
  for (std::size_t i = 0; i < static_cast<std::size_t>(state.range(0)); ++i) received[3 * i].value ^= 0x5a;
  for (auto _ : state) benchmark::DoNotOptimize(rs::rs_correct(f, received, extra));
}
BENCHMARK(BM_RsCorrect)->Arg(0)->Arg(7);

void BM_Composite(benchmark::State& state) {
  const std::size_t n = 2048;
  prob::ProbParams params;
  params.inner_finish = state.range(0) ? prob::InnerFinish::Nba : prob::InnerFinish::Nearest;
  const Bounds bounds(Rational(1, 20), n);
  Rng rng(6);
  const Word x = random_word(n, rng);
  const syncdet::SyncInstance inst(x, random_word_within(x, bounds.radius(), rng), bounds);
  for (auto _ : state) benchmark::DoNotOptimize(prob::composite_prob_sync(inst, params, rng));
}
BENCHMARK(BM_Composite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BallVolume(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(log2_ball_volume(500, 2000));
}
BENCHMARK(BM_BallVolume);

void BM_SyndromeOverTcp(benchmark::State& state) {
  const auto code = syncdet::DecodingCode::make(gf2::hamming_7_4());
  Rng rng(7);
  const Word x = random_word(7, rng);
  const syncdet::SyncInstance inst(x, random_word_within(x, 1, rng), Bounds(Rational(1, 7), 7));
  auto channel = tcp_loopback_channel();
  for (auto _ : state) benchmark::DoNotOptimize(syncdet::syndrome_sync(code, inst, channel.get()));
}
BENCHMARK(BM_SyndromeOverTcp);

}  // namespace

BENCHMARK_MAIN();
