// hamsync: run synchronization experiments, or sync two word files over a
// loopback or TCP channel.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hamsync/bounds.hpp"
#include "hamsync/errors.hpp"
#include "hamsync/gf2codes.hpp"
#include "hamsync/harness.hpp"
#include "hamsync/probproto.hpp"
#include "hamsync/syncdet.hpp"
#include "hamsync/tcp.hpp"

namespace {

using namespace hamsync;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::size_t parse_size(const std::string& text) {
  std::size_t pos = 0;
  const unsigned long long value = std::stoull(text, &pos);
  if (pos != text.size()) throw ConfigError("not an integer: '" + text + "'");
  return static_cast<std::size_t>(value);
}

Word load_word(const std::string& path, bool raw) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  if (!raw) return read_word(in);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return unpack_bits(bytes, bytes.size() * 8);
}

void store_word(const std::string& path, const Word& w, bool raw) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  if (raw) {
    const auto bytes = pack_bits(w);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  } else {
    write_word(out, w);
  }
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

gf2::LinearCode load_code(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return gf2::LinearCode::from_parity_check(gf2::read_matrix(in));
}

struct RunOptions {
  std::string protocols = "syndrome";
  std::string ns = "7";
  std::string alphas = "1/7";
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  bool exhaustive = false;
  std::size_t code_dim = 0;
  std::size_t oversampling = 16;
  std::size_t candidates = 4;
  std::size_t words = 4;
  std::size_t k = 11;
  std::size_t s = 64;
  std::string delta = "0.15";
  std::size_t inner_dim = 5;
  std::string inner_finish = "nearest";
  std::string transport = "loopback";
  bool timing = false;
  std::string out;
  std::string format = "csv";
};

int do_run(const RunOptions& o) {
  harness::ExperimentConfig config;
  config.protocols = split_list(o.protocols);
  config.ns.clear();
  for (const auto& n : split_list(o.ns)) config.ns.push_back(parse_size(n));
  config.alphas.clear();
  for (const auto& a : split_list(o.alphas)) config.alphas.push_back(Rational::parse(a));
  config.trials = o.trials;
  config.seed = o.seed;
  config.exhaustive = o.exhaustive;
  if (o.code_dim > 0) config.code_dim = o.code_dim;
  config.oversampling = o.oversampling;
  config.candidates = o.candidates;
  config.words = o.words;
  config.prob.k = o.k;
  config.prob.s = o.s;
  config.prob.delta = Rational::parse(o.delta);
  config.prob.inner_dim = o.inner_dim;
  config.prob.inner_finish = prob::parse_inner_finish(o.inner_finish);
  config.transport = harness::parse_transport(o.transport);
  config.timing = o.timing;
  const auto format = harness::parse_format(o.format);

  const auto rows = harness::run_experiment(config);
  if (o.out.empty()) {
    harness::emit_report(rows, format, std::cout);
  } else {
    harness::emit_report(rows, format, std::filesystem::path(o.out));
  }
  return 0;
}

int do_bounds(std::size_t n, const std::string& alpha_text) {
  const Bounds bounds(Rational::parse(alpha_text), n);
  const double alpha = bounds.alpha.to_double();
  const std::size_t r = bounds.radius();
  const double dn = static_cast<double>(n);
  std::printf("n                       %zu\n", n);
  std::printf("alpha                   %s\n", bounds.alpha.to_string().c_str());
  std::printf("radius floor(alpha n)   %zu\n", r);
  std::printf("H(alpha) n              %.3f\n", binary_entropy(alpha) * dn);
  std::printf("H(2 alpha) n            %.3f\n", binary_entropy(std::min(1.0, 2 * alpha)) * dn);
  std::printf("log2 Vol(r, n)          %.3f\n", log2_ball_volume(r, n));
  std::printf("log2 Vol(2r, n)         %.3f\n", log2_ball_volume(std::min(2 * r, n), n));
  std::printf("Vol(r, n)               %s\n", ball_volume(r, n).str().c_str());
  return 0;
}

struct SyncOptions {
  std::string protocol = "syndrome";
  std::string alpha = "1/7";
  std::string alice;
  std::string bob;
  std::string output;
  std::string code;
  std::string listen;
  std::string connect;
  std::string transport = "loopback";
  bool raw = false;
  std::uint64_t seed = 1;
  std::size_t oversampling = 16;
  std::size_t k = 11;
  std::size_t s = 64;
  std::string delta = "0.15";
  std::size_t inner_dim = 5;
  std::string inner_finish = "nearest";
};

/// Build the party pair for one side; the other word is a same-length
/// placeholder the local process never uses.
PartyPair make_parties(const SyncOptions& o, const Word& x, const Word& y) {
  const std::size_t n = x.size();
  const Bounds bounds(Rational::parse(o.alpha), n);
  const std::size_t r = bounds.radius();
  auto code = [&]() {
    if (!o.code.empty()) return load_code(o.code);
    if (n == 7) return gf2::hamming_7_4();
    throw ConfigError("protocol " + o.protocol + " needs --code unless n == 7");
  };
  if (o.protocol == "naive") return syncdet::make_naive_parties(x, y);
  if (o.protocol == "syndrome") return syncdet::make_syndrome_parties(syncdet::DecodingCode::make(code(), r), x, y);
  if (o.protocol == "listdec") {
    return syncdet::make_listdec_parties(std::make_shared<const gf2::LinearCode>(code()), r, x, y);
  }
  if (o.protocol == "oneround") {
    return prob::make_one_round_parties(std::make_shared<const gf2::LinearCode>(code()), r, o.oversampling, x, y,
                                        o.seed);
  }
  if (o.protocol == "smith") {
    prob::ProbParams params;
    params.k = o.k;
    params.s = o.s;
    params.delta = Rational::parse(o.delta);
    params.inner_dim = o.inner_dim;
    params.inner_finish = prob::parse_inner_finish(o.inner_finish);
    return prob::make_composite_parties(bounds, params, x, y, o.seed);
  }
  throw ConfigError("sync supports naive|syndrome|listdec|oneround|smith");
}

void report_outcome(const ProtocolOutcome& outcome, const std::string& output, bool raw) {
  std::cerr << "bits " << outcome.transcript.total_bits() << "  rounds " << outcome.transcript.rounds() << '\n';
  for (const auto& [key, value] : outcome.diagnostics) std::cerr << "  " << key << " = " << value << '\n';
  if (!outcome.recovered) throw std::runtime_error("synchronization failed");
  if (!output.empty()) store_word(output, *outcome.recovered, raw);
}

int do_sync(const SyncOptions& o) {
  if (!o.listen.empty() && !o.connect.empty()) throw ConfigError("use --listen or --connect, not both");

  if (!o.listen.empty()) {
    // Bob: listen for Alice.
    if (o.bob.empty()) throw ConfigError("--listen runs Bob and needs --bob");
    const Word y = load_word(o.bob, o.raw);
    auto parties = make_parties(o, y, y);
    auto endpoint = tcp_channel(TcpEndpointSpec::parse(TcpEndpointSpec::Mode::Listen, o.listen));
    report_outcome(run_bob_remote(*parties.bob, *endpoint), o.output, o.raw);
    return 0;
  }
  if (!o.connect.empty()) {
    if (o.alice.empty()) throw ConfigError("--connect runs Alice and needs --alice");
    const Word x = load_word(o.alice, o.raw);
    auto parties = make_parties(o, x, x);
    auto endpoint = tcp_channel(TcpEndpointSpec::parse(TcpEndpointSpec::Mode::Connect, o.connect));
    const Transcript t = run_alice_remote(*parties.alice, *endpoint);
    std::cerr << "bits " << t.total_bits() << "  rounds " << t.rounds() << '\n';
    return 0;
  }

  if (o.alice.empty() || o.bob.empty()) throw ConfigError("in-process sync needs --alice and --bob");
  const Word x = load_word(o.alice, o.raw);
  const Word y = load_word(o.bob, o.raw);
  if (x.size() != y.size()) throw ConfigError("the two files hold words of different lengths");
  auto parties = make_parties(o, x, y);
  auto channel = harness::parse_transport(o.transport) == harness::TransportKind::Tcp ? tcp_loopback_channel()
                                                                                      : loopback_channel();
  const auto outcome = run_protocol(parties, *channel);
  report_outcome(outcome, o.output, o.raw);
  return 0;
}

int do_gen(std::size_t n, const std::string& alpha_text, std::uint64_t seed, const std::string& x_path,
           const std::string& y_path, bool raw) {
  const Bounds bounds(Rational::parse(alpha_text), n);
  Rng rng(seed);
  const Word x = random_word(n, rng);
  const Word y = random_word_within(x, bounds.radius(), rng);
  store_word(x_path, x, raw);
  store_word(y_path, y, raw);
  std::cerr << "distance " << hamming_distance(x, y) << " (radius " << bounds.radius() << ")\n";
  return 0;
}

int do_gen_code(std::size_t n, std::size_t k, std::uint64_t seed, const std::string& path) {
  Rng rng(seed);
  const auto code = gf2::random_linear_code(n, k, rng);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  gf2::write_matrix(out, code.parity_check());
  std::cerr << "[" << n << "," << k << "] code, unique radius " << gf2::unique_decoding_radius(code) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamming-distance file synchronization protocols"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a protocol experiment and print a report");
  run_cmd->add_option("--protocol", run.protocols, "Comma list: naive,brute,syndrome,listdec,coloring,oneround,smith,nba,multinba");
  run_cmd->add_option("--n", run.ns, "Word length(s), comma separated");
  run_cmd->add_option("--alpha", run.alphas, "Distance fraction(s), decimal or p/q, comma separated");
  run_cmd->add_option("--trials", run.trials, "Random instances per row");
  run_cmd->add_option("--seed", run.seed, "Experiment seed");
  run_cmd->add_flag("--exhaustive", run.exhaustive, "Enumerate every promise pair");
  run_cmd->add_option("--code-dim", run.code_dim, "Random code dimension for listdec/oneround");
  run_cmd->add_option("--a", run.oversampling, "Prime oversampling factor for oneround");
  run_cmd->add_option("--candidates", run.candidates, "NBA candidate count");
  run_cmd->add_option("--words", run.words, "Words held by Alice in multinba");
  run_cmd->add_option("--k", run.k, "smith: block size");
  run_cmd->add_option("--s", run.s, "smith: extra Reed-Solomon evaluations");
  run_cmd->add_option("--delta", run.delta, "smith: slack delta");
  run_cmd->add_option("--inner-dim", run.inner_dim, "smith: inner code dimension");
  run_cmd->add_option("--inner-finish", run.inner_finish, "smith: nearest|nba");
  run_cmd->add_option("--transport", run.transport, "loopback|tcp");
  run_cmd->add_flag("--timing", run.timing, "Fill wall_time_ms");
  run_cmd->add_option("--out", run.out, "Output file (default stdout)");
  run_cmd->add_option("--format", run.format, "csv|json");

  std::size_t bounds_n = 1000;
  std::string bounds_alpha = "0.1";
  auto* bounds_cmd = app.add_subcommand("bounds", "Print entropy and ball-volume references");
  bounds_cmd->add_option("--n", bounds_n, "Word length")->required();
  bounds_cmd->add_option("--alpha", bounds_alpha, "Distance fraction")->required();

  SyncOptions sync;
  auto* sync_cmd = app.add_subcommand("sync", "Synchronize word files, in-process or across two processes");
  sync_cmd->add_option("--protocol", sync.protocol, "naive|syndrome|listdec|oneround|smith");
  sync_cmd->add_option("--alpha", sync.alpha, "Promised distance fraction");
  sync_cmd->add_option("--alice", sync.alice, "Alice's word file");
  sync_cmd->add_option("--bob", sync.bob, "Bob's word file");
  sync_cmd->add_option("--output", sync.output, "Where Bob writes the recovered word");
  sync_cmd->add_option("--code", sync.code, "Parity-check matrix file (see gen-code)");
  sync_cmd->add_option("--transport", sync.transport, "loopback|tcp for in-process runs");
  sync_cmd->add_option("--listen", sync.listen, "HOST:PORT; run Bob and wait for Alice");
  sync_cmd->add_option("--connect", sync.connect, "HOST:PORT; run Alice and connect to Bob");
  sync_cmd->add_flag("--raw", sync.raw, "Files are raw bytes rather than length-prefixed words");
  sync_cmd->add_option("--seed", sync.seed, "Alice's random seed");
  sync_cmd->add_option("--a", sync.oversampling, "oneround: prime oversampling factor");
  sync_cmd->add_option("--k", sync.k, "smith: block size");
  sync_cmd->add_option("--s", sync.s, "smith: extra evaluations");
  sync_cmd->add_option("--delta", sync.delta, "smith: slack delta");
  sync_cmd->add_option("--inner-dim", sync.inner_dim, "smith: inner code dimension");
  sync_cmd->add_option("--inner-finish", sync.inner_finish, "smith: nearest|nba");

  std::size_t gen_n = 64;
  std::string gen_alpha = "0.1";
  std::uint64_t gen_seed = 1;
  std::string gen_x, gen_y;
  bool gen_raw = false;
  auto* gen_cmd = app.add_subcommand("gen", "Write a random promise instance (X, Y)");
  gen_cmd->add_option("--n", gen_n, "Word length")->required();
  gen_cmd->add_option("--alpha", gen_alpha, "Distance fraction");
  gen_cmd->add_option("--seed", gen_seed, "Seed");
  gen_cmd->add_option("--x", gen_x, "Alice's output file")->required();
  gen_cmd->add_option("--y", gen_y, "Bob's output file")->required();
  gen_cmd->add_flag("--raw", gen_raw, "Write raw bytes (n must be a multiple of 8)");

  std::size_t code_n = 14, code_k = 5;
  std::uint64_t code_seed = 1;
  std::string code_out;
  auto* code_cmd = app.add_subcommand("gen-code", "Write the parity-check matrix of a random [n, k] code");
  code_cmd->add_option("--n", code_n, "Length")->required();
  code_cmd->add_option("--k", code_k, "Dimension")->required();
  code_cmd->add_option("--seed", code_seed, "Seed");
  code_cmd->add_option("--out", code_out, "Output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return do_run(run);
    if (*bounds_cmd) return do_bounds(bounds_n, bounds_alpha);
    if (*sync_cmd) return do_sync(sync);
    if (*gen_cmd) {
      if (gen_raw && gen_n % 8 != 0) throw ConfigError("--raw needs n divisible by 8");
      return do_gen(gen_n, gen_alpha, gen_seed, gen_x, gen_y, gen_raw);
    }
    if (*code_cmd) return do_gen_code(code_n, code_k, code_seed, code_out);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
