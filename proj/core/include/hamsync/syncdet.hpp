#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "hamsync/bounds.hpp"
#include "hamsync/gf2codes.hpp"
#include "hamsync/transport.hpp"
#include "hamsync/word.hpp"

namespace hamsync::syncdet {

/// Alice holds x, Bob holds y, and both know ρ(x, y) <= floor(alpha n).
struct SyncInstance {
  Word x;
  Word y;
  Bounds bounds;

  SyncInstance(Word x_, Word y_, Bounds bounds_);

  std::size_t radius() const { return bounds.radius(); }
  bool promise_holds() const { return hamming_distance(x, y) <= radius(); }
};

/// A code paired with a syndrome-table decoder, built once and shared by
/// many runs.
struct DecodingCode {
  std::shared_ptr<const gf2::LinearCode> code;
  std::shared_ptr<const gf2::SyndromeDecoder> decoder;

  /// Throws CapabilityError if the code does not uniquely decode `radius`.
  static DecodingCode make(gf2::LinearCode code, std::size_t radius);
  /// Uses unique_decoding_radius(code).
  static DecodingCode make(gf2::LinearCode code);
};

// Every protocol comes as a party factory (for custom channels and remote
// runs) plus a convenience wrapper. A null channel means a fresh loopback.

/// Alice sends x verbatim.
PartyPair make_naive_parties(Word x, Word y);
ProtocolOutcome naive_sync(const SyncInstance& instance, DuplexChannel* channel = nullptr);

/// Message length n is the code dimension. Alice sends the check bits of her
/// codeword; Bob decodes (y, checks).
PartyPair make_brute_parties(const DecodingCode& code, Word x, Word y);
ProtocolOutcome brute_sync(const DecodingCode& code, const SyncInstance& instance, DuplexChannel* channel = nullptr);

/// Alice sends H x. Bob solves H t = h + H y, decodes t to z and outputs
/// t + y + z.
PartyPair make_syndrome_parties(const DecodingCode& code, Word x, Word y);
ProtocolOutcome syndrome_sync(const DecodingCode& code, const SyncInstance& instance,
                              DuplexChannel* channel = nullptr);

/// min(2^dim, Vol(radius, n)): the most candidates Bob can hold after list
/// decoding. Both parties use it to size hash fields.
std::uint64_t list_size_cap(const gf2::LinearCode& code, std::size_t radius);

/// Bob's candidate set after receiving syndrome h: every word w with
/// H w = h and ρ(w, y) <= radius, ascending.
std::vector<Word> listdec_candidates(const gf2::LinearCode& code, std::size_t radius, const Word& h, const Word& y);

/// Three rounds: syndrome, NBA challenge, NBA residue.
PartyPair make_listdec_parties(std::shared_ptr<const gf2::LinearCode> code, std::size_t radius, Word x, Word y);
ProtocolOutcome listdec_sync(std::shared_ptr<const gf2::LinearCode> code, std::size_t radius,
                             const SyncInstance& instance, DuplexChannel* channel = nullptr);

inline constexpr std::size_t kMaxColoringLength = 16;

/// Greedy coloring of {0,1}^n where words within distance 2r are adjacent.
/// Vertices are colored in increasing integer order with the smallest free
/// color.
struct ColoringTable {
  std::size_t n = 0;
  std::size_t radius = 0;
  std::vector<std::uint32_t> colors;
  std::uint32_t color_count = 0;

  std::size_t width() const { return ceil_log2(color_count); }
  std::uint32_t color_of(const Word& w) const;
};

std::shared_ptr<const ColoringTable> build_coloring(std::size_t n, std::size_t radius);

/// Alice sends her color; Bob picks the word of that color in his ball.
PartyPair make_coloring_parties(std::shared_ptr<const ColoringTable> table, Word x, Word y);
ProtocolOutcome coloring_oracle_sync(std::shared_ptr<const ColoringTable> table, const SyncInstance& instance,
                                     DuplexChannel* channel = nullptr);

}  // namespace hamsync::syncdet
