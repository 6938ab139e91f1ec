#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "banditlink/channel.hpp"
#include "banditlink/graphs.hpp"

namespace banditlink {

// Blocklength-n code over the channel input alphabet whose codeword output
// sets are pairwise disjoint: every support-consistent output tuple
// identifies its message uniquely. The full decode table is enumerated at
// construction (product of per-coordinate supports), so decode() is a single
// hash lookup and any overlap fails construction loudly.
class ZeroErrorCode {
 public:
  ZeroErrorCode(const SupportSet& support, std::vector<std::vector<int>> codewords);

  int blocklength() const noexcept { return n_; }
  int alphabet() const noexcept { return k_; }
  int message_count() const noexcept { return static_cast<int>(codewords_.size()); }
  const std::vector<int>& codeword(int message) const;

  // Throws InvalidOutput for tuples no codeword can produce.
  int decode(const std::vector<int>& outputs) const;
  int decode(const int* outputs) const;  // reads blocklength() symbols

  // Deterministic codebook + decode-table dump (golden-file testable).
  std::string dump_text() const;

 private:
  std::int64_t pack(const std::vector<int>& tuple) const;

  int n_ = 0;
  int k_ = 0;
  std::vector<std::vector<int>> codewords_;
  std::unordered_map<std::int64_t, int> table_;
};

// Code whose codewords are the tuples of an independent set in the n-th
// strong power of the channel's confusability graph.
ZeroErrorCode code_from_independent_set(const SupportSet& support, const StrongPower& power,
                                        const IndependentSet& set);

// The 2-letter slope code on the 5-ary typewriter channel: message i maps to
// (i, 2i mod 5). Its five output rectangles {i, i+1} x {2i, 2i+1} tile all
// 25 output pairs.
ZeroErrorCode slope_code_c5();

// All n-tuples over one base-graph independent set (e.g. {0,2,4} on the
// 6-ary typewriter with n = 2 gives 9 messages).
ZeroErrorCode product_code(const SupportSet& support, const std::vector<int>& base_members, int n);

// Periodic transmission calendar: slot t (1-based) admits only symbols from
// slots[(t - 1) % period]. Every slot set must be independent in the
// confusability graph; sets may overlap across slots.
class Schedule {
 public:
  Schedule(const ConfusabilityGraph& g, std::vector<std::vector<int>> slot_sets);

  int period() const noexcept { return static_cast<int>(slots_.size()); }
  int alphabet() const noexcept { return k_; }
  const std::vector<int>& active(std::int64_t t) const;  // t >= 1
  const std::vector<std::vector<int>>& slot_sets() const noexcept { return slots_; }
  bool covers_all_symbols() const;
  // True when the schedule is a period-2 partition of the symbols (the
  // shape the parity round-count identity applies to).
  bool is_two_slot_partition() const;

  std::string dump_text() const;

 private:
  int k_;
  std::vector<std::vector<int>> slots_;  // each sorted ascending
};

// Alternating even/odd calendar on an even-k cycle: {0,2,...} is active on
// odd slots t = 1, 3, ..., {1,3,...} on even slots.
Schedule parity_schedule(int k);

// Single-use decode for typewriter-support channels: the transmitted symbol
// is y itself when y is in the active set, else (y - 1) mod k. Throws
// InvalidOutput when neither is active.
int decode_single_use(int k, const std::vector<int>& active, int y);

// General single-use decode: the unique active symbol whose support contains
// y. Throws InvalidOutput when no active symbol can produce y.
int generic_indset_decode(const SupportSet& support, const std::vector<int>& active, int y);

// One packet digit: q values carried by a fixed number of channel uses.
// Backed either by a block zero-error code (slot independent) or by a
// schedule: one use per digit, value d mapping to the d-th smallest member
// of the slot's active set.
class DigitCode {
 public:
  static DigitCode block(ZeroErrorCode code);
  static DigitCode scheduled(Schedule schedule, SupportSet support);

  int base() const noexcept { return q_; }
  int uses_per_digit() const noexcept { return uses_; }

  void encode(int digit, std::int64_t slot, std::vector<int>& out) const;
  int decode(const int* outputs, std::int64_t slot) const;

  bool slot_dependent() const noexcept { return !blocks_.has_value(); }
  std::string dump_text() const;

 private:
  DigitCode() = default;

  int q_ = 0;
  int uses_ = 0;
  std::optional<ZeroErrorCode> blocks_;
  std::optional<Schedule> schedule_;
  std::optional<SupportSet> support_;
};

// Fixed-length packet carrying one of `messages` values as base-q digits,
// most significant digit first. messages = 1 yields a zero-length packet.
class PacketCodec {
 public:
  PacketCodec(DigitCode digit, std::int64_t messages);

  std::int64_t messages() const noexcept { return messages_; }
  int digits() const noexcept { return digits_; }
  int length() const noexcept { return digits_ * digit_.uses_per_digit(); }
  const DigitCode& digit() const noexcept { return digit_; }

  // start_slot is the absolute 1-based physical slot of the packet's first
  // use; it matters only for schedule-backed digits.
  std::vector<int> encode(std::int64_t message, std::int64_t start_slot) const;
  std::int64_t decode(const std::vector<int>& outputs, std::int64_t start_slot) const;

 private:
  DigitCode digit_;
  std::int64_t messages_;
  int digits_;
};

}  // namespace banditlink
