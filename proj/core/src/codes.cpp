#include "banditlink/codes.hpp"

#include <algorithm>
#include <sstream>

#include "banditlink/errors.hpp"

namespace banditlink {

namespace {

// Walk the product of per-coordinate supports of a codeword, invoking f on
// every reachable output tuple.
template <class F>
void for_each_output_tuple(const SupportSet& support, const std::vector<int>& codeword, F&& f) {
  const int n = static_cast<int>(codeword.size());
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  std::vector<int> tuple(static_cast<std::size_t>(n));
  while (true) {
    for (int i = 0; i < n; ++i)
      tuple[static_cast<std::size_t>(i)] =
          support.of(codeword[static_cast<std::size_t>(i)])[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    f(tuple);
    int i = 0;
    for (; i < n; ++i) {
      auto& cursor = idx[static_cast<std::size_t>(i)];
      if (++cursor < static_cast<int>(support.of(codeword[static_cast<std::size_t>(i)]).size())) break;
      cursor = 0;
    }
    if (i == n) return;
  }
}

}  // namespace

ZeroErrorCode::ZeroErrorCode(const SupportSet& support, std::vector<std::vector<int>> codewords)
    : k_(support.k()), codewords_(std::move(codewords)) {
  if (codewords_.empty()) throw ConfigError("code needs at least one codeword");
  n_ = static_cast<int>(codewords_[0].size());
  if (n_ < 1) throw ConfigError("code needs blocklength >= 1");
  for (const auto& cw : codewords_) {
    if (static_cast<int>(cw.size()) != n_) throw ConfigError("ragged codeword lengths");
    for (int x : cw)
      if (x < 0 || x >= k_) throw ConfigError("codeword symbol out of range");
  }
  for (int m = 0; m < message_count(); ++m) {
    for_each_output_tuple(support, codewords_[static_cast<std::size_t>(m)], [&](const std::vector<int>& tuple) {
      auto [it, inserted] = table_.emplace(pack(tuple), m);
      if (!inserted && it->second != m)
        throw NotIndependent("codewords " + std::to_string(it->second) + " and " +
                             std::to_string(m) + " share a reachable output tuple");
    });
  }
}

std::int64_t ZeroErrorCode::pack(const std::vector<int>& tuple) const {
  std::int64_t id = 0;
  for (int i = n_ - 1; i >= 0; --i) {
    const int y = tuple[static_cast<std::size_t>(i)];
    if (y < 0 || y >= k_) throw InvalidOutput("output symbol out of range");
    id = id * k_ + y;
  }
  return id;
}

const std::vector<int>& ZeroErrorCode::codeword(int message) const {
  if (message < 0 || message >= message_count()) throw ConfigError("message index out of range");
  return codewords_[static_cast<std::size_t>(message)];
}

int ZeroErrorCode::decode(const std::vector<int>& outputs) const {
  if (static_cast<int>(outputs.size()) != n_) throw InvalidOutput("output tuple length mismatch");
  return decode(outputs.data());
}

int ZeroErrorCode::decode(const int* outputs) const {
  std::int64_t id = 0;
  for (int i = n_ - 1; i >= 0; --i) {
    const int y = outputs[i];
    if (y < 0 || y >= k_) throw InvalidOutput("output symbol out of range");
    id = id * k_ + y;
  }
  const auto it = table_.find(id);
  if (it == table_.end()) throw InvalidOutput("output tuple reachable from no codeword");
  return it->second;
}

std::string ZeroErrorCode::dump_text() const {
  std::ostringstream os;
  os << "zero-error code: k=" << k_ << " blocklength=" << n_ << " messages=" << message_count()
     << "\n";
  for (int m = 0; m < message_count(); ++m) {
    os << "codeword " << m << ":";
    for (int x : codewords_[static_cast<std::size_t>(m)]) os << ' ' << x;
    os << "\n";
  }
  // Table rows sorted by packed output id for a stable dump.
  std::vector<std::pair<std::int64_t, int>> rows(table_.begin(), table_.end());
  std::sort(rows.begin(), rows.end());
  for (const auto& [packed, m] : rows) {
    std::int64_t id = packed;
    os << "decode";
    for (int i = 0; i < n_; ++i) {
      os << ' ' << id % k_;
      id /= k_;
    }
    os << " -> " << m << "\n";
  }
  return os.str();
}

ZeroErrorCode code_from_independent_set(const SupportSet& support, const StrongPower& power,
                                        const IndependentSet& set) {
  if (power.base().order() != support.k())
    throw ConfigError("power graph alphabet does not match channel");
  if (set.universe() != power.order())
    throw ConfigError("independent set lives in a different power graph");
  std::vector<std::vector<int>> codewords;
  codewords.reserve(set.size());
  for (std::int64_t id : set.members()) codewords.push_back(power.tuple_of(id));
  return ZeroErrorCode(support, std::move(codewords));
}

ZeroErrorCode slope_code_c5() {
  const SupportSet support(make_typewriter(5, 0.5));  // support does not depend on eps
  std::vector<std::vector<int>> codewords;
  codewords.reserve(5);
  for (int i = 0; i < 5; ++i) codewords.push_back({i, (2 * i) % 5});
  return ZeroErrorCode(support, std::move(codewords));
}

ZeroErrorCode product_code(const SupportSet& support, const std::vector<int>& base_members, int n) {
  if (n < 1) throw ConfigError("product code needs n >= 1");
  if (base_members.empty()) throw ConfigError("product code needs a nonempty base set");
  std::vector<std::vector<int>> codewords;
  std::vector<int> cursor(static_cast<std::size_t>(n), 0);
  while (true) {
    std::vector<int> cw(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      cw[static_cast<std::size_t>(i)] = base_members[static_cast<std::size_t>(cursor[static_cast<std::size_t>(i)])];
    codewords.push_back(std::move(cw));
    int i = 0;
    for (; i < n; ++i) {
      auto& c = cursor[static_cast<std::size_t>(i)];
      if (++c < static_cast<int>(base_members.size())) break;
      c = 0;
    }
    if (i == n) break;
  }
  return ZeroErrorCode(support, std::move(codewords));
}

Schedule::Schedule(const ConfusabilityGraph& g, std::vector<std::vector<int>> slot_sets)
    : k_(g.order()), slots_(std::move(slot_sets)) {
  if (slots_.empty()) throw ConfigError("schedule needs at least one slot");
  for (auto& s : slots_) {
    if (s.empty()) throw ConfigError("schedule slot set is empty");
    std::vector<std::int64_t> wide(s.begin(), s.end());
    IndependentSet check(g, wide);  // validates membership + independence
    s.assign(check.members().begin(), check.members().end());
  }
}

const std::vector<int>& Schedule::active(std::int64_t t) const {
  if (t < 1) throw ConfigError("slots are 1-based");
  return slots_[static_cast<std::size_t>((t - 1) % period())];
}

bool Schedule::covers_all_symbols() const {
  std::vector<char> seen(static_cast<std::size_t>(k_), 0);
  for (const auto& s : slots_)
    for (int x : s) seen[static_cast<std::size_t>(x)] = 1;
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

bool Schedule::is_two_slot_partition() const {
  if (period() != 2) return false;
  std::vector<char> seen(static_cast<std::size_t>(k_), 0);
  for (const auto& s : slots_)
    for (int x : s) {
      if (seen[static_cast<std::size_t>(x)]) return false;
      seen[static_cast<std::size_t>(x)] = 1;
    }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

std::string Schedule::dump_text() const {
  std::ostringstream os;
  os << "schedule: k=" << k_ << " period=" << period() << "\n";
  for (int i = 0; i < period(); ++i) {
    os << "slot " << i + 1 << " (t = " << i + 1 << " + " << period() << "m):";
    for (int x : slots_[static_cast<std::size_t>(i)]) os << ' ' << x;
    os << "\n";
  }
  return os.str();
}

Schedule parity_schedule(int k) {
  if (k < 4 || k % 2 != 0) throw ConfigError("parity schedule needs an even k >= 4");
  std::vector<int> evens, odds;
  for (int x = 0; x < k; x += 2) evens.push_back(x);
  for (int x = 1; x < k; x += 2) odds.push_back(x);
  return Schedule(ConfusabilityGraph::cycle(k), {evens, odds});
}

int decode_single_use(int k, const std::vector<int>& active, int y) {
  if (y < 0 || y >= k) throw InvalidOutput("output symbol out of range");
  if (std::binary_search(active.begin(), active.end(), y)) return y;
  const int prev = (y - 1 + k) % k;
  if (std::binary_search(active.begin(), active.end(), prev)) return prev;
  throw InvalidOutput("neither " + std::to_string(y) + " nor " + std::to_string(prev) +
                      " is active");
}

int generic_indset_decode(const SupportSet& support, const std::vector<int>& active, int y) {
  if (y < 0 || y >= support.k()) throw InvalidOutput("output symbol out of range");
  int found = -1;
  for (int x : active) {
    const auto& s = support.of(x);
    if (std::binary_search(s.begin(), s.end(), y)) {
      if (found >= 0)
        throw NotIndependent("two active symbols can produce output " + std::to_string(y));
      found = x;
    }
  }
  if (found < 0) throw InvalidOutput("no active symbol can produce output " + std::to_string(y));
  return found;
}

DigitCode DigitCode::block(ZeroErrorCode code) {
  DigitCode d;
  d.q_ = code.message_count();
  d.uses_ = code.blocklength();
  d.blocks_ = std::move(code);
  return d;
}

DigitCode DigitCode::scheduled(Schedule schedule, SupportSet support) {
  if (schedule.alphabet() != support.k())
    throw ConfigError("schedule alphabet does not match channel");
  DigitCode d;
  int q = schedule.active(1).size() ? static_cast<int>(schedule.active(1).size()) : 0;
  for (int i = 1; i <= schedule.period(); ++i)
    q = std::min(q, static_cast<int>(schedule.active(i).size()));
  if (q < 2) throw ConfigError("scheduled digit needs every slot to carry at least 2 symbols");
  d.q_ = q;
  d.uses_ = 1;
  d.schedule_ = std::move(schedule);
  d.support_ = std::move(support);
  return d;
}

void DigitCode::encode(int digit, std::int64_t slot, std::vector<int>& out) const {
  if (digit < 0 || digit >= q_) throw ConfigError("digit value out of range");
  if (blocks_) {
    const auto& cw = blocks_->codeword(digit);
    out.insert(out.end(), cw.begin(), cw.end());
  } else {
    // digit d -> d-th smallest member of the slot's active set
    out.push_back(schedule_->active(slot)[static_cast<std::size_t>(digit)]);
  }
}

int DigitCode::decode(const int* outputs, std::int64_t slot) const {
  if (blocks_) {
    return blocks_->decode(outputs);
  }
  const auto& active = schedule_->active(slot);
  const int x = generic_indset_decode(*support_, active, outputs[0]);
  const auto it = std::lower_bound(active.begin(), active.end(), x);
  return static_cast<int>(it - active.begin());
}

std::string DigitCode::dump_text() const {
  std::ostringstream os;
  os << "digit: base=" << q_ << " uses=" << uses_ << "\n";
  if (blocks_) {
    os << blocks_->dump_text();
  } else {
    os << support_->k() << "-ary scheduled digit; value d sends the d-th smallest active symbol\n";
    os << schedule_->dump_text();
  }
  return os.str();
}

PacketCodec::PacketCodec(DigitCode digit, std::int64_t messages)
    : digit_(std::move(digit)), messages_(messages) {
  if (messages_ < 1) throw ConfigError("packet codec needs messages >= 1");
  digits_ = 0;
  std::int64_t capacity = 1;
  while (capacity < messages_) {
    capacity *= digit_.base();
    ++digits_;
  }
}

std::vector<int> PacketCodec::encode(std::int64_t message, std::int64_t start_slot) const {
  if (message < 0 || message >= messages_) throw ConfigError("packet message out of range");
  // Most significant digit first.
  std::vector<int> digit_values(static_cast<std::size_t>(digits_), 0);
  std::int64_t rem = message;
  for (int i = digits_ - 1; i >= 0; --i) {
    digit_values[static_cast<std::size_t>(i)] = static_cast<int>(rem % digit_.base());
    rem /= digit_.base();
  }
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(length()));
  std::int64_t slot = start_slot;
  for (int i = 0; i < digits_; ++i) {
    digit_.encode(digit_values[static_cast<std::size_t>(i)], slot, out);
    slot += digit_.uses_per_digit();
  }
  return out;
}

std::int64_t PacketCodec::decode(const std::vector<int>& outputs, std::int64_t start_slot) const {
  if (static_cast<int>(outputs.size()) != length())
    throw InvalidOutput("packet output length mismatch");
  std::int64_t message = 0;
  std::int64_t slot = start_slot;
  for (int i = 0; i < digits_; ++i) {
    const int d = digit_.decode(outputs.data() + static_cast<std::size_t>(i) * digit_.uses_per_digit(), slot);
    message = message * digit_.base() + d;
    slot += digit_.uses_per_digit();
  }
  if (message >= messages_) throw InvalidOutput("decoded packet value out of range");
  return message;
}

}  // namespace banditlink
