#pragma once

#include <stdexcept>
#include <string>

namespace banditlink {

// Failure identities thrown by the library. Each names the broken contract,
// not the call site that noticed it.

// Channel inversion requested below the conditioning threshold.
struct SingularChannel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Baseline protocol asked to run on a channel it cannot unmix.
struct NonIdentifiable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A combinatorial object would exceed a configured size cap.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A vertex set offered as independent contains an adjacent pair, or a code
// whose codeword output sets are required to be disjoint overlaps.
struct NotIndependent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A channel output that no admissible input can explain.
struct InvalidOutput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A block code with fewer messages than the wrapper needs arms.
struct CodeTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A transmission calendar whose slot sets miss some arm entirely.
struct UncoveredArm : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A plan packet alphabet too small for the declared plan family.
struct PacketTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A run exceeded its configured hard round cap.
struct RunawayRun : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration input.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace banditlink
