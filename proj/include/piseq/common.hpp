#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace piseq {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

/// A runtime invariant of the sequence machinery failed.  Carries the index
/// at which the violation was detected and the violated clause.
class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(u64 n, std::string clause)
      : std::runtime_error("invariant violated at n=" + std::to_string(n) +
                           ": " + clause),
        n_(n),
        clause_(std::move(clause)) {}

  u64 n() const { return n_; }
  const std::string& clause() const { return clause_; }

 private:
  u64 n_;
  std::string clause_;
};

/// A bounded resource (primality window, AP retention ring) would have to
/// grow past its configured maximum.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CheckpointVersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CheckpointIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace piseq
