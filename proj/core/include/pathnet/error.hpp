#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pathnet {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input the caller supplied is unusable (empty label, no records, empty feed).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A file or stream does not follow its documented format.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its preconditions (unknown node,
/// wrong graph kind).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// An iterative solver hit its iteration cap. The last iterate is kept so a
/// caller may decide to use it anyway.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::vector<double> last_iterate,
                 std::size_t iterations)
      : Error(what), last_iterate_(std::move(last_iterate)), iterations_(iterations) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::vector<double> last_iterate_;
  std::size_t iterations_;
};

}  // namespace pathnet
