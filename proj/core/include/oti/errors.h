#ifndef OTI_ERRORS_H_
#define OTI_ERRORS_H_

#include <stdexcept>
#include <string>

namespace oti {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NonUniqueOptimum : public Error {
 public:
  using Error::Error;
};

class GenerationExhausted : public Error {
 public:
  using Error::Error;
};

class RewardOutOfRange : public Error {
 public:
  using Error::Error;
};

class ProtocolViolation : public Error {
 public:
  using Error::Error;
};

class AlphaOutOfRange : public Error {
 public:
  using Error::Error;
};

class DegenerateSweep : public Error {
 public:
  using Error::Error;
};

// Internal invariant breach; reaching it is a bug.
class EmptyActiveSet : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace oti

#endif  // OTI_ERRORS_H_
