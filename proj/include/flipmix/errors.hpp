#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flipmix {

/// Malformed or semantically invalid input (bad graph text, bad parameter).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation was asked to exceed one of its size guards.
class GuardExceeded : public std::length_error {
 public:
  GuardExceeded(const std::string& what, std::size_t requested, std::size_t cap)
      : std::length_error(what + " (requested " + std::to_string(requested) +
                          ", cap " + std::to_string(cap) + ")"),
        requested_(requested),
        cap_(cap) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

/// A numerical self-check (trace identity, bound dominance, ...) failed.
class CheckFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace flipmix
