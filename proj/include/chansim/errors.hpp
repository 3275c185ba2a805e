// Copyright (c) 2026 The chansim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CHANSIM_ERRORS_HPP
#define CHANSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chansim {

// Base class for all library-specific failures.  Plain argument/domain
// violations use the std:: exceptions directly; these classes exist where
// callers need to tell failure modes apart (the CLI maps them to distinct
// exit codes).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A document (profile JSON, CSV import, ...) violates its schema.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// An operation was applied to an object in the wrong state
// (e.g. scaling delays of an already delay-scaled profile).
class StateError : public Error {
 public:
  explicit StateError(const std::string& what) : Error(what) {}
};

// A numerical procedure failed (singular system, factorization breakdown).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

// File system / stream failure.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace chansim

#endif  // CHANSIM_ERRORS_HPP
