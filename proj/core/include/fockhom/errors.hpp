// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FOCKHOM_ERRORS_HPP
#define FOCKHOM_ERRORS_HPP

#include <stdexcept>

namespace fockhom {

/// A computed quantity failed a contract it is required to meet
/// (e.g. the NS-gate herald amplitudes).
class NumericalContractError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Statistical estimation could not proceed on the given data.
class EstimationError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file or record stream.
class InputFormatError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace fockhom

#endif
