/*
 * Copyright 2026 The iirfit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef IIRFIT_ERRORS_H_
#define IIRFIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace iirfit {

// Precondition violations on caller-supplied arguments (bad order, empty
// input, mismatched grids). The CLI maps these to exit code 2.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or unreadable input data: truncated WAV, bad CSV, corrupted
// checkpoint. The CLI maps these to exit code 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure: non-finite loss, eigensolver non-convergence.
// The CLI maps these to exit code 4.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A pole (or zero) sits exactly on a grid frequency so the dB response is
// not finite. Samplers treat this as "resample the filter".
class DegenerateResponse : public NumericError {
 public:
  using NumericError::NumericError;
};

// Two responses were compared on different frequency grids.
class GridMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace iirfit

#endif  // IIRFIT_ERRORS_H_
