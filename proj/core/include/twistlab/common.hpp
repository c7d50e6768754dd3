/*
 * Copyright 2026 The twistlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace twistlab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Raised when the caller violates a documented precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when a numerical construction cannot meet its accuracy contract.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-fatal notices (rounded translations, truncation tails, fallbacks).
// The default sink writes to stderr; tools may redirect or silence it.
using WarningSink = std::function<void(const std::string&)>;
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

// Runs body(i) for i in [0, count) on up to `workers` threads.
// Each index is processed exactly once; callers write only to slot i,
// so results do not depend on the worker count.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& body);

// Worker count used when an API does not take one explicitly.
int default_workers();
void set_default_workers(int workers);

}  // namespace twistlab
