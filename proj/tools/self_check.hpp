// Copyright 2026 The XRL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Fast invariant checks behind `xrl check`.

#pragma once

#include <iosfwd>

namespace xrl::tools {

/// Prints one PASS/FAIL line per invariant and returns the failure count.
int run_self_check(std::ostream& out);

}  // namespace xrl::tools
