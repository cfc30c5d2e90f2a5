// Copyright 2026 The spokendst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header.

#ifndef SPOKENDST_SPOKENDST_HPP
#define SPOKENDST_SPOKENDST_HPP

#include "spokendst/analysis.hpp"
#include "spokendst/core_model.hpp"
#include "spokendst/edit_distance.hpp"
#include "spokendst/errors.hpp"
#include "spokendst/harness.hpp"
#include "spokendst/metrics.hpp"
#include "spokendst/phonetics.hpp"
#include "spokendst/textnorm.hpp"

#endif  // SPOKENDST_SPOKENDST_HPP
