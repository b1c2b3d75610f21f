// Copyright 2026 The faster-sim Authors.
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

#ifndef FASTER_FASTER_HPP
#define FASTER_FASTER_HPP

#include "faster/config.hpp"
#include "faster/csv.hpp"
#include "faster/error.hpp"
#include "faster/geometry.hpp"
#include "faster/ledger.hpp"
#include "faster/metrics.hpp"
#include "faster/shapley.hpp"
#include "faster/simulator.hpp"
#include "faster/topology.hpp"

#endif  // FASTER_FASTER_HPP
