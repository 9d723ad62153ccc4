// Copyright 2026 The kgrerank Authors.
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

#ifndef KGRERANK_KGRERANK_HPP_
#define KGRERANK_KGRERANK_HPP_

#include "kgrerank/errors.hpp"
#include "kgrerank/evalharness.hpp"
#include "kgrerank/filters.hpp"
#include "kgrerank/metrics.hpp"
#include "kgrerank/relevance.hpp"
#include "kgrerank/reranker.hpp"
#include "kgrerank/scoring.hpp"
#include "kgrerank/textnorm.hpp"
#include "kgrerank/types.hpp"

#endif  // KGRERANK_KGRERANK_HPP_
