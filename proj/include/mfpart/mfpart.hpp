// Copyright 2026 The mfpart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MFPART_MFPART_HPP
#define MFPART_MFPART_HPP

#include "mfpart/dense.hpp"
#include "mfpart/entangler.hpp"
#include "mfpart/io.hpp"
#include "mfpart/mean_field.hpp"
#include "mfpart/partition.hpp"
#include "mfpart/pauli.hpp"
#include "mfpart/qwc.hpp"
#include "mfpart/simulator.hpp"

#endif  // MFPART_MFPART_HPP
